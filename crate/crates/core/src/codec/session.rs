//! One run of the block protocol with both encoders and the decoder
//! simulated as separate parties.
//!
//! Every block, each encoder locates the true joint prefix in its own copy
//! of the uncertainty set, reads off the pattern at that position, and sends
//! the pattern's symbol or (at the `i`-th star) its own next digit. Feedback
//! reveals the other sender's digit at each star. After the block all three
//! parties rebuild the uncertainty set from the outputs alone.

use num_bigint::BigUint;

use super::channel::{union_channel, ChannelOutput};
use super::params::{ceil_log, CodeParams};
use super::pattern::{PatternCache, PatternSpace, PatternSymbol, StarPattern};
use super::sequence::{DigitPair, UncertaintySet};
use crate::error::{Error, Result};

/// A sender: its own message, the other message's digits learned through
/// feedback so far, and its copy of the uncertainty set.
#[derive(Debug, Clone)]
pub struct Encoder {
    /// 1 or 2.
    role: u8,
    message: Vec<u8>,
    known_other: Vec<u8>,
    uncertainty: UncertaintySet,
}

impl Encoder {
    fn new(role: u8, message: Vec<u8>) -> Self {
        Encoder {
            role,
            message,
            known_other: Vec::new(),
            uncertainty: UncertaintySet::initial(),
        }
    }

    pub fn known_other(&self) -> &[u8] {
        &self.known_other
    }

    pub fn uncertainty(&self) -> &UncertaintySet {
        &self.uncertainty
    }

    /// The joint prefix of length `len` as this sender reconstructs it.
    fn joint_prefix(&self, len: usize) -> Vec<DigitPair> {
        let own = &self.message[..len];
        let other = &self.known_other[..len];
        if self.role == 1 {
            own.iter().copied().zip(other.iter().copied()).collect()
        } else {
            other.iter().copied().zip(own.iter().copied()).collect()
        }
    }

    fn locate_truth(&self, len: usize, block: usize) -> Result<usize> {
        self.uncertainty
            .position(&self.joint_prefix(len))
            .ok_or_else(|| Error::Protocol {
                block,
                reason: format!("encoder {} cannot find the true prefix", self.role),
            })
    }
}

/// Summary of one message block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockRecord {
    /// 1-based block number.
    pub block: usize,
    /// `|U(b)|` after the block.
    pub uncertainty: usize,
    /// Channel uses that produced a two-symbol output.
    pub pair_outputs: usize,
    /// Rank of the pattern the senders used.
    pub pattern_index: usize,
}

/// Result of the final resolution block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinalRecord {
    pub uses: usize,
    pub rank: usize,
    pub decoded: (Vec<u8>, Vec<u8>),
}

/// State of one protocol run.
#[derive(Debug, Clone)]
pub struct SessionState {
    params: CodeParams,
    encoders: [Encoder; 2],
    decoder: UncertaintySet,
    transcript: Vec<ChannelOutput>,
    uses: usize,
    max_uncertainty: usize,
    patterns: PatternCache,
    count: BigUint,
    peak: BigUint,
    finished: bool,
}

impl SessionState {
    /// Starts a run. Messages are 0-based digit strings of length `B m`.
    pub fn new(params: CodeParams, w1: Vec<u8>, w2: Vec<u8>) -> Result<Self> {
        let len = params.message_len();
        for (w, who) in [(&w1, 1), (&w2, 2)] {
            if w.len() != len {
                return Err(Error::InvalidDistribution(format!(
                    "message {who} has {} digits, expected {len}",
                    w.len()
                )));
            }
            if let Some(d) = w.iter().find(|d| **d as usize >= params.q) {
                return Err(Error::InvalidDistribution(format!(
                    "message {who} contains digit {d} >= q = {}",
                    params.q
                )));
            }
        }
        let space = PatternSpace::new(params.q, params.n, params.m)?;
        Ok(SessionState {
            count: space.count().clone(),
            peak: params.peak_bound(),
            patterns: PatternCache::new(space),
            params,
            encoders: [Encoder::new(1, w1), Encoder::new(2, w2)],
            decoder: UncertaintySet::initial(),
            transcript: Vec::new(),
            uses: 0,
            max_uncertainty: 1,
            finished: false,
        })
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn uses(&self) -> usize {
        self.uses
    }

    pub fn block_index(&self) -> usize {
        self.decoder.block_index()
    }

    pub fn transcript(&self) -> &[ChannelOutput] {
        &self.transcript
    }

    pub fn uncertainty(&self) -> &UncertaintySet {
        &self.decoder
    }

    pub fn encoder(&self, role: usize) -> &Encoder {
        &self.encoders[role - 1]
    }

    pub fn max_uncertainty(&self) -> usize {
        self.max_uncertainty
    }

    /// The true joint prefix of the first `len` digits.
    fn truth(&self, len: usize) -> Vec<DigitPair> {
        self.encoders[0].message[..len]
            .iter()
            .copied()
            .zip(self.encoders[1].message[..len].iter().copied())
            .collect()
    }

    fn violation(&self, reason: String) -> Error {
        Error::Protocol {
            block: self.block_index() + 1,
            reason,
        }
    }

    /// Runs the next message block (`n` channel uses) and checks every
    /// invariant of the scheme afterwards.
    pub fn run_block(&mut self) -> Result<BlockRecord> {
        let b = self.block_index();
        let CodeParams { n, m, blocks, .. } = self.params;
        if b >= blocks {
            return Err(self.violation("all message blocks already sent".into()));
        }
        if BigUint::from(self.decoder.len()) > self.count {
            return Err(self.violation(format!(
                "|U| = {} exceeds |S| = {}",
                self.decoder.len(),
                self.count
            )));
        }
        self.patterns.ensure(self.decoder.len())?;

        let prefix = b * m;
        let idx1 = self.encoders[0].locate_truth(prefix, b + 1)?;
        let idx2 = self.encoders[1].locate_truth(prefix, b + 1)?;
        if idx1 != idx2 {
            return Err(self.violation(format!(
                "encoders disagree on the pattern index ({idx1} vs {idx2})"
            )));
        }
        let pattern: StarPattern = self.patterns.get(idx1).clone();

        let mut outputs = Vec::with_capacity(n);
        let mut star = 0usize;
        for sym in pattern.symbols() {
            let (x1, x2) = match *sym {
                PatternSymbol::Digit(d) => (d, d),
                PatternSymbol::Star => (
                    self.encoders[0].message[prefix + star],
                    self.encoders[1].message[prefix + star],
                ),
            };
            let y = union_channel(x1, x2);
            match *sym {
                PatternSymbol::Digit(_) => {
                    if !y.is_singleton() {
                        return Err(self.violation("pair output at a symbol position".into()));
                    }
                }
                PatternSymbol::Star => {
                    // Feedback: each sender infers the other's digit from y.
                    for (enc, mine) in self.encoders.iter_mut().zip([x1, x2]) {
                        let other = y.other_input(mine).expect("own input is in the output");
                        enc.known_other.push(other);
                    }
                    star += 1;
                }
            }
            outputs.push(y);
            self.transcript.push(y);
            self.uses += 1;
        }
        debug_assert_eq!(star, m);

        let next = self.decoder.advance(&outputs, &mut self.patterns)?;
        let mut mirrored = Vec::with_capacity(2);
        for enc in &self.encoders {
            mirrored.push(enc.uncertainty.advance(&outputs, &mut self.patterns)?);
        }
        for (role, set) in mirrored.iter().enumerate() {
            if !set.mirrors(&next) {
                return Err(self.violation(format!(
                    "encoder {} uncertainty set differs from the decoder's",
                    role + 1
                )));
            }
        }
        for (enc, set) in self.encoders.iter_mut().zip(mirrored) {
            enc.uncertainty = set;
        }

        let learned = prefix + m;
        if self.encoders[0].known_other[..] != self.encoders[1].message[..learned]
            || self.encoders[1].known_other[..] != self.encoders[0].message[..learned]
        {
            return Err(self.violation("a sender mis-learned the other message".into()));
        }
        if !next.is_strictly_sorted_by_lineage() {
            return Err(self.violation("uncertainty set is not strictly sorted".into()));
        }
        if next.position(&self.truth(learned)).is_none() {
            return Err(self.violation("true prefix missing from the uncertainty set".into()));
        }
        let size = BigUint::from(next.len());
        if size > self.count {
            return Err(self.violation(format!("|U| = {size} exceeds |S| = {}", self.count)));
        }
        if size > self.peak {
            return Err(
                self.violation(format!("|U| = {size} exceeds the peak bound {}", self.peak))
            );
        }

        self.max_uncertainty = self.max_uncertainty.max(next.len());
        self.decoder = next;
        Ok(BlockRecord {
            block: b + 1,
            uncertainty: self.decoder.len(),
            pair_outputs: outputs.iter().filter(|y| !y.is_singleton()).count(),
            pattern_index: idx1,
        })
    }

    /// Sends the rank of the true message pair within `U(B)` as
    /// `⌈log_q |U(B)|⌉` base-`q` digits, most significant first, and decodes.
    pub fn run_final_block(&mut self) -> Result<FinalRecord> {
        let CodeParams { q, blocks, .. } = self.params;
        if self.block_index() != blocks || self.finished {
            return Err(self.violation("final block run out of order".into()));
        }
        let len = self.params.message_len();
        let r1 = self.encoders[0].locate_truth(len, blocks + 1)?;
        let r2 = self.encoders[1].locate_truth(len, blocks + 1)?;
        if r1 != r2 {
            return Err(self.violation(format!(
                "encoders disagree on the final rank ({r1} vs {r2})"
            )));
        }
        let size = self.decoder.len();
        let digits = ceil_log(q, &BigUint::from(size));

        let mut sent = Vec::with_capacity(digits);
        let mut rest = r1;
        for _ in 0..digits {
            sent.push((rest % q) as u8);
            rest /= q;
        }
        sent.reverse();

        let mut rank = 0usize;
        for &d in &sent {
            let y = union_channel(d, d);
            self.transcript.push(y);
            self.uses += 1;
            let (lo, _) = y.symbols();
            rank = rank * q + lo as usize;
        }
        let chosen = self.decoder.get(rank).ok_or_else(|| Error::Protocol {
            block: blocks + 1,
            reason: format!("decoded rank {rank} outside |U(B)| = {size}"),
        })?;
        self.finished = true;
        Ok(FinalRecord {
            uses: digits,
            rank,
            decoded: chosen.unzip(),
        })
    }

    /// Runs every block and the final block; returns the decoded messages.
    pub fn run_to_end(&mut self) -> Result<(Vec<BlockRecord>, FinalRecord)> {
        let mut records = Vec::with_capacity(self.params.blocks);
        while self.block_index() < self.params.blocks {
            records.push(self.run_block()?);
        }
        let fin = self.run_final_block()?;
        Ok((records, fin))
    }
}
