use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::params::CodeParams;
use super::session::SessionState;
use crate::error::Result;

/// Outcome of one trial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub trial: u64,
    #[serde(serialize_with = "super::ser::decimal_display")]
    pub uses: usize,
    #[serde(serialize_with = "super::ser::decimal_display")]
    pub max_uncertainty: usize,
    /// Decoded messages equal the transmitted ones.
    pub ok: bool,
}

/// Aggregate over all trials.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    pub params: CodeParams,
    pub seed: u64,
    pub trials: Vec<TrialRecord>,
    pub errors: usize,
    pub max_uncertainty: usize,
    pub max_uses: usize,
    pub uses_bound: usize,
    /// Message digits per channel use, `B m / max_uses`.
    pub achieved_rate: f64,
}

#[derive(Serialize)]
struct SummaryRecord<'a> {
    summary: bool,
    q: usize,
    n: usize,
    m: usize,
    blocks: usize,
    seed: u64,
    trials: usize,
    errors: usize,
    #[serde(serialize_with = "super::ser::decimal_display")]
    max_uncertainty: &'a usize,
    #[serde(serialize_with = "super::ser::decimal_display")]
    max_uses: &'a usize,
    #[serde(serialize_with = "super::ser::decimal_display")]
    uses_bound: &'a usize,
    achieved_rate: f64,
}

impl SimulationReport {
    pub fn zero_error(&self) -> bool {
        self.errors == 0
    }

    /// One JSON object per trial followed by a summary object, each on its
    /// own line. Counts are written as decimal strings.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for t in &self.trials {
            out.push_str(&serde_json::to_string(t).expect("trial record serializes"));
            out.push('\n');
        }
        out.push_str(&serde_json::to_string(&self.summary()).expect("summary serializes"));
        out.push('\n');
        out
    }

    fn summary(&self) -> SummaryRecord<'_> {
        SummaryRecord {
            summary: true,
            q: self.params.q,
            n: self.params.n,
            m: self.params.m,
            blocks: self.params.blocks,
            seed: self.seed,
            trials: self.trials.len(),
            errors: self.errors,
            max_uncertainty: &self.max_uncertainty,
            max_uses: &self.max_uses,
            uses_bound: &self.uses_bound,
            achieved_rate: self.achieved_rate,
        }
    }
}

/// Draws both messages for `trial`; the stream depends only on `seed ^ trial`.
pub fn trial_messages(params: &CodeParams, seed: u64, trial: u64) -> (Vec<u8>, Vec<u8>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ trial);
    let len = params.message_len();
    let q = params.q as u16;
    let mut draw = || {
        (0..len)
            .map(|_| rng.gen_range(0..q) as u8)
            .collect::<Vec<u8>>()
    };
    let w1 = draw();
    let w2 = draw();
    (w1, w2)
}

/// Runs one full trial; protocol violations surface as errors.
pub fn run_trial(params: &CodeParams, seed: u64, trial: u64) -> Result<TrialRecord> {
    let (w1, w2) = trial_messages(params, seed, trial);
    let mut session = SessionState::new(*params, w1.clone(), w2.clone())?;
    let (_, fin) = session.run_to_end()?;
    Ok(TrialRecord {
        trial,
        uses: session.uses(),
        max_uncertainty: session.max_uncertainty(),
        ok: fin.decoded == (w1, w2),
    })
}

/// Runs `trials` independent sessions with uniformly random messages.
///
/// Trials run in parallel; results are collected in trial order, so the
/// report is identical for any thread count.
pub fn simulate(params: CodeParams, trials: u64, seed: u64) -> Result<SimulationReport> {
    let records: Vec<TrialRecord> = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(&params, seed, t))
        .collect::<Result<_>>()?;
    let errors = records.iter().filter(|r| !r.ok).count();
    let max_uncertainty = records.iter().map(|r| r.max_uncertainty).max().unwrap_or(1);
    let max_uses = records.iter().map(|r| r.uses).max().unwrap_or(0);
    let achieved_rate = if max_uses == 0 {
        0.0
    } else {
        params.message_len() as f64 / max_uses as f64
    };
    Ok(SimulationReport {
        params,
        seed,
        trials: records,
        errors,
        max_uncertainty,
        max_uses,
        uses_bound: params.total_uses_bound(),
        achieved_rate,
    })
}
