//! Joint message prefixes and the uncertainty sets built from them.

use std::cmp::Ordering;
use std::sync::Arc;

use super::channel::ChannelOutput;
use super::pattern::{PatternCache, PatternSymbol};
use crate::error::{Error, Result};

/// One digit of each message: `(w₁ᵢ, w₂ᵢ)`.
pub type DigitPair = (u8, u8);

#[derive(Debug)]
struct Segment {
    parent: PairSequence,
    pairs: Box<[DigitPair]>,
}

/// A sequence of digit pairs, ordered lexicographically on the flattened
/// digits `(a₁, b₁, a₂, b₂, …)`.
///
/// Storage is a persistent chain of per-block segments, so every extension
/// of a prefix shares the prefix instead of copying it.
#[derive(Debug, Clone, Default)]
pub struct PairSequence {
    tail: Option<Arc<Segment>>,
    len: usize,
}

impl PairSequence {
    pub fn empty() -> Self {
        PairSequence::default()
    }

    pub fn from_pairs(pairs: &[DigitPair]) -> Self {
        PairSequence::empty().extend(pairs.to_vec())
    }

    /// Number of digit pairs.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `self` followed by `block`.
    pub fn extend(&self, block: Vec<DigitPair>) -> Self {
        if block.is_empty() {
            return self.clone();
        }
        let len = self.len + block.len();
        PairSequence {
            tail: Some(Arc::new(Segment {
                parent: self.clone(),
                pairs: block.into_boxed_slice(),
            })),
            len,
        }
    }

    fn segments(&self) -> Vec<&[DigitPair]> {
        let mut out = Vec::new();
        let mut cur = self;
        while let Some(seg) = &cur.tail {
            out.push(&seg.pairs[..]);
            cur = &seg.parent;
        }
        out.reverse();
        out
    }

    /// The pairs from first to last.
    pub fn to_pairs(&self) -> Vec<DigitPair> {
        self.segments().concat()
    }

    /// Splits into the two message prefixes.
    pub fn unzip(&self) -> (Vec<u8>, Vec<u8>) {
        self.to_pairs().into_iter().unzip()
    }

    /// Compares against a flat slice of pairs.
    pub fn cmp_pairs(&self, other: &[DigitPair]) -> Ordering {
        self.segments().into_iter().flatten().cmp(other.iter())
    }

    /// The pairs appended by the most recent extension.
    pub fn last_block(&self) -> &[DigitPair] {
        self.tail.as_ref().map_or(&[], |s| &s.pairs[..])
    }
}

impl Ord for PairSequence {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.tail, &other.tail) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(x), Some(y)) => {
                if Arc::ptr_eq(x, y) {
                    return Ordering::Equal;
                }
                if x.parent.len == y.parent.len && x.pairs.len() == y.pairs.len() {
                    x.parent.cmp(&y.parent).then_with(|| x.pairs.cmp(&y.pairs))
                } else {
                    self.segments()
                        .into_iter()
                        .flatten()
                        .cmp(other.segments().into_iter().flatten())
                }
            }
        }
    }
}

impl PartialOrd for PairSequence {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for PairSequence {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len && self.cmp(other) == Ordering::Equal
    }
}

impl Eq for PairSequence {}

/// The joint prefixes still consistent with every output seen so far,
/// kept in increasing order.
#[derive(Debug, Clone)]
pub struct UncertaintySet {
    elements: Vec<PairSequence>,
    /// For each element, the position of its parent in the previous set.
    lineage: Vec<u32>,
    block_index: usize,
}

impl UncertaintySet {
    /// `U(0)`: only the empty prefix.
    pub fn initial() -> Self {
        UncertaintySet {
            elements: vec![PairSequence::empty()],
            lineage: vec![0],
            block_index: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn block_index(&self) -> usize {
        self.block_index
    }

    pub fn elements(&self) -> &[PairSequence] {
        &self.elements
    }

    pub fn get(&self, index: usize) -> Option<&PairSequence> {
        self.elements.get(index)
    }

    /// Position of a prefix, by binary search.
    pub fn position(&self, prefix: &[DigitPair]) -> Option<usize> {
        self.elements.binary_search_by(|e| e.cmp_pairs(prefix)).ok()
    }

    /// Strict order checked by direct comparison of neighbours.
    pub fn is_strictly_sorted(&self) -> bool {
        self.elements.windows(2).all(|w| w[0] < w[1])
    }

    /// Strict order checked from lineage: given a strictly sorted previous
    /// set, neighbours must either share a parent and have increasing last
    /// blocks, or have increasing parent positions.
    pub fn is_strictly_sorted_by_lineage(&self) -> bool {
        (1..self.len()).all(|i| {
            let (pa, pb) = (self.lineage[i - 1], self.lineage[i]);
            pa < pb
                || (pa == pb && self.elements[i - 1].last_block() < self.elements[i].last_block())
        })
    }

    /// Equality inferred from lineage and last blocks, valid when both
    /// previous sets were equal.
    pub fn mirrors(&self, other: &UncertaintySet) -> bool {
        self.block_index == other.block_index
            && self.lineage == other.lineage
            && self
                .elements
                .iter()
                .zip(&other.elements)
                .all(|(x, y)| x.len() == y.len() && x.last_block() == y.last_block())
            && self.len() == other.len()
    }

    /// Computes the next set from one block of channel outputs.
    ///
    /// Element `i` is indexed by pattern `i`. It survives iff every digit
    /// position of its pattern produced exactly that singleton; survivors are
    /// extended by every digit-pair assignment consistent with the outputs at
    /// the star positions, in increasing order.
    pub fn advance(&self, outputs: &[ChannelOutput], patterns: &mut PatternCache) -> Result<Self> {
        let space = patterns.space();
        let (n, m) = (space.n(), space.m());
        if outputs.len() != n {
            return Err(Error::Protocol {
                block: self.block_index,
                reason: format!("expected {n} outputs, got {}", outputs.len()),
            });
        }
        if num_bigint::BigUint::from(self.len()) > *space.count() {
            return Err(Error::Protocol {
                block: self.block_index,
                reason: format!(
                    "uncertainty set of size {} exceeds the {} available patterns",
                    self.len(),
                    space.count()
                ),
            });
        }
        patterns.ensure(self.len())?;

        let mut elements = Vec::new();
        let mut lineage = Vec::new();
        let mut options: Vec<(DigitPair, Option<DigitPair>)> = Vec::with_capacity(m);
        for (i, prefix) in self.elements.iter().enumerate() {
            let pattern = patterns.get(i);
            options.clear();
            let mut consistent = true;
            for (sym, y) in pattern.symbols().iter().zip(outputs) {
                match *sym {
                    PatternSymbol::Digit(d) => {
                        if !(y.is_singleton() && y.contains(d)) {
                            consistent = false;
                            break;
                        }
                    }
                    PatternSymbol::Star => {
                        let (lo, hi) = y.symbols();
                        if lo == hi {
                            options.push(((lo, lo), None));
                        } else {
                            options.push(((lo, hi), Some((hi, lo))));
                        }
                    }
                }
            }
            if !consistent {
                continue;
            }
            let branching: Vec<usize> = options
                .iter()
                .enumerate()
                .filter(|(_, o)| o.1.is_some())
                .map(|(k, _)| k)
                .collect();
            let ell = branching.len();
            for code in 0..(1usize << ell) {
                let mut block: Vec<DigitPair> = options.iter().map(|o| o.0).collect();
                for (bit, &k) in branching.iter().enumerate() {
                    // The first branching star is the most significant choice.
                    if (code >> (ell - 1 - bit)) & 1 == 1 {
                        block[k] = options[k].1.expect("branching star");
                    }
                }
                elements.push(prefix.extend(block));
                lineage.push(i as u32);
            }
        }
        Ok(UncertaintySet {
            elements,
            lineage,
            block_index: self.block_index + 1,
        })
    }
}
