//! Entropy primitives.
//!
//! Capacity-side quantities are measured in base-`q` units (one unit is the
//! information carried by one uniformly distributed channel symbol). The only
//! base-2 quantity is [`binary_entropy`], used by the zero-error rate analysis.

use crate::error::{Error, Result};

/// Absolute tolerance on the sum of a probability vector.
pub const SUM_TOLERANCE: f64 = 1e-12;

/// A validated probability distribution over a finite alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution("empty vector".into()));
        }
        if let Some((i, p)) = probs
            .iter()
            .enumerate()
            .find(|(_, p)| !p.is_finite() || **p < 0.0)
        {
            return Err(Error::InvalidDistribution(format!(
                "entry {i} is {p}, expected a finite nonnegative value"
            )));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "entries sum to {sum}, expected 1"
            )));
        }
        Ok(ProbVector(probs))
    }

    /// The uniform distribution on `q` symbols.
    pub fn uniform(q: usize) -> Self {
        ProbVector(vec![1.0 / q as f64; q])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Probability that independent draws from `self` and `other` coincide.
    pub fn equality_probability(&self, other: &ProbVector) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl AsRef<[f64]> for ProbVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// `-x ln x` with `0 ln 0 = 0`.
#[inline]
pub(crate) fn neg_x_ln_x(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        -x * x.ln()
    }
}

/// Shannon entropy of `p` in base-`q` units.
pub fn entropy_q(p: &ProbVector, q: usize) -> Result<f64> {
    check_alphabet(q)?;
    Ok(entropy_nats(p.as_slice()) / (q as f64).ln())
}

/// Natural-log entropy of an already validated slice.
pub(crate) fn entropy_nats(p: &[f64]) -> f64 {
    p.iter().copied().map(neg_x_ln_x).sum()
}

/// Entropy of the distribution in which mass `x_i` is spread uniformly over
/// `r_i` cells, i.e. `-sum x_i log_q(x_i / r_i)`.
pub fn grouped_entropy(masses: &[(f64, u64)], q: usize) -> Result<f64> {
    check_alphabet(q)?;
    if masses.is_empty() {
        return Err(Error::InvalidDistribution("no masses given".into()));
    }
    let mut sum = 0.0;
    for &(x, r) in masses {
        if !x.is_finite() || x < 0.0 {
            return Err(Error::InvalidDistribution(format!(
                "mass {x} is not a finite nonnegative value"
            )));
        }
        if r == 0 {
            return Err(Error::InvalidDistribution(
                "multiplicities must be at least 1".into(),
            ));
        }
        sum += x;
    }
    if (sum - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::InvalidDistribution(format!(
            "masses sum to {sum}, expected 1"
        )));
    }
    Ok(grouped_entropy_unchecked(masses, q))
}

pub(crate) fn grouped_entropy_unchecked(masses: &[(f64, u64)], q: usize) -> f64 {
    let nats: f64 = masses
        .iter()
        .map(|&(x, r)| {
            if x == 0.0 {
                0.0
            } else {
                -x * (x / r as f64).ln()
            }
        })
        .sum();
    nats / (q as f64).ln()
}

/// Binary entropy function in bits.
pub fn binary_entropy(alpha: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::domain("alpha", alpha, "[0, 1]"));
    }
    Ok(binary_entropy_unchecked(alpha))
}

pub(crate) fn binary_entropy_unchecked(alpha: f64) -> f64 {
    (neg_x_ln_x(alpha) + neg_x_ln_x(1.0 - alpha)) / std::f64::consts::LN_2
}

fn check_alphabet(q: usize) -> Result<()> {
    if q < 2 {
        Err(Error::Alphabet { q, need: "q >= 2" })
    } else {
        Ok(())
    }
}
