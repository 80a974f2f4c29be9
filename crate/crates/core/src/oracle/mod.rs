//! Numerical cross-checks for the joint-entropy maximization behind `F`.
//!
//! Nothing in this module evaluates the closed form of `F` or the favoured
//! probability `α(θ)`. Candidates are built from raw probability vectors,
//! moved onto the constraint `a·b = θ` by mixing with the uniform vector, and
//! scored with plain entropy evaluation.

mod grid;
mod sampler;

pub use grid::{grid_max_joint_entropy, grid_max_joint_entropy_with, GridOptimum};
pub use sampler::{random_feasible_sampler, SamplerResult, DEFAULT_SEED};

use crate::entropy::{entropy_nats, ProbVector};
use crate::error::{Error, Result};

/// Slack allowed when checking that a target lies between two inner products.
const BETWEEN_SLACK: f64 = 1e-12;

/// A pair of input laws with equality probability `theta = a·b`.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasiblePair {
    pub a: ProbVector,
    pub b: ProbVector,
    pub theta: f64,
}

impl FeasiblePair {
    /// `H(a) + H(b)` in base-`q` units.
    pub fn objective(&self) -> f64 {
        joint_entropy_q(self.a.as_slice(), self.b.as_slice())
    }
}

pub(crate) fn joint_entropy_q(a: &[f64], b: &[f64]) -> f64 {
    (entropy_nats(a) + entropy_nats(b)) / (a.len() as f64).ln()
}

/// Mixing weight `t ∈ [0, 1]` towards the uniform vector that moves the
/// equality probability from `theta0` to `target`.
///
/// Solves `(1 − t)² θ₀ + (2 − t) t / q = target`, which rearranges to
/// `(1 − t)² = (target − 1/q) / (θ₀ − 1/q)`.
pub(crate) fn mixing_weight(theta0: f64, target: f64, q: usize) -> Option<f64> {
    let inv_q = 1.0 / q as f64;
    let (near, far) = (target - inv_q, theta0 - inv_q);
    let between = if far >= 0.0 {
        near >= -BETWEEN_SLACK && near <= far + BETWEEN_SLACK
    } else {
        near <= BETWEEN_SLACK && near >= far - BETWEEN_SLACK
    };
    if !between {
        return None;
    }
    if far.abs() < f64::EPSILON {
        return Some(0.0);
    }
    let ratio = (near / far).clamp(0.0, 1.0);
    Some(1.0 - ratio.sqrt())
}

pub(crate) fn mix_towards_uniform(p: &[f64], t: f64) -> Vec<f64> {
    let u = t / p.len() as f64;
    p.iter().map(|x| (1.0 - t) * x + u).collect()
}

/// Mixes `(a, b)` with the uniform pair so that the equality probability
/// becomes `target`, which must lie between `a·b` and `1/q`.
pub fn interpolate_to_theta(a: &ProbVector, b: &ProbVector, target: f64) -> Result<FeasiblePair> {
    let q = a.len();
    if q != b.len() {
        return Err(Error::InvalidDistribution(format!(
            "length mismatch: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    if q < 2 {
        return Err(Error::Alphabet { q, need: "q >= 2" });
    }
    let theta0 = a.equality_probability(b);
    let t = mixing_weight(theta0, target, q).ok_or_else(|| {
        Error::domain(
            "theta_target",
            target,
            format!("between a.b = {theta0} and 1/{q}"),
        )
    })?;
    let a2 = ProbVector::new(mix_towards_uniform(a.as_slice(), t))?;
    let b2 = ProbVector::new(mix_towards_uniform(b.as_slice(), t))?;
    let theta = a2.equality_probability(&b2);
    Ok(FeasiblePair {
        a: a2,
        b: b2,
        theta,
    })
}

/// A symmetric point `a = b = x` whose coordinates take two values:
/// `r` copies of `a_hi` and `q − r` copies of `b_lo`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelPoint {
    pub r: usize,
    pub t: f64,
    pub a_hi: f64,
    pub b_lo: f64,
    pub p: f64,
}

impl TwoLevelPoint {
    /// Solves `r a + s b = 1`, `r a² + s b² = θ` with `a ≥ b`. Returns `None`
    /// when the solution would need `b < 0`.
    pub fn solve(q: usize, theta: f64, r: usize) -> Result<Option<Self>> {
        if q < 2 {
            return Err(Error::Alphabet { q, need: "q >= 2" });
        }
        if r == 0 || r >= q {
            return Err(Error::domain("r", r as f64, format!("[1, {}]", q - 1)));
        }
        let qf = q as f64;
        if theta.is_nan() || theta < 1.0 / qf || theta > 1.0 {
            return Err(Error::domain("theta", theta, format!("[1/{q}, 1]")));
        }
        let s = (q - r) as f64;
        let rf = r as f64;
        let p = theta * qf - 1.0;
        let root = (rf * s * p).max(0.0).sqrt();
        let a_hi = 1.0 / qf + root / (qf * rf);
        let mut b_lo = 1.0 / qf - root / (qf * s);
        if b_lo < 0.0 {
            if b_lo > -1e-12 {
                b_lo = 0.0;
            } else {
                return Ok(None);
            }
        }
        Ok(Some(TwoLevelPoint {
            r,
            t: rf / qf,
            a_hi,
            b_lo,
            p,
        }))
    }

    /// Objective `(2 / ln q)(−r a ln a − s b ln b)`.
    pub fn value(&self, q: usize) -> f64 {
        let s = (q - self.r) as f64;
        let nats = self.r as f64 * crate::entropy::neg_x_ln_x(self.a_hi)
            + s * crate::entropy::neg_x_ln_x(self.b_lo);
        2.0 * nats / (q as f64).ln()
    }
}

/// Objective of the two-level reduction, or `None` for an infeasible `r`.
pub fn two_level_value(q: usize, theta: f64, r: usize) -> Result<Option<f64>> {
    Ok(TwoLevelPoint::solve(q, theta, r)?.map(|pt| pt.value(q)))
}

/// `−½(ρ + 1) ln ρ − 1 + ρ`, the sign factor of `v′(t)` with `ρ = a/b`.
pub fn two_level_sign_expression(ratio: f64) -> f64 {
    -0.5 * (ratio + 1.0) * ratio.ln() - 1.0 + ratio
}

/// Outcome of [`v_monotonicity_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport {
    /// Feasible `(t, v(t))` samples in increasing `t`.
    pub samples: Vec<(f64, f64)>,
    /// Largest successive difference `v(t_{k+1}) − v(t_k)`.
    pub max_increment: f64,
    /// Largest value of the sign factor over samples with `a/b > 1`.
    pub max_sign_expression: f64,
    pub decreasing: bool,
    pub sign_negative: bool,
}

impl MonotonicityReport {
    pub fn passed(&self) -> bool {
        self.decreasing && self.sign_negative
    }
}

/// Samples `v(t) = −q t a ln a − q (1−t) b ln b` on `grid + 1` evenly spaced
/// `t ∈ [1/q, 1 − 1/q]`, keeping points with `b ≥ 0`, and checks that it
/// decreases and that the derivative's sign factor is negative.
pub fn v_monotonicity_check(q: usize, theta: f64, grid: usize) -> Result<MonotonicityReport> {
    if q < 2 {
        return Err(Error::Alphabet { q, need: "q >= 2" });
    }
    let qf = q as f64;
    if theta.is_nan() || theta <= 1.0 / qf || theta > 1.0 {
        return Err(Error::domain("theta", theta, format!("(1/{q}, 1]")));
    }
    let p = theta * qf - 1.0;
    let (t_lo, t_hi) = (1.0 / qf, 1.0 - 1.0 / qf);
    let steps = grid.max(1);
    let mut samples = Vec::new();
    let mut max_sign = f64::NEG_INFINITY;
    for k in 0..=steps {
        let t = if t_hi > t_lo {
            t_lo + (t_hi - t_lo) * k as f64 / steps as f64
        } else {
            t_lo
        };
        let a = (1.0 + ((1.0 - t) / t * p).sqrt()) / qf;
        let b = (1.0 - (t / (1.0 - t) * p).sqrt()) / qf;
        if b < 0.0 {
            continue;
        }
        let v =
            qf * t * crate::entropy::neg_x_ln_x(a) + qf * (1.0 - t) * crate::entropy::neg_x_ln_x(b);
        if b > 0.0 && a / b > 1.0 {
            max_sign = max_sign.max(two_level_sign_expression(a / b));
        }
        samples.push((t, v));
        if t_hi <= t_lo {
            break;
        }
    }
    let max_increment = samples
        .windows(2)
        .map(|w| w[1].1 - w[0].1)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(MonotonicityReport {
        decreasing: samples.len() < 2 || max_increment < 1e-12,
        sign_negative: max_sign < 0.0 || max_sign == f64::NEG_INFINITY,
        max_increment,
        max_sign_expression: max_sign,
        samples,
    })
}
