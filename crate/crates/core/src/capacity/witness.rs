//! Explicit auxiliary-variable construction achieving the symmetric rate.

use serde::Serialize;

use super::{alpha_unchecked, envelope_f, Envelope};
use crate::entropy::neg_x_ln_x;
use crate::error::{Error, Result};

/// One value `(u, v)` of the auxiliary variable `U`, with the conditional
/// input laws of both senders given `U = (u, v)`.
#[derive(Debug, Clone, Serialize)]
pub struct WitnessAtom {
    /// Index of the envelope support point.
    pub u: usize,
    /// Favoured symbol (0-based).
    pub v: usize,
    pub weight: f64,
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
}

/// Finite joint law of `(U, X₁, X₂)` with `X₁ ⟂ X₂ | U`.
#[derive(Debug, Clone, Serialize)]
pub struct CoverLeungWitness {
    pub q: usize,
    pub theta: f64,
    pub envelope: Envelope,
    pub atoms: Vec<WitnessAtom>,
}

/// Builds the auxiliary variable for equality probability `θ ∈ [1/q, 2/(q+1)]`.
///
/// Each envelope support point `(p_u, θ_u)` contributes `q` atoms of mass
/// `p_u / q`; given atom `(u, v)` both senders independently emit `v` with
/// probability `α(θ_u)` and every other symbol with `(1 − α(θ_u)) / (q − 1)`.
pub fn cover_leung_witness(q: usize, theta: f64) -> Result<CoverLeungWitness> {
    if q < 2 {
        return Err(Error::Alphabet { q, need: "q >= 2" });
    }
    let lo = 1.0 / q as f64;
    let hi = 2.0 / (q as f64 + 1.0);
    if theta.is_nan() || theta < lo || theta > hi {
        return Err(Error::domain(
            "theta",
            theta,
            format!("[1/{q}, 2/{}]", q + 1),
        ));
    }
    let envelope = envelope_f(theta, q)?;
    let mut atoms = Vec::with_capacity(envelope.support.points.len() * q);
    for (u, point) in envelope.support.points.iter().enumerate() {
        let alpha = alpha_unchecked(point.theta, q);
        let other = (1.0 - alpha) / (q - 1) as f64;
        for v in 0..q {
            let mut law = vec![other; q];
            law[v] = alpha;
            atoms.push(WitnessAtom {
                u,
                v,
                weight: point.weight / q as f64,
                x1: law.clone(),
                x2: law,
            });
        }
    }
    Ok(CoverLeungWitness {
        q,
        theta,
        envelope,
        atoms,
    })
}

impl CoverLeungWitness {
    /// `P(U = atom, X₁ = a, X₂ = b)`.
    pub fn joint(&self, atom: usize, a: usize, b: usize) -> f64 {
        let at = &self.atoms[atom];
        at.weight * at.x1[a] * at.x2[b]
    }

    pub fn total_mass(&self) -> f64 {
        let q = self.q;
        (0..self.atoms.len())
            .flat_map(|k| (0..q).flat_map(move |a| (0..q).map(move |b| (k, a, b))))
            .map(|(k, a, b)| self.joint(k, a, b))
            .sum()
    }

    /// `P(X₁ = a, X₂ = b)`, marginalizing `U` out of the joint table.
    pub fn input_pair(&self, a: usize, b: usize) -> f64 {
        (0..self.atoms.len()).map(|k| self.joint(k, a, b)).sum()
    }

    fn log_q(&self) -> f64 {
        (self.q as f64).ln()
    }

    fn h_u_nats(&self) -> f64 {
        let q = self.q;
        (0..self.atoms.len())
            .map(|k| {
                let pu: f64 = (0..q)
                    .flat_map(|a| (0..q).map(move |b| (a, b)))
                    .map(|(a, b)| self.joint(k, a, b))
                    .sum();
                neg_x_ln_x(pu)
            })
            .sum()
    }

    /// `H(X_i | U)` in base-`q` units for sender `i ∈ {1, 2}`, computed as
    /// `H(U, X_i) − H(U)` from the joint table.
    pub fn conditional_input_entropy(&self, sender: usize) -> f64 {
        let q = self.q;
        let h_ux: f64 = (0..self.atoms.len())
            .flat_map(|k| (0..q).map(move |x| (k, x)))
            .map(|(k, x)| {
                let p: f64 = (0..q)
                    .map(|y| {
                        if sender == 1 {
                            self.joint(k, x, y)
                        } else {
                            self.joint(k, y, x)
                        }
                    })
                    .sum();
                neg_x_ln_x(p)
            })
            .sum();
        (h_ux - self.h_u_nats()) / self.log_q()
    }

    /// Entropy of the channel output `{X₁, X₂}` in base-`q` units,
    /// enumerating all `C(q+1, 2)` outputs.
    pub fn output_entropy(&self) -> f64 {
        let q = self.q;
        let mut h = 0.0;
        for a in 0..q {
            h += neg_x_ln_x(self.input_pair(a, a));
            for b in a + 1..q {
                h += neg_x_ln_x(self.input_pair(a, b) + self.input_pair(b, a));
            }
        }
        h / self.log_q()
    }

    /// Largest deviation of `P(X₁, X₂ | U)` from `P(X₁ | U) P(X₂ | U)`.
    pub fn conditional_independence_gap(&self) -> f64 {
        let q = self.q;
        let mut worst = 0.0f64;
        for k in 0..self.atoms.len() {
            let pu: f64 = (0..q)
                .flat_map(|a| (0..q).map(move |b| (a, b)))
                .map(|(a, b)| self.joint(k, a, b))
                .sum();
            if pu == 0.0 {
                continue;
            }
            let m1: Vec<f64> = (0..q)
                .map(|a| (0..q).map(|b| self.joint(k, a, b)).sum::<f64>() / pu)
                .collect();
            let m2: Vec<f64> = (0..q)
                .map(|b| (0..q).map(|a| self.joint(k, a, b)).sum::<f64>() / pu)
                .collect();
            for (a, pa) in m1.iter().enumerate() {
                for (b, pb) in m2.iter().enumerate() {
                    let gap = (self.joint(k, a, b) / pu - pa * pb).abs();
                    worst = worst.max(gap);
                }
            }
        }
        worst
    }
}
