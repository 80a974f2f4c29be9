use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{joint_entropy_q, mix_towards_uniform, mixing_weight};
use crate::error::{Error, Result};

/// Seed used when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x5EED;

const CHUNK: usize = 4096;

/// Best objective seen by [`random_feasible_sampler`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerResult {
    /// Largest `H(a) + H(b)` among accepted pairs, or `None` if none was accepted.
    pub best: Option<f64>,
    pub accepted: usize,
    pub samples: usize,
}

/// Draws random input pairs, keeps those whose equality probability lies
/// on the far side of `θ` from `1/q`, mixes them with the uniform pair to
/// land exactly on `θ`, and returns the largest `H(a) + H(b)` seen.
///
/// Work is split into fixed-size chunks, each with its own ChaCha stream,
/// so the result depends only on `(q, θ, samples, seed)`.
pub fn random_feasible_sampler(
    q: usize,
    theta: f64,
    samples: usize,
    seed: u64,
) -> Result<SamplerResult> {
    if q < 2 {
        return Err(Error::Alphabet { q, need: "q >= 2" });
    }
    let lo = 1.0 / q as f64;
    if theta.is_nan() || theta < lo || theta > 1.0 {
        return Err(Error::domain("theta", theta, format!("[1/{q}, 1]")));
    }
    let chunks = samples.div_ceil(CHUNK);
    let (best, accepted) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let count = CHUNK.min(samples - c * CHUNK);
            let mut best = f64::NEG_INFINITY;
            let mut accepted = 0usize;
            for _ in 0..count {
                let a = draw(q, &mut rng);
                let b = if rng.gen_bool(0.5) {
                    a.clone()
                } else {
                    draw(q, &mut rng)
                };
                let theta0: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
                let Some(t) = mixing_weight(theta0, theta, q) else {
                    continue;
                };
                accepted += 1;
                let value =
                    joint_entropy_q(&mix_towards_uniform(&a, t), &mix_towards_uniform(&b, t));
                best = best.max(value);
            }
            (best, accepted)
        })
        .reduce(|| (f64::NEG_INFINITY, 0), |x, y| (x.0.max(y.0), x.1 + y.1));
    Ok(SamplerResult {
        best: (accepted > 0).then_some(best),
        accepted,
        samples,
    })
}

/// A random law on `q` symbols: either one spiked symbol with the rest
/// spread by exponential weights, or exponential weights sharpened by a
/// random power.
fn draw(q: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut w: Vec<f64> = (0..q).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    if rng.gen_bool(0.5) {
        let spike = rng.gen_range(0..q);
        let mass: f64 = rng.gen::<f64>().sqrt();
        w[spike] = 0.0;
        let rest: f64 = w.iter().sum();
        for x in &mut w {
            *x *= (1.0 - mass) / rest;
        }
        w[spike] = mass;
        w
    } else {
        let power = rng.gen_range(0.0..3.0f64).exp();
        for x in &mut w {
            *x = x.powf(power);
        }
        let s: f64 = w.iter().sum();
        w.into_iter().map(|x| x / s).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::big_f;

    #[test]
    fn deterministic() {
        let a = random_feasible_sampler(4, 0.5, 10_000, 9).unwrap();
        let b = random_feasible_sampler(4, 0.5, 10_000, 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.samples, 10_000);
    }

    #[test]
    fn uniform_target_reaches_two() {
        let r = random_feasible_sampler(3, 1.0 / 3.0, 1000, DEFAULT_SEED).unwrap();
        assert!((r.best.unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn never_exceeds_closed_form() {
        for (q, theta) in [(5, 0.5), (3, 0.9), (4, 0.3), (6, 0.7)] {
            let r = random_feasible_sampler(q, theta, 20_000, 11).unwrap();
            assert!(r.best.unwrap() <= big_f(theta, q).unwrap() + 1e-9);
        }
    }

    #[test]
    fn rejects_theta_below_one_over_q() {
        assert!(random_feasible_sampler(4, 0.2, 10, 0).is_err());
    }
}
