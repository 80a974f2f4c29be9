use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{joint_entropy_q, mix_towards_uniform, mixing_weight, DEFAULT_SEED};
use crate::entropy::ProbVector;
use crate::error::{Error, Result};

/// Random local refinements applied after the ternary simplex sweep.
pub const TERNARY_REFINEMENTS: usize = 100_000;
/// Coarsest step used for the second sender's directions in the ternary sweep.
const TERNARY_DIRECTION_STEP: f64 = 0.05;

/// Best feasible pair found by the exhaustive search.
#[derive(Debug, Clone, PartialEq)]
pub struct GridOptimum {
    /// `H(a) + H(b)` in base-`q` units.
    pub value: f64,
    pub a: ProbVector,
    pub b: ProbVector,
    pub resolution: f64,
}

/// Exhaustive lower bound on the largest `H(a) + H(b)` over pairs with
/// `a·b = θ`, for `q ∈ {2, 3}`.
///
/// `q = 2` sweeps `a₁` over a grid of step `resolution` and solves `b₁`
/// exactly. `q = 3` sweeps the 2-simplex for `a`, pairs each point with a
/// grid of directions for `b`, moves the pair onto the constraint by mixing
/// with the uniform vector, then refines the incumbent randomly.
///
/// Returns `Ok(None)` when no grid pair is feasible.
pub fn grid_max_joint_entropy(
    q: usize,
    theta: f64,
    resolution: f64,
) -> Result<Option<GridOptimum>> {
    grid_max_joint_entropy_with(q, theta, resolution, TERNARY_REFINEMENTS, DEFAULT_SEED)
}

/// [`grid_max_joint_entropy`] with an explicit refinement budget and seed
/// (both ignored for `q = 2`).
pub fn grid_max_joint_entropy_with(
    q: usize,
    theta: f64,
    resolution: f64,
    refinements: usize,
    seed: u64,
) -> Result<Option<GridOptimum>> {
    if theta.is_nan() || !(0.0..=1.0).contains(&theta) {
        return Err(Error::domain("theta", theta, "[0, 1]"));
    }
    if !(resolution > 0.0 && resolution <= 0.5) {
        return Err(Error::domain("resolution", resolution, "(0, 0.5]"));
    }
    match q {
        2 => Ok(binary_sweep(theta, resolution)),
        3 => Ok(ternary_sweep(theta, resolution, refinements, seed)),
        _ => Err(Error::Alphabet {
            q,
            need: "q in {2, 3}",
        }),
    }
}

fn steps_for(resolution: f64) -> usize {
    (1.0 / resolution).round().max(1.0) as usize
}

fn binary_sweep(theta: f64, resolution: f64) -> Option<GridOptimum> {
    let steps = steps_for(resolution);
    let best = (0..=steps)
        .into_par_iter()
        .filter_map(|i| {
            let a1 = i as f64 / steps as f64;
            let denom = 2.0 * a1 - 1.0;
            // a·b = a₁b₁ + (1−a₁)(1−b₁) = θ  ⇔  b₁(2a₁ − 1) = θ − 1 + a₁
            let b1 = if denom.abs() < 1e-15 {
                if (theta - 0.5).abs() <= 1e-12 {
                    0.5
                } else {
                    return None;
                }
            } else {
                (theta - 1.0 + a1) / denom
            };
            if !(-1e-12..=1.0 + 1e-12).contains(&b1) {
                return None;
            }
            let b1 = b1.clamp(0.0, 1.0);
            let a = [a1, 1.0 - a1];
            let b = [b1, 1.0 - b1];
            Some((joint_entropy_q(&a, &b), i, b1))
        })
        .max_by(|x, y| x.0.total_cmp(&y.0).then(y.1.cmp(&x.1)))?;
    let (value, i, b1) = best;
    let a1 = i as f64 / steps as f64;
    Some(GridOptimum {
        value,
        a: ProbVector::new(vec![a1, 1.0 - a1]).ok()?,
        b: ProbVector::new(vec![b1, 1.0 - b1]).ok()?,
        resolution,
    })
}

fn simplex_points(steps: usize) -> Vec<[f64; 3]> {
    let n = steps as f64;
    let mut pts = Vec::with_capacity((steps + 1) * (steps + 2) / 2);
    for i in 0..=steps {
        for j in 0..=steps - i {
            let k = steps - i - j;
            pts.push([i as f64 / n, j as f64 / n, k as f64 / n]);
        }
    }
    pts
}

/// Moves `(a, b)` onto `a·b = θ` and scores it.
fn score(a: &[f64], b: &[f64], theta: f64) -> Option<(f64, Vec<f64>, Vec<f64>)> {
    let theta0: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let t = mixing_weight(theta0, theta, a.len())?;
    let a2 = mix_towards_uniform(a, t);
    let b2 = mix_towards_uniform(b, t);
    Some((joint_entropy_q(&a2, &b2), a2, b2))
}

type Candidate = (f64, Vec<f64>, Vec<f64>);

fn better(x: Candidate, y: Candidate) -> Candidate {
    // Ties keep the lexicographically smaller pair so parallel reductions stay deterministic.
    match x.0.total_cmp(&y.0) {
        std::cmp::Ordering::Greater => x,
        std::cmp::Ordering::Less => y,
        std::cmp::Ordering::Equal => {
            let key = |c: &Candidate| c.1.iter().chain(&c.2).copied().collect::<Vec<f64>>();
            if key(&x).partial_cmp(&key(&y)) == Some(std::cmp::Ordering::Greater) {
                y
            } else {
                x
            }
        }
    }
}

fn ternary_sweep(
    theta: f64,
    resolution: f64,
    refinements: usize,
    seed: u64,
) -> Option<GridOptimum> {
    let grid = simplex_points(steps_for(resolution));
    let directions = simplex_points(steps_for(resolution.max(TERNARY_DIRECTION_STEP)));
    let incumbent = grid
        .par_iter()
        .filter_map(|a| {
            std::iter::once(a)
                .chain(directions.iter())
                .filter_map(|b| score(a, b, theta))
                .reduce(better)
        })
        .reduce_with(better)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = incumbent;
    for k in 0..refinements {
        // Perturbation scale shrinks geometrically from the grid step down to 1e-7.
        let frac = k as f64 / refinements.max(1) as f64;
        let scale = resolution * (1e-7 / resolution).powf(frac);
        let a = perturb(&best.1, scale, &mut rng);
        let b = if rng.gen_bool(0.5) {
            a.clone()
        } else {
            perturb(&best.2, scale, &mut rng)
        };
        if let Some(cand) = score(&a, &b, theta) {
            if cand.0 > best.0 {
                best = cand;
            }
        }
    }
    let (value, a, b) = best;
    Some(GridOptimum {
        value,
        a: ProbVector::new(a).ok()?,
        b: ProbVector::new(b).ok()?,
        resolution,
    })
}

fn perturb(p: &[f64], scale: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let raw: Vec<f64> = p
        .iter()
        .map(|x| (x + scale * (rng.gen::<f64>() - 0.5)).max(0.0))
        .collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / s).collect()
}
