//! Average (symmetric-rate) capacity of the two-user union channel.
//!
//! With complete feedback the symmetric rate is `½ max min(F̂(θ), G(θ))` over
//! `θ ∈ [1/q, 2/(q+1)]`, where `θ` is the probability that both senders emit
//! the same symbol, `F` is the largest joint input entropy compatible with
//! `θ`, `F̂` its concave envelope and `G` the largest output entropy. All
//! quantities here are in base-`q` units.

mod witness;

pub use witness::{cover_leung_witness, CoverLeungWitness, WitnessAtom};

use serde::Serialize;

use crate::codec::rate_root;
use crate::entropy::{binary_entropy_unchecked, grouped_entropy_unchecked};
use crate::error::{Error, Result};
use crate::roots::{bisect, MAX_ITERATIONS, ROOT_TOLERANCE};

#[inline]
fn log_q(x: f64, q: usize) -> f64 {
    x.ln() / (q as f64).ln()
}

fn check_q(q: usize, min: usize, need: &'static str) -> Result<()> {
    if q < min {
        Err(Error::Alphabet { q, need })
    } else {
        Ok(())
    }
}

fn check_upper_range(theta: f64, q: usize) -> Result<()> {
    check_q(q, 2, "q >= 2")?;
    let lo = 1.0 / q as f64;
    if theta.is_nan() || theta < lo || theta > 1.0 {
        return Err(Error::domain("theta", theta, format!("[1/{q}, 1]")));
    }
    Ok(())
}

/// Number of unordered pairs `C(k, 2)` as a float.
fn pairs(k: usize) -> f64 {
    (k as f64) * (k as f64 - 1.0) / 2.0
}

/// The larger root of `q a² − 2a + 1 = (q − 1) θ`: the probability a sender
/// puts on its favoured symbol in the entropy-maximizing input pair.
pub fn alpha_of_theta(theta: f64, q: usize) -> Result<f64> {
    check_upper_range(theta, q)?;
    Ok(alpha_unchecked(theta, q))
}

fn alpha_unchecked(theta: f64, q: usize) -> f64 {
    let inv_q = 1.0 / q as f64;
    let disc = ((1.0 - inv_q) * (theta - inv_q)).max(0.0);
    (inv_q + disc.sqrt()).min(1.0)
}

/// Maximum joint entropy `H(X₁, X₂)` of independent inputs with
/// `P(X₁ = X₂) = θ`, for `θ ∈ [1/q, 1]`.
pub fn big_f(theta: f64, q: usize) -> Result<f64> {
    check_upper_range(theta, q)?;
    Ok(f_unchecked(theta, q))
}

pub(crate) fn f_unchecked(theta: f64, q: usize) -> f64 {
    let alpha = alpha_unchecked(theta, q);
    2.0 * grouped_entropy_unchecked(&[(alpha, 1), (1.0 - alpha, (q - 1) as u64)], q)
}

/// Tangency abscissa of the chord from `(1/q, F(1/q))` to the graph of `F`.
pub fn theta_prime(q: usize) -> Result<f64> {
    check_q(q, 3, "q >= 3")?;
    Ok(theta_prime_unchecked(q))
}

fn theta_prime_unchecked(q: usize) -> f64 {
    let qf = q as f64;
    1.0 / qf + (qf - 2.0).powi(2) / (qf * (qf - 1.0))
}

/// Slope of the envelope chord, `F'(θ')`.
fn line_slope(q: usize) -> f64 {
    let qf = q as f64;
    -2.0 * (qf - 1.0) * log_q(qf - 1.0, q) / (qf - 2.0)
}

fn line_unchecked(theta: f64, q: usize) -> f64 {
    2.0 + line_slope(q) * (theta - 1.0 / q as f64)
}

/// The chord `L` of the concave envelope on `[1/q, θ′]`.
pub fn envelope_line(theta: f64, q: usize) -> Result<f64> {
    check_q(q, 3, "q >= 3")?;
    let tp = theta_prime_unchecked(q);
    if theta.is_nan() || theta < 1.0 / q as f64 || theta > tp {
        return Err(Error::domain("theta", theta, format!("[1/{q}, {tp}]")));
    }
    Ok(line_unchecked(theta, q))
}

/// One point of a concave-envelope support: weight and abscissa.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupportPoint {
    pub weight: f64,
    pub theta: f64,
}

/// The (one or two) points whose weighted `F` values realize `F̂(θ)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnvelopeSupport {
    pub points: Vec<SupportPoint>,
}

impl EnvelopeSupport {
    pub fn mean_theta(&self) -> f64 {
        self.points.iter().map(|p| p.weight * p.theta).sum()
    }

    /// `∑ p_u F(θ_u)`.
    pub fn mixed_value(&self, q: usize) -> f64 {
        self.points
            .iter()
            .map(|p| p.weight * f_unchecked(p.theta, q))
            .sum()
    }
}

/// Value of `F̂(θ)` together with the support realizing it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Envelope {
    pub value: f64,
    pub support: EnvelopeSupport,
}

/// Concave envelope of `F` on `[1/q, 1]`.
///
/// For `q = 2`, `F` is already concave there. For `q ≥ 3` the envelope is
/// the chord `L` on `[1/q, θ′)` and `F` itself beyond.
pub fn envelope_f(theta: f64, q: usize) -> Result<Envelope> {
    check_upper_range(theta, q)?;
    let single = |theta: f64| Envelope {
        value: f_unchecked(theta, q),
        support: EnvelopeSupport {
            points: vec![SupportPoint { weight: 1.0, theta }],
        },
    };
    if q == 2 {
        return Ok(single(theta));
    }
    let tp = theta_prime_unchecked(q);
    if theta >= tp {
        return Ok(single(theta));
    }
    let lo = 1.0 / q as f64;
    let far = (theta - lo) / (tp - lo);
    Ok(Envelope {
        value: line_unchecked(theta, q),
        support: EnvelopeSupport {
            points: vec![
                SupportPoint {
                    weight: 1.0 - far,
                    theta: lo,
                },
                SupportPoint {
                    weight: far,
                    theta: tp,
                },
            ],
        },
    })
}

fn envelope_value_unchecked(theta: f64, q: usize) -> f64 {
    if q >= 3 && theta < theta_prime_unchecked(q) {
        line_unchecked(theta, q)
    } else {
        f_unchecked(theta, q)
    }
}

/// Entropy of the channel output when singleton mass `θ` is uniform over the
/// `q` singletons and pair mass `1 − θ` uniform over the `C(q,2)` pairs.
pub fn big_g(theta: f64, q: usize) -> Result<f64> {
    check_q(q, 2, "q >= 2")?;
    if theta.is_nan() || !(0.0..=1.0).contains(&theta) {
        return Err(Error::domain("theta", theta, "[0, 1]"));
    }
    Ok(g_unchecked(theta, q))
}

pub(crate) fn g_unchecked(theta: f64, q: usize) -> f64 {
    let h = binary_entropy_unchecked(theta) * std::f64::consts::LN_2 / (q as f64).ln();
    h + theta + (1.0 - theta) * log_q(pairs(q), q)
}

/// `ln q · (F̂(2/(q+1)) − G(2/(q+1)))`; its sign decides whether `G`'s peak
/// lies under the envelope chord.
pub fn delta(q: usize) -> Result<f64> {
    check_q(q, 3, "q >= 3")?;
    let qf = q as f64;
    Ok((2.0 * qf / (qf + 1.0)).ln()
        - 2.0 * (qf - 1.0).powi(2) / ((qf - 2.0) * qf * (qf + 1.0)) * (qf - 1.0).ln())
}

/// `½ log_q C(q+1, 2)`: half the log-size of the output alphabet.
pub fn naive_bound(q: usize) -> f64 {
    0.5 * log_q(pairs(q + 1), q)
}

/// Average capacity without feedback.
pub fn avg_capacity_no_feedback(q: usize) -> Result<f64> {
    check_q(q, 2, "q >= 2")?;
    let qf = q as f64;
    Ok(1.0 - (qf - 1.0) / (2.0 * qf * qf.log2()))
}

/// Which branch of the maximization produced `θ*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CapacityCase {
    /// `q = 2`: `F` meets `G` inside the interval.
    #[serde(rename = "q2_FG_intersection")]
    FMeetsG,
    /// The envelope chord meets `G` inside the interval.
    #[serde(rename = "q34_LG_intersection")]
    LineMeetsG,
    /// `G` peaks under the envelope, so `θ* = 2/(q+1)`.
    #[serde(rename = "qge5_G_peak")]
    GPeak,
}

impl CapacityCase {
    pub fn tag(self) -> &'static str {
        match self {
            CapacityCase::FMeetsG => "q2_FG_intersection",
            CapacityCase::LineMeetsG => "q34_LG_intersection",
            CapacityCase::GPeak => "qge5_G_peak",
        }
    }
}

/// Rates for one alphabet size, all in base-`q` units per channel use.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapacityReport {
    pub q: usize,
    /// Average capacity with complete feedback.
    pub r_ef: f64,
    pub theta_star: f64,
    pub case_tag: CapacityCase,
    /// Average capacity without feedback.
    pub r_e_nofeedback: f64,
    /// Rate reached by the zero-error feedback scheme as the block count grows.
    pub r_of_lower: f64,
}

/// Average feedback capacity and the maximizing equality probability.
pub fn avg_feedback_capacity(q: usize) -> Result<CapacityReport> {
    check_q(q, 2, "q >= 2")?;
    let lo = 1.0 / q as f64;
    let hi = 2.0 / (q as f64 + 1.0);

    let (theta_star, case_tag) = if q == 2 {
        let root = bisect(
            |t| f_unchecked(t, q) - g_unchecked(t, q),
            lo,
            hi,
            ROOT_TOLERANCE,
            MAX_ITERATIONS,
        )?;
        (root, CapacityCase::FMeetsG)
    } else if delta(q)? < 0.0 {
        let root = bisect(
            |t| line_unchecked(t, q) - g_unchecked(t, q),
            lo,
            hi,
            ROOT_TOLERANCE,
            MAX_ITERATIONS,
        )?;
        (root, CapacityCase::LineMeetsG)
    } else {
        (hi, CapacityCase::GPeak)
    };

    let r_ef = match case_tag {
        CapacityCase::GPeak => naive_bound(q),
        _ => 0.5 * envelope_value_unchecked(theta_star, q).min(g_unchecked(theta_star, q)),
    };

    Ok(CapacityReport {
        q,
        r_ef,
        theta_star,
        case_tag,
        r_e_nofeedback: avg_capacity_no_feedback(q)?,
        r_of_lower: rate_root(q)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn central_diff(f: impl Fn(f64) -> f64, x: f64) -> f64 {
        let h = 1e-6;
        (f(x + h) - f(x - h)) / (2.0 * h)
    }

    #[test]
    fn alpha_examples() {
        for q in 2..10 {
            let lo = 1.0 / q as f64;
            assert_abs_diff_eq!(alpha_of_theta(lo, q).unwrap(), lo, epsilon = 1e-15);
            assert_abs_diff_eq!(alpha_of_theta(1.0, q).unwrap(), 1.0, epsilon = 1e-15);
        }
        let a = alpha_of_theta(0.75, 2).unwrap();
        assert_abs_diff_eq!(a, 0.5 + (0.5f64 * 0.25).sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(a, 0.85355, epsilon = 1e-5);
        assert_abs_diff_eq!(2.0 * a * a - 2.0 * a + 1.0, 0.75, epsilon = 1e-12);
    }

    #[test]
    fn alpha_solves_the_quadratic() {
        for q in 2..30 {
            for i in 0..=100 {
                let lo = 1.0 / q as f64;
                let theta = (lo + (1.0 - lo) * i as f64 / 100.0).min(1.0);
                let a = alpha_of_theta(theta, q).unwrap();
                let qf = q as f64;
                assert!((lo..=1.0).contains(&a));
                assert_abs_diff_eq!(
                    qf * a * a - 2.0 * a + 1.0,
                    (qf - 1.0) * theta,
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert!(alpha_of_theta(0.2, 3).is_err());
        assert!(big_f(1.01, 3).is_err());
        assert!(big_f(f64::NAN, 3).is_err());
        assert!(theta_prime(2).is_err());
        assert!(delta(2).is_err());
        assert!(envelope_line(0.9, 3).is_err());
        assert!(big_g(-0.1, 3).is_err());
        assert!(avg_feedback_capacity(1).is_err());
        assert!(avg_capacity_no_feedback(0).is_err());
    }

    #[test]
    fn f_endpoints() {
        for q in 2..20 {
            assert_abs_diff_eq!(big_f(1.0 / q as f64, q).unwrap(), 2.0, epsilon = 1e-14);
            assert_eq!(big_f(1.0, q).unwrap(), 0.0);
        }
    }

    #[test]
    fn theta_prime_examples_and_tangency() {
        assert_abs_diff_eq!(theta_prime(3).unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(theta_prime(4).unwrap(), 0.25 + 4.0 / 12.0, epsilon = 1e-15);
        assert_abs_diff_eq!(theta_prime(10).unwrap(), 0.1 + 64.0 / 90.0, epsilon = 1e-15);
        for q in 3..=50 {
            let tp = theta_prime(q).unwrap();
            let lo = 1.0 / q as f64;
            assert!(tp > lo && tp < 1.0);
            let chord = (f_unchecked(tp, q) - 2.0) / (tp - lo);
            let deriv = central_diff(|t| f_unchecked(t, q), tp);
            assert_abs_diff_eq!(chord, deriv, epsilon = 1e-8);
            assert_abs_diff_eq!(line_slope(q), deriv, epsilon = 1e-8);
        }
    }

    #[test]
    fn line_meets_curve_at_both_ends() {
        for q in 3..=50 {
            let tp = theta_prime(q).unwrap();
            let lo = 1.0 / q as f64;
            assert_abs_diff_eq!(envelope_line(lo, q).unwrap(), 2.0, epsilon = 1e-15);
            assert_abs_diff_eq!(
                envelope_line(tp, q).unwrap(),
                big_f(tp, q).unwrap(),
                epsilon = 1e-9
            );
        }
        assert_abs_diff_eq!(
            envelope_line(0.5, 3).unwrap(),
            big_f(0.5, 3).unwrap(),
            epsilon = 1e-9
        );
    }

    #[test]
    fn line_at_g_peak_matches_closed_form() {
        for q in 3..=20 {
            let qf = q as f64;
            let expected = 2.0
                - 2.0 * (qf - 1.0).powi(2) * log_q(qf - 1.0, q) / ((qf - 2.0) * qf * (qf + 1.0));
            assert_abs_diff_eq!(
                envelope_line(2.0 / (qf + 1.0), q).unwrap(),
                expected,
                epsilon = 1e-13
            );
        }
    }

    #[test]
    fn envelope_examples() {
        let e = envelope_f(0.6, 2).unwrap();
        assert_eq!(e.value, big_f(0.6, 2).unwrap());
        assert_eq!(
            e.support.points,
            vec![SupportPoint {
                weight: 1.0,
                theta: 0.6
            }]
        );

        let e = envelope_f(0.4, 3).unwrap();
        assert_abs_diff_eq!(e.value, envelope_line(0.4, 3).unwrap(), epsilon = 1e-15);
        assert_abs_diff_eq!(e.support.points[0].weight, 0.6, epsilon = 1e-12);
        assert_abs_diff_eq!(e.support.points[1].weight, 0.4, epsilon = 1e-12);
        assert_abs_diff_eq!(e.support.mixed_value(3), e.value, epsilon = 1e-12);

        let e = envelope_f(0.5, 3).unwrap();
        assert_eq!(e.support.points.len(), 1);
        assert_eq!(e.value, big_f(0.5, 3).unwrap());
    }

    #[test]
    fn envelope_support_invariants() {
        for q in 2..=30 {
            let lo = 1.0 / q as f64;
            for i in 0..=200 {
                let theta = (lo + (1.0 - lo) * i as f64 / 200.0).min(1.0);
                let env = envelope_f(theta, q).unwrap();
                let w: f64 = env.support.points.iter().map(|p| p.weight).sum();
                assert_abs_diff_eq!(w, 1.0, epsilon = 1e-12);
                for p in &env.support.points {
                    assert!(p.weight >= 0.0 && p.theta >= lo && p.theta <= 1.0);
                }
                assert_abs_diff_eq!(env.support.mean_theta(), theta, epsilon = 1e-10);
                assert_abs_diff_eq!(env.support.mixed_value(q), env.value, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn envelope_dominates_and_is_concave() {
        for q in 2..=50 {
            let lo = 1.0 / q as f64;
            let vals: Vec<f64> = std::iter::successors(Some(lo), |t| Some(t + 1e-3))
                .take_while(|t| *t <= 1.0)
                .map(|t| {
                    let env = envelope_f(t, q).unwrap().value;
                    assert!(env >= big_f(t, q).unwrap() - 1e-12, "q={q} t={t}");
                    env
                })
                .collect();
            for w in vals.windows(3) {
                assert!(w[0] - 2.0 * w[1] + w[2] <= 1e-9, "q={q}");
            }
        }
    }

    #[test]
    fn f_is_decreasing() {
        for q in 2..=50 {
            let lo = 1.0 / q as f64;
            let mut prev = f64::INFINITY;
            let mut t = lo;
            while t <= 1.0 {
                let v = big_f(t, q).unwrap();
                assert!(v <= prev + 1e-15, "q={q} t={t}");
                prev = v;
                t += 1e-3;
            }
        }
    }

    #[test]
    fn g_examples() {
        assert_abs_diff_eq!(
            big_g(2.0 / 6.0, 5).unwrap(),
            15f64.ln() / 5f64.ln(),
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(big_g(1.0 / 3.0, 5).unwrap(), 2.0 * 0.84130, epsilon = 1e-5);
        assert_abs_diff_eq!(big_g(1.0, 7).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(big_g(0.0, 3).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn g_concave_with_peak_at_two_over_q_plus_one() {
        for q in 2..=50 {
            let peak = 2.0 / (q as f64 + 1.0);
            let step = 1e-3;
            let vals: Vec<f64> = (0..=1000)
                .map(|i| big_g(i as f64 * step, q).unwrap())
                .collect();
            for w in vals.windows(3) {
                assert!(w[0] - 2.0 * w[1] + w[2] <= 1e-12);
            }
            let argmax = vals
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .unwrap()
                .0;
            assert!((argmax as f64 * step - peak).abs() <= step, "q={q}");
            let d = central_diff(|t| g_unchecked(t, q), peak);
            assert!(d.abs() < 1e-6, "q={q} G'={d}");
            assert_abs_diff_eq!(g_unchecked(peak, q), 2.0 * naive_bound(q), epsilon = 1e-14);
        }
    }

    #[test]
    fn delta_signs() {
        let d3 = delta(3).unwrap();
        assert_abs_diff_eq!(d3, 1.5f64.ln() - 2.0 / 3.0 * 2f64.ln(), epsilon = 1e-15);
        assert!(d3 < 0.0);
        let d4 = delta(4).unwrap();
        assert_abs_diff_eq!(d4, 1.6f64.ln() - 0.45 * 3f64.ln(), epsilon = 1e-15);
        assert!(d4 < 0.0);
        for q in 5..=100 {
            assert!(delta(q).unwrap() > 0.0, "q={q}");
        }
    }

    #[test]
    fn no_feedback_values() {
        assert_abs_diff_eq!(avg_capacity_no_feedback(2).unwrap(), 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(
            avg_capacity_no_feedback(3).unwrap(),
            0.78969,
            epsilon = 5e-6
        );
        assert_abs_diff_eq!(
            avg_capacity_no_feedback(6).unwrap(),
            0.83881,
            epsilon = 5e-6
        );
    }

    #[test]
    fn capacity_examples() {
        let expect = [
            (2, 0.79113),
            (3, 0.81510),
            (4, 0.83044),
            (5, 0.84130),
            (6, 0.84959),
        ];
        for (q, r) in expect {
            let rep = avg_feedback_capacity(q).unwrap();
            assert_abs_diff_eq!(rep.r_ef, r, epsilon = 5e-6);
        }
        assert_eq!(
            avg_feedback_capacity(2).unwrap().case_tag,
            CapacityCase::FMeetsG
        );
        assert_eq!(
            avg_feedback_capacity(3).unwrap().case_tag,
            CapacityCase::LineMeetsG
        );
        assert_eq!(
            avg_feedback_capacity(4).unwrap().case_tag,
            CapacityCase::LineMeetsG
        );
        assert_eq!(
            avg_feedback_capacity(5).unwrap().case_tag,
            CapacityCase::GPeak
        );
    }

    #[test]
    fn capacity_report_invariants() {
        for q in 2..=50 {
            let rep = avg_feedback_capacity(q).unwrap();
            let lo = 1.0 / q as f64;
            let hi = 2.0 / (q as f64 + 1.0);
            assert!(rep.theta_star >= lo && rep.theta_star <= hi + 1e-15);
            assert!(rep.r_of_lower <= rep.r_ef, "q={q}");
            assert!(rep.r_e_nofeedback <= rep.r_ef, "q={q}");
            assert!(rep.r_ef <= naive_bound(q) + 1e-12, "q={q}");
            if q >= 5 {
                assert_eq!(rep.r_ef, naive_bound(q));
                let env = envelope_f(hi, q).unwrap().value;
                assert!(env >= g_unchecked(hi, q));
            }
        }
    }

    #[test]
    fn crossing_balances_both_sides() {
        for q in 2..=4 {
            let rep = avg_feedback_capacity(q).unwrap();
            let env = envelope_f(rep.theta_star, q).unwrap().value;
            let g = big_g(rep.theta_star, q).unwrap();
            assert_abs_diff_eq!(env, g, epsilon = 1e-10);
        }
    }
}
