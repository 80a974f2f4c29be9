use crate::error::{Error, Result};

/// Absolute tolerance on the abscissa used for every root in this crate.
pub const ROOT_TOLERANCE: f64 = 1e-12;
/// Iteration cap for [`bisect`].
pub const MAX_ITERATIONS: usize = 200;

/// Finds a root of a continuous `f` on `[lo, hi]` by bisection.
///
/// The endpoints must bracket a sign change (an exact zero at either end is
/// returned immediately). Iteration stops once the bracket is narrower than
/// `tol` or after `max_iter` halvings.
pub fn bisect<F>(mut f: F, lo: f64, hi: f64, tol: f64, max_iter: usize) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let (mut lo, mut hi) = (lo, hi);
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::Bracket { lo, hi, f_lo, f_hi });
    }
    for _ in 0..max_iter {
        if hi - lo <= tol {
            break;
        }
        let mid = lo + 0.5 * (hi - lo);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo + 0.5 * (hi - lo))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, ROOT_TOLERANCE, MAX_ITERATIONS).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn decreasing_functions_work() {
        let r = bisect(|x| 1.0 - x, 0.0, 3.0, ROOT_TOLERANCE, MAX_ITERATIONS).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_bracket() {
        assert!(matches!(
            bisect(|x| x * x + 1.0, -1.0, 1.0, ROOT_TOLERANCE, MAX_ITERATIONS),
            Err(Error::Bracket { .. })
        ));
    }

    #[test]
    fn endpoint_root() {
        assert_eq!(bisect(|x| x, 0.0, 1.0, 1e-12, 10).unwrap(), 0.0);
    }
}
