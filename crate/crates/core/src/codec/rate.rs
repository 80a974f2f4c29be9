use crate::entropy::binary_entropy_unchecked;
use crate::error::{Error, Result};
use crate::roots::{bisect, MAX_ITERATIONS, ROOT_TOLERANCE};

/// Asymptotic rate of the block scheme: the root of
/// `H_b(α) + (1 − α) log₂ q = 1` on `(1/2, 1]`.
///
/// The left side decreases on that interval, from `1 + ½ log₂ q` at `α = ½`
/// to `0` at `α = 1`, so the root is unique.
pub fn rate_root(q: usize) -> Result<f64> {
    if q < 2 {
        return Err(Error::Alphabet { q, need: "q >= 2" });
    }
    let log2q = (q as f64).log2();
    bisect(
        |a| binary_entropy_unchecked(a) + (1.0 - a) * log2q - 1.0,
        0.5,
        1.0,
        ROOT_TOLERANCE,
        MAX_ITERATIONS,
    )
}

/// `1 − 1/log₂ q`, a closed-form floor on [`rate_root`].
pub fn zero_error_rate_floor(q: usize) -> Result<f64> {
    if q < 2 {
        return Err(Error::Alphabet { q, need: "q >= 2" });
    }
    Ok(1.0 - 1.0 / (q as f64).log2())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn binary_root_is_entropy_fixed_point() {
        let r = rate_root(2).unwrap();
        assert_abs_diff_eq!(binary_entropy_unchecked(r), r, epsilon = 1e-11);
        assert_abs_diff_eq!(r, 0.77291, epsilon = 5e-6);
    }

    #[test]
    fn root_satisfies_equation() {
        for q in 2..=64 {
            let r = rate_root(q).unwrap();
            assert!(r > 0.5 && r <= 1.0);
            let lhs = binary_entropy_unchecked(r) + (1.0 - r) * (q as f64).log2();
            assert_abs_diff_eq!(lhs, 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn floor_holds() {
        for q in 2..=1000 {
            assert!(rate_root(q).unwrap() >= zero_error_rate_floor(q).unwrap());
        }
        assert!(rate_root(1).is_err());
        assert!(zero_error_rate_floor(0).is_err());
    }
}
