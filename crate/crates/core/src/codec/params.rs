//! Exact-integer bookkeeping for block parameters.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest alphabet whose symbols fit the `u8` digit representation.
pub const MAX_ALPHABET: usize = 256;

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    num_integer::binomial(BigUint::from(n), BigUint::from(k.min(n - k)))
}

fn pow(base: usize, exp: usize) -> BigUint {
    num_traits::pow(BigUint::from(base), exp)
}

/// Number of length-`n` index patterns with exactly `m` stars over `q`
/// symbols: `C(n, m) q^(n−m)`.
pub fn pattern_count(q: usize, n: usize, m: usize) -> BigUint {
    if m > n {
        return BigUint::zero();
    }
    binomial(n, m) * pow(q, n - m)
}

/// Worst-case size of the next uncertainty set,
/// `C(2n − 2m, n − m) 2^(2m − n)`, defined for `n/2 ≤ m ≤ n`.
pub fn peak_bound(n: usize, m: usize) -> Option<BigUint> {
    if m > n || 2 * m < n {
        return None;
    }
    Some(binomial(2 * (n - m), n - m) * pow(2, 2 * m - n))
}

/// `u_ℓ = C(n − ℓ, m − ℓ) 2^ℓ`: how many continuations survive a block in
/// which `ℓ` channel uses produced two-symbol outputs.
pub fn u_ell(n: usize, m: usize, ell: usize) -> BigUint {
    if ell > m || m > n {
        return BigUint::zero();
    }
    binomial(n - ell, m - ell) * pow(2, ell)
}

/// All `ℓ ∈ [0, m]` at which `u_ℓ` is maximal.
pub fn u_ell_argmax(n: usize, m: usize) -> Vec<usize> {
    let values: Vec<BigUint> = (0..=m).map(|l| u_ell(n, m, l)).collect();
    let Some(max) = values.iter().max() else {
        return Vec::new();
    };
    values
        .iter()
        .enumerate()
        .filter(|(_, v)| *v == max)
        .map(|(l, _)| l)
        .collect()
}

/// Smallest `k` with `base^k ≥ x` (zero for `x ≤ 1`).
pub fn ceil_log(base: usize, x: &BigUint) -> usize {
    let b = BigUint::from(base);
    let mut acc = BigUint::one();
    let mut k = 0;
    while &acc < x {
        acc *= &b;
        k += 1;
    }
    k
}

/// Both sides of the block-length constraint, evaluated exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParamCheck {
    pub q: usize,
    pub n: usize,
    pub m: usize,
    /// `C(2n−2m, n−m) 2^(2m−n)`; `None` when `m < n/2`.
    #[serde(serialize_with = "crate::codec::ser::opt_decimal")]
    pub lhs: Option<BigUint>,
    /// `C(n, m) q^(n−m)`, the number of index patterns.
    #[serde(serialize_with = "crate::codec::ser::decimal")]
    pub rhs: BigUint,
    pub feasible: bool,
}

/// Checks `n/2 ≤ m ≤ n` and `C(2n−2m, n−m) 2^(2m−n) ≤ C(n, m) q^(n−m)`.
pub fn validate_params(q: usize, n: usize, m: usize) -> ParamCheck {
    let lhs = peak_bound(n, m);
    let rhs = pattern_count(q, n, m);
    let feasible = q >= 2 && m >= 1 && matches!(&lhs, Some(l) if *l <= rhs);
    ParamCheck {
        q,
        n,
        m,
        lhs,
        rhs,
        feasible,
    }
}

/// Parameters of one run of the block scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CodeParams {
    pub q: usize,
    /// Channel uses per block.
    pub n: usize,
    /// Fresh message digits per block.
    pub m: usize,
    /// Number of message blocks.
    pub blocks: usize,
}

impl CodeParams {
    /// Validates the parameters; refuses anything that would let an
    /// uncertainty set outgrow the pattern space.
    pub fn new(q: usize, n: usize, m: usize, blocks: usize) -> Result<Self> {
        let fail = |reason: String| Error::InfeasibleParams { q, n, m, reason };
        if !(2..=MAX_ALPHABET).contains(&q) {
            return Err(fail(format!("q must lie in [2, {MAX_ALPHABET}]")));
        }
        if n == 0 || m == 0 || m > n {
            return Err(fail("need 1 <= m <= n".into()));
        }
        if blocks == 0 {
            return Err(fail("need at least one block".into()));
        }
        let check = validate_params(q, n, m);
        if !check.feasible {
            let reason = match &check.lhs {
                None => format!("m < n/2 (pattern count {})", check.rhs),
                Some(lhs) => format!(
                    "C(2n-2m,n-m)*2^(2m-n) = {lhs} > C(n,m)*q^(n-m) = {}",
                    check.rhs
                ),
            };
            return Err(fail(reason));
        }
        Ok(CodeParams { q, n, m, blocks })
    }

    pub fn message_len(&self) -> usize {
        self.blocks * self.m
    }

    pub fn pattern_count(&self) -> BigUint {
        pattern_count(self.q, self.n, self.m)
    }

    pub fn peak_bound(&self) -> BigUint {
        peak_bound(self.n, self.m).expect("validated parameters satisfy 2m >= n")
    }

    /// `n − m + ⌈log_q C(n, m)⌉`: the final block never needs more uses.
    pub fn final_block_bound(&self) -> usize {
        self.n - self.m + ceil_log(self.q, &binomial(self.n, self.m))
    }

    /// `B n + n − m + ⌈log_q C(n, m)⌉`.
    pub fn total_uses_bound(&self) -> usize {
        self.blocks * self.n + self.final_block_bound()
    }
}

/// A feasible `(n, m)` pair and its asymptotic rate `m / n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParamCandidate {
    pub n: usize,
    pub m: usize,
    pub rate: f64,
}

/// Every feasible `(n, m)` with `n ≤ n_max`, best rate first, ties broken by
/// smaller `n`.
pub fn best_params(q: usize, n_max: usize) -> Vec<ParamCandidate> {
    let mut out: Vec<ParamCandidate> = (1..=n_max)
        .flat_map(|n| (n.div_ceil(2)..=n).map(move |m| (n, m)))
        .filter(|&(n, m)| validate_params(q, n, m).feasible)
        .map(|(n, m)| ParamCandidate {
            n,
            m,
            rate: m as f64 / n as f64,
        })
        .collect();
    // Compare m/n exactly by cross-multiplying.
    out.sort_by(|x, y| (y.m * x.n).cmp(&(x.m * y.n)).then(x.n.cmp(&y.n)));
    out
}
