use num_bigint::BigUint;
use thiserror::Error;

/// Errors raised by the capacity, oracle and codec routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A probability vector failed validation.
    #[error("invalid probability vector: {0}")]
    InvalidDistribution(String),

    /// An argument lies outside the domain of the function.
    #[error("{what} = {value} is outside the domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: String,
    },

    /// The alphabet size is unsupported by the requested operation.
    #[error("alphabet size q = {q} is not supported here (need {need})")]
    Alphabet { q: usize, need: &'static str },

    /// Root bracketing failed: both ends of the interval have the same sign.
    #[error(
        "bisection bracket [{lo}, {hi}] does not straddle a root (f(lo) = {f_lo}, f(hi) = {f_hi})"
    )]
    Bracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    /// A rank is outside `[0, |S|)`.
    #[error("rank {rank} is out of range for {count} patterns")]
    RankOutOfRange { rank: BigUint, count: BigUint },

    /// A star pattern has the wrong shape.
    #[error("invalid star pattern: {0}")]
    InvalidPattern(String),

    /// Code parameters violate the block-length constraint.
    #[error("infeasible code parameters q = {q}, n = {n}, m = {m}: {reason}")]
    InfeasibleParams {
        q: usize,
        n: usize,
        m: usize,
        reason: String,
    },

    /// The block protocol broke one of its invariants.
    #[error("protocol violation in block {block}: {reason}")]
    Protocol { block: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64, domain: impl Into<String>) -> Self {
        Error::Domain {
            what,
            value,
            domain: domain.into(),
        }
    }
}
