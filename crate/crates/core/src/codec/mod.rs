//! Zero-error block coding over the union channel with complete feedback.
//!
//! Both messages are strings of `B m` digits over `[q]`. In each of `B`
//! blocks of `n` channel uses the senders transmit `m` fresh digits each,
//! while the remaining `n − m` uses encode the position of the true joint
//! prefix within the receiver's current uncertainty set. A final block sends
//! the rank of the true message pair within the last uncertainty set.
//!
//! Symbols and digits are 0-based `u8` values internally; anything rendered
//! for people is 1-based.

mod channel;
mod params;
mod pattern;
mod rate;
mod sequence;
mod session;
mod simulate;

pub use channel::{union_channel, ChannelOutput};
pub use params::{
    best_params, binomial, ceil_log, pattern_count, peak_bound, u_ell, u_ell_argmax,
    validate_params, CodeParams, ParamCandidate, ParamCheck, MAX_ALPHABET,
};
pub use pattern::{
    rank_pattern, unrank_pattern, PatternCache, PatternSpace, PatternSymbol, StarPattern,
};
pub use rate::{rate_root, zero_error_rate_floor};
pub use sequence::{DigitPair, PairSequence, UncertaintySet};
pub use session::{BlockRecord, Encoder, FinalRecord, SessionState};
pub use simulate::{run_trial, simulate, trial_messages, SimulationReport, TrialRecord};

pub(crate) mod ser {
    use num_bigint::BigUint;
    use serde::Serializer;

    pub fn decimal<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn opt_decimal<S: Serializer>(v: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => decimal(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn decimal_display<T: std::fmt::Display, S: Serializer>(
        v: &T,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }
}
