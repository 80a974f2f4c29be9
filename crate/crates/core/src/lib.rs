//! Capacity computations and a zero-error feedback code for the two-user
//! union channel.
//!
//! The union channel takes one symbol from each of two senders over the
//! alphabet `[q]` and outputs the set `{x₁, x₂}`. This crate provides
//!
//! - [`capacity`]: the average capacity with complete feedback, with the
//!   maximizing equality probability, the concave-envelope machinery and
//!   an explicit auxiliary-variable witness; plus the no-feedback value.
//! - [`oracle`]: grid and randomized searches that check the joint-entropy
//!   maximization behind the closed forms, sharing no code path with them.
//! - [`codec`]: an executable zero-error block scheme using feedback, with
//!   exact-integer parameter checks and a seeded simulator.
//! - [`entropy`]: the entropy primitives the rest is built on.
//!
//! ```
//! let report = union_channel::capacity::avg_feedback_capacity(2).unwrap();
//! assert!((report.r_ef - 0.79113).abs() < 5e-6);
//! ```

#![forbid(unsafe_code)]

pub mod capacity;
pub mod codec;
pub mod entropy;
pub mod error;
pub mod oracle;
pub mod roots;

pub use capacity::{avg_capacity_no_feedback, avg_feedback_capacity, CapacityCase, CapacityReport};
pub use codec::{rate_root, simulate, CodeParams, SimulationReport};
pub use entropy::ProbVector;
pub use error::{Error, Result};
