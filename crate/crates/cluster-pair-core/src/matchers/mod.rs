//! Pairing algorithms over a contingency matrix.
//!
//! All matchers are pure functions returning a [`Pairing`](crate::model::Pairing)
//! whose weights are contingency counts, so their scores are directly
//! comparable. Every matcher is deterministic: ties are broken by ascending
//! index throughout.

mod assignment;
mod greedy;
mod stable;

pub use assignment::{mwm_bruteforce, mwm_pair};
pub use greedy::{cr_pair, mmm_pair};
pub use stable::{blocking_pair_exists, build_preferences, smbp_pair, stable_match};
