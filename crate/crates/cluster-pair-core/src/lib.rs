//! Core algorithms for comparing two clusterings of the same point set.
//!
//! The crate pairs clusters across two partitions through four algorithms
//! sharing one score scale (shared-point counts from the contingency
//! matrix):
//!
//! - [`smbp_pair`] — stable matching based pairing: preference lists are
//!   derived from the contingency matrix and matched with the
//!   propose-and-reject procedure. Runs in `O(k1*k2)` proposals after an
//!   `O(k1*k2*log)` preference sort.
//! - [`mwm_pair`] — exact maximum-weight pairing via an `O(n^3)` assignment
//!   solver; the optimal baseline.
//! - [`mmm_pair`] — greedy heaviest-edge-first pairing.
//! - [`cr_pair`] — nearest-centroid greedy pairing over a feature matrix.
//!
//! [`datagen`] provides seeded, platform-independent label generators for
//! balanced and unbalanced synthetic clusterings, and [`metrics`] the
//! accuracy measures used to score one pairing against another.
//!
//! The crate is `no_std`-compatible (requires `alloc`); the default `std`
//! feature only affects error-trait plumbing.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod contingency;
pub mod datagen;
mod error;
pub mod matchers;
pub mod metrics;
pub mod model;

pub use contingency::build_contingency;
pub use datagen::{cluster_size_stats, derive_seed, GenConfig, GenMode, SplitMix64};
pub use error::{CoreError, Result};
pub use matchers::{
    blocking_pair_exists, build_preferences, cr_pair, mmm_pair, mwm_bruteforce, mwm_pair,
    smbp_pair, stable_match,
};
pub use model::{
    validate_clustering, Clustering, ContingencyMatrix, FeatureDataset, Method, Pairing,
    PreferenceTable, ProposerSide,
};
