//! File formats, benchmark harness, and CLI plumbing on top of
//! [`cluster_pair_core`].

pub mod bench;
mod error;
pub mod io;

pub use bench::DEFAULT_SEED;
pub use error::{Error, Result};
