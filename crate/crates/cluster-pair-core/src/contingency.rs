//! Contingency matrix construction.

use alloc::format;

use crate::error::{CoreError, Result};
use crate::model::{Clustering, ContingencyMatrix};

/// Counts shared points between every cluster of `a` and every cluster of
/// `b` in a single pass.
///
/// Entry `(i, j)` is the number of points assigned to cluster `i` by `a` and
/// to cluster `j` by `b`; the entry total equals the point count. Row sums
/// are the cluster sizes of `a`, column sums those of `b`.
pub fn build_contingency(a: &Clustering, b: &Clustering) -> Result<ContingencyMatrix> {
    if a.n_points() != b.n_points() {
        return Err(CoreError::InvalidInput(format!(
            "clusterings cover different point counts: {} vs {}",
            a.n_points(),
            b.n_points()
        )));
    }
    let mut m = ContingencyMatrix::zeros(a.k(), b.k());
    for (&la, &lb) in a.labels().iter().zip(b.labels()) {
        m.bump(la as usize, lb as usize);
    }
    Ok(m)
}

/// Builds the matrix over one contiguous chunk of the point sequence.
///
/// Summing chunk matrices with [`ContingencyMatrix::merge_assign`] in any
/// order reproduces the single-pass result bit for bit; callers may fan
/// chunks out across threads.
pub fn build_contingency_chunk(
    a: &Clustering,
    b: &Clustering,
    range: core::ops::Range<usize>,
) -> Result<ContingencyMatrix> {
    if a.n_points() != b.n_points() {
        return Err(CoreError::InvalidInput(format!(
            "clusterings cover different point counts: {} vs {}",
            a.n_points(),
            b.n_points()
        )));
    }
    if range.end > a.n_points() {
        return Err(CoreError::InvalidInput(format!(
            "chunk {range:?} exceeds point count {}",
            a.n_points()
        )));
    }
    let mut m = ContingencyMatrix::zeros(a.k(), b.k());
    for (&la, &lb) in a.labels()[range.clone()].iter().zip(&b.labels()[range]) {
        m.bump(la as usize, lb as usize);
    }
    Ok(m)
}
