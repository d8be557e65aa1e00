//! Shared domain types: clusterings, contingency matrices, pairings, and
//! preference tables.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{CoreError, Result};

/// A dense assignment of points to 0-based cluster indices.
///
/// `k` may exceed the number of occupied indices: empty clusters are
/// permitted (the unbalanced generator can clip all mass away from extreme
/// indices when the cluster count is large relative to the point count).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clustering {
    labels: Vec<u32>,
    k: usize,
}

impl Clustering {
    /// Builds a clustering from already-dense labels, checking `label < k`.
    pub fn new(labels: Vec<u32>, k: usize) -> Result<Self> {
        if labels.is_empty() {
            return Err(CoreError::InvalidInput("label sequence is empty".into()));
        }
        if k == 0 {
            return Err(CoreError::InvalidInput("cluster count must be >= 1".into()));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l as usize >= k) {
            return Err(CoreError::InvalidInput(format!(
                "label {bad} out of range for k = {k}"
            )));
        }
        Ok(Self { labels, k })
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n_points(&self) -> usize {
        self.labels.len()
    }

    /// Raises the declared cluster count, allowing declared-but-empty
    /// clusters. Errors if `k` is below the current count.
    pub fn with_k(self, k: usize) -> Result<Self> {
        if k < self.k {
            return Err(CoreError::InvalidInput(format!(
                "cannot shrink cluster count from {} to {k}",
                self.k
            )));
        }
        Ok(Self { k, ..self })
    }

    /// Number of points per cluster, indexed by cluster; empty clusters
    /// report 0.
    pub fn cluster_sizes(&self) -> Vec<u64> {
        let mut sizes = vec![0u64; self.k];
        for &l in &self.labels {
            sizes[l as usize] += 1;
        }
        sizes
    }
}

/// Remaps arbitrary labels to dense 0-based indices by order of first
/// occurrence.
///
/// Two points share a raw label iff they share a remapped label, and the
/// function is idempotent on its own output.
pub fn validate_clustering<T: Ord>(raw: &[T]) -> Result<Clustering> {
    if raw.is_empty() {
        return Err(CoreError::InvalidInput("label sequence is empty".into()));
    }
    let mut ids: BTreeMap<&T, u32> = BTreeMap::new();
    let mut labels = Vec::with_capacity(raw.len());
    for value in raw {
        let next = ids.len() as u32;
        let id = *ids.entry(value).or_insert(next);
        labels.push(id);
    }
    let k = ids.len();
    Clustering::new(labels, k)
}

/// A `k1 x k2` matrix of shared-point counts between two clusterings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyMatrix {
    counts: Vec<u64>,
    k1: usize,
    k2: usize,
    total: u64,
    max_entry: u64,
}

impl ContingencyMatrix {
    /// Builds a matrix from row-major counts.
    pub fn from_counts(counts: Vec<u64>, k1: usize, k2: usize) -> Result<Self> {
        if k1 == 0 || k2 == 0 {
            return Err(CoreError::InvalidInput(
                "contingency matrix needs k1 >= 1 and k2 >= 1".into(),
            ));
        }
        if counts.len() != k1 * k2 {
            return Err(CoreError::InvalidInput(format!(
                "expected {} entries for a {k1}x{k2} matrix, got {}",
                k1 * k2,
                counts.len()
            )));
        }
        let mut total: u64 = 0;
        let mut max_entry: u64 = 0;
        for &c in &counts {
            total = total
                .checked_add(c)
                .ok_or_else(|| CoreError::InvalidInput("count total overflows u64".into()))?;
            max_entry = max_entry.max(c);
        }
        Ok(Self { counts, k1, k2, total, max_entry })
    }

    pub(crate) fn zeros(k1: usize, k2: usize) -> Self {
        Self { counts: vec![0; k1 * k2], k1, k2, total: 0, max_entry: 0 }
    }

    pub(crate) fn bump(&mut self, i: usize, j: usize) {
        let cell = &mut self.counts[i * self.k2 + j];
        *cell += 1;
        self.max_entry = self.max_entry.max(*cell);
        self.total += 1;
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.counts[i * self.k2 + j]
    }

    /// Row-major counts.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn k1(&self) -> usize {
        self.k1
    }

    pub fn k2(&self) -> usize {
        self.k2
    }

    /// Sum of all entries; equals the point count when built from two
    /// clusterings of the same points.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Largest single entry.
    pub fn max_entry(&self) -> u64 {
        self.max_entry
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.counts[i * self.k2..(i + 1) * self.k2]
    }

    pub fn transpose(&self) -> Self {
        let mut counts = vec![0u64; self.counts.len()];
        for i in 0..self.k1 {
            for j in 0..self.k2 {
                counts[j * self.k1 + i] = self.get(i, j);
            }
        }
        Self { counts, k1: self.k2, k2: self.k1, total: self.total, max_entry: self.max_entry }
    }

    /// Adds another partial matrix of identical shape entry-wise.
    ///
    /// Chunked construction: partial matrices over contiguous point ranges
    /// merge to exactly the single-pass result.
    pub fn merge_assign(&mut self, other: &Self) -> Result<()> {
        if self.k1 != other.k1 || self.k2 != other.k2 {
            return Err(CoreError::InvalidInput(format!(
                "cannot merge {}x{} into {}x{}",
                other.k1, other.k2, self.k1, self.k2
            )));
        }
        let mut max_entry = 0u64;
        for (dst, src) in self.counts.iter_mut().zip(&other.counts) {
            *dst += src;
            max_entry = max_entry.max(*dst);
        }
        self.total += other.total;
        self.max_entry = max_entry;
        Ok(())
    }
}

/// Identifies the algorithm that produced a pairing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Smbp,
    Mwm,
    MwmBruteForce,
    Mmm,
    Cr,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Smbp => "smbp",
            Method::Mwm => "mwm",
            Method::MwmBruteForce => "mwm-bruteforce",
            Method::Mmm => "mmm",
            Method::Cr => "cr",
        }
    }
}

/// Which side of the contingency matrix proposes during stable matching.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ProposerSide {
    #[default]
    Row,
    Column,
}

/// A partial one-to-one map between row clusters and column clusters.
///
/// Weights are always contingency counts, even for methods whose pairing is
/// chosen by another criterion, so every method shares one score scale.
/// Pairs are kept sorted by row index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pairing {
    pairs: Vec<(u32, u32, u64)>,
    method: Method,
}

impl Pairing {
    /// Builds a pairing, enforcing that no row or column repeats.
    pub fn new(mut pairs: Vec<(u32, u32, u64)>, method: Method) -> Result<Self> {
        pairs.sort_unstable_by_key(|&(r, c, _)| (r, c));
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(CoreError::InvalidInput(format!(
                    "row {} appears twice in pairing",
                    w[0].0
                )));
            }
        }
        let mut cols: Vec<u32> = pairs.iter().map(|&(_, c, _)| c).collect();
        cols.sort_unstable();
        for w in cols.windows(2) {
            if w[0] == w[1] {
                return Err(CoreError::InvalidInput(format!(
                    "column {} appears twice in pairing",
                    w[0]
                )));
            }
        }
        Ok(Self { pairs, method })
    }

    /// For matchers whose construction guarantees one-to-one output.
    pub(crate) fn new_unchecked(mut pairs: Vec<(u32, u32, u64)>, method: Method) -> Self {
        pairs.sort_unstable_by_key(|&(r, c, _)| (r, c));
        Self { pairs, method }
    }

    /// `(row, column, weight)` triples sorted by row.
    pub fn pairs(&self) -> &[(u32, u32, u64)] {
        &self.pairs
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Sum of pair weights.
    pub fn weight_sum(&self) -> u64 {
        self.pairs.iter().map(|&(_, _, w)| w).sum()
    }

    /// Column matched to each row, if any.
    pub fn column_of(&self, row: u32) -> Option<u32> {
        self.pairs
            .binary_search_by_key(&row, |&(r, _, _)| r)
            .ok()
            .map(|idx| self.pairs[idx].1)
    }
}

/// Per-cluster ranked lists of opposite-side clusters.
///
/// Lists are stored flat: `row_prefs` holds `k1` runs of length `k2`, each a
/// permutation of column indices in descending contingency order (ties by
/// ascending index); `col_prefs` is symmetric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceTable {
    pub(crate) row_prefs: Vec<u32>,
    pub(crate) col_prefs: Vec<u32>,
    pub(crate) k1: usize,
    pub(crate) k2: usize,
}

impl PreferenceTable {
    pub fn k1(&self) -> usize {
        self.k1
    }

    pub fn k2(&self) -> usize {
        self.k2
    }

    /// Column indices ranked by row cluster `i`, best first.
    pub fn row_prefs(&self, i: usize) -> &[u32] {
        &self.row_prefs[i * self.k2..(i + 1) * self.k2]
    }

    /// Row indices ranked by column cluster `j`, best first.
    pub fn col_prefs(&self, j: usize) -> &[u32] {
        &self.col_prefs[j * self.k1..(j + 1) * self.k1]
    }
}

/// An `n x d` feature matrix with an optional companion clustering.
///
/// Only the centroid-ratio matcher needs features; all other matchers work
/// from labels alone.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureDataset {
    points: Vec<f64>,
    n: usize,
    d: usize,
    pub labels: Option<Clustering>,
}

impl FeatureDataset {
    pub fn new(points: Vec<f64>, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(CoreError::InvalidInput("feature dimension must be >= 1".into()));
        }
        if points.is_empty() || points.len() % d != 0 {
            return Err(CoreError::InvalidInput(format!(
                "feature buffer of length {} is not a non-empty multiple of d = {d}",
                points.len()
            )));
        }
        let n = points.len() / d;
        Ok(Self { points, n, d, labels: None })
    }

    pub fn with_labels(mut self, labels: Clustering) -> Result<Self> {
        if labels.n_points() != self.n {
            return Err(CoreError::InvalidInput(format!(
                "companion clustering has {} points, features have {}",
                labels.n_points(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n_points(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.d..(i + 1) * self.d]
    }
}
