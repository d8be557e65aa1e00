//! Greedy heaviest-edge pairing and the nearest-centroid variant.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::contingency::build_contingency;
use crate::error::{CoreError, Result};
use crate::model::{Clustering, ContingencyMatrix, FeatureDataset, Method, Pairing};

/// Greedy pairing: sort all `k1 * k2` edges by weight descending (ties by
/// ascending row, then column) and accept an edge iff both endpoints are
/// still free, stopping at `min(k1, k2)` pairs.
///
/// Identical greedy semantics to repeated max-scans, in `O(k1*k2*log)` via a
/// single global sort. Not optimal in general — see the tests for a matrix
/// where it loses to the exact solver.
pub fn mmm_pair(m: &ContingencyMatrix) -> Pairing {
    let (k1, k2) = (m.k1(), m.k2());
    let mut edges: Vec<(u64, u32, u32)> = Vec::with_capacity(k1 * k2);
    for i in 0..k1 {
        for j in 0..k2 {
            edges.push((m.get(i, j), i as u32, j as u32));
        }
    }
    edges.sort_unstable_by(|a, b| b.0.cmp(&a.0).then_with(|| (a.1, a.2).cmp(&(b.1, b.2))));
    let pairs = greedy_accept(&edges, k1, k2, k1.min(k2));
    Pairing::new_unchecked(pairs, Method::Mmm)
}

fn greedy_accept(
    edges: &[(u64, u32, u32)],
    k1: usize,
    k2: usize,
    target: usize,
) -> Vec<(u32, u32, u64)> {
    let mut row_used = vec![false; k1];
    let mut col_used = vec![false; k2];
    let mut pairs = Vec::with_capacity(target);
    for &(w, i, j) in edges {
        if pairs.len() == target {
            break;
        }
        if !row_used[i as usize] && !col_used[j as usize] {
            row_used[i as usize] = true;
            col_used[j as usize] = true;
            pairs.push((i, j, w));
        }
    }
    pairs
}

/// Centroid-ratio pairing: clusters are paired greedily by nearest centroids
/// in feature space, nearest first (ties by ascending row, then column).
///
/// Pair weights are still contingency counts so the score is comparable with
/// the other matchers. Empty clusters have no centroid and are excluded,
/// shrinking the pairing accordingly.
pub fn cr_pair(data: &FeatureDataset, a: &Clustering, b: &Clustering) -> Result<Pairing> {
    if data.n_points() != a.n_points() || data.n_points() != b.n_points() {
        return Err(CoreError::InvalidInput(format!(
            "feature rows ({}) must match both clusterings ({} and {})",
            data.n_points(),
            a.n_points(),
            b.n_points()
        )));
    }
    let m = build_contingency(a, b)?;
    let centroids_a = centroids(data, a);
    let centroids_b = centroids(data, b);

    let mut edges: Vec<(f64, u32, u32)> = Vec::new();
    for (i, ca) in centroids_a.iter().enumerate() {
        let Some(ca) = ca else { continue };
        for (j, cb) in centroids_b.iter().enumerate() {
            let Some(cb) = cb else { continue };
            edges.push((euclidean(ca, cb), i as u32, j as u32));
        }
    }
    edges.sort_unstable_by(|x, y| x.0.total_cmp(&y.0).then_with(|| (x.1, x.2).cmp(&(y.1, y.2))));

    let nonempty_a = centroids_a.iter().flatten().count();
    let nonempty_b = centroids_b.iter().flatten().count();
    let target = nonempty_a.min(nonempty_b);

    let mut row_used = vec![false; a.k()];
    let mut col_used = vec![false; b.k()];
    let mut pairs = Vec::with_capacity(target);
    for &(_, i, j) in &edges {
        if pairs.len() == target {
            break;
        }
        if !row_used[i as usize] && !col_used[j as usize] {
            row_used[i as usize] = true;
            col_used[j as usize] = true;
            pairs.push((i, j, m.get(i as usize, j as usize)));
        }
    }
    Ok(Pairing::new_unchecked(pairs, Method::Cr))
}

/// Arithmetic mean of each cluster's member feature vectors; `None` for
/// empty clusters.
fn centroids(data: &FeatureDataset, c: &Clustering) -> Vec<Option<Vec<f64>>> {
    let d = data.dim();
    let mut sums = vec![0.0f64; c.k() * d];
    let mut counts = vec![0u64; c.k()];
    for (p, &label) in c.labels().iter().enumerate() {
        let row = data.point(p);
        let acc = &mut sums[label as usize * d..(label as usize + 1) * d];
        for (s, x) in acc.iter_mut().zip(row) {
            *s += x;
        }
        counts[label as usize] += 1;
    }
    counts
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            (n > 0).then(|| sums[i * d..(i + 1) * d].iter().map(|s| s / n as f64).collect())
        })
        .collect()
}

fn euclidean(x: &[f64], y: &[f64]) -> f64 {
    let sum: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
    libm::sqrt(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matchers::mwm_pair;

    fn matrix(rows: &[&[u64]]) -> ContingencyMatrix {
        let k1 = rows.len();
        let k2 = rows[0].len();
        let counts: Vec<u64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        ContingencyMatrix::from_counts(counts, k1, k2).unwrap()
    }

    #[test]
    fn greedy_hand_trace() {
        // sorted edges: (1,1,5), (0,0,3), (1,0,2), (0,1,1)
        let m = matrix(&[&[3, 1], &[2, 5]]);
        let p = mmm_pair(&m);
        assert_eq!(p.pairs(), &[(0, 0, 3), (1, 1, 5)]);
        assert_eq!(p.weight_sum(), 8);
    }

    #[test]
    fn greedy_suboptimality() {
        // greedy takes (0,0,5) then (1,1,1) for 6; the optimum is 4+4=8
        let m = matrix(&[&[5, 4], &[4, 1]]);
        let p = mmm_pair(&m);
        assert_eq!(p.pairs(), &[(0, 0, 5), (1, 1, 1)]);
        assert_eq!(p.weight_sum(), 6);
        assert_eq!(mwm_pair(&m).weight_sum(), 8);
    }

    #[test]
    fn greedy_diagonal_identity() {
        let m = matrix(&[&[4, 0, 0], &[0, 7, 0], &[0, 0, 2]]);
        assert_eq!(mmm_pair(&m).pairs(), &[(0, 0, 4), (1, 1, 7), (2, 2, 2)]);
    }

    #[test]
    fn greedy_rectangular_stops_at_min_side() {
        let m = matrix(&[&[1, 2, 3], &[4, 5, 6]]);
        assert_eq!(mmm_pair(&m).len(), 2);
    }

    #[test]
    fn cr_identical_clusterings_pair_identity() {
        let data = FeatureDataset::new(vec![0.0, 1.0, 5.0, 6.0, 10.0, 11.0], 1).unwrap();
        let c = Clustering::new(vec![0, 0, 1, 1, 2, 2], 3).unwrap();
        let p = cr_pair(&data, &c, &c).unwrap();
        assert_eq!(p.pairs(), &[(0, 0, 2), (1, 1, 2), (2, 2, 2)]);
    }

    #[test]
    fn cr_one_dimensional_hand_oracle() {
        // centroids a: (0, 10), b: (10, 0); cross pairs are at distance 0
        let data = FeatureDataset::new(vec![0.0, 0.0, 10.0, 10.0], 1).unwrap();
        let a = Clustering::new(vec![0, 0, 1, 1], 2).unwrap();
        let b = Clustering::new(vec![1, 1, 0, 0], 2).unwrap();
        let p = cr_pair(&data, &a, &b).unwrap();
        assert_eq!(p.pairs(), &[(0, 1, 2), (1, 0, 2)]);
    }

    #[test]
    fn cr_excludes_empty_clusters() {
        let data = FeatureDataset::new(vec![0.0, 1.0, 2.0, 3.0], 1).unwrap();
        let a = Clustering::new(vec![0, 0, 2, 2], 3).unwrap(); // cluster 1 empty
        let b = Clustering::new(vec![0, 0, 1, 1], 2).unwrap();
        let p = cr_pair(&data, &a, &b).unwrap();
        assert_eq!(p.len(), 2);
        assert!(p.pairs().iter().all(|&(r, _, _)| r != 1));
    }

    #[test]
    fn cr_rejects_feature_count_mismatch() {
        let data = FeatureDataset::new(vec![0.0, 1.0], 1).unwrap();
        let a = Clustering::new(vec![0, 0, 1], 2).unwrap();
        assert!(cr_pair(&data, &a, &a).is_err());
    }
}
