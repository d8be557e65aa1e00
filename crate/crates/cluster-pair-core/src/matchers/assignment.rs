//! Exact maximum-weight pairing via the potential-based assignment
//! algorithm, plus the factorial-enumeration oracle used to verify it.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{CoreError, Result};
use crate::model::{ContingencyMatrix, Method, Pairing};

/// Returns a maximum-weight one-to-one pairing of size `min(k1, k2)`.
///
/// The bipartite problem is solved exactly as a rectangular assignment in
/// `O(min(k1,k2)^2 * max(k1,k2))` time by running the Hungarian method with
/// potentials on negated weights.
pub fn mwm_pair(m: &ContingencyMatrix) -> Pairing {
    let transposed = m.k1() > m.k2();
    let (rows, cols) = if transposed { (m.k2(), m.k1()) } else { (m.k1(), m.k2()) };

    // Potentials accumulate at most `rows` deltas of magnitude <= max entry,
    // so the i64 cost space needs headroom beyond counts themselves.
    assert!(
        m.max_entry() <= i64::MAX as u64 / (4 * (rows as u64 + 1)),
        "contingency entries too large for exact assignment"
    );

    let mut cost = vec![0i64; rows * cols];
    for r in 0..rows {
        for c in 0..cols {
            let w = if transposed { m.get(c, r) } else { m.get(r, c) };
            cost[r * cols + c] = -(w as i64);
        }
    }

    let row_to_col = assignment_min_cost(&cost, rows, cols);
    let mut pairs = Vec::with_capacity(rows);
    for (r, c) in row_to_col.into_iter().enumerate() {
        let (i, j) = if transposed { (c, r) } else { (r, c) };
        pairs.push((i as u32, j as u32, m.get(i, j)));
    }
    Pairing::new_unchecked(pairs, Method::Mwm)
}

/// Minimum-cost assignment of `n` rows to `m >= n` columns; returns the
/// column chosen for each row.
///
/// Classic Hungarian method with row/column potentials and one augmenting
/// path per row, `O(n^2 * m)` overall.
fn assignment_min_cost(cost: &[i64], n: usize, m: usize) -> Vec<usize> {
    debug_assert!(n >= 1 && n <= m);
    const INF: i64 = i64::MAX / 4;
    // 1-based arrays; index 0 is the virtual start column
    let mut pot_row = vec![0i64; n + 1];
    let mut pot_col = vec![0i64; m + 1];
    let mut matched_row = vec![0usize; m + 1]; // row matched to column, 0 = free
    let mut way = vec![0usize; m + 1];
    let mut min_value = vec![INF; m + 1];
    let mut used = vec![false; m + 1];

    for i in 1..=n {
        matched_row[0] = i;
        let mut j0 = 0usize;
        min_value[1..].fill(INF);
        used.fill(false);
        loop {
            used[j0] = true;
            let i0 = matched_row[j0];
            let mut delta = INF;
            let mut j1 = 0usize;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let reduced = cost[(i0 - 1) * m + (j - 1)] - pot_row[i0] - pot_col[j];
                if reduced < min_value[j] {
                    min_value[j] = reduced;
                    way[j] = j0;
                }
                if min_value[j] < delta {
                    delta = min_value[j];
                    j1 = j;
                }
            }
            for j in 0..=m {
                if used[j] {
                    pot_row[matched_row[j]] += delta;
                    pot_col[j] -= delta;
                } else {
                    min_value[j] -= delta;
                }
            }
            j0 = j1;
            if matched_row[j0] == 0 {
                break;
            }
        }
        // unwind the augmenting path
        while j0 != 0 {
            let j1 = way[j0];
            matched_row[j0] = matched_row[j1];
            j0 = j1;
        }
    }

    let mut row_to_col = vec![usize::MAX; n];
    for j in 1..=m {
        if matched_row[j] != 0 {
            row_to_col[matched_row[j] - 1] = j - 1;
        }
    }
    debug_assert!(row_to_col.iter().all(|&c| c != usize::MAX));
    row_to_col
}

/// Exhaustive maximum-weight pairing over all injections of the smaller
/// side into the larger; the independent oracle for [`mwm_pair`].
///
/// Limited to `max(k1, k2) <= 9`; larger instances error with
/// [`CoreError::OracleTooLarge`].
pub fn mwm_bruteforce(m: &ContingencyMatrix) -> Result<Pairing> {
    const LIMIT: usize = 9;
    let max_side = m.k1().max(m.k2());
    if max_side > LIMIT {
        return Err(CoreError::OracleTooLarge { max_side, limit: LIMIT });
    }
    let transposed = m.k1() > m.k2();
    let (rows, cols) = if transposed { (m.k2(), m.k1()) } else { (m.k1(), m.k2()) };

    let weight_at = |r: usize, c: usize| if transposed { m.get(c, r) } else { m.get(r, c) };

    let mut chosen = vec![0usize; rows];
    let mut used = vec![false; cols];
    let mut best: Option<(u64, Vec<usize>)> = None;
    fn dfs(
        depth: usize,
        sum: u64,
        rows: usize,
        cols: usize,
        weight_at: &dyn Fn(usize, usize) -> u64,
        chosen: &mut Vec<usize>,
        used: &mut Vec<bool>,
        best: &mut Option<(u64, Vec<usize>)>,
    ) {
        if depth == rows {
            if best.as_ref().map_or(true, |(bw, _)| sum > *bw) {
                *best = Some((sum, chosen.clone()));
            }
            return;
        }
        for c in 0..cols {
            if used[c] {
                continue;
            }
            used[c] = true;
            chosen[depth] = c;
            dfs(depth + 1, sum + weight_at(depth, c), rows, cols, weight_at, chosen, used, best);
            used[c] = false;
        }
    }
    dfs(0, 0, rows, cols, &weight_at, &mut chosen, &mut used, &mut best);

    let (_, assignment) = best.expect("at least one injection exists");
    let pairs = assignment
        .into_iter()
        .enumerate()
        .map(|(r, c)| {
            let (i, j) = if transposed { (c, r) } else { (r, c) };
            (i as u32, j as u32, m.get(i, j))
        })
        .collect();
    Ok(Pairing::new_unchecked(pairs, Method::MwmBruteForce))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(rows: &[&[u64]]) -> ContingencyMatrix {
        let k1 = rows.len();
        let k2 = rows[0].len();
        let counts: Vec<u64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        ContingencyMatrix::from_counts(counts, k1, k2).unwrap()
    }

    #[test]
    fn two_by_two_optimum() {
        // two permutations: diagonal 3+5=8, anti-diagonal 1+2=3
        let m = matrix(&[&[3, 1], &[2, 5]]);
        let p = mwm_pair(&m);
        assert_eq!(p.pairs(), &[(0, 0, 3), (1, 1, 5)]);
        assert_eq!(p.weight_sum(), 8);
    }

    #[test]
    fn anti_diagonal_when_it_is_the_only_mass() {
        let m = matrix(&[&[0, 1], &[1, 0]]);
        let p = mwm_pair(&m);
        assert_eq!(p.pairs(), &[(0, 1, 1), (1, 0, 1)]);
        assert_eq!(p.weight_sum(), 2);
    }

    #[test]
    fn bruteforce_examples() {
        let m = matrix(&[&[3, 1], &[2, 5]]);
        assert_eq!(mwm_bruteforce(&m).unwrap().weight_sum(), 8);
        let single = matrix(&[&[7]]);
        assert_eq!(mwm_bruteforce(&single).unwrap().weight_sum(), 7);
    }

    #[test]
    fn bruteforce_rejects_large_instances() {
        let m = ContingencyMatrix::from_counts(vec![1; 10], 1, 10).unwrap();
        assert!(matches!(
            mwm_bruteforce(&m),
            Err(CoreError::OracleTooLarge { max_side: 10, limit: 9 })
        ));
    }

    #[test]
    fn solver_matches_oracle_on_random_squares() {
        let mut rng = crate::datagen::SplitMix64::new(0xabcd);
        for _ in 0..60 {
            let k = 1 + rng.next_below(6) as usize;
            let counts: Vec<u64> = (0..k * k).map(|_| rng.next_below(100)).collect();
            let m = ContingencyMatrix::from_counts(counts, k, k).unwrap();
            assert_eq!(mwm_pair(&m).weight_sum(), mwm_bruteforce(&m).unwrap().weight_sum());
        }
    }

    #[test]
    fn solver_matches_oracle_on_random_rectangles() {
        let mut rng = crate::datagen::SplitMix64::new(0x1357);
        for _ in 0..60 {
            let k1 = 1 + rng.next_below(7) as usize;
            let k2 = 1 + rng.next_below(7) as usize;
            let counts: Vec<u64> = (0..k1 * k2).map(|_| rng.next_below(50)).collect();
            let m = ContingencyMatrix::from_counts(counts, k1, k2).unwrap();
            let p = mwm_pair(&m);
            assert_eq!(p.len(), k1.min(k2));
            assert_eq!(p.weight_sum(), mwm_bruteforce(&m).unwrap().weight_sum());
        }
    }
}
