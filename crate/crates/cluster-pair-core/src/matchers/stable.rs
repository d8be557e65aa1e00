//! Preference construction and the propose-and-reject stable matcher.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::model::{ContingencyMatrix, Method, Pairing, PreferenceTable, ProposerSide};

/// Ranks each cluster's opposite-side clusters by shared-point count,
/// descending, ties by ascending index.
pub fn build_preferences(m: &ContingencyMatrix) -> PreferenceTable {
    PreferenceTable {
        row_prefs: rank_side(m, ProposerSide::Row),
        col_prefs: rank_side(m, ProposerSide::Column),
        k1: m.k1(),
        k2: m.k2(),
    }
}

/// One side's ranked lists: flat runs of opposite-side indices, one run per
/// cluster of `side`.
fn rank_side(m: &ContingencyMatrix, side: ProposerSide) -> Vec<u32> {
    match side {
        ProposerSide::Row => rank_lists(m.counts(), m.k1(), m.k2(), m.max_entry()),
        ProposerSide::Column => {
            let transposed = m.transpose();
            rank_lists(transposed.counts(), m.k2(), m.k1(), m.max_entry())
        }
    }
}

/// Ranks `lists` runs of `len` counts each.
///
/// Contingency counts are usually tiny relative to the cluster count (cells
/// average `n / (k1*k2)` points), so ranking runs as a per-list counting
/// sort over one reused bucket array; lists with large entries fall back to
/// comparison sorts. Both paths produce identical output.
fn rank_lists(counts: &[u64], lists: usize, len: usize, max_count: u64) -> Vec<u32> {
    let bucket_budget = lists.max(len).max(256) as u64;
    if max_count < bucket_budget && (lists * len) as u64 <= u32::MAX as u64 {
        rank_lists_counting(counts, lists, len, max_count as usize)
    } else {
        rank_rows(counts, lists, len)
    }
}

/// Stable counting sort per list, keyed on `max_count - count`; scanning
/// each list left to right makes ties come out in ascending index order.
/// Each list's keys are narrowed to a u32 scratch first so the histogram
/// and placement passes stay inside one cache-resident buffer.
fn rank_lists_counting(counts: &[u64], lists: usize, len: usize, max_count: usize) -> Vec<u32> {
    let width = max_count + 1;
    let mut cursor = vec![0u32; width];
    let mut buckets: Vec<u32> = Vec::with_capacity(len);
    let mut prefs = vec![0u32; lists * len];
    for i in 0..lists {
        let run = &counts[i * len..(i + 1) * len];
        buckets.clear();
        buckets.extend(run.iter().map(|&c| max_count as u32 - c as u32));
        cursor.fill(0);
        for &b in &buckets {
            cursor[b as usize] += 1;
        }
        let mut acc = (i * len) as u32;
        for slot in cursor.iter_mut() {
            let bucket_count = *slot;
            *slot = acc;
            acc += bucket_count;
        }
        for (j, &b) in buckets.iter().enumerate() {
            let slot = &mut cursor[b as usize];
            prefs[*slot as usize] = j as u32;
            *slot += 1;
        }
    }
    prefs
}

/// For each of `rows` runs of `cols` counts, emits the column indices in
/// descending count order, ties by ascending index.
fn rank_rows(counts: &[u64], rows: usize, cols: usize) -> Vec<u32> {
    let mut prefs = vec![0u32; rows * cols];
    let fits_u32 = counts.iter().all(|&c| c <= u32::MAX as u64);
    if fits_u32 {
        // Pack (count, index) into one u64 so each row is a plain integer
        // sort: ascending key order is descending count, ascending index.
        let mut keys: Vec<u64> = Vec::with_capacity(cols);
        for r in 0..rows {
            keys.clear();
            keys.extend(
                counts[r * cols..(r + 1) * cols]
                    .iter()
                    .enumerate()
                    .map(|(j, &c)| ((u32::MAX as u64 - c) << 32) | j as u64),
            );
            keys.sort_unstable();
            for (slot, key) in prefs[r * cols..(r + 1) * cols].iter_mut().zip(&keys) {
                *slot = (key & u32::MAX as u64) as u32;
            }
        }
    } else {
        let mut entries: Vec<(u64, u32)> = Vec::with_capacity(cols);
        for r in 0..rows {
            entries.clear();
            entries.extend(
                counts[r * cols..(r + 1) * cols]
                    .iter()
                    .enumerate()
                    .map(|(j, &c)| (c, j as u32)),
            );
            entries.sort_unstable_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
            for (slot, &(_, j)) in prefs[r * cols..(r + 1) * cols].iter_mut().zip(&entries) {
                *slot = j;
            }
        }
    }
    prefs
}

/// Working state of the proposal loop.
struct MatchState {
    /// Per-proposer cursor into its preference list; never decreases.
    next_proposal_index: Vec<u32>,
    /// Per-receiver engaged proposer; injective over engaged receivers.
    engaged_to: Vec<Option<u32>>,
}

impl MatchState {
    fn new(n_proposers: usize, n_receivers: usize) -> Self {
        Self {
            next_proposal_index: vec![0; n_proposers],
            engaged_to: vec![None; n_receivers],
        }
    }
}

/// Runs the propose-and-reject procedure and returns the unique
/// proposer-optimal stable matching of size `min(k1, k2)`.
///
/// The matched pair set is a function of `prefs` and `proposer` alone;
/// `weights` supplies the receiver keys and annotates the returned pairs.
pub fn stable_match(
    prefs: &PreferenceTable,
    proposer: ProposerSide,
    weights: &ContingencyMatrix,
) -> Pairing {
    let proposer_lists = match proposer {
        ProposerSide::Row => &prefs.row_prefs,
        ProposerSide::Column => &prefs.col_prefs,
    };
    propose_and_reject(proposer_lists, proposer, weights)
}

/// Stable matching based pairing: preferences from the contingency matrix,
/// matched by the propose-and-reject procedure, weights read back from the
/// matrix.
///
/// Returns exactly `stable_match(&build_preferences(m), proposer, m)` but
/// ranks only the proposing side's lists; the receiving side's preferences
/// are answered from the matrix during the run.
pub fn smbp_pair(m: &ContingencyMatrix, proposer: ProposerSide) -> Pairing {
    let proposer_lists = rank_side(m, proposer);
    propose_and_reject(&proposer_lists, proposer, m)
}

/// Each free proposer works down its preference list; a receiver holds on to
/// the best proposal seen so far and releases its previous partner. Receiver
/// preference is checked in O(1) against the receiver's `(count, proposer
/// index)` key read straight from the matrix, which orders proposers exactly
/// as the receiver's preference list does; with the explicit queue of free
/// proposers the run is bounded by `k1 * k2` proposals.
fn propose_and_reject(
    proposer_lists: &[u32],
    proposer: ProposerSide,
    weights: &ContingencyMatrix,
) -> Pairing {
    let (n_proposers, n_receivers) = match proposer {
        ProposerSide::Row => (weights.k1(), weights.k2()),
        ProposerSide::Column => (weights.k2(), weights.k1()),
    };
    debug_assert_eq!(proposer_lists.len(), n_proposers * n_receivers);
    // weight of the (proposer, receiver) edge
    let weight_of = |p: u32, r: usize| match proposer {
        ProposerSide::Row => weights.get(p as usize, r),
        ProposerSide::Column => weights.get(r, p as usize),
    };
    let mut state = MatchState::new(n_proposers, n_receivers);
    let mut free: VecDeque<u32> = (0..n_proposers as u32).collect();

    while let Some(p) = free.pop_front() {
        loop {
            let cursor = state.next_proposal_index[p as usize] as usize;
            if cursor >= n_receivers {
                break; // exhausted every receiver; stays unmatched
            }
            state.next_proposal_index[p as usize] += 1;
            let r = proposer_lists[p as usize * n_receivers + cursor] as usize;
            match state.engaged_to[r] {
                None => {
                    state.engaged_to[r] = Some(p);
                    break;
                }
                Some(current) => {
                    let w_new = weight_of(p, r);
                    let w_cur = weight_of(current, r);
                    if w_new > w_cur || (w_new == w_cur && p < current) {
                        state.engaged_to[r] = Some(p);
                        free.push_back(current);
                        break;
                    }
                    // rejected; continue down the list
                }
            }
        }
    }

    let mut pairs = Vec::with_capacity(n_proposers.min(n_receivers));
    for (r, engaged) in state.engaged_to.iter().enumerate() {
        if let Some(p) = engaged {
            let (row, col) = match proposer {
                ProposerSide::Row => (*p, r as u32),
                ProposerSide::Column => (r as u32, *p),
            };
            pairs.push((row, col, weights.get(row as usize, col as usize)));
        }
    }
    Pairing::new_unchecked(pairs, Method::Smbp)
}

/// Searches for a pair outside `p` that both sides prefer to their current
/// matches, under the same descending-count, ascending-index order used by
/// [`build_preferences`]. Among blocking pairs the heaviest one is returned
/// (ties to ascending row, then column).
pub fn blocking_pair_exists(m: &ContingencyMatrix, p: &Pairing) -> Option<(u32, u32)> {
    let mut row_match: Vec<Option<u32>> = vec![None; m.k1()];
    let mut col_match: Vec<Option<u32>> = vec![None; m.k2()];
    for &(r, c, _) in p.pairs() {
        assert!(
            (r as usize) < m.k1() && (c as usize) < m.k2(),
            "pairing indices out of range for {}x{} matrix",
            m.k1(),
            m.k2()
        );
        row_match[r as usize] = Some(c);
        col_match[c as usize] = Some(r);
    }

    // prefers(candidate) over (current): higher count, ties to lower index
    let beats = |cand_w: u64, cand_idx: u32, cur_w: u64, cur_idx: u32| {
        cand_w > cur_w || (cand_w == cur_w && cand_idx < cur_idx)
    };

    let mut best: Option<(u64, u32, u32)> = None;
    for i in 0..m.k1() {
        for j in 0..m.k2() {
            if row_match[i] == Some(j as u32) {
                continue;
            }
            let w = m.get(i, j);
            let row_prefers = match row_match[i] {
                None => true,
                Some(c) => beats(w, j as u32, m.get(i, c as usize), c),
            };
            if !row_prefers {
                continue;
            }
            let col_prefers = match col_match[j] {
                None => true,
                Some(r) => beats(w, i as u32, m.get(r as usize, j), r),
            };
            if col_prefers && best.map_or(true, |(bw, _, _)| w > bw) {
                best = Some((w, i as u32, j as u32));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}
