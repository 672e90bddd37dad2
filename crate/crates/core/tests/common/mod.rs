//! Shared helpers for the integration suites: an independent edit-distance
//! oracle and instance plumbing.
#![allow(dead_code)] // each test binary uses its own subset

use edapx::windows::{pad_to_window_multiple, Side, WindowSet};
use rand::Rng;

/// Independent oracle: exhaustive recursion with memoization. Structured
/// top-down, unlike the production iterative DP, so the two cannot share a
/// bug by construction.
pub fn memo_recursion_ed(a: &[u8], b: &[u8]) -> u64 {
    let (n, m) = (a.len(), b.len());
    let mut memo = vec![u32::MAX; (n + 1) * (m + 1)];
    fn rec(i: usize, j: usize, a: &[u8], b: &[u8], memo: &mut [u32]) -> u32 {
        if i == 0 {
            return j as u32;
        }
        if j == 0 {
            return i as u32;
        }
        let idx = i * (b.len() + 1) + j;
        if memo[idx] != u32::MAX {
            return memo[idx];
        }
        let v = if a[i - 1] == b[j - 1] {
            rec(i - 1, j - 1, a, b, memo)
        } else {
            let sub = rec(i - 1, j - 1, a, b, memo);
            let del = rec(i - 1, j, a, b, memo);
            let ins = rec(i, j - 1, a, b, memo);
            1 + sub.min(del).min(ins)
        };
        memo[idx] = v;
        v
    }
    u64::from(rec(n, m, a, b, &mut memo))
}

/// Equal-length, window-padded copies of a pair.
pub fn padded_pair(a: &[u8], b: &[u8]) -> (Vec<u8>, Vec<u8>) {
    let n0 = a.len().min(b.len());
    let mut pa = a[..n0].to_vec();
    let mut pb = b[..n0].to_vec();
    pad_to_window_multiple(&mut pa, &mut pb);
    (pa, pb)
}

/// Exact distance between two windows of a padded pair.
pub fn window_dist(ws: &WindowSet, a: &[u8], b: &[u8], side_x: Side, x: usize, side_y: Side, y: usize) -> u64 {
    edapx::exact::exact_ed(
        ws.slice(ws.id_of(side_x, x), a, b),
        ws.slice(ws.id_of(side_y, y), a, b),
    )
}

/// A uniformly random monotone partial mapping on a window set.
pub fn random_monotone_mapping(ws: &WindowSet, rng: &mut impl Rng) -> edapx::mapping::Mapping {
    let mut mapping = edapx::mapping::Mapping::empty(ws.a_count());
    let mut next_b = 0usize;
    for a in 0..ws.a_count() {
        let remaining_a = ws.a_count() - a;
        if next_b >= ws.b_count() {
            break;
        }
        if rng.gen_bool(0.6) {
            // Leave room for later windows with positive probability.
            let max_b = ws.b_count() - 1;
            let hi = max_b.saturating_sub(remaining_a.saturating_sub(1)).max(next_b);
            let b = rng.gen_range(next_b..=hi.max(next_b));
            mapping.set(a, Some(b as u32));
            next_b = b + 1;
        }
    }
    mapping.validate().expect("construction is monotone");
    mapping
}
