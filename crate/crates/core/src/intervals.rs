//! Multi-scale interval family over window indices.
//!
//! For every rung length `ℓ` of the snap ladder, the base (`λ = 1`)
//! intervals of length `ℓ` tile each side. A multiplied interval `λI` is
//! the interval of length `λℓ` centered on base interval `I`, truncated at
//! the side boundaries; centers are allowed to sit off the boundary so that
//! every window lies in exactly `λ` distinct `λ`-intervals per rung, one
//! for each cyclic shift class mod `λ`.

use crate::snap::SnapLadder;
use crate::windows::{Side, WindowSet};

/// Interval multipliers used by the algorithm. 49 is constructed for
/// completeness but only 1 and 7 participate in density decisions.
pub const LAMBDAS: [u32; 3] = [1, 7, 49];

/// A contiguous range of window indices on one side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Interval {
    pub side: Side,
    /// Base rung length `ℓ`.
    pub rung: u64,
    pub lambda: u32,
    /// Cyclic index of the base center; negative for boundary-truncated
    /// multiplied intervals.
    pub shift: i64,
    /// Inclusive window-index range within the side, after truncation.
    pub lo: usize,
    pub hi: usize,
}

impl Interval {
    /// Window count; intervals are never constructed empty.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.hi - self.lo + 1
    }

    pub fn contains(&self, window_index: usize) -> bool {
        (self.lo..=self.hi).contains(&window_index)
    }
}

/// The full family for one window set: rung lengths plus cached base
/// intervals per side.
#[derive(Debug, Clone)]
pub struct IntervalFamily {
    pub rungs: Vec<u64>,
    a_len: usize,
    b_len: usize,
    base_a: Vec<Interval>,
    base_b: Vec<Interval>,
}

/// Build the family for a window set. Rung lengths come from the snap
/// ladder of `t = |𝒜| + |ℬ|`, capped at `t` so one rung spans a side.
pub fn build_interval_family(ws: &WindowSet, ladder: &SnapLadder) -> IntervalFamily {
    IntervalFamily::new(ws.a_count(), ws.b_count(), ladder.rungs(ws.t() as u64))
}

impl IntervalFamily {
    pub fn new(a_len: usize, b_len: usize, rungs: Vec<u64>) -> Self {
        assert!(a_len > 0 && b_len > 0);
        let base_a = enumerate(Side::A, a_len, &rungs, 1);
        let base_b = enumerate(Side::B, b_len, &rungs, 1);
        IntervalFamily { rungs, a_len, b_len, base_a, base_b }
    }

    pub fn side_len(&self, side: Side) -> usize {
        match side {
            Side::A => self.a_len,
            Side::B => self.b_len,
        }
    }

    /// The disjoint covering (`λ = 1`) intervals of every rung on `side`.
    pub fn base_intervals(&self, side: Side) -> &[Interval] {
        match side {
            Side::A => &self.base_a,
            Side::B => &self.base_b,
        }
    }

    /// All `λ`-intervals of one rung on `side`, including the
    /// boundary-truncated ones.
    pub fn lambda_intervals(&self, side: Side, rung: u64, lambda: u32) -> Vec<Interval> {
        enumerate(side, self.side_len(side), &[rung], lambda)
    }

    /// The λ-multiplied interval centered on a base interval.
    pub fn multiplied(&self, base: &Interval, lambda: u32) -> Interval {
        debug_assert_eq!(base.lambda, 1);
        make(base.side, self.side_len(base.side), base.rung, lambda, base.shift)
            .expect("center of an existing base interval")
    }

    /// The `λ`-intervals of one rung containing a given window.
    pub fn containing(
        &self,
        side: Side,
        window_index: usize,
        rung: u64,
        lambda: u32,
    ) -> Vec<Interval> {
        let half = i64::from(lambda - 1) / 2;
        let q = (window_index as u64 / rung) as i64;
        (q - half..=q + half)
            .filter_map(|k| make(side, self.side_len(side), rung, lambda, k))
            .filter(|iv| iv.contains(window_index))
            .collect()
    }
}

fn enumerate(side: Side, len: usize, rungs: &[u64], lambda: u32) -> Vec<Interval> {
    let half = i64::from(lambda - 1) / 2;
    let mut out = Vec::new();
    for &rung in rungs {
        let last = (len as u64 - 1) / rung;
        for k in -half..=(last as i64 + half) {
            if let Some(iv) = make(side, len, rung, lambda, k) {
                out.push(iv);
            }
        }
    }
    out
}

fn make(side: Side, len: usize, rung: u64, lambda: u32, shift: i64) -> Option<Interval> {
    let half = i64::from(lambda - 1) / 2;
    let lo = (shift - half) * rung as i64;
    let hi = (shift + half + 1) * rung as i64 - 1;
    let lo = lo.max(0) as usize;
    let hi = hi.min(len as i64 - 1);
    if hi < 0 || lo as i64 > hi {
        return None;
    }
    Some(Interval { side, rung, lambda, shift, lo, hi: hi as usize })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn family(a_len: usize, b_len: usize, rungs: &[u64]) -> IntervalFamily {
        IntervalFamily::new(a_len, b_len, rungs.to_vec())
    }

    #[test]
    fn rung_ladder_for_t16_eps_half() {
        // t = 16, ε = 1/2 → rung lengths {1, 4, 16}.
        let ladder = SnapLadder::from_f64(16, 0.5);
        assert_eq!(ladder.rungs(16), vec![1, 4, 16]);
    }

    #[test]
    fn base_intervals_tile_each_side() {
        let fam = family(10, 16, &[1, 4, 16]);
        for side in [Side::A, Side::B] {
            let len = fam.side_len(side);
            for &rung in &fam.rungs {
                let of_rung: Vec<_> = fam
                    .base_intervals(side)
                    .iter()
                    .filter(|iv| iv.rung == rung)
                    .collect();
                // Disjoint and covering.
                let mut seen = vec![false; len];
                for iv in &of_rung {
                    for flag in &mut seen[iv.lo..=iv.hi] {
                        assert!(!*flag, "overlap in rung {rung}");
                        *flag = true;
                    }
                }
                assert!(seen.into_iter().all(|s| s), "gap in rung {rung}");
            }
        }
    }

    #[test]
    fn full_rung_is_one_interval() {
        let fam = family(10, 16, &[16]);
        let a: Vec<_> = fam.base_intervals(Side::A).to_vec();
        assert_eq!(a.len(), 1);
        assert_eq!((a[0].lo, a[0].hi), (0, 9));
    }

    #[test]
    fn every_window_is_in_exactly_lambda_intervals_per_shift_class() {
        let fam = family(16, 23, &[1, 4, 16]);
        for side in [Side::A, Side::B] {
            for &rung in &fam.rungs {
                for &lambda in &LAMBDAS {
                    let all = fam.lambda_intervals(side, rung, lambda);
                    for w in 0..fam.side_len(side) {
                        let hits: Vec<_> = all.iter().filter(|iv| iv.contains(w)).collect();
                        assert_eq!(
                            hits.len(),
                            lambda as usize,
                            "side {side:?} rung {rung} λ {lambda} window {w}"
                        );
                        // One per residue class of the shift.
                        let mut residues: Vec<_> =
                            hits.iter().map(|iv| iv.shift.rem_euclid(i64::from(lambda))).collect();
                        residues.sort_unstable();
                        residues.dedup();
                        assert_eq!(residues.len(), lambda as usize);
                        // And `containing` agrees.
                        assert_eq!(fam.containing(side, w, rung, lambda).len(), lambda as usize);
                    }
                }
            }
        }
    }

    #[test]
    fn multiplied_is_centered_and_truncated() {
        let fam = family(16, 16, &[4]);
        let base = fam.base_intervals(Side::A)[1]; // windows 4..7
        let seven = fam.multiplied(&base, 7);
        assert_eq!((seven.lo, seven.hi), (0, 15)); // truncated both ends
        assert!(seven.len() >= base.len());
        let three_in = fam.multiplied(&fam.base_intervals(Side::A)[0], 1);
        assert_eq!((three_in.lo, three_in.hi), (0, 3));
    }
}
