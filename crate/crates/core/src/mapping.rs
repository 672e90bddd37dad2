//! Monotone window mappings, their cost, skew, and constructions.
//!
//! A mapping assigns each A-window either a B-window or ⊥ (deletion), with
//! images in strictly increasing order. Its cost charges twice the summed
//! window distances plus twice the overlap/spacing penalty between
//! consecutive matched images; this quantity never undershoots the true
//! edit distance of the underlying strings.

use crate::error::{Error, Result};
use crate::exact::EditScript;
use crate::windows::WindowSet;
use num_rational::Ratio;

/// A monotone partial map from A-window indices to B-window indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mapping {
    image: Vec<Option<u32>>,
}

impl Mapping {
    /// The all-⊥ mapping on `a_count` windows.
    pub fn empty(a_count: usize) -> Self {
        Mapping { image: vec![None; a_count] }
    }

    /// Build from `(a_index, b_index)` pairs; rejects non-monotone input.
    pub fn from_pairs(a_count: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut m = Mapping::empty(a_count);
        for &(a, b) in pairs {
            if a >= a_count || m.image[a].is_some() {
                return Err(Error::NonMonotone);
            }
            m.image[a] = Some(b as u32);
        }
        m.validate()?;
        Ok(m)
    }

    pub fn a_count(&self) -> usize {
        self.image.len()
    }

    pub fn get(&self, a: usize) -> Option<u32> {
        self.image[a]
    }

    pub fn set(&mut self, a: usize, b: Option<u32>) {
        self.image[a] = b;
    }

    /// Number of matched windows `|µ|`.
    pub fn matched_count(&self) -> usize {
        self.image.iter().flatten().count()
    }

    /// Matched `(a_index, b_index)` pairs in increasing order.
    pub fn matched(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.image
            .iter()
            .enumerate()
            .filter_map(|(a, b)| b.map(|b| (a, b as usize)))
    }

    /// Check strict monotonicity of the images (which also rules out two
    /// windows sharing one image).
    pub fn validate(&self) -> Result<()> {
        let mut last: Option<u32> = None;
        for b in self.image.iter().flatten() {
            if last.is_some_and(|prev| *b <= prev) {
                return Err(Error::NonMonotone);
            }
            last = Some(*b);
        }
        Ok(())
    }

    /// Restriction of this mapping: keep only pairs where `keep` holds.
    pub fn restrict(&self, mut keep: impl FnMut(usize) -> bool) -> Mapping {
        let image = self
            .image
            .iter()
            .enumerate()
            .map(|(a, b)| if keep(a) { *b } else { None })
            .collect();
        Mapping { image }
    }

    /// Is `self` a sub-mapping of `other` (pairwise equal where defined)?
    pub fn is_restriction_of(&self, other: &Mapping) -> bool {
        self.image
            .iter()
            .zip(&other.image)
            .all(|(s, o)| s.is_none() || s == o)
    }
}

/// `ED(µ)`: twice the summed window distances (⊥ costs `d`) plus twice the
/// overlap/spacing penalty `|s(µ(a)) + d − s(µ(a.next))|` over consecutive
/// matched windows.
pub fn mapping_cost(
    mapping: &Mapping,
    ws: &WindowSet,
    mut dist: impl FnMut(usize, usize) -> u64,
) -> Result<u64> {
    mapping.validate()?;
    if mapping.a_count() != ws.a_count() {
        return Err(Error::DimensionMismatch {
            expected: (ws.a_count(), ws.b_count()),
            got: (mapping.a_count(), ws.b_count()),
        });
    }
    let d = ws.d as u64;
    let mut total = 0u64;
    let mut prev_b: Option<usize> = None;
    for a in 0..mapping.a_count() {
        match mapping.get(a) {
            None => total += d,
            Some(b) => {
                let b = b as usize;
                total += dist(a, b);
                if let Some(pb) = prev_b {
                    let end = ws.b_start(pb) as i64 + ws.d as i64;
                    total += (end - ws.b_start(b) as i64).unsigned_abs();
                }
                prev_b = Some(b);
            }
        }
    }
    Ok(2 * total)
}

/// Minimum skew `D(µ) ≥ 1`: the smallest `D` such that for all matched
/// pairs, source gaps and image gaps agree within a factor of `D`.
///
/// The extreme gap ratio over all pairs is attained by a consecutive pair
/// (mediant inequality), so one pass suffices.
pub fn skew(mapping: &Mapping, ws: &WindowSet) -> Ratio<u64> {
    let matched: Vec<(usize, usize)> = mapping.matched().collect();
    let mut worst = Ratio::from_integer(1u64);
    for w in matched.windows(2) {
        let da = (ws.a_start(w[1].0) - ws.a_start(w[0].0)) as u64;
        let db = (ws.b_start(w[1].1) - ws.b_start(w[0].1)) as u64;
        let ratio = if db >= da { Ratio::new(db, da) } else { Ratio::new(da, db) };
        worst = worst.max(ratio);
    }
    worst
}

/// Prune a mapping to skew at most 2 while growing its cost by at most 9×.
///
/// Maximal skew-violating pairs are greedily collected into a disjoint set,
/// and every window strictly inside a collected pair's span (left endpoint
/// inclusive, right exclusive) is remapped to ⊥. Quadratic in `|µ|`.
pub fn reduce_skew(mapping: &Mapping, ws: &WindowSet) -> Result<Mapping> {
    mapping.validate()?;
    let matched: Vec<(usize, usize)> = mapping.matched().collect();

    // All violating pairs (a_i before a_j), as start-position spans.
    let mut violating: Vec<(usize, usize)> = Vec::new();
    for i in 0..matched.len() {
        for j in i + 1..matched.len() {
            let da = (ws.a_start(matched[j].0) - ws.a_start(matched[i].0)) as u64;
            let db = (ws.b_start(matched[j].1) - ws.b_start(matched[i].1)) as u64;
            if db > 2 * da || da > 2 * db {
                violating.push((ws.a_start(matched[i].0), ws.a_start(matched[j].0)));
            }
        }
    }

    let mut chosen: Vec<(usize, usize)> = Vec::new();
    while !violating.is_empty() {
        // Maximal = not strictly contained in another remaining pair.
        let pick = *violating
            .iter()
            .filter(|p| {
                !violating
                    .iter()
                    .any(|q| q != *p && q.0 <= p.0 && p.1 <= q.1)
            })
            .min()
            .expect("a finite poset has a maximal element");
        chosen.push(pick);
        violating.retain(|p| p.1 <= pick.0 || pick.1 <= p.0);
    }

    Ok(mapping.restrict(|a| {
        let s = ws.a_start(a);
        !chosen.iter().any(|&(lo, hi)| lo <= s && s < hi)
    }))
}

/// Window matching induced by a character-level alignment script.
///
/// Each A-window that still holds an untouched character is mapped to the
/// rightmost B-window containing the image of its first untouched
/// character; windows whose characters are all edited map to ⊥, as does a
/// window whose image would collide with its predecessor's.
pub fn window_matching_from_alignment(script: &EditScript, ws: &WindowSet) -> Mapping {
    let pairs = script.matched_pairs(ws.n);
    let mut mapping = Mapping::empty(ws.a_count());
    let mut cursor = 0usize;
    let mut prev_b: Option<usize> = None;
    for a in 0..ws.a_count() {
        let lo = ws.a_start(a);
        let hi = lo + ws.d - 1;
        while cursor < pairs.len() && pairs[cursor].0 < lo {
            cursor += 1;
        }
        if cursor >= pairs.len() || pairs[cursor].0 > hi {
            continue; // no untouched character in this window
        }
        let b = ws.rightmost_b_covering(pairs[cursor].1);
        if prev_b.is_some_and(|pb| b <= pb) {
            continue; // image taken; delete this window instead
        }
        mapping.set(a, Some(b as u32));
        prev_b = Some(b);
    }
    mapping
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::exact_alignment;
    use crate::windows::build_windows;

    fn ws16() -> WindowSet {
        build_windows(16, 8).unwrap() // d = 4, γ = 2, |𝒜| = 4, |ℬ| = 7
    }

    #[test]
    fn all_bottom_costs_two_ad() {
        let ws = ws16();
        let m = Mapping::empty(ws.a_count());
        let cost = mapping_cost(&m, &ws, |_, _| unreachable!()).unwrap();
        assert_eq!(cost, 2 * 4 * 4);
    }

    #[test]
    fn gap_penalty_examples() {
        let ws = ws16();
        // a1 → b(s=1), a2 → b(s=5): |1 + 4 − 5| = 0.
        let m = Mapping::from_pairs(4, &[(0, 0), (1, 2)]).unwrap();
        let cost = mapping_cost(&m, &ws, |_, _| 0).unwrap();
        assert_eq!(cost, 2 * (2 * 4)); // two ⊥ windows remain
        // a2 → b(s=7) instead: gap |1 + 4 − 7| = 2.
        let m = Mapping::from_pairs(4, &[(0, 0), (1, 3)]).unwrap();
        let cost = mapping_cost(&m, &ws, |_, _| 0).unwrap();
        assert_eq!(cost, 2 * (2 * 4) + 2 * 2);
    }

    #[test]
    fn rejects_non_monotone() {
        let ws = ws16();
        assert!(Mapping::from_pairs(4, &[(0, 3), (1, 1)]).is_err());
        assert!(Mapping::from_pairs(4, &[(0, 2), (1, 2)]).is_err());
        let mut m = Mapping::empty(4);
        m.set(0, Some(3));
        m.set(1, Some(1));
        assert!(matches!(mapping_cost(&m, &ws, |_, _| 0), Err(Error::NonMonotone)));
    }

    #[test]
    fn skew_examples() {
        let ws = ws16();
        // Single pair: vacuous, D = 1.
        let m = Mapping::from_pairs(4, &[(0, 0)]).unwrap();
        assert_eq!(skew(&m, &ws), Ratio::from_integer(1));
        // a-starts (1, 5) → b-starts (1, 5): equal gaps.
        let m = Mapping::from_pairs(4, &[(0, 0), (1, 2)]).unwrap();
        assert_eq!(skew(&m, &ws), Ratio::from_integer(1));
        // a-starts (1, 5) → b-starts (1, 13): gap ratio 12/4 = 3.
        let m = Mapping::from_pairs(4, &[(0, 0), (1, 6)]).unwrap();
        assert_eq!(skew(&m, &ws), Ratio::from_integer(3));
    }

    #[test]
    fn reduce_skew_examples() {
        let ws = ws16();
        // Already low-skew: unchanged.
        let m = Mapping::from_pairs(4, &[(0, 0), (1, 2)]).unwrap();
        let reduced = reduce_skew(&m, &ws).unwrap();
        assert_eq!(reduced, m);
        // Empty: unchanged.
        let m = Mapping::empty(4);
        assert_eq!(reduce_skew(&m, &ws).unwrap(), m);
        // The D = 3 example: drops at least one pair, lands at skew ≤ 2.
        let m = Mapping::from_pairs(4, &[(0, 0), (1, 6)]).unwrap();
        let reduced = reduce_skew(&m, &ws).unwrap();
        assert!(reduced.matched_count() < m.matched_count());
        assert!(skew(&reduced, &ws) <= Ratio::from_integer(2));
        assert!(reduced.is_restriction_of(&m));
    }

    #[test]
    fn identity_alignment_maps_to_matching_starts() {
        let ws = ws16();
        let script = EditScript::default();
        let m = window_matching_from_alignment(&script, &ws);
        assert_eq!(m.matched_count(), 4);
        for (a, b) in m.matched() {
            assert_eq!(ws.a_start(a), ws.b_start(b));
        }
        // Distances are zero on those pairs and the gap terms vanish.
        let cost = mapping_cost(&m, &ws, |_, _| 0).unwrap();
        assert_eq!(cost, 0);
    }

    #[test]
    fn fully_edited_window_maps_to_bottom() {
        let ws = ws16();
        let a: Vec<u8> = (0..16u8).collect();
        // Replace the second window's characters wholesale.
        let mut b = a.clone();
        for (i, c) in b.iter_mut().enumerate().take(8).skip(4) {
            *c = 200 + i as u8;
        }
        let script = exact_alignment(&a, &b).unwrap();
        let m = window_matching_from_alignment(&script, &ws);
        assert_eq!(m.get(1), None);
        assert!(m.get(0).is_some() && m.get(2).is_some() && m.get(3).is_some());
    }
}
