//! Folding an estimate matrix into the final distance.
//!
//! `ED(ℰ)` is the minimum of `ED_ℰ(µ)` over all monotone partial mappings
//! `µ : 𝒜 → ℬ ∪ {⊥}`: twice the summed estimates (⊥ costs `d`) plus twice
//! the overlap/spacing penalty between consecutive matched images. Because
//! the B-windows sit on a uniform `γ`-grid, the penalty between images `j`
//! and `j′` is `γ·|d/γ − (j′ − j)|`, and the minimum is computed by a DP
//! over (A-window, B-window) states with an `O(d/γ)` overlap window and a
//! running-minimum gap channel. A brute-force enumerator over all monotone
//! mappings double-checks the DP on small instances.

use crate::error::{Error, Result};
use crate::mapping::{mapping_cost, Mapping};
use crate::windows::WindowSet;

/// Per-pair distance upper bounds, default `d`. Entries are clamped to
/// `[0, d]`: deleting a window always costs `d`, so larger values carry no
/// information.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EstimateMatrix {
    a_count: usize,
    b_count: usize,
    d: u64,
    values: Vec<u64>,
}

impl EstimateMatrix {
    /// All entries at the default `d`.
    pub fn new_default(ws: &WindowSet) -> Self {
        EstimateMatrix {
            a_count: ws.a_count(),
            b_count: ws.b_count(),
            d: ws.d as u64,
            values: vec![ws.d as u64; ws.a_count() * ws.b_count()],
        }
    }

    pub fn from_fn(ws: &WindowSet, mut f: impl FnMut(usize, usize) -> u64) -> Self {
        let mut m = Self::new_default(ws);
        for a in 0..m.a_count {
            for b in 0..m.b_count {
                m.set(a, b, f(a, b));
            }
        }
        m
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.a_count, self.b_count)
    }

    pub fn default_value(&self) -> u64 {
        self.d
    }

    pub fn get(&self, a: usize, b: usize) -> u64 {
        self.values[a * self.b_count + b]
    }

    /// Set an entry, clamping at `d`.
    pub fn set(&mut self, a: usize, b: usize, v: u64) {
        self.values[a * self.b_count + b] = v.min(self.d);
    }

    /// Lower an entry to `min(current, v)`, clamping at `d`.
    pub fn fold_min(&mut self, a: usize, b: usize, v: u64) {
        let cur = self.get(a, b);
        self.set(a, b, cur.min(v));
    }

    fn check(&self, ws: &WindowSet) -> Result<()> {
        if (self.a_count, self.b_count) != (ws.a_count(), ws.b_count()) || self.d != ws.d as u64 {
            return Err(Error::DimensionMismatch {
                expected: (ws.a_count(), ws.b_count()),
                got: (self.a_count, self.b_count),
            });
        }
        Ok(())
    }
}

/// `ED(ℰ)`: the exact minimum of `ED_ℰ(µ)` over monotone mappings.
pub fn ed_from_estimates(ws: &WindowSet, est: &EstimateMatrix) -> Result<u64> {
    Ok(solve(ws, est, false)?.0)
}

/// `ED(ℰ)` together with a mapping attaining it.
pub fn ed_from_estimates_with_mapping(
    ws: &WindowSet,
    est: &EstimateMatrix,
) -> Result<(u64, Mapping)> {
    let (cost, mapping) = solve(ws, est, true)?;
    Ok((cost, mapping.expect("trace requested")))
}

const NO_PARENT: u32 = u32::MAX;

fn solve(ws: &WindowSet, est: &EstimateMatrix, trace: bool) -> Result<(u64, Option<Mapping>)> {
    est.check(ws)?;
    let (m, mb) = est.dims();
    let d = ws.d as u64;
    let g = ws.gamma as u64;
    let s = (ws.d / ws.gamma) as u64;
    if m == 0 {
        return Ok((0, trace.then(|| Mapping::empty(0))));
    }

    const INF: i64 = i64::MAX / 4;
    // best[i][j], halved cost, with the last match at (i, j); 1-based i, j.
    // Adjusted values best − i·d go negative, so everything is signed.
    let mut best = vec![INF; (m + 1) * (mb + 1)];
    // bpa[j] = min over processed i′ of best[i′][j] − i′·d.
    let mut bpa = vec![INF; mb + 1];
    let mut bpa_arg = vec![NO_PARENT; mb + 1];
    let (mut par_i, mut par_j) = if trace {
        (vec![NO_PARENT; (m + 1) * (mb + 1)], vec![NO_PARENT; (m + 1) * (mb + 1)])
    } else {
        (Vec::new(), Vec::new())
    };
    let at = |i: usize, j: usize| i * (mb + 1) + j;
    let (d, g, s) = (d as i64, g as i64, s as i64);

    for i in 1..=m {
        // Gap channel for this row: min over j′ ≤ j−s−1 of bpa[j′] + (j−j′−s)γ.
        let mut gap_val = INF;
        let mut gap_arg = (NO_PARENT, NO_PARENT);
        for j in 1..=mb {
            if j as i64 > s {
                let entering = (j as i64 - s - 1) as usize;
                let stepped = gap_val.saturating_add(g);
                let fresh = if entering >= 1 { bpa[entering].saturating_add(g) } else { INF };
                if fresh < stepped {
                    gap_val = fresh;
                    gap_arg = (bpa_arg[entering], entering as u32);
                } else {
                    gap_val = stepped;
                }
            }

            let mut base = 0i64; // first-match option
            let mut parent = (NO_PARENT, NO_PARENT);
            let max_delta = s.min(j as i64 - 1);
            for delta in 1..=max_delta {
                let jp = j - delta as usize;
                let cand = bpa[jp].saturating_add((s - delta) * g);
                if cand < base {
                    base = cand;
                    parent = (bpa_arg[jp], jp as u32);
                }
            }
            if gap_val < base {
                base = gap_val;
                parent = gap_arg;
            }
            let cell = est.get(i - 1, j - 1) as i64 + (i as i64 - 1) * d + base;
            best[at(i, j)] = cell;
            if trace {
                par_i[at(i, j)] = parent.0;
                par_j[at(i, j)] = parent.1;
            }
        }
        for j in 1..=mb {
            if best[at(i, j)] < INF {
                let adj = best[at(i, j)] - i as i64 * d;
                if adj < bpa[j] {
                    bpa[j] = adj;
                    bpa_arg[j] = i as u32;
                }
            }
        }
    }

    // Close off: remaining A-windows after the last match are deleted.
    let mut answer = m as i64 * d; // the all-⊥ mapping
    let mut end = (NO_PARENT, NO_PARENT);
    for i in 1..=m {
        for j in 1..=mb {
            let total = best[at(i, j)].saturating_add((m - i) as i64 * d);
            if total < answer {
                answer = total;
                end = (i as u32, j as u32);
            }
        }
    }

    let mapping = trace.then(|| {
        let mut mp = Mapping::empty(m);
        let (mut i, mut j) = end;
        while i != NO_PARENT {
            mp.set(i as usize - 1, Some(j - 1));
            let cell = at(i as usize, j as usize);
            (i, j) = (par_i[cell], par_j[cell]);
        }
        mp
    });
    Ok((2 * answer as u64, mapping))
}

/// Reference minimizer: enumerate every monotone partial mapping and take
/// the cheapest, pricing each one with [`mapping_cost`]. Exponential; only
/// for desk-scale oracle checks.
pub fn brute_force_mapping_min(ws: &WindowSet, est: &EstimateMatrix) -> Result<u64> {
    est.check(ws)?;
    let (m, mb) = est.dims();
    if m > 6 {
        return Err(Error::BudgetExceeded { what: "brute-force |𝒜|", limit: 6, got: m });
    }
    if mb > 10 {
        return Err(Error::BudgetExceeded { what: "brute-force |ℬ|", limit: 10, got: mb });
    }
    let mut best = u64::MAX;
    let mut current = Mapping::empty(m);
    enumerate(ws, est, &mut current, 0, 0, &mut best);
    Ok(best)
}

fn enumerate(
    ws: &WindowSet,
    est: &EstimateMatrix,
    current: &mut Mapping,
    a: usize,
    next_b: usize,
    best: &mut u64,
) {
    if a == est.dims().0 {
        let cost = mapping_cost(current, ws, |x, y| est.get(x, y)).expect("monotone by construction");
        *best = (*best).min(cost);
        return;
    }
    current.set(a, None);
    enumerate(ws, est, current, a + 1, next_b, best);
    for b in next_b..est.dims().1 {
        current.set(a, Some(b as u32));
        enumerate(ws, est, current, a + 1, b + 1, best);
    }
    current.set(a, None);
}
