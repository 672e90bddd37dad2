//! Exact ground-truth layer for verification.
//!
//! Everything here recomputes quantities the approximate pipeline only
//! estimates — the full pairwise window graph, the optimal window matching
//! under exact distances, and the estimate-versus-exact envelope — within
//! small, explicit instance budgets. Test-facing; not on the production
//! path.

use crate::error::{Error, Result};
use crate::exact::{banded_ed, exact_ed};
use crate::mapping::Mapping;
use crate::window_dp::{ed_from_estimates_with_mapping, EstimateMatrix};
use crate::windows::{Side, WindowSet};
use std::collections::BTreeSet;

/// Pairwise enumeration budget: `t²` distance computations get slow past
/// this.
pub const PAIRWISE_BUDGET_T: usize = 512;

/// The exact bipartite window graph at threshold `Δ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowGraph {
    pub delta: u64,
    /// `(a_index, b_index)` with `exact_ed(a, b) ≤ Δ`.
    pub edges: BTreeSet<(u32, u32)>,
}

/// Enumerate every window pair within distance `Δ`, using the banded
/// distance with cutoff `Δ`.
pub fn exact_pairwise_graph(ws: &WindowSet, a: &[u8], b: &[u8], delta: u64) -> Result<WindowGraph> {
    if ws.t() > PAIRWISE_BUDGET_T {
        return Err(Error::BudgetExceeded {
            what: "pairwise graph t",
            limit: PAIRWISE_BUDGET_T,
            got: ws.t(),
        });
    }
    let mut edges = BTreeSet::new();
    for ak in 0..ws.a_count() {
        let wa = ws.slice(ws.id_of(Side::A, ak), a, b);
        for bk in 0..ws.b_count() {
            let wb = ws.slice(ws.id_of(Side::B, bk), a, b);
            if banded_ed(wa, wb, delta).is_some() {
                edges.insert((ak as u32, bk as u32));
            }
        }
    }
    Ok(WindowGraph { delta, edges })
}

/// The exact pairwise distance matrix (every entry is at most `d`, the
/// length of both windows, so no clamping occurs).
pub fn exact_estimates(ws: &WindowSet, a: &[u8], b: &[u8]) -> Result<EstimateMatrix> {
    if ws.t() > PAIRWISE_BUDGET_T {
        return Err(Error::BudgetExceeded {
            what: "exact estimate matrix t",
            limit: PAIRWISE_BUDGET_T,
            got: ws.t(),
        });
    }
    Ok(EstimateMatrix::from_fn(ws, |ak, bk| {
        exact_ed(
            ws.slice(ws.id_of(Side::A, ak), a, b),
            ws.slice(ws.id_of(Side::B, bk), a, b),
        )
    }))
}

/// The cheapest monotone window matching under exact distances, with the
/// mapping that attains it.
pub fn optimal_window_matching(ws: &WindowSet, a: &[u8], b: &[u8]) -> Result<(Mapping, u64)> {
    let est = exact_estimates(ws, a, b)?;
    let (cost, mapping) = ed_from_estimates_with_mapping(ws, &est)?;
    Ok((mapping, cost))
}

/// Estimate-versus-exact measurement for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    pub exact: u64,
    /// `estimate / exact`, by convention 1 when the exact distance is 0.
    pub ratio: f64,
    /// `(estimate − exact) / Δ`.
    pub additive_slack: f64,
    /// Soundness: `estimate ≥ exact`.
    pub pass: bool,
}

pub fn verify_envelope(a: &[u8], b: &[u8], estimate: u64, delta: u64) -> Envelope {
    let exact = exact_ed(a, b);
    let ratio = if exact == 0 { 1.0 } else { estimate as f64 / exact as f64 };
    let additive_slack = (estimate as f64 - exact as f64) / delta.max(1) as f64;
    Envelope { exact, ratio, additive_slack, pass: estimate >= exact }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{generate, Generator};
    use crate::windows::build_windows;

    #[test]
    fn identical_strings_have_all_diagonal_edges() {
        let n = 64;
        let a: Vec<u8> = (0..n).map(|i| (i % 5) as u8).collect();
        let ws = build_windows(n, 16).unwrap();
        let g = exact_pairwise_graph(&ws, &a, &a, 0).unwrap();
        for ak in 0..ws.a_count() {
            let twin = (ws.a_start(ak) - 1) / ws.gamma;
            assert!(g.edges.contains(&(ak as u32, twin as u32)));
        }
    }

    #[test]
    fn huge_threshold_gives_the_complete_graph() {
        let inst = generate(64, Generator::Random { alphabet: 4 }, 2);
        let ws = build_windows(64, 16).unwrap();
        let g = exact_pairwise_graph(&ws, &inst.a, &inst.b, 2 * ws.d as u64).unwrap();
        assert_eq!(g.edges.len(), ws.a_count() * ws.b_count());
    }

    #[test]
    fn graph_agrees_with_plain_dp() {
        let inst = generate(100, Generator::Mutate { alphabet: 4, rate: 0.1 }, 7);
        let mut a = inst.a.clone();
        let mut b = inst.b.clone();
        b.resize(a.len(), 0);
        crate::windows::pad_to_window_multiple(&mut a, &mut b);
        let ws = build_windows(a.len(), (a.len() / 4) as u64).unwrap();
        let delta = (ws.d / 4) as u64;
        let g = exact_pairwise_graph(&ws, &a, &b, delta).unwrap();
        for ak in 0..ws.a_count() {
            for bk in 0..ws.b_count() {
                let d = exact_ed(
                    ws.slice(ws.id_of(Side::A, ak), &a, &b),
                    ws.slice(ws.id_of(Side::B, bk), &a, &b),
                );
                assert_eq!(g.edges.contains(&(ak as u32, bk as u32)), d <= delta);
            }
        }
    }

    #[test]
    fn unrelated_alphabets_force_full_deletion_cost() {
        // A over {0..3}, B over {10..13}: every window pair at distance d.
        let n = 64;
        let a = generate(n, Generator::Random { alphabet: 4 }, 3).a;
        let b: Vec<u8> = generate(n, Generator::Random { alphabet: 4 }, 4)
            .a
            .iter()
            .map(|c| c + 10)
            .collect();
        let ws = build_windows(n, 16).unwrap();
        let (_, cost) = optimal_window_matching(&ws, &a, &b).unwrap();
        assert_eq!(cost, 2 * ws.a_count() as u64 * ws.d as u64);
    }

    #[test]
    fn perfect_tiling_matching_costs_zero() {
        let n = 256; // d = 16; pick Δ so γ | d tiling exists
        let a: Vec<u8> = (0..n).map(|i| (i * 7 % 11) as u8).collect();
        let ws = build_windows(n, 64).unwrap();
        assert_eq!(ws.d % ws.gamma, 0);
        let (mapping, cost) = optimal_window_matching(&ws, &a, &a).unwrap();
        assert_eq!(cost, 0);
        // The mapping pins every A-window on its identical twin.
        for (ak, bk) in mapping.matched() {
            assert_eq!(ws.a_start(ak), ws.b_start(bk));
        }
    }

    #[test]
    fn envelope_conventions() {
        let e = verify_envelope(b"abc", b"abc", 0, 4);
        assert_eq!(e.exact, 0);
        assert_eq!(e.ratio, 1.0);
        assert!(e.pass);
        let e = verify_envelope(b"abc", b"abd", 0, 4);
        assert!(!e.pass); // soundness violation detector
        let e = verify_envelope(b"abc", b"abd", 3, 4);
        assert_eq!(e.ratio, 3.0);
        assert!(e.pass);
    }

    #[test]
    fn budget_is_enforced() {
        let n = 4096;
        let a = vec![0u8; n];
        let ws = build_windows(n, 16).unwrap(); // γ = 1 → t huge
        assert!(ws.t() > PAIRWISE_BUDGET_T);
        assert!(matches!(
            exact_pairwise_graph(&ws, &a, &a, 1),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
