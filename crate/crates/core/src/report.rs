//! Machine-readable run reports.
//!
//! Every field except `phase_times_ms` is a pure function of
//! `(A, B, params, seed)`; [`RunReport::canonical`] strips the wall-clock
//! field so reports can be compared byte for byte across repeated runs.

use crate::estimator::RungStats;
use crate::params::ParamSet;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunReport {
    pub mode: String,
    /// Original (pre-padding) common length.
    pub n: usize,
    /// Padded length actually decomposed.
    pub n_padded: usize,
    /// δ as "num/den".
    pub delta: String,
    /// The additive target Δ.
    #[serde(rename = "Delta")]
    pub big_delta: u64,
    pub seed: u64,
    pub estimate: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub true_distance: Option<u64>,
    /// Clique samples per query-tree depth, summed over rungs.
    pub query_counts: Vec<u64>,
    /// `(path, depth, live-set size)` per visited node, over all rungs.
    pub live_set_trace: Vec<TraceEntry>,
    pub big_cliques: u64,
    pub shrinkage: ShrinkReport,
    pub budget: Vec<RungBudget>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase_times_ms: Option<PhaseTimes>,
    /// Whether `t ≥ t_min` held (paper mode only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub paper_preconditions_met: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edges_per_rung: Option<Vec<RungEdges>>,
    pub params: ParamSet,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct TraceEntry {
    pub path: String,
    pub level: u32,
    pub live: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ShrinkReport {
    pub checks: u64,
    pub violations: u64,
    /// Witness of the largest |next|/|live| ratio, if any step ran.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst: Option<(usize, usize)>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RungBudget {
    pub delta_query: u64,
    pub edges: usize,
    pub distance_evals: u64,
    pub lookups: u64,
    pub bound: u128,
    pub within_budget: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RungEdges {
    pub delta_query: u64,
    /// `(a_index, b_index, certificate)`.
    pub edges: Vec<(u32, u32, u64)>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq, Default)]
pub struct PhaseTimes {
    pub windows: u64,
    pub estimates: u64,
    pub dp: u64,
    pub oracle: u64,
    pub total: u64,
}

impl RunReport {
    /// A copy with the wall-clock field removed; everything that remains is
    /// deterministic for a fixed seed.
    pub fn canonical(&self) -> RunReport {
        let mut c = self.clone();
        c.phase_times_ms = None;
        c
    }

    pub(crate) fn fold_rungs(stats: &[RungStats]) -> (Vec<u64>, Vec<TraceEntry>, u64, ShrinkReport, Vec<RungBudget>) {
        let mut counts: Vec<u64> = Vec::new();
        let mut trace = Vec::new();
        let mut big = 0;
        let mut shrink = ShrinkReport { checks: 0, violations: 0, worst: None };
        let mut budget = Vec::new();
        for rs in stats {
            for (lvl, &c) in rs.query.samples_per_level.iter().enumerate() {
                if counts.len() <= lvl {
                    counts.resize(lvl + 1, 0);
                }
                counts[lvl] += c;
            }
            for (path, level, live) in &rs.query.live_trace {
                trace.push(TraceEntry { path: path.clone(), level: *level, live: *live });
            }
            big += rs.query.big_cliques;
            shrink.checks += rs.query.shrink_checks;
            shrink.violations += rs.query.shrink_violations;
            if let Some((n, l)) = rs.query.worst_shrink {
                let beats = match shrink.worst {
                    None => true,
                    Some((n0, l0)) => (n as u128) * (l0 as u128) > (n0 as u128) * (l as u128),
                };
                if beats {
                    shrink.worst = Some((n, l));
                }
            }
            budget.push(RungBudget {
                delta_query: rs.delta_query,
                edges: rs.edges_found,
                distance_evals: rs.distance_evals,
                lookups: rs.lookups,
                bound: rs.budget_bound,
                within_budget: !rs.budget_violated,
            });
        }
        (counts, trace, big, shrink, budget)
    }
}
