//! Filling the estimate matrix over a geometric ladder of thresholds.
//!
//! For each `Δ_query ∈ {γ, 2γ, 4γ, …, d}` one query tree runs and its edge
//! set is min-folded into the matrix. Under the literal aggregation rule an
//! edge of a rung is priced at `β_L·Δ_query`; under the certificate rule it
//! keeps the per-pair bound the query produced. Either way the matrix never
//! drops below the true pairwise distances, and entries are clamped at `d`.

use crate::error::Result;
use crate::intervals::IntervalFamily;
use crate::params::{EstimateRule, ParamSet};
use crate::query::{query, DistanceMemo, EdgeSet, LiveSet, QueryCtx, QueryStats, WindowDist};
use crate::rng::StreamId;
use crate::snap::SnapLadder;
use crate::window_dp::EstimateMatrix;
use crate::windows::WindowSet;

/// The ordered `Δ_query` values: powers of two times `γ`, capped at `d`,
/// with `d` always included as the final rung.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceLadder {
    pub rungs: Vec<u64>,
}

impl DistanceLadder {
    pub fn new(gamma: u64, d: u64) -> Self {
        let mut rungs = Vec::new();
        let mut v = gamma;
        while v < d {
            rungs.push(v);
            v = v.saturating_mul(2);
        }
        rungs.push(d);
        DistanceLadder { rungs }
    }
}

/// Instrumentation of one rung's query tree.
#[derive(Debug, Clone)]
pub struct RungStats {
    pub delta_query: u64,
    pub edges_found: usize,
    pub distance_evals: u64,
    pub lookups: u64,
    /// Closed-form bound on distance evaluations for the configured
    /// constants; paper mode uses `t^{1+3/i_max}`.
    pub budget_bound: u128,
    pub budget_violated: bool,
    pub query: QueryStats,
    /// Edge dump for `--emit-edges`: `(a, b, certificate)`.
    pub edges: Option<Vec<(u32, u32, u64)>>,
}

/// Run the ladder and aggregate the estimate matrix.
#[allow(clippy::too_many_arguments)]
pub fn aggregate_estimates(
    ws: &WindowSet,
    family: &IntervalFamily,
    ladder: &SnapLadder,
    level: u32,
    params: &ParamSet,
    dist: &dyn WindowDist,
    stream: StreamId,
    record_edges: bool,
    parallel: bool,
) -> Result<(EstimateMatrix, Vec<RungStats>)> {
    let lc = params.level_consts(level);
    let mut est = EstimateMatrix::new_default(ws);
    let mut all_stats = Vec::new();
    let t = ws.t() as u64;
    let distance_ladder = DistanceLadder::new(ws.gamma as u64, ws.d as u64);

    for (k, &delta_q) in distance_ladder.rungs.iter().enumerate() {
        let rung_stream = stream.labeled("rung").child(k as u64);
        let memo = DistanceMemo::new(rung_stream.labeled("dist"), delta_q, dist);
        let ctx = QueryCtx {
            ws,
            family,
            ladder,
            params,
            lc: &lc,
            delta_q,
            memo: &memo,
            parallel,
        };
        let live = LiveSet::full(ws);
        let mut qstats = QueryStats::default();
        let mut edges = EdgeSet::new();
        let path = format!("r{k}");
        query(&ctx, 0, &live, rung_stream.labeled("tree"), &path, &mut qstats, &mut edges);

        for (&(a, b), &cert) in &edges {
            let value = rung_value(params.estimate_rule, &lc, delta_q, ws.d as u64, cert);
            est.fold_min(a as usize, b as usize, value);
        }

        let bound = budget_bound(params, t);
        all_stats.push(RungStats {
            delta_query: delta_q,
            edges_found: edges.len(),
            distance_evals: memo.evals(),
            lookups: memo.lookups(),
            budget_bound: bound,
            budget_violated: u128::from(memo.evals()) > bound,
            query: qstats,
            edges: record_edges
                .then(|| edges.iter().map(|(&(a, b), &c)| (a, b, c)).collect()),
        });
    }
    Ok((est, all_stats))
}

/// Price of one discovered edge: the literal `β_L·Δ_query` (clamped at
/// `d`), or the per-pair certificate.
pub fn rung_value(
    rule: EstimateRule,
    lc: &crate::params::LevelConsts,
    delta_q: u64,
    d: u64,
    cert: u64,
) -> u64 {
    match rule {
        EstimateRule::Certificate => cert.min(d),
        EstimateRule::BetaTimesRung => lc.beta.times_u64(delta_q).clamp_to(d),
    }
}

/// Closed-form bound on the distance evaluations of one query tree.
///
/// Paper mode: `t^{1+3/i_max}`. Practical mode unrolls the recurrence
/// `B(i) = cc_i·(ℓ_i + B(i+1))` with `ℓ_{i+1} = min(t, ⌊t^{slack−ρexp}·ℓ_i⌋)`
/// and `B(i_max) = ℓ_{i_max}²`, i.e. the same accounting with the
/// configured child counts and the asserted shrink factor.
pub fn budget_bound(params: &ParamSet, t: u64) -> u128 {
    if params.child_count_override.is_none() {
        let e = 1.0 + 3.0 / f64::from(params.i_max.max(1));
        return (t as f64).powf(e).ceil() as u128;
    }
    let imax = params.i_max as usize;
    let mut caps = vec![t; imax + 1];
    for i in 1..=imax {
        caps[i] = max_shrunk(params, t, caps[i - 1]);
    }
    let mut bound: u128 = u128::from(caps[imax]) * u128::from(caps[imax]);
    for i in (0..imax).rev() {
        let cc = u128::from(params.child_count(i as u32, t));
        bound = cc.saturating_mul(u128::from(caps[i]).saturating_add(bound));
    }
    bound
}

/// Largest `x ≤ t` with `x ≤ t^{slack−ρexp}·l` — the shrink cap one level
/// down from a live set of size `l`.
fn max_shrunk(params: &ParamSet, t: u64, l: u64) -> u64 {
    let (mut lo, mut hi) = (0u64, t);
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        if crate::query::shrink_violated(params, t, mid as usize, l as usize) {
            hi = mid - 1;
        } else {
            lo = mid;
        }
    }
    lo
}
