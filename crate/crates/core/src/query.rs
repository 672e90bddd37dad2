//! The recursive clique-sampling query.
//!
//! A query maintains a set of *live* windows, initially all of `𝒜 ∪ ℬ`. At
//! each tree node it samples a uniformly random live A-window `x` and a
//! random radius index `τ`, queries the (memoized, recursive) distance from
//! `x` to every live window, and forms the *clique* of windows within
//! `Δ_query·c_L^τ`. A clique holding more than a `ρ⁻¹` fraction of the live
//! set (after snapping) is a *big clique*: all its A×B pairs are emitted
//! and the branch backtracks. Otherwise the next live set is the union of
//! the live windows in every 7-times-widened base interval on which the
//! clique is `ρ`-times denser than its global density. At depth `i_max` all
//! remaining cross pairs are queried directly.
//!
//! Emitted edges carry a sound per-pair upper bound (a *certificate*): the
//! memoized estimate itself for a leaf edge, or the sum of the two center
//! estimates for a big-clique edge. Every certificate is at least the true
//! distance of the pair because the underlying estimates are.

use crate::error::{Error, Result};
use crate::intervals::IntervalFamily;
use crate::params::{cmp_ratio_vs_tpow, LevelConsts, ParamSet, Threshold};
use crate::rng::StreamId;
use crate::snap::SnapLadder;
use crate::windows::{Side, WindowId, WindowSet};
use dashmap::DashMap;
use num_bigint::{BigUint, RandBigInt};
use num_rational::{BigRational, Ratio};
use num_traits::One;
use rand::Rng;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering as AtOrd};

/// Windows still under consideration at one node of the query tree,
/// sorted within-side indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiveSet {
    pub a: Vec<u32>,
    pub b: Vec<u32>,
    pub level: u32,
}

impl LiveSet {
    /// The level-0 live set: every window of both sides.
    pub fn full(ws: &WindowSet) -> Self {
        LiveSet {
            a: (0..ws.a_count() as u32).collect(),
            b: (0..ws.b_count() as u32).collect(),
            level: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.a.len() + self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty() && self.b.is_empty()
    }

    fn side(&self, side: Side) -> &[u32] {
        match side {
            Side::A => &self.a,
            Side::B => &self.b,
        }
    }
}

/// A sampled metric ball: the live windows within estimated distance
/// `Δ_query·c_L^τ` of the center.
#[derive(Debug, Clone)]
pub struct Clique {
    /// Within-side index of the A-side center.
    pub center: u32,
    pub tau: BigUint,
    pub radius: Threshold,
    pub a: Vec<u32>,
    pub b: Vec<u32>,
}

impl Clique {
    pub fn len(&self) -> usize {
        self.a.len() + self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty() && self.b.is_empty()
    }

    fn side(&self, side: Side) -> &[u32] {
        match side {
            Side::A => &self.a,
            Side::B => &self.b,
        }
    }
}

/// Source of (sound, upper-bound) window distance estimates. The driver
/// backs this with the level-`L−1` recursion; tests use exact distances.
pub trait WindowDist: Sync {
    /// Sound upper estimate of the distance between two windows at query
    /// threshold `delta_q` (recursive levels rebuild their own windows
    /// from it).
    fn estimate(&self, x: WindowId, y: WindowId, delta_q: u64, stream: StreamId) -> u64;
}

impl<F: Fn(WindowId, WindowId, u64, StreamId) -> u64 + Sync> WindowDist for F {
    fn estimate(&self, x: WindowId, y: WindowId, delta_q: u64, stream: StreamId) -> u64 {
        self(x, y, delta_q, stream)
    }
}

/// Memoized symmetric distance estimates, scoped to one `(Δ_query, L)`.
///
/// Keys are unordered window pairs, so `lookup(x, y) = lookup(y, x)` by
/// construction; each key is evaluated at most once, on a random stream
/// derived from the pair rather than the call site.
pub struct DistanceMemo<'a> {
    scope: StreamId,
    delta_q: u64,
    dist: &'a dyn WindowDist,
    map: DashMap<(u32, u32), u64>,
    evals: AtomicU64,
    lookups: AtomicU64,
}

impl<'a> DistanceMemo<'a> {
    pub fn new(scope: StreamId, delta_q: u64, dist: &'a dyn WindowDist) -> Self {
        DistanceMemo {
            scope,
            delta_q,
            dist,
            map: DashMap::new(),
            evals: AtomicU64::new(0),
            lookups: AtomicU64::new(0),
        }
    }

    pub fn estimate(&self, x: WindowId, y: WindowId) -> u64 {
        self.lookups.fetch_add(1, AtOrd::Relaxed);
        let key = pair_key(x, y);
        if let Some(v) = self.map.get(&key) {
            return *v;
        }
        *self.map.entry(key).or_insert_with(|| {
            self.evals.fetch_add(1, AtOrd::Relaxed);
            self.dist.estimate(key.0, key.1, self.delta_q, self.scope.pair(x, y))
        })
    }

    /// Estimate one center against many targets. Misses are evaluated
    /// outside any map lock (in parallel when a pool is installed); the
    /// keys of one batch are distinct and the tree is traversed one node at
    /// a time, so each key is still evaluated exactly once.
    pub fn estimate_batch(&self, x: WindowId, ys: &[WindowId], parallel: bool) -> Vec<u64> {
        self.lookups.fetch_add(ys.len() as u64, AtOrd::Relaxed);
        let mut out = vec![0u64; ys.len()];
        let mut missing: Vec<(usize, (u32, u32))> = Vec::new();
        for (i, &y) in ys.iter().enumerate() {
            let key = pair_key(x, y);
            match self.map.get(&key) {
                Some(v) => out[i] = *v,
                None => missing.push((i, key)),
            }
        }
        self.evals.fetch_add(missing.len() as u64, AtOrd::Relaxed);
        let eval = |key: &(u32, u32)| {
            self.dist.estimate(key.0, key.1, self.delta_q, self.scope.pair(key.0, key.1))
        };
        let values: Vec<u64> = if parallel {
            use rayon::prelude::*;
            missing.par_iter().map(|(_, key)| eval(key)).collect()
        } else {
            missing.iter().map(|(_, key)| eval(key)).collect()
        };
        for ((i, key), v) in missing.into_iter().zip(values) {
            self.map.entry(key).or_insert(v);
            out[i] = v;
        }
        out
    }

    pub fn evals(&self) -> u64 {
        self.evals.load(AtOrd::Relaxed)
    }

    pub fn lookups(&self) -> u64 {
        self.lookups.load(AtOrd::Relaxed)
    }
}

fn pair_key(x: WindowId, y: WindowId) -> (u32, u32) {
    if x <= y {
        (x, y)
    } else {
        (y, x)
    }
}

/// Global, local, and relative density of a clique on an interval, built
/// from snapped cardinalities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityTriple {
    pub global: Ratio<u64>,
    pub local: Ratio<u64>,
    pub relative: Ratio<u64>,
}

/// Densities of `clique` within `live` restricted to `interval`.
/// Errors when the interval holds no live window.
pub fn densities(
    clique: &Clique,
    live: &LiveSet,
    interval: &crate::intervals::Interval,
    ladder: &SnapLadder,
) -> Result<DensityTriple> {
    let live_in = count_in(live.side(interval.side), interval.lo, interval.hi);
    if live_in == 0 {
        return Err(Error::EmptyIntervalLive);
    }
    let clique_in = count_in(clique.side(interval.side), interval.lo, interval.hi);
    let global = Ratio::new(ladder.snap(clique.len() as u64), ladder.snap(live.len() as u64));
    let local = Ratio::new(ladder.snap(clique_in), ladder.snap(live_in));
    let relative = if *global.numer() == 0 {
        Ratio::new(0, 1)
    } else {
        local / global
    };
    Ok(DensityTriple { global, local, relative })
}

fn count_in(sorted: &[u32], lo: usize, hi: usize) -> u64 {
    let l = sorted.partition_point(|&w| (w as usize) < lo);
    let r = sorted.partition_point(|&w| (w as usize) <= hi);
    (r - l) as u64
}

/// Collect the live windows within `radius` (estimated) of center `x`.
pub fn members_within(
    ws: &WindowSet,
    live: &LiveSet,
    center: WindowId,
    radius: Threshold,
    memo: &DistanceMemo,
    parallel: bool,
) -> (Vec<u32>, Vec<u32>) {
    let mut ids: Vec<WindowId> = Vec::with_capacity(live.len());
    ids.extend(live.a.iter().map(|&k| ws.id_of(Side::A, k as usize)));
    ids.extend(live.b.iter().map(|&k| ws.id_of(Side::B, k as usize)));
    let ests = memo.estimate_batch(center, &ids, parallel);
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (&id, &est) in ids.iter().zip(&ests) {
        if radius.admits(est) {
            match ws.side(id) {
                Side::A => a.push(ws.index_in_side(id) as u32),
                Side::B => b.push(ws.index_in_side(id) as u32),
            }
        }
    }
    (a, b)
}

/// Sample a clique: uniform center from the live A-side, uniform
/// `τ ∈ {1, …, τ_max}`, members by memoized estimate.
#[allow(clippy::too_many_arguments)]
pub fn sample_clique(
    ws: &WindowSet,
    live: &LiveSet,
    delta_q: u64,
    lc: &LevelConsts,
    tau_max: &BigUint,
    rng: &mut impl Rng,
    memo: &DistanceMemo,
    parallel: bool,
) -> Result<Clique> {
    if live.a.is_empty() {
        return Err(Error::EmptyLiveSide);
    }
    let center_idx = live.a[rng.gen_range(0..live.a.len())];
    let tau = rng.gen_biguint_below(tau_max) + BigUint::one();
    let radius = lc.c.pow_big(&tau).times_u64(delta_q);
    let center = ws.id_of(Side::A, center_idx as usize);
    let (a, b) = members_within(ws, live, center, radius, memo, parallel);
    Ok(Clique { center: center_idx, tau, radius, a, b })
}

/// Outcome of the dense-interval scan.
#[derive(Debug, Clone)]
pub enum Verdict {
    /// Global density above `ρ⁻¹`: emit the clique and backtrack.
    BigClique,
    /// Union of live windows in ρ-dense widened intervals, possibly empty.
    NextLive(LiveSet),
}

/// Decide big-clique versus recursion and build the next live set.
pub fn dense_intervals(
    family: &IntervalFamily,
    ladder: &SnapLadder,
    clique: &Clique,
    live: &LiveSet,
    params: &ParamSet,
    t: u64,
) -> Verdict {
    let snap_c = ladder.snap(clique.len() as u64);
    let snap_l = ladder.snap(live.len() as u64);
    let rho = rho_exponent(params);
    // Big clique: snap|C|/snap|𝓛| > t^{−rho}.
    let neg_rho = -&rho;
    if snap_c > 0
        && cmp_ratio_vs_tpow(u128::from(snap_c), u128::from(snap_l), t, &neg_rho)
            == Ordering::Greater
    {
        return Verdict::BigClique;
    }

    let lambda = *params.lambdas.last().unwrap_or(&7);
    let mut next = LiveSet { a: Vec::new(), b: Vec::new(), level: live.level + 1 };
    for side in [Side::A, Side::B] {
        let mut ranges: Vec<(usize, usize)> = Vec::new();
        for base in family.base_intervals(side) {
            let wide = family.multiplied(base, lambda);
            let live_in = count_in(live.side(side), wide.lo, wide.hi);
            if live_in == 0 {
                continue;
            }
            let clique_in = count_in(clique.side(side), wide.lo, wide.hi);
            if clique_in == 0 || snap_c == 0 {
                continue;
            }
            // relative ≥ ρ ⇔ snap|C∩7I|·snap|𝓛| ≥ t^{rho}·snap|𝓛∩7I|·snap|C|.
            let lhs = u128::from(ladder.snap(clique_in)) * u128::from(snap_l);
            let rhs = u128::from(ladder.snap(live_in)) * u128::from(snap_c);
            if cmp_ratio_vs_tpow(lhs, rhs, t, &rho) != Ordering::Less {
                ranges.push((wide.lo, wide.hi));
            }
        }
        let merged = merge_ranges(ranges);
        let out = match side {
            Side::A => &mut next.a,
            Side::B => &mut next.b,
        };
        for (lo, hi) in merged {
            let v = live.side(side);
            let l = v.partition_point(|&w| (w as usize) < lo);
            let r = v.partition_point(|&w| (w as usize) <= hi);
            out.extend_from_slice(&v[l..r]);
        }
    }
    Verdict::NextLive(next)
}

fn rho_exponent(params: &ParamSet) -> BigRational {
    BigRational::new(
        num_bigint::BigInt::from(*params.rho_exp.numer()),
        num_bigint::BigInt::from(*params.rho_exp.denom()),
    )
}

fn merge_ranges(mut ranges: Vec<(usize, usize)>) -> Vec<(usize, usize)> {
    ranges.sort_unstable();
    let mut out: Vec<(usize, usize)> = Vec::with_capacity(ranges.len());
    for (lo, hi) in ranges {
        match out.last_mut() {
            Some(last) if lo <= last.1 + 1 => last.1 = last.1.max(hi),
            _ => out.push((lo, hi)),
        }
    }
    out
}

/// Instrumentation of one query tree (or one ladder rung).
#[derive(Debug, Clone, Default)]
pub struct QueryStats {
    /// Clique samples per tree depth.
    pub samples_per_level: Vec<u64>,
    /// `(path, depth, live-set size)` per visited node.
    pub live_trace: Vec<(String, u32, usize)>,
    pub big_cliques: u64,
    pub shrink_checks: u64,
    pub shrink_violations: u64,
    /// Witness of the largest |next|/|live| ratio seen.
    pub worst_shrink: Option<(usize, usize)>,
    pub leaf_pairs: u64,
}

impl QueryStats {
    fn bump_level(&mut self, level: u32) {
        if self.samples_per_level.len() <= level as usize {
            self.samples_per_level.resize(level as usize + 1, 0);
        }
        self.samples_per_level[level as usize] += 1;
    }

    fn note_shrink(&mut self, next: usize, live: usize, violated: bool) {
        self.shrink_checks += 1;
        if violated {
            self.shrink_violations += 1;
        }
        let beats = match self.worst_shrink {
            None => true,
            Some((n0, l0)) => (next as u128) * (l0 as u128) > (n0 as u128) * (live as u128),
        };
        if beats {
            self.worst_shrink = Some((next, live));
        }
    }
}

/// Everything a query tree needs, fixed for one rung.
pub struct QueryCtx<'a> {
    pub ws: &'a WindowSet,
    pub family: &'a IntervalFamily,
    pub ladder: &'a SnapLadder,
    pub params: &'a ParamSet,
    pub lc: &'a LevelConsts,
    pub delta_q: u64,
    pub memo: &'a DistanceMemo<'a>,
    pub parallel: bool,
}

/// Discovered edges: within-side `(a_index, b_index)` pairs mapped to the
/// smallest certificate seen.
pub type EdgeSet = BTreeMap<(u32, u32), u64>;

/// Run the multi-level query from depth `i` on `live`.
pub fn query(
    ctx: &QueryCtx,
    i: u32,
    live: &LiveSet,
    stream: StreamId,
    path: &str,
    stats: &mut QueryStats,
    edges: &mut EdgeSet,
) {
    stats.live_trace.push((path.to_string(), i, live.len()));
    if live.is_empty() {
        return;
    }
    let t = ctx.ws.t() as u64;

    if i >= ctx.params.i_max {
        // Stopping condition: query all remaining cross pairs directly.
        let keep = ctx.lc.c.times_u64(ctx.delta_q);
        let ids_b: Vec<WindowId> =
            live.b.iter().map(|&k| ctx.ws.id_of(Side::B, k as usize)).collect();
        for &ak in &live.a {
            let x = ctx.ws.id_of(Side::A, ak as usize);
            let ests = ctx.memo.estimate_batch(x, &ids_b, ctx.parallel);
            stats.leaf_pairs += ids_b.len() as u64;
            for (&bk, &est) in live.b.iter().zip(&ests) {
                if keep.admits(est) {
                    fold_edge(ctx, edges, ak, bk, est);
                }
            }
        }
        return;
    }

    let child_count = ctx.params.child_count(i, t);
    for j in 0..child_count {
        if live.a.is_empty() {
            break; // no center to sample; further children are identical
        }
        let child = stream.child(j);
        let mut rng = child.child(0).rng();
        stats.bump_level(i);
        let clique = sample_clique(
            ctx.ws,
            live,
            ctx.delta_q,
            ctx.lc,
            &ctx.params.tau_max,
            &mut rng,
            ctx.memo,
            ctx.parallel,
        )
        .expect("live A-side checked above");
        match dense_intervals(ctx.family, ctx.ladder, &clique, live, ctx.params, t) {
            Verdict::BigClique => {
                stats.big_cliques += 1;
                emit_big_clique(ctx, &clique, edges);
            }
            Verdict::NextLive(next) => {
                let violated = shrink_violated(ctx.params, t, next.len(), live.len());
                stats.note_shrink(next.len(), live.len(), violated);
                if !next.is_empty() {
                    let sub_path = format!("{path}/{j}");
                    query(ctx, i + 1, &next, child.child(1), &sub_path, stats, edges);
                }
            }
        }
    }

}

// A window `d` away from everything is deletion-priced anyway; edges
// certifying at or above `d` carry no information and are dropped in
// certificate mode.
fn fold_edge(ctx: &QueryCtx, edges: &mut EdgeSet, a: u32, b: u32, cert: u64) {
    if matches!(ctx.params.estimate_rule, crate::params::EstimateRule::Certificate)
        && cert >= ctx.ws.d as u64
    {
        return;
    }
    edges
        .entry((a, b))
        .and_modify(|c| *c = (*c).min(cert))
        .or_insert(cert);
}

// Certificates for big-clique pairs go through the center: the sum of two
// sound upper bounds is a sound upper bound by the triangle inequality.
fn emit_big_clique(ctx: &QueryCtx, clique: &Clique, edges: &mut EdgeSet) {
    let x = ctx.ws.id_of(Side::A, clique.center as usize);
    for &ak in &clique.a {
        let ga = ctx.ws.id_of(Side::A, ak as usize);
        let to_center = if ak == clique.center { 0 } else { ctx.memo.estimate(ga, x) };
        for &bk in &clique.b {
            let gb = ctx.ws.id_of(Side::B, bk as usize);
            let cert = to_center.saturating_add(ctx.memo.estimate(x, gb));
            fold_edge(ctx, edges, ak, bk, cert);
        }
    }
}

/// Is `|next| ≤ t^{slack_exp}·ρ⁻¹·|live|` violated?
pub fn shrink_violated(params: &ParamSet, t: u64, next: usize, live: usize) -> bool {
    let e = &params.slack_exp - rho_exponent(params);
    cmp_ratio_vs_tpow(next as u128, live.max(1) as u128, t, &e) == Ordering::Greater
}
