//! The level recursion and the top-level entry point.
//!
//! `main_level` is the core recursion: level 0 (or any input below the
//! exact-fallback threshold) computes the exact distance; higher levels
//! decompose into windows, estimate pairwise window distances through the
//! query machinery — whose distance calls recurse one level down — and
//! fold the estimates with the window DP. The returned value never
//! undershoots the true distance of its inputs, at every level.
//!
//! `approx_ed` equalizes the input lengths by truncating the longer string
//! and adds the truncated length back to the estimate (a deletion per
//! truncated character), which keeps the final estimate sound for the
//! original pair. It also attaches full instrumentation.

use crate::error::{Error, Result};
use crate::estimator::{aggregate_estimates, RungStats};
use crate::exact::exact_ed;
use crate::intervals::build_interval_family;
use crate::params::{Mode, ParamSet};
use crate::query::WindowDist;
use crate::report::{PhaseTimes, RunReport, RungEdges, ShrinkReport};
use crate::rng::StreamId;
use crate::snap::SnapLadder;
use crate::window_dp::ed_from_estimates;
use crate::windows::{build_windows, pad_to_window_multiple, WindowId, WindowSet};
use std::time::Instant;

/// Per-run switches that do not affect the computed estimate (except
/// `big_delta`, which overrides the additive target).
#[derive(Debug, Clone)]
pub struct RunOptions {
    /// Override the additive target Δ (default: the parameter policy).
    pub big_delta: Option<u64>,
    /// Also compute the exact distance and check soundness against it.
    pub oracle: bool,
    /// Worker threads for distance evaluation; 1 = fully sequential.
    pub threads: usize,
    /// Keep the per-rung edge dumps in the report.
    pub record_edges: bool,
    /// Attach wall-clock phase times (breaks byte-identical reports).
    pub timings: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            big_delta: None,
            oracle: false,
            threads: 1,
            record_edges: false,
            timings: false,
        }
    }
}

#[derive(Default)]
pub(crate) struct Collect {
    windows_ms: u64,
    estimates_ms: u64,
    dp_ms: u64,
    rungs: Vec<RungStats>,
    t: u64,
    n_padded: usize,
}

/// Distance estimates backed by the next recursion level down.
struct RecursiveDist<'a> {
    ws: &'a WindowSet,
    a: &'a [u8],
    b: &'a [u8],
    params: &'a ParamSet,
    level: u32,
}

impl WindowDist for RecursiveDist<'_> {
    fn estimate(&self, x: WindowId, y: WindowId, delta_q: u64, stream: StreamId) -> u64 {
        let sx = self.ws.slice(x, self.a, self.b);
        let sy = self.ws.slice(y, self.a, self.b);
        main_level(sx, sy, delta_q, self.level - 1, self.params, stream, None, false, false)
            .expect("inner Δ_query lies in [1, d] by ladder construction")
    }
}

/// One level of the recursion on equal-length inputs.
///
/// Level 0 and near-exact-scale inputs return the exact distance; higher
/// levels run windows → estimates → DP. The result is always at least
/// the true edit distance of `a` and `b`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn main_level(
    a: &[u8],
    b: &[u8],
    delta: u64,
    level: u32,
    params: &ParamSet,
    stream: StreamId,
    mut collect: Option<&mut Collect>,
    record_edges: bool,
    parallel: bool,
) -> Result<u64> {
    debug_assert_eq!(a.len(), b.len(), "caller equalizes lengths");
    if level == 0 || a.len() < params.exact_fallback_n.max(4) {
        return Ok(exact_ed(a, b));
    }
    let mut pa = a.to_vec();
    let mut pb = b.to_vec();
    pad_to_window_multiple(&mut pa, &mut pb);
    let n = pa.len();
    if delta == 0 || delta as usize > n {
        return Err(Error::InvalidDelta { delta, n });
    }

    let t0 = Instant::now();
    let ws = build_windows(n, delta)?;
    let ladder = SnapLadder::new(ws.t() as u64, &params.eps);
    let family = build_interval_family(&ws, &ladder);
    let windows_ms = t0.elapsed().as_millis() as u64;

    let t1 = Instant::now();
    let dist = RecursiveDist { ws: &ws, a: &pa, b: &pb, params, level };
    let (est, rungs) = aggregate_estimates(
        &ws,
        &family,
        &ladder,
        level,
        params,
        &dist,
        stream.child(u64::from(level)),
        record_edges,
        parallel,
    )?;
    let estimates_ms = t1.elapsed().as_millis() as u64;

    let t2 = Instant::now();
    let cost = ed_from_estimates(&ws, &est)?;
    let dp_ms = t2.elapsed().as_millis() as u64;

    if let Some(c) = collect.take() {
        c.windows_ms = windows_ms;
        c.estimates_ms = estimates_ms;
        c.dp_ms = dp_ms;
        c.rungs = rungs;
        c.t = ws.t() as u64;
        c.n_padded = n;
    }
    Ok(cost)
}

/// One recursion level without instrumentation: the `MAIN(A, B, Δ, L)`
/// entry point. Inputs must have equal lengths.
pub fn run_level(a: &[u8], b: &[u8], delta: u64, level: u32, params: &ParamSet) -> Result<u64> {
    let stream = StreamId::root(params.seed).labeled("run");
    main_level(a, b, delta, level, params, stream, None, false, false)
}

/// Approximate the edit distance of two byte strings.
///
/// Returns the estimate together with a full run report. The estimate is
/// an upper bound on the true distance; with `opts.oracle` the report also
/// carries the exact distance for comparison.
pub fn approx_ed(
    a: &[u8],
    b: &[u8],
    params: &ParamSet,
    opts: &RunOptions,
) -> Result<(u64, RunReport)> {
    let n0 = a.len().min(b.len());
    let diff = (a.len().max(b.len()) - n0) as u64;
    let (ta, tb) = (&a[..n0], &b[..n0]);
    // Below the fallback threshold the whole pair goes through the exact
    // DP, which handles unequal lengths directly — no truncation slack.
    let small = a.len().max(b.len()) < params.exact_fallback_n.max(4);
    let delta = match opts.big_delta {
        Some(v) => {
            if v == 0 || v as usize > n0.max(1) {
                return Err(Error::InvalidDelta { delta: v, n: n0 });
            }
            v
        }
        None => params.default_delta(n0.max(1)).max(1),
    };

    let total0 = Instant::now();
    let stream = StreamId::root(params.seed).labeled("run");
    let mut collect = Collect::default();
    let mut run = || -> Result<u64> {
        main_level(
            ta,
            tb,
            delta,
            params.l_max,
            params,
            stream,
            Some(&mut collect),
            opts.record_edges,
            opts.threads > 1,
        )
    };
    let estimate = if small {
        exact_ed(a, b)
    } else {
        let truncated_estimate = if opts.threads > 1 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(opts.threads)
                .build()
                .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;
            pool.install(run)?
        } else {
            run()?
        };
        // Truncated characters each cost one deletion; adding them keeps
        // the estimate sound for the original pair.
        truncated_estimate + diff
    };

    let t_oracle = Instant::now();
    let true_distance = opts.oracle.then(|| exact_ed(a, b));
    let oracle_ms = t_oracle.elapsed().as_millis() as u64;
    if let Some(exact) = true_distance {
        debug_assert!(estimate >= exact, "soundness: estimate {estimate} < exact {exact}");
    }

    let (query_counts, live_set_trace, big_cliques, shrinkage, budget) =
        RunReport::fold_rungs(&collect.rungs);
    let edges_per_rung = opts.record_edges.then(|| {
        collect
            .rungs
            .iter()
            .map(|r| RungEdges {
                delta_query: r.delta_query,
                edges: r.edges.clone().unwrap_or_default(),
            })
            .collect()
    });
    let report = RunReport {
        mode: match params.mode {
            Mode::Paper => "paper".into(),
            Mode::Practical => "practical".into(),
        },
        n: n0,
        n_padded: if collect.n_padded == 0 { n0 } else { collect.n_padded },
        delta: format!("{}/{}", params.delta_frac.numer(), params.delta_frac.denom()),
        big_delta: delta,
        seed: params.seed,
        estimate,
        true_distance,
        query_counts,
        live_set_trace,
        big_cliques,
        shrinkage: if collect.rungs.is_empty() {
            ShrinkReport { checks: 0, violations: 0, worst: None }
        } else {
            shrinkage
        },
        budget,
        phase_times_ms: opts.timings.then(|| PhaseTimes {
            windows: collect.windows_ms,
            estimates: collect.estimates_ms,
            dp: collect.dp_ms,
            oracle: oracle_ms,
            total: total0.elapsed().as_millis() as u64,
        }),
        paper_preconditions_met: params
            .t_min
            .as_ref()
            .map(|tm| collect.t > 0 && tm.le_u64(collect.t)),
        edges_per_rung,
        params: params.clone(),
    };
    Ok((estimate, report))
}
