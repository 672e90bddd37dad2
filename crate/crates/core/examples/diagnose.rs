//! One-instance recall diagnostic; not part of the test suite.
//! Run: cargo run --release -p edapx --example diagnose

use edapx::estimator::aggregate_estimates;
use edapx::exact::exact_ed;
use edapx::instances::{generate, Generator};
use edapx::intervals::build_interval_family;
use edapx::params::ParamSet;
use edapx::query::WindowDist;
use edapx::rng::StreamId;
use edapx::snap::SnapLadder;
use edapx::window_dp::ed_from_estimates;
use edapx::windows::{build_windows, WindowId, WindowSet};
use num_rational::Ratio;

struct ExactDist {
    ws: WindowSet,
    a: Vec<u8>,
    b: Vec<u8>,
}

impl WindowDist for ExactDist {
    fn estimate(&self, x: WindowId, y: WindowId, _dq: u64, _s: StreamId) -> u64 {
        exact_ed(self.ws.slice(x, &self.a, &self.b), self.ws.slice(y, &self.a, &self.b))
    }
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let n: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(4096);
    let rate: f64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(0.02);
    let i_max: u32 = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(3);
    let rho_num: i64 = args.get(4).and_then(|s| s.parse().ok()).unwrap_or(1);
    let rho_den: i64 = args.get(5).and_then(|s| s.parse().ok()).unwrap_or(4);
    let seed: u64 = args.get(6).and_then(|s| s.parse().ok()).unwrap_or(1);

    let inst = generate(n, Generator::Mutate { alphabet: 16, rate }, seed);
    let mut a = inst.a.clone();
    let mut b = inst.b.clone();
    let n0 = a.len().min(b.len());
    a.truncate(n0);
    b.truncate(n0);
    edapx::windows::pad_to_window_multiple(&mut a, &mut b);
    let np = a.len();
    let delta = (n0 / 16) as u64;
    let ws = build_windows(np, delta).unwrap();
    println!("n={np} d={} gamma={} t={} |A|={} |B|={}", ws.d, ws.gamma, ws.t(), ws.a_count(), ws.b_count());

    let mut params = ParamSet::desk();
    params.i_max = i_max;
    params.rho_exp = Ratio::new(rho_num, rho_den);
    let ladder = SnapLadder::new(ws.t() as u64, &params.eps);
    let family = build_interval_family(&ws, &ladder);
    let dist = ExactDist { ws: ws.clone(), a: a.clone(), b: b.clone() };

    let (est, stats) = aggregate_estimates(
        &ws, &family, &ladder, 1, &params, &dist, StreamId::root(1), false, false,
    )
    .unwrap();

    // Ground truth: best reachable entry per A-window.
    let exact = edapx::window_dp::EstimateMatrix::from_fn(&ws, |ak, bk| {
        exact_ed(
            ws.slice(ws.id_of(edapx::windows::Side::A, ak), &a, &b),
            ws.slice(ws.id_of(edapx::windows::Side::B, bk), &a, &b),
        )
    });
    let mut missed = 0;
    let mut loose = 0;
    let mut sum_gap = 0i64;
    for ak in 0..ws.a_count() {
        let best_exact = (0..ws.b_count()).map(|bk| exact.get(ak, bk)).min().unwrap();
        let best_est = (0..ws.b_count()).map(|bk| est.get(ak, bk)).min().unwrap();
        if best_est >= ws.d as u64 && best_exact < ws.d as u64 / 2 {
            missed += 1;
        } else if best_est > 3 * best_exact + 8 {
            loose += 1;
        }
        sum_gap += best_est as i64 - best_exact as i64;
    }
    println!("A-windows: {} | missed {} | loose {} | avg est-exact gap {:.1}",
        ws.a_count(), missed, loose, sum_gap as f64 / ws.a_count() as f64);

    for s in &stats {
        println!(
            "rung Δq={:>3}: edges {:>6} evals {:>7} big {:>3} levels {:?}",
            s.delta_query, s.edges_found, s.distance_evals, s.query.big_cliques,
            s.query.samples_per_level
        );
    }
    let dp_est = ed_from_estimates(&ws, &est).unwrap();
    let dp_exact = ed_from_estimates(&ws, &exact).unwrap();
    let true_ed = exact_ed(&a, &b);
    println!("estimate {dp_est} | exact-matrix DP {dp_exact} | true ED {true_ed} | 10ED+4Δ {}",
        10 * true_ed + 4 * delta);
}
