//! Quality sweep used to tune the desk preset; not part of the test suite.
//! Run: cargo run --release -p edapx --example calibrate

use edapx::driver::{approx_ed, RunOptions};
use edapx::instances::{generate, Generator};
use edapx::params::ParamSet;
use num_rational::Ratio;
use std::time::Instant;

fn main() {
    let n = 4096usize;
    let rates = [0.02f64, 0.05, 0.1, 0.2];
    let args: Vec<String> = std::env::args().collect();
    let i_max: u32 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let rho_num: i64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(1);
    let rho_den: i64 = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(4);
    let per_rate: u64 = args.get(4).and_then(|s| s.parse().ok()).unwrap_or(13);

    let mut params = ParamSet::desk();
    params.i_max = i_max;
    params.rho_exp = Ratio::new(rho_num, rho_den);
    params.exact_fallback_n = 2048;
    if let Some(c) = args.get(5).and_then(|s| s.parse().ok()) {
        params.practical_c = Some(c);
    }
    if let Some(tm) = args.get(6).and_then(|s| s.parse::<u64>().ok()) {
        params.tau_max = num_bigint::BigUint::from(tm);
    }

    let t0 = Instant::now();
    let mut pass = 0u64;
    let mut total = 0u64;
    let mut worst: f64 = 0.0;
    for (ri, &rate) in rates.iter().enumerate() {
        let mut rate_pass = 0;
        let mut sum_ratio = 0.0;
        let mut evals = 0u64;
        for seed in 0..per_rate {
            let inst = generate(n, Generator::Mutate { alphabet: 16, rate }, seed * 31 + ri as u64);
            let mut p = params.clone();
            p.seed = seed;
            let opts = RunOptions { oracle: true, ..Default::default() };
            let (est, report) = approx_ed(&inst.a, &inst.b, &p, &opts).unwrap();
            let exact = report.true_distance.unwrap();
            let delta = report.big_delta;
            let bound = 10 * exact + 4 * delta;
            let ok = est <= bound;
            total += 1;
            if ok {
                pass += 1;
                rate_pass += 1;
            }
            assert!(est >= exact, "soundness violated");
            let score = est as f64 / bound as f64;
            worst = worst.max(score);
            sum_ratio += est as f64 / exact.max(1) as f64;
            evals += report.budget.iter().map(|b| b.distance_evals).sum::<u64>();
            assert_eq!(report.shrinkage.violations, 0);
        }
        println!(
            "rate {rate:>5}: pass {rate_pass}/{per_rate}  avg est/exact {:.2}  evals/run {}",
            sum_ratio / per_rate as f64,
            evals / per_rate
        );
    }
    println!(
        "i_max={i_max} rho={rho_num}/{rho_den}: total {pass}/{total}  worst est/bound {worst:.3}  wall {:?}",
        t0.elapsed()
    );
}
