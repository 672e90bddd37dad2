//! Acceptance suite: one test per criterion, each printing a PASS line
//! with its measured numbers (visible under `--nocapture`).

mod common;

use common::{memo_recursion_ed, padded_pair, random_monotone_mapping, window_dist};
use edapx::driver::{approx_ed, RunOptions};
use edapx::exact::{exact_alignment, exact_ed};
use edapx::instances::{generate, Generator, Instance};
use edapx::mapping::{mapping_cost, reduce_skew, skew, window_matching_from_alignment, Mapping};
use edapx::params::{derive_params, Mode, Overrides, ParamSet};
use edapx::query::{members_within, DistanceMemo, LiveSet, WindowDist};
use edapx::rng::StreamId;
use edapx::window_dp::{brute_force_mapping_min, ed_from_estimates, EstimateMatrix};
use edapx::windows::{build_windows, Side, WindowId, WindowSet};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn run_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |p| (p.get() / 2).clamp(1, 4))
}

#[test]
fn acceptance_01_exact_core_matches_independent_oracle() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xED01);
    for case in 0..1000u32 {
        let n = rng.gen_range(0..=512usize);
        let sigma = [2u8, 4, 26, 255][rng.gen_range(0..4)];
        let a: Vec<u8> = (0..n).map(|_| rng.gen_range(0..sigma)).collect();
        let b: Vec<u8> = if rng.gen_bool(0.6) {
            // mutated copy
            let rate = rng.gen_range(0.0..0.3);
            let mut b = a.clone();
            for _ in 0..((rate * n as f64) as usize) {
                match rng.gen_range(0..3u8) {
                    0 if !b.is_empty() => {
                        let i = rng.gen_range(0..b.len());
                        b[i] = rng.gen_range(0..sigma);
                    }
                    1 if !b.is_empty() => {
                        let i = rng.gen_range(0..b.len());
                        b.remove(i);
                    }
                    _ => {
                        let i = rng.gen_range(0..=b.len());
                        b.insert(i, rng.gen_range(0..sigma));
                    }
                }
            }
            b
        } else {
            let m = rng.gen_range(0..=512usize);
            (0..m).map(|_| rng.gen_range(0..sigma)).collect()
        };
        assert_eq!(exact_ed(&a, &b), memo_recursion_ed(&a, &b), "case {case}");
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!("ACCEPTANCE 01 exact-core oracle: PASS (1000 pairs, {elapsed:?})");
}

#[test]
fn acceptance_02_window_dp_equals_brute_force() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xED02);
    // Valid (a_count, d, γ) shapes with |𝒜| ≤ 5, |ℬ| ≤ 8.
    let mut shapes = Vec::new();
    for a_count in 1..=5usize {
        for d in [2usize, 4, 6, 8, 12] {
            for gamma in 1..=d {
                if d % gamma != 0 {
                    continue;
                }
                let n = a_count * d;
                let b_count = (n - d) / gamma + 1;
                if b_count <= 8 {
                    shapes.push((n, d, gamma));
                }
            }
        }
    }
    for case in 0..200u32 {
        let &(n, d, gamma) = &shapes[rng.gen_range(0..shapes.len())];
        let ws = WindowSet::custom(n, d, gamma, d as u64).unwrap();
        let est = EstimateMatrix::from_fn(&ws, |_, _| rng.gen_range(0..=d as u64));
        let dp = ed_from_estimates(&ws, &est).unwrap();
        let bf = brute_force_mapping_min(&ws, &est).unwrap();
        assert_eq!(dp, bf, "case {case} shape ({n},{d},{gamma})");
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!("ACCEPTANCE 02 window-DP ≡ brute force: PASS (200 instances, {elapsed:?})");
}

#[test]
fn acceptance_03_mapping_cost_bounds_true_distance_from_above() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xED03);
    for case in 0..100u32 {
        let n = rng.gen_range(32..=256usize);
        let inst = random_pair(n, &mut rng);
        let (pa, pb) = padded_pair(&inst.a, &inst.b);
        let delta = rng.gen_range(1..=pa.len() as u64);
        let ws = build_windows(pa.len(), delta).unwrap();
        let mapping = random_monotone_mapping(&ws, &mut rng);
        let cost = mapping_cost(&mapping, &ws, |a, b| {
            window_dist(&ws, &pa, &pb, Side::A, a, Side::B, b)
        })
        .unwrap();
        let truth = exact_ed(&pa, &pb);
        assert!(cost >= truth, "case {case}: ED(µ) = {cost} < ED = {truth}");
    }
    println!("ACCEPTANCE 03 mapping-cost lower bound: PASS (100 mappings, 0 violations)");
}

#[test]
fn acceptance_04_alignment_matching_meets_the_upper_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xED04);
    for case in 0..100u32 {
        let n = rng.gen_range(32..=256usize);
        let inst = random_pair(n, &mut rng);
        let (pa, pb) = padded_pair(&inst.a, &inst.b);
        let delta = rng.gen_range(1..=pa.len() as u64);
        let ws = build_windows(pa.len(), delta).unwrap();
        let script = exact_alignment(&pa, &pb).unwrap();
        let mapping = window_matching_from_alignment(&script, &ws);
        let cost = mapping_cost(&mapping, &ws, |a, b| {
            window_dist(&ws, &pa, &pb, Side::A, a, Side::B, b)
        })
        .unwrap();
        let bound = 16 * script.len() as u64
            + 12 * (ws.n / ws.d) as u64 * ws.gamma as u64
            + 4 * ws.d as u64;
        assert!(
            cost <= bound,
            "case {case}: cost {cost} > bound {bound} (script {}, n {}, d {}, γ {})",
            script.len(),
            ws.n,
            ws.d,
            ws.gamma
        );
    }
    println!("ACCEPTANCE 04 alignment-derived matching bound: PASS (100 pairs)");
}

#[test]
fn acceptance_05_skew_reduction_contract() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xED05);
    let mut done = 0u32;
    while done < 50 {
        let n = rng.gen_range(64..=256usize);
        let inst = random_pair(n, &mut rng);
        let (pa, pb) = padded_pair(&inst.a, &inst.b);
        let ws = build_windows(pa.len(), (pa.len() / 4) as u64).unwrap();
        let Some(mapping) = high_skew_mapping(&ws, &mut rng) else {
            continue;
        };
        assert!(skew(&mapping, &ws) > Ratio::from_integer(2));
        let dist = |a: usize, b: usize| window_dist(&ws, &pa, &pb, Side::A, a, Side::B, b);
        let before = mapping_cost(&mapping, &ws, dist).unwrap();
        let reduced = reduce_skew(&mapping, &ws).unwrap();
        let after = mapping_cost(&reduced, &ws, dist).unwrap();
        assert!(reduced.is_restriction_of(&mapping));
        assert!(
            skew(&reduced, &ws) <= Ratio::from_integer(2),
            "skew {} after reduction",
            skew(&reduced, &ws)
        );
        assert!(after <= 9 * before, "cost {after} > 9·{before}");
        done += 1;
    }
    println!("ACCEPTANCE 05 skew reduction: PASS (50 adversarial mappings)");
}

#[test]
fn acceptance_06_clique_properties() {
    let params = ParamSet::desk();
    let lc = params.level_consts(1);
    let tau_max = 6u32;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(0xED06 ^ seed);
        let n = [144usize, 256, 324][(seed % 3) as usize];
        let inst = generate(
            n,
            Generator::Mutate { alphabet: 8, rate: 0.1 * ((seed % 4) as f64) / 4.0 + 0.02 },
            seed,
        );
        let (pa, pb) = padded_pair(&inst.a, &inst.b);
        let ws = build_windows(pa.len(), (pa.len() / 4) as u64).unwrap();
        let dist = ExactDist { ws: ws.clone(), a: pa.clone(), b: pb.clone() };
        let delta_q = ws.gamma as u64;
        let memo = DistanceMemo::new(StreamId::root(seed), delta_q, &dist);
        let live = LiveSet::full(&ws);
        let radius =
            |tau: u32| lc.c.pow_big(&num_bigint::BigUint::from(tau)).times_u64(delta_q);
        let clique =
            |x: u32, tau: u32| members_within(&ws, &live, ws.id_of(Side::A, x as usize), radius(tau), &memo, false);

        for _ in 0..4 {
            let x = rng.gen_range(0..ws.a_count() as u32);
            let tau = rng.gen_range(1..=tau_max);
            let (ca, cb) = clique(x, tau);
            // (1) x ∈ C(x, τ).
            assert!(ca.contains(&x));
            // (3) C(x, τ) ⊆ C(x, τ+1).
            if tau < tau_max {
                let (na, nb) = clique(x, tau + 1);
                assert!(ca.iter().all(|v| na.contains(v)));
                assert!(cb.iter().all(|v| nb.contains(v)));
            }
            // (4) membership is symmetric through the memo.
            for &y in ca.iter().take(3) {
                let gx = ws.id_of(Side::A, x as usize);
                let gy = ws.id_of(Side::A, y as usize);
                assert_eq!(memo.estimate(gx, gy), memo.estimate(gy, gx));
                let (ya, _) = clique(y, tau);
                assert!(ya.contains(&x), "(4) y ∈ C(x) ⇒ x ∈ C(y)");
            }
            // (5) y ∈ C(x, τ) ⇒ C(x, τ) ⊆ C(y, τ+1) under exact distances.
            if tau < tau_max {
                if let Some(&y) = ca.iter().find(|&&v| v != x) {
                    let (ya, yb) = clique(y, tau + 1);
                    assert!(ca.iter().all(|v| ya.contains(v)));
                    assert!(cb.iter().all(|v| yb.contains(v)));
                }
            }
        }
        // (2) planted matches land in the clique of their source: the
        // B-window twin of x is within Δ_q·c^τ whenever its distance is
        // at most Δ_q.
        for x in 0..ws.a_count() {
            let twin = (ws.a_start(x) - 1) / ws.gamma;
            let d_twin = window_dist(&ws, &pa, &pb, Side::A, x, Side::B, twin);
            if d_twin <= delta_q {
                let tau = rng.gen_range(1..=tau_max);
                let (_, cb) = clique(x as u32, tau);
                assert!(cb.contains(&(twin as u32)), "(2) planted match in clique");
            }
        }
    }
    println!("ACCEPTANCE 06 clique properties (1)-(5): PASS (100 ensembles)");
}

#[test]
fn acceptance_07_every_emitted_edge_is_within_beta_delta() {
    let mut params = ParamSet::desk();
    params.exact_fallback_n = 4; // force the windowed path on small inputs
    let beta = params.level_consts(1).beta.to_u128().unwrap();
    let mut checked = 0u64;
    for (n, delta, seed) in [
        (576usize, 144u64, 1u64),
        (576, 144, 2),
        (576, 96, 3),
        (1024, 256, 4),
        (1024, 256, 5),
        (1024, 512, 6),
        (784, 196, 7),
        (784, 196, 8),
        (576, 288, 9),
        (1024, 384, 10),
    ] {
        let inst = generate(n, Generator::Mutate { alphabet: 8, rate: 0.1 }, seed);
        let (pa, pb) = padded_pair(&inst.a, &inst.b);
        let ws = build_windows(pa.len(), delta).unwrap();
        assert!(ws.t() <= 256, "t = {} too large for the oracle", ws.t());
        let mut p = params.clone();
        p.seed = seed;
        let opts = RunOptions { big_delta: Some(delta), record_edges: true, ..Default::default() };
        let (_, report) = approx_ed(&pa, &pb, &p, &opts).unwrap();
        for rung in report.edges_per_rung.as_deref().unwrap() {
            let cap = beta * u128::from(rung.delta_query);
            for &(a, b, _) in &rung.edges {
                let d = window_dist(&ws, &pa, &pb, Side::A, a as usize, Side::B, b as usize);
                assert!(
                    u128::from(d) <= cap,
                    "edge ({a},{b}) at distance {d} > β·Δq = {cap}"
                );
                checked += 1;
            }
        }
    }
    println!("ACCEPTANCE 07 edge soundness: PASS ({checked} edges, 0 violations)");
}

#[test]
fn acceptance_08_live_sets_shrink_within_the_configured_slack() {
    let params = ParamSet::desk();
    let mut checks = 0u64;
    for seed in 0..20u64 {
        let rate = if seed % 2 == 0 { 0.05 } else { 0.1 };
        let inst = generate(4096, Generator::Mutate { alphabet: 16, rate }, seed);
        let mut p = params.clone();
        p.seed = seed;
        let opts = RunOptions { threads: run_threads(), ..Default::default() };
        let (_, report) = approx_ed(&inst.a, &inst.b, &p, &opts).unwrap();
        assert_eq!(report.shrinkage.violations, 0, "seed {seed}");
        checks += report.shrinkage.checks;
    }
    assert!(checks > 0, "runs must exercise the small-clique branch");
    println!("ACCEPTANCE 08 shrinkage: PASS (20 runs, {checks} checks, 0 violations)");
}

#[test]
fn acceptance_09_10_soundness_and_quality_at_n4096() {
    let t0 = Instant::now();
    let params = ParamSet::desk();
    let rates = [0.02f64, 0.02, 0.05, 0.05, 0.1, 0.1, 0.2, 0.2];
    let mut sound = 0u64;
    let mut good = 0u64;
    let mut csv = String::from("n,rate,estimate,exact,ratio,queries\n");
    let mut budget_ok = true;
    for run in 0..50u64 {
        let rate = rates[(run % rates.len() as u64) as usize];
        let inst = generate(4096, Generator::Mutate { alphabet: 16, rate }, 0x0910 + run);
        let mut p = params.clone();
        p.seed = run;
        let opts = RunOptions {
            big_delta: Some(256), // Δ = n/16
            oracle: true,
            threads: run_threads(),
            ..Default::default()
        };
        let (est, report) = approx_ed(&inst.a, &inst.b, &p, &opts).unwrap();
        let exact = report.true_distance.unwrap();
        if est >= exact {
            sound += 1;
        }
        if est <= 10 * exact + 4 * 256 {
            good += 1;
        }
        budget_ok &= report.budget.iter().all(|b| b.within_budget);
        let ratio = if exact == 0 { 1.0 } else { est as f64 / exact as f64 };
        let queries: u64 = report.budget.iter().map(|b| b.distance_evals).sum();
        csv.push_str(&format!("4096,{rate},{est},{exact},{ratio:.4},{queries}\n"));
    }
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance_quality.csv");
    std::fs::write(&path, csv).unwrap();
    let elapsed = t0.elapsed();
    assert_eq!(sound, 50, "soundness must hold in 50/50 runs");
    assert!(good >= 45, "quality bound held in only {good}/50 runs");
    assert!(budget_ok, "every rung must stay within its budget");
    assert!(elapsed.as_secs_f64() < 120.0, "took {elapsed:?}");
    println!(
        "ACCEPTANCE 09 end-to-end soundness: PASS (50/50, {elapsed:?})\n\
         ACCEPTANCE 10 end-to-end quality: PASS ({good}/50 within 10·ED+4Δ; CSV at {})",
        path.display()
    );
}

#[test]
fn acceptance_11_budget_accounting() {
    // Practical desk runs.
    let params = ParamSet::desk();
    for seed in 0..10u64 {
        let inst = generate(4096, Generator::Mutate { alphabet: 16, rate: 0.05 }, seed);
        let mut p = params.clone();
        p.seed = seed;
        let opts = RunOptions { threads: run_threads(), ..Default::default() };
        let (_, report) = approx_ed(&inst.a, &inst.b, &p, &opts).unwrap();
        assert!(!report.budget.is_empty());
        for rung in &report.budget {
            assert!(
                rung.within_budget,
                "seed {seed} rung Δq={} used {} > bound {}",
                rung.delta_query, rung.distance_evals, rung.bound
            );
        }
    }
    // One paper-mode run: the bound takes the t^{1+3/i_max} form.
    let paper = derive_params(
        &num_rational::BigRational::from_integer(1.into()),
        Mode::Paper,
        &Overrides { seed: Some(3), ..Default::default() },
    )
    .unwrap();
    let inst = generate(4096, Generator::Mutate { alphabet: 16, rate: 0.05 }, 77);
    let (_, report) = approx_ed(&inst.a, &inst.b, &paper, &RunOptions::default()).unwrap();
    assert!(!report.budget.is_empty());
    for rung in &report.budget {
        assert!(rung.within_budget, "paper rung Δq={}", rung.delta_query);
    }
    assert_eq!(report.paper_preconditions_met, Some(false)); // t ≪ t_min
    println!("ACCEPTANCE 11 budget accounting: PASS (10 desk runs + 1 paper run)");
}

#[test]
fn acceptance_12_reports_are_byte_identical_per_seed() {
    let desk = ParamSet::desk();
    let inst = generate(4096, Generator::Mutate { alphabet: 16, rate: 0.05 }, 99);
    for threads in [1usize, run_threads().max(2)] {
        let opts = RunOptions { oracle: true, threads, record_edges: true, ..Default::default() };
        let mut p = desk.clone();
        p.seed = 5;
        let (e1, r1) = approx_ed(&inst.a, &inst.b, &p, &opts).unwrap();
        let (e2, r2) = approx_ed(&inst.a, &inst.b, &p, &opts).unwrap();
        assert_eq!(e1, e2);
        let j1 = serde_json::to_string(&r1.canonical()).unwrap();
        let j2 = serde_json::to_string(&r2.canonical()).unwrap();
        assert_eq!(j1, j2, "threads = {threads}");
    }
    // Paper mode round-trips the same way.
    let paper = derive_params(
        &num_rational::BigRational::from_integer(1.into()),
        Mode::Paper,
        &Overrides { seed: Some(1), ..Default::default() },
    )
    .unwrap();
    let (_, r1) = approx_ed(&inst.a, &inst.b, &paper, &RunOptions::default()).unwrap();
    let (_, r2) = approx_ed(&inst.a, &inst.b, &paper, &RunOptions::default()).unwrap();
    assert_eq!(
        serde_json::to_string(&r1.canonical()).unwrap(),
        serde_json::to_string(&r2.canonical()).unwrap()
    );
    println!("ACCEPTANCE 12 determinism: PASS (sequential, parallel, and paper runs)");
}

// ---------------------------------------------------------------------
// helpers

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

fn random_pair(n: usize, rng: &mut ChaCha8Rng) -> Instance {
    let seed = rng.gen();
    if rng.gen_bool(0.5) {
        generate(n, Generator::Random { alphabet: 8 }, seed)
    } else {
        let rate = rng.gen_range(0.01..0.3);
        generate(n, Generator::Mutate { alphabet: 8, rate }, seed)
    }
}

/// A monotone mapping with skew > 2: a compressed prefix (consecutive
/// B-windows under d-spaced A-windows) followed by a stretched jump.
fn high_skew_mapping(ws: &WindowSet, rng: &mut ChaCha8Rng) -> Option<Mapping> {
    let m = ws.a_count();
    if m < 3 || ws.b_count() < m + 3 {
        return None;
    }
    let mut mapping = Mapping::empty(m);
    let split = rng.gen_range(1..m);
    for a in 0..m {
        let b = if a < split {
            a // consecutive images: gaps of γ against gaps of d
        } else {
            // spread the tail towards the end of the B side
            let remaining = m - a;
            ws.b_count() - remaining * rng.gen_range(1..=2)
        };
        if b >= ws.b_count() {
            return None;
        }
        mapping.set(a, Some(b as u32));
    }
    mapping.validate().ok()?;
    (skew(&mapping, ws) > Ratio::from_integer(2)).then_some(mapping)
}
