//! Command line for the approximate edit distance pipeline.
//!
//! Three subcommands: `gen` writes instance files, `run` computes one
//! distance (exact or approximate) and prints a JSON report, and `sweep`
//! runs a grid of planted instances and prints CSV rows.
//!
//! Exit codes: 0 success, 1 unreadable input or invalid parameters, 2
//! soundness-assertion failure under `--oracle`.

use clap::{Args, Parser, Subcommand};
use edapx::driver::{approx_ed, RunOptions};
use edapx::exact::exact_ed;
use edapx::instances::{generate, Generator};
use edapx::oracle::verify_envelope;
use edapx::params::{derive_params, parse_rational, DeltaPolicy, EstimateRule, Mode, Overrides, ParamSet};
use num_rational::Ratio;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "edapx", version, about = "Near-linear-time approximate edit distance")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance pair as two raw byte files.
    Gen(GenArgs),
    /// Compute the distance of a file pair and print a JSON report.
    Run(RunArgs),
    /// Run a (n × mutation-rate) grid and print CSV rows.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Instance length.
    #[arg(long)]
    n: usize,
    /// Alphabet size (each symbol is one byte value).
    #[arg(long, default_value_t = 16)]
    alphabet: u8,
    /// Generator: random | mutate:RATE | adversarial-skew.
    #[arg(long, default_value = "random")]
    generator: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    out_a: PathBuf,
    out_b: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    /// Compute the exact distance instead of the approximation.
    #[arg(long, conflicts_with = "approx")]
    exact: bool,
    /// Compute the approximate distance (the default).
    #[arg(long)]
    approx: bool,
    #[command(flatten)]
    params: ParamArgs,
    /// Also compute the exact distance and verify estimate ≥ exact.
    #[arg(long)]
    oracle: bool,
    /// Dump the discovered edge set of every rung as JSON lines before the
    /// report.
    #[arg(long)]
    emit_edges: bool,
    /// Worker threads for distance evaluation.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Attach wall-clock phase times (makes the report non-reproducible).
    #[arg(long)]
    timings: bool,
    file_a: PathBuf,
    file_b: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    /// Comma-separated instance lengths.
    #[arg(long, value_delimiter = ',', default_value = "4096")]
    n_list: Vec<usize>,
    /// Comma-separated mutation rates.
    #[arg(long, value_delimiter = ',', default_value = "0.05")]
    rate_list: Vec<f64>,
    #[arg(long, default_value_t = 16)]
    alphabet: u8,
    #[command(flatten)]
    params: ParamArgs,
    /// Compute exact distances and ratios for every cell.
    #[arg(long)]
    oracle: bool,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

/// Parameter-derivation flags shared by `run` and `sweep`.
#[derive(Args)]
struct ParamArgs {
    /// δ, as a fraction or decimal (paper mode derives everything from it).
    #[arg(long)]
    delta: Option<String>,
    /// Additive target Δ.
    #[arg(long = "Delta")]
    big_delta: Option<u64>,
    #[arg(long, value_parser = ["paper", "practical"], default_value = "practical")]
    mode: String,
    /// Named preset; "desk" is the only one.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    tau_max: Option<u64>,
    /// Metric-ball expansion rate c.
    #[arg(long)]
    c: Option<u64>,
    /// ρ exponent as a fraction (ρ = t^exp).
    #[arg(long)]
    rho_exp: Option<String>,
    #[arg(long)]
    imax: Option<u32>,
    #[arg(long)]
    lmax: Option<u32>,
    #[arg(long)]
    child_count: Option<u32>,
    /// Inputs below this length take the exact DP path.
    #[arg(long)]
    exact_fallback_n: Option<usize>,
    /// Edge pricing: certificate (default) or beta-times-rung.
    #[arg(long, value_parser = ["certificate", "beta-times-rung"])]
    estimate_rule: Option<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Run(args) => cmd_run(args),
        Command::Sweep(args) => cmd_sweep(args),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn cmd_gen(args: GenArgs) -> Result<ExitCode, String> {
    let gen = parse_generator(&args.generator, args.alphabet)?;
    let inst = generate(args.n, gen, args.seed);
    std::fs::write(&args.out_a, &inst.a).map_err(|e| format!("{}: {e}", args.out_a.display()))?;
    std::fs::write(&args.out_b, &inst.b).map_err(|e| format!("{}: {e}", args.out_b.display()))?;
    if let Some(planted) = inst.planted {
        let sidecar = sidecar_path(&args.out_b);
        std::fs::write(&sidecar, format!("{planted}\n"))
            .map_err(|e| format!("{}: {e}", sidecar.display()))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn sidecar_path(out_b: &std::path::Path) -> PathBuf {
    let mut os = out_b.as_os_str().to_owned();
    os.push(".planted");
    PathBuf::from(os)
}

fn parse_generator(s: &str, alphabet: u8) -> Result<Generator, String> {
    if s == "random" {
        return Ok(Generator::Random { alphabet });
    }
    if s == "adversarial-skew" {
        return Ok(Generator::AdversarialSkew { alphabet });
    }
    if let Some(rate) = s.strip_prefix("mutate:") {
        let rate: f64 = rate.parse().map_err(|_| format!("bad mutation rate {rate:?}"))?;
        if !(0.0..=1.0).contains(&rate) {
            return Err(format!("mutation rate {rate} outside [0, 1]"));
        }
        return Ok(Generator::Mutate { alphabet, rate });
    }
    Err(format!("unknown generator {s:?} (random | mutate:RATE | adversarial-skew)"))
}

fn build_params(args: &ParamArgs) -> Result<ParamSet, String> {
    if let Some(p) = &args.preset {
        if p != "desk" {
            return Err(format!("unknown preset {p:?}"));
        }
    }
    let mode = match args.mode.as_str() {
        "paper" => Mode::Paper,
        _ => Mode::Practical,
    };
    let delta = match &args.delta {
        Some(s) => parse_rational(s).map_err(|e| e.to_string())?,
        None => ParamSet::desk().delta_frac,
    };
    let rho_exp = match &args.rho_exp {
        None => None,
        Some(s) => Some(parse_small_ratio(s)?),
    };
    let estimate_rule = args.estimate_rule.as_deref().map(|s| match s {
        "beta-times-rung" => EstimateRule::BetaTimesRung,
        _ => EstimateRule::Certificate,
    });
    let overrides = Overrides {
        i_max: args.imax,
        l_max: args.lmax,
        tau_max: args.tau_max,
        c: args.c,
        child_count: args.child_count,
        rho_exp,
        eps: None,
        exact_fallback_n: args.exact_fallback_n,
        delta_policy: args.big_delta.map(DeltaPolicy::Fixed),
        estimate_rule,
        seed: Some(args.seed),
    };
    derive_params(&delta, mode, &overrides).map_err(|e| e.to_string())
}

fn parse_small_ratio(s: &str) -> Result<Ratio<i64>, String> {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: i64 = n.trim().parse().map_err(|_| format!("bad ratio {s:?}"))?;
    let d: i64 = d.trim().parse().map_err(|_| format!("bad ratio {s:?}"))?;
    if d == 0 {
        return Err(format!("bad ratio {s:?}"));
    }
    Ok(Ratio::new(n, d))
}

fn cmd_run(args: RunArgs) -> Result<ExitCode, String> {
    let a = std::fs::read(&args.file_a).map_err(|e| format!("{}: {e}", args.file_a.display()))?;
    let b = std::fs::read(&args.file_b).map_err(|e| format!("{}: {e}", args.file_b.display()))?;

    if args.exact {
        let t0 = std::time::Instant::now();
        let estimate = exact_ed(&a, &b);
        let mut obj = serde_json::json!({
            "mode": "exact",
            "n": a.len().min(b.len()),
            "seed": args.params.seed,
            "estimate": estimate,
            "true_distance": estimate,
        });
        if args.timings {
            obj["phase_times_ms"] =
                serde_json::json!({ "total": t0.elapsed().as_millis() as u64 });
        }
        println!("{}", serde_json::to_string_pretty(&obj).unwrap());
        return Ok(ExitCode::SUCCESS);
    }

    let params = build_params(&args.params)?;
    let opts = RunOptions {
        big_delta: args.params.big_delta,
        oracle: args.oracle,
        threads: args.threads.max(1),
        record_edges: args.emit_edges,
        timings: args.timings,
    };
    let (estimate, report) = approx_ed(&a, &b, &params, &opts).map_err(|e| e.to_string())?;

    if args.emit_edges {
        for rung in report.edges_per_rung.as_deref().unwrap_or(&[]) {
            println!("{}", serde_json::to_string(rung).unwrap());
        }
    }
    println!("{}", serde_json::to_string_pretty(&report).unwrap());

    if args.oracle {
        let envelope = verify_envelope(&a, &b, estimate, report.big_delta);
        if !envelope.pass {
            eprintln!(
                "soundness violation: estimate {estimate} < exact {}",
                envelope.exact
            );
            return Ok(ExitCode::from(2));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_sweep(args: SweepArgs) -> Result<ExitCode, String> {
    let base = build_params(&args.params)?;
    let mut out = String::from("n,rate,estimate,exact,ratio,queries\n");
    let mut cell = 0u64;
    for &n in &args.n_list {
        for &rate in &args.rate_list {
            let inst = generate(
                n,
                Generator::Mutate { alphabet: args.alphabet, rate },
                args.params.seed.wrapping_add(cell),
            );
            let mut params = base.clone();
            params.seed = args.params.seed.wrapping_add(cell);
            let opts = RunOptions {
                big_delta: args.params.big_delta,
                oracle: args.oracle,
                threads: args.threads.max(1),
                record_edges: false,
                timings: false,
            };
            let (estimate, report) =
                approx_ed(&inst.a, &inst.b, &params, &opts).map_err(|e| e.to_string())?;
            let queries: u64 = report.budget.iter().map(|b| b.distance_evals).sum();
            match report.true_distance {
                Some(exact) => {
                    if estimate < exact {
                        eprintln!("soundness violation at n={n} rate={rate}");
                        return Ok(ExitCode::from(2));
                    }
                    let ratio =
                        if exact == 0 { 1.0 } else { estimate as f64 / exact as f64 };
                    out.push_str(&format!("{n},{rate},{estimate},{exact},{ratio:.4},{queries}\n"));
                }
                None => out.push_str(&format!("{n},{rate},{estimate},,,{queries}\n")),
            }
            cell += 1;
        }
    }
    print!("{out}");
    Ok(ExitCode::SUCCESS)
}
