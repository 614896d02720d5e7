use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use matineq::checks::{self, CheckContext, CheckResult, SynchronyMode, Verdict};
use matineq::error::{Error, Result};
use matineq::funcspace::{builtin_functions, builtin_weights, lookup_function, lookup_weight};
use matineq::generators::{
    self, generate_spec, random_pair, run_spec, Finding, InstanceSpec, Perturbation,
    DEFAULT_SPECTRAL_WINDOW,
};
use matineq::linalg::{HermitianMatrix, Interval, MatrixJson};
use matineq::orders::Tolerances;
use matineq::quadrature::{QuadratureRule, Scheme};
use matineq::report::{CounterexampleRecord, RunReport};

#[derive(Parser)]
#[command(name = "matineq", version, about = "Numerical checks for matrix convexity inequalities")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Quadrature panels.
    #[arg(long, global = true, default_value_t = 32)]
    panels: usize,
    /// Quadrature scheme: gauss-legendre-composite or composite-simpson.
    #[arg(long, global = true, default_value = "gauss-legendre-composite")]
    scheme: String,
    /// Gauss nodes per panel.
    #[arg(long, global = true, default_value_t = 5)]
    nodes_per_panel: usize,
    /// Absolute slack tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol_abs: f64,
    /// Relative slack tolerance.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol_rel: f64,
    /// Report file (verify/sweep) or findings directory (hunt); default stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Master random seed.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Evaluate even when a required hypothesis flag is unmet.
    #[arg(long, global = true)]
    force: bool,
    /// Omit the timestamp so reports are byte-stable.
    #[arg(long, global = true)]
    no_timestamp: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the theorem, function, and weight registries.
    List,
    /// Check one instance of one theorem.
    Verify(VerifyArgs),
    /// Random property sweep over admissible instances.
    Sweep(SweepArgs),
    /// Random search for violations, optionally with a dropped hypothesis.
    Hunt(HuntArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Theorem id (see `list`).
    #[arg(long)]
    theorem: Option<String>,
    /// Scalar function id.
    #[arg(long)]
    f: Option<String>,
    /// Second function id (chebyshev theorems).
    #[arg(long)]
    g: Option<String>,
    /// Weight function id.
    #[arg(long)]
    p: Option<String>,
    /// Left endpoint for interval-parameterized scalar theorems.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    a: f64,
    /// Right endpoint for interval-parameterized scalar theorems.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    b: f64,
    /// Matrix file A (JSON: n, re, optional im).
    #[arg(long = "A")]
    matrix_a: Option<PathBuf>,
    /// Matrix file B.
    #[arg(long = "B")]
    matrix_b: Option<PathBuf>,
    /// Dimension for generated matrices.
    #[arg(long)]
    n: Option<usize>,
    /// Spectral window "lo,hi" for generated matrices.
    #[arg(long)]
    interval: Option<String>,
    /// Reverse-inequality weight alpha.
    #[arg(long)]
    alpha: Option<f64>,
    /// Expected synchrony mode (chebyshev-variance).
    #[arg(long)]
    mode: Option<ModeArg>,
    /// Replay a persisted counterexample record or instance spec.
    #[arg(long)]
    record: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Theorem id or "all".
    #[arg(long, default_value = "all")]
    theorem: String,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    /// Largest matrix dimension.
    #[arg(long, default_value_t = 3)]
    nmax: usize,
    /// Spectral window "lo,hi" for generated matrices.
    #[arg(long)]
    interval: Option<String>,
    /// Pin every instance to this function id.
    #[arg(long)]
    f: Option<String>,
    /// Pin every instance to this weight id.
    #[arg(long)]
    p: Option<String>,
}

#[derive(Args)]
struct HuntArgs {
    #[arg(long)]
    theorem: String,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    /// Hypothesis to drop: none, drop-symmetry, drop-monotone-weight,
    /// drop-convexity.
    #[arg(long, default_value = "none")]
    perturb: String,
    /// Expected outcome; exit 0 iff matched.
    #[arg(long, value_enum, default_value_t = Expect::None)]
    expect: Expect,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Synchronous,
    Asynchronous,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Expect {
    None,
    Violations,
}

fn parse_scheme(s: &str) -> Result<Scheme> {
    match s {
        "gauss-legendre-composite" => Ok(Scheme::GaussLegendreComposite),
        "composite-simpson" => Ok(Scheme::CompositeSimpson),
        _ => Err(Error::UnknownId {
            kind: "scheme",
            id: s.to_string(),
        }),
    }
}

fn parse_interval(s: &str) -> Result<Interval> {
    let (lo, hi) = s.split_once(',').ok_or(Error::MissingArgument(
        "interval must be \"lo,hi\"",
    ))?;
    let lo: f64 = lo
        .trim()
        .parse()
        .map_err(|_| Error::MissingArgument("interval lower bound"))?;
    let hi: f64 = hi
        .trim()
        .parse()
        .map_err(|_| Error::MissingArgument("interval upper bound"))?;
    Interval::new(lo, hi)
}

fn context(cli: &Cli) -> Result<CheckContext> {
    Ok(CheckContext {
        rule: QuadratureRule {
            scheme: parse_scheme(&cli.scheme)?,
            panels: cli.panels,
            nodes_per_panel: cli.nodes_per_panel,
        },
        tols: Tolerances {
            tol_abs: cli.tol_abs,
            tol_rel: cli.tol_rel,
        },
        force: cli.force,
    })
}

fn emit_report(cli: &Cli, results: Vec<CheckResult>, ctx: &CheckContext) -> Result<RunReport> {
    let report = RunReport::new(results, ctx.rule, ctx.tols, !cli.no_timestamp);
    let json = report.to_json_pretty()?;
    match &cli.out {
        Some(path) => std::fs::write(path, json + "\n")?,
        None => println!("{json}"),
    }
    Ok(report)
}

fn load_matrix(path: &Path) -> Result<HermitianMatrix> {
    let text = std::fs::read_to_string(path)?;
    let json: MatrixJson = serde_json::from_str(&text)?;
    HermitianMatrix::from_json(&json)
}

fn cmd_list() {
    println!("theorems:");
    let mut ids: Vec<&str> = checks::THEOREM_IDS.to_vec();
    ids.sort_unstable();
    for id in ids {
        println!("  {id}");
    }
    println!("functions:");
    let mut fns = builtin_functions();
    fns.sort_by(|a, b| a.id().cmp(b.id()));
    for f in fns {
        let fl = f.flags;
        let mut tags = Vec::new();
        for (on, tag) in [
            (fl.convex, "convex"),
            (fl.log_convex, "log-convex"),
            (fl.operator_convex, "operator-convex"),
            (fl.monotone_increasing, "increasing"),
            (fl.monotone_decreasing, "decreasing"),
            (fl.positive, "positive"),
            (f.differentiable(), "differentiable"),
        ] {
            if on {
                tags.push(tag);
            }
        }
        println!("  {} [{}]", f.id(), tags.join(", "));
    }
    println!("weights:");
    let mut ws = builtin_weights();
    ws.sort_by(|a, b| a.id().cmp(b.id()));
    for w in ws {
        let fl = w.flags;
        let mut tags = Vec::new();
        for (on, tag) in [
            (fl.nonnegative, "nonnegative"),
            (fl.symmetric, "symmetric"),
            (fl.nondecreasing_first_half, "nondecreasing-first-half"),
            (fl.strictly_positive, "strictly-positive"),
            (fl.normalized, "normalized"),
        ] {
            if on {
                tags.push(tag);
            }
        }
        println!("  {} [{}]", w.id(), tags.join(", "));
    }
}

fn spec_from_record(path: &Path) -> Result<(InstanceSpec, bool)> {
    let text = std::fs::read_to_string(path)?;
    if let Ok(rec) = serde_json::from_str::<CounterexampleRecord>(&text) {
        return Ok((rec.spec, rec.forced));
    }
    if let Ok(finding) = serde_json::from_str::<Finding>(&text) {
        return Ok((finding.spec, false));
    }
    Ok((serde_json::from_str::<InstanceSpec>(&text)?, false))
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> Result<u8> {
    let ctx = context(cli)?;
    let result = if let Some(record) = &args.record {
        let (spec, forced) = spec_from_record(record)?;
        let replay_ctx = CheckContext {
            force: ctx.force || forced,
            ..ctx
        };
        run_spec(&spec, &replay_ctx)?
    } else {
        let theorem = args
            .theorem
            .clone()
            .ok_or(Error::MissingArgument("--theorem"))?;
        if !checks::THEOREM_IDS.contains(&theorem.as_str()) {
            return Err(Error::UnknownId {
                kind: "theorem",
                id: theorem,
            });
        }
        if checks::is_matrix_theorem(&theorem) {
            verify_matrix(&theorem, args, cli, &ctx)?
        } else {
            verify_scalar(&theorem, args, &ctx)?
        }
    };
    let code = match result.verdict {
        Verdict::Pass => 0,
        Verdict::Violated => 2,
        Verdict::HypothesisUnmet => 3,
        Verdict::Error => 4,
    };
    emit_report(cli, vec![result], &ctx)?;
    Ok(code)
}

fn verify_scalar(theorem: &str, args: &VerifyArgs, ctx: &CheckContext) -> Result<CheckResult> {
    let function_id = args.f.clone().ok_or(Error::MissingArgument("--f"))?;
    let interval = Interval::new(args.a.min(args.b), args.a.max(args.b))?;
    let spec = InstanceSpec {
        theorem_id: theorem.to_string(),
        seed: 0,
        n: 1,
        interval,
        function_id,
        second_function_id: args.g.clone(),
        weight_id: args.p.clone(),
        weight_recipe: None,
        alpha: args.alpha,
        mode: args.mode.map(|m| match m {
            ModeArg::Synchronous => SynchronyMode::Synchronous,
            ModeArg::Asynchronous => SynchronyMode::Asynchronous,
        }),
    };
    run_spec(&spec, ctx)
}

fn verify_matrix(
    theorem: &str,
    args: &VerifyArgs,
    cli: &Cli,
    ctx: &CheckContext,
) -> Result<CheckResult> {
    let f = lookup_function(args.f.as_deref().ok_or(Error::MissingArgument("--f"))?)?;
    let p = lookup_weight(args.p.as_deref().ok_or(Error::MissingArgument("--p"))?)?;
    let (a, b, source) = match (&args.matrix_a, &args.matrix_b) {
        (Some(pa), Some(pb)) => (
            load_matrix(pa)?,
            load_matrix(pb)?,
            format!("file:{},{}", pa.display(), pb.display()),
        ),
        (None, None) => {
            let n = args.n.unwrap_or(2);
            let window = match &args.interval {
                Some(s) => parse_interval(s)?,
                None => DEFAULT_SPECTRAL_WINDOW,
            };
            let (a, b) = random_pair(cli.seed, n, &window);
            (a, b, format!("seed:{}", cli.seed))
        }
        _ => return Err(Error::MissingArgument("both --A and --B")),
    };
    let alpha = args.alpha.unwrap_or(1.0);
    let mut result = match theorem {
        "matrix-fejer-lower" => checks::check_matrix_fejer_lower(&f, &p, &a, &b, ctx),
        "matrix-fejer-upper" => checks::check_matrix_fejer_upper(&f, &p, &a, &b, ctx),
        "log-fejer" => checks::check_log_fejer(&f, &p, &a, &b, ctx),
        "eig-product-fejer" => checks::check_eig_product_fejer(&f, &p, &a, &b, ctx),
        "operator-levin-steckin" => checks::check_operator_levin_steckin(&f, &p, &a, &b, ctx),
        "mond-pecaric-reverse" => {
            checks::check_mond_pecaric_reverse(&f, &p, &a, &b, alpha, None, None, ctx)
        }
        _ => unreachable!("matrix theorem list is closed"),
    };
    result.instance.matrix_source = Some(source);
    Ok(result)
}

fn cmd_sweep(cli: &Cli, args: &SweepArgs) -> Result<u8> {
    let ctx = context(cli)?;
    let window = match &args.interval {
        Some(s) => parse_interval(s)?,
        None => DEFAULT_SPECTRAL_WINDOW,
    };
    if args.trials == 0 {
        return Err(Error::ParameterOutOfRange {
            name: "trials",
            value: 0.0,
        });
    }
    let theorems: Vec<String> = if args.theorem == "all" {
        checks::THEOREM_IDS.iter().map(|s| s.to_string()).collect()
    } else {
        vec![args.theorem.clone()]
    };
    let mut specs = Vec::new();
    for theorem in &theorems {
        for i in 0..args.trials {
            let trial_seed = generators::derive_seed(cli.seed, i as u64);
            let mut spec = generate_spec(theorem, trial_seed, args.nmax, &window)?;
            if let Some(f) = &args.f {
                spec.function_id = f.clone();
            }
            if let Some(p) = &args.p {
                spec.weight_id = Some(p.clone());
                spec.weight_recipe = None;
            }
            specs.push(spec);
        }
    }
    let results: Vec<CheckResult> = specs
        .par_iter()
        .map(|spec| run_spec(spec, &ctx))
        .collect::<Result<_>>()?;
    let report = emit_report(cli, results, &ctx)?;
    Ok(if report.summary.error > 0 {
        4
    } else if report.summary.violated > 0 {
        2
    } else {
        0
    })
}

fn cmd_hunt(cli: &Cli, args: &HuntArgs) -> Result<u8> {
    let ctx = context(cli)?;
    let perturbation: Perturbation = args.perturb.parse()?;
    let findings = generators::hunt(&args.theorem, args.trials, cli.seed, perturbation, &ctx)?;
    let dir = cli
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("findings"));
    std::fs::create_dir_all(&dir)?;
    let mut results = Vec::new();
    for (i, finding) in findings.iter().enumerate() {
        let (ma, mb) = if checks::is_matrix_theorem(&finding.spec.theorem_id) {
            let (a, b) = random_pair(finding.spec.seed, finding.spec.n, &finding.spec.interval);
            (Some(a.to_json()), Some(b.to_json()))
        } else {
            (None, None)
        };
        let record = CounterexampleRecord {
            spec: finding.spec.clone(),
            forced: perturbation != Perturbation::None,
            matrix_a: ma,
            matrix_b: mb,
            result: finding.result.clone(),
        };
        let path = dir.join(format!("finding-{i:04}.json"));
        std::fs::write(&path, serde_json::to_string_pretty(&record)? + "\n")?;
        results.push(finding.result.clone());
    }
    let report = RunReport::new(results, ctx.rule, ctx.tols, !cli.no_timestamp);
    println!("{}", report.to_json_pretty()?);
    let matched = match args.expect {
        Expect::None => findings.is_empty(),
        Expect::Violations => !findings.is_empty(),
    };
    Ok(if matched { 0 } else { 1 })
}

fn main() -> ExitCode {
    if let Ok(v) = std::env::var("MATINEQ_THREADS") {
        if let Ok(k) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(k.max(1))
                .build_global();
        }
    }
    let cli = Cli::parse();
    let outcome = match &cli.cmd {
        Cmd::List => {
            cmd_list();
            Ok(0)
        }
        Cmd::Verify(args) => cmd_verify(&cli, args),
        Cmd::Sweep(args) => cmd_sweep(&cli, args),
        Cmd::Hunt(args) => cmd_hunt(&cli, args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(4)
        }
    }
}
