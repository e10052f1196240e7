//! `qri`: quantile ratio index estimation, decomposition and simulation.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod io;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use qri::distributions::lognormal_ik;
use qri::estimation::{exact_i, exact_ik, ik_hat_grid, DecompositionEstimate, ExactSe, Method};
use qri::grouped::{self, SynthConfig, STANDARD_PROBS};
use qri::sim::{self, CoverageReport};
use qri::theory::{self, QuadratureConfig};
use qri::{DistributionSpec, GridConfig, QriError, SeededRng, SortedSample, SymmetricPartition};

use crate::output::{decomposition_table, envelope, values_line};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data { name: &'static str, message: String },
}

impl CliError {
    fn parse(message: String) -> Self {
        CliError::Data {
            name: "ParseError",
            message,
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data { .. } => 1,
        }
    }
}

impl From<QriError> for CliError {
    fn from(e: QriError) -> Self {
        CliError::Data {
            name: e.name(),
            message: e.to_string(),
        }
    }
}

type CliResult = Result<(), CliError>;

#[derive(Parser)]
#[command(name = "qri", version, about = "Quantile ratio index: estimation, decomposition and simulation")]
struct Cli {
    /// Worker threads for parallel commands (default: all cores)
    #[arg(long, env = "QRI_THREADS", global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the index and its decomposition from a sample of incomes
    Estimate(EstimateArgs),
    /// Exact order-statistic decomposition of a sample
    DecomposeExact(ExactArgs),
    /// Population values for a parametric distribution
    Theory(TheoryArgs),
    /// Build a synthetic population from a grouped income table
    Synth(SynthArgs),
    /// Percentile table of a sample
    Percentiles(PercentileArgs),
    /// Kernel density curve of a sample
    Kde(KdeArgs),
    /// Monte-Carlo coverage of the decomposition intervals
    Coverage(CoverageArgs),
}

#[derive(Args, Clone)]
struct PartitionArgs {
    /// Interior cuts in (0, 1/2), e.g. `0.25` or `0.2,0.4`
    #[arg(long, value_name = "CUTS", conflicts_with = "equi")]
    partition: Option<String>,

    /// Equal-weight partition with K members
    #[arg(long, value_name = "K")]
    equi: Option<usize>,
}

impl PartitionArgs {
    fn resolve(&self, default: SymmetricPartition) -> Result<SymmetricPartition, CliError> {
        Ok(match (&self.partition, self.equi) {
            (Some(cuts), _) => cuts.parse()?,
            (None, Some(k)) => SymmetricPartition::equi(k)?,
            (None, None) => default,
        })
    }
}

#[derive(Args, Clone)]
struct GridArgs {
    /// Grid points per integral
    #[arg(long, value_name = "J", default_value_t = qri::estimation::DEFAULT_GRID)]
    grid: usize,

    /// One minus the nominal interval coverage
    #[arg(long, default_value_t = qri::estimation::DEFAULT_ALPHA)]
    alpha: f64,

    /// Fixed half-width for quantile-density estimates (default: Bofinger rule)
    #[arg(long, value_name = "H")]
    bandwidth: Option<f64>,
}

impl GridArgs {
    fn config(&self) -> Result<GridConfig, CliError> {
        if let Some(h) = self.bandwidth {
            if !(h > 0.0 && h < 0.5) {
                return Err(CliError::Usage(format!("--bandwidth must lie in (0, 0.5), got {h}")));
            }
        }
        let cfg = GridConfig {
            grid: self.grid,
            alpha: self.alpha,
            bandwidth: self.bandwidth,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Grid,
    Exact,
}

#[derive(Args)]
struct EstimateArgs {
    /// One-column CSV of incomes (header optional)
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,

    #[command(flatten)]
    partition: PartitionArgs,

    #[command(flatten)]
    grid: GridArgs,

    #[arg(long, value_enum, default_value = "grid")]
    method: MethodArg,

    /// Print JSON instead of a table
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ExactArgs {
    /// One-column CSV of incomes (header optional)
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,

    #[command(flatten)]
    partition: PartitionArgs,

    #[command(flatten)]
    grid: GridArgs,

    /// Skip the grid-based standard errors
    #[arg(long)]
    no_se: bool,

    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct TheoryArgs {
    /// Distribution literal, e.g. `lognormal:0,1`, `pareto2:4,1`, `chisq:4`
    #[arg(long)]
    dist: DistributionSpec,

    #[command(flatten)]
    partition: PartitionArgs,

    /// Absolute quadrature tolerance
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,

    /// Write the ratio curve as `p,R` CSV
    #[arg(long, value_name = "FILE")]
    curve: Option<PathBuf>,

    /// Points on the ratio curve
    #[arg(long, default_value_t = 200)]
    points: usize,

    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SynthArgs {
    /// Bin table CSV (`lower,upper,count`) or a bundled table: `dwi:YEAR`, `nhw:YEAR`
    #[arg(long, value_name = "FILE|NAME")]
    bins: String,

    /// Pareto II shape of the open top bin
    #[arg(long, default_value_t = 4.0)]
    tail_shape: f64,

    /// Synthetic values per table unit
    #[arg(long, default_value_t = 10.0)]
    scale: f64,

    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Keep a simple random sample of this size
    #[arg(long, value_name = "N")]
    subsample: Option<usize>,

    /// Output CSV (default: stdout)
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Print a JSON summary (requires --out)
    #[arg(long, requires = "out")]
    json: bool,
}

#[derive(Args)]
struct PercentileArgs {
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,

    /// Comma-separated probabilities
    #[arg(long, value_delimiter = ',', default_values_t = STANDARD_PROBS)]
    probs: Vec<f64>,

    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct KdeArgs {
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,

    /// Upper end of the evaluation grid
    #[arg(long, default_value_t = 2500.0)]
    truncate: f64,

    /// Evaluation points on [0, truncate]
    #[arg(long, default_value_t = 512)]
    points: usize,

    /// Output CSV with columns `x,density` (default: stdout)
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    /// Six families at n = 100 and 1000
    Desk,
    /// All sixteen families at n = 100, 500 and 1000
    Full,
}

#[derive(Args)]
struct CoverageArgs {
    /// Distribution literal (ignored with --suite)
    #[arg(long, required_unless_present = "suite")]
    dist: Option<DistributionSpec>,

    /// Sample size (ignored with --suite)
    #[arg(long, default_value_t = 1000)]
    n: usize,

    /// Run a batch of families and sizes
    #[arg(long, value_enum, conflicts_with = "dist")]
    suite: Option<Suite>,

    #[command(flatten)]
    partition: PartitionArgs,

    #[arg(long, default_value_t = 1000)]
    trials: usize,

    #[command(flatten)]
    grid: GridArgs,

    #[arg(long, default_value_t = 7)]
    seed: u64,

    /// Write the JSON report here
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,

    #[arg(long)]
    json: bool,
}

fn grid_json(cfg: &GridConfig) -> serde_json::Value {
    json!({
        "grid": cfg.grid,
        "alpha": cfg.alpha,
        "bandwidth": cfg.bandwidth.map_or_else(|| json!("bofinger"), |h| json!(h)),
    })
}

fn decompose_exact(
    s: &SortedSample,
    partition: &SymmetricPartition,
    se: ExactSe,
) -> Result<DecompositionEstimate, QriError> {
    if partition.len() > 1 {
        return exact_ik(s, partition, se);
    }
    let total = exact_i(s, se)?;
    Ok(DecompositionEstimate {
        partition: partition.clone(),
        components: vec![total.clone()],
        weights: vec![1.0],
        total,
        method: Method::Exact,
    })
}

fn report_decomposition(
    command: &str,
    input: &std::path::Path,
    s: &SortedSample,
    d: &DecompositionEstimate,
    cfg: Option<&GridConfig>,
    json: bool,
) -> CliResult {
    let body = if json {
        let config = json!({
            "input": input.display().to_string(),
            "n": s.len(),
            "zero_fraction": s.zero_fraction(),
            "partition": d.partition.interior_cuts(),
            "method": d.method,
            "grid": cfg.map(grid_json),
        });
        envelope(command, config, d)
    } else {
        decomposition_table(d, s.len())
    };
    io::emit(None, &body)
}

fn estimate(args: EstimateArgs) -> CliResult {
    let cfg = args.grid.config()?;
    let partition = args.partition.resolve(SymmetricPartition::new(&[])?)?;
    let s = io::read_sample(&args.input)?;
    let d = match args.method {
        MethodArg::Grid => ik_hat_grid(&s, &partition, &cfg)?,
        MethodArg::Exact => decompose_exact(&s, &partition, ExactSe::BorrowGrid(cfg))?,
    };
    report_decomposition("estimate", &args.input, &s, &d, Some(&cfg), args.json)
}

fn exact(args: ExactArgs) -> CliResult {
    let cfg = args.grid.config()?;
    let partition = args.partition.resolve(SymmetricPartition::quartile())?;
    let s = io::read_sample(&args.input)?;
    let se = if args.no_se { ExactSe::None } else { ExactSe::BorrowGrid(cfg) };
    let d = decompose_exact(&s, &partition, se)?;
    let cfg = (!args.no_se).then_some(cfg);
    report_decomposition("decompose-exact", &args.input, &s, &d, cfg.as_ref(), args.json)
}

fn theory_cmd(args: TheoryArgs) -> CliResult {
    if !(args.tol > 0.0) {
        return Err(CliError::Usage(format!("--tol must be positive, got {}", args.tol)));
    }
    io::check_output(args.curve.as_ref())?;
    let d = args.dist;
    let partition = args.partition.resolve(SymmetricPartition::new(&[])?)?;
    let qcfg = QuadratureConfig::with_tolerance(args.tol);
    let total = theory::true_i(&d, &qcfg)?;
    let components = theory::true_ik(&d, &partition, &qcfg)?;
    let closed = match d.family() {
        qri::distributions::Family::Lognormal { sigma, .. } => Some(lognormal_ik(sigma, &partition)?),
        _ => None,
    };
    if let Some(path) = &args.curve {
        if args.points == 0 {
            return Err(CliError::Usage("--points must be positive".into()));
        }
        let curve = theory::r_curve(&d, args.points)?;
        io::emit(Some(path), &io::curve_csv("p,R", &curve))?;
    }
    let body = if args.json {
        let config = json!({
            "distribution": d,
            "partition": partition.interior_cuts(),
            "quadrature": { "method": qcfg.method, "abs_tol": qcfg.abs_tol, "max_subdivisions": qcfg.max_subdivisions },
            "curve": args.curve.as_ref().map(|p| p.display().to_string()),
        });
        let result = json!({
            "total": total,
            "weights": partition.weights(),
            "components": components,
            "closed_form_components": closed,
        });
        envelope("theory", config, result)
    } else {
        let mut out = format!("{d}\nI = {total:.4}\n");
        if partition.len() > 1 {
            out.push_str(&format!("weights    {}\n", values_line(partition.weights())));
            out.push_str(&format!("components {}\n", values_line(&components)));
        }
        out
    };
    io::emit(None, &body)
}

fn synth(args: SynthArgs) -> CliResult {
    io::check_output(args.out.as_ref())?;
    let bins = io::read_bins(&args.bins)?;
    let cfg = SynthConfig {
        tail_shape: args.tail_shape,
        count_scale: args.scale,
    };
    let mut rng = SeededRng::new(args.seed);
    let mut pop = grouped::synth_population(&bins, &cfg, &mut rng)?;
    let full_size = pop.len();
    if let Some(n) = args.subsample {
        pop = grouped::subsample(&pop, n, &mut rng.derive(1))?;
    }
    io::emit(args.out.as_ref(), &io::income_csv(pop.values()))?;

    let tail = match bins.open_bin() {
        Some(open) => Some((open.lower, bins.tail_level(), grouped::tail_scale(&bins, cfg.tail_shape)?)),
        None => None,
    };
    if args.out.is_none() {
        return Ok(());
    }
    let body = if args.json {
        let config = json!({
            "bins": args.bins,
            "tail_shape": cfg.tail_shape,
            "count_scale": cfg.count_scale,
            "seed": args.seed,
            "rng": rng.algorithm(),
            "subsample": args.subsample,
            "out": args.out.as_ref().map(|p| p.display().to_string()),
        });
        let result = json!({
            "population_size": full_size,
            "written": pop.len(),
            "table_total": bins.total(),
            "tail": tail.map(|(x_q, q, lambda)| json!({ "x_q": x_q, "q": q, "lambda": lambda })),
        });
        envelope("synth", config, result)
    } else {
        let mut out = format!("population {full_size} (table total {:.1}), wrote {}\n", bins.total(), pop.len());
        if let Some((x_q, Some(q), lambda)) = tail {
            out.push_str(&format!("tail: x_q = {x_q}, q = {q:.4}, lambda = {lambda:.4}\n"));
        }
        out
    };
    io::emit(None, &body)
}

fn percentiles(args: PercentileArgs) -> CliResult {
    let s = io::read_sample(&args.input)?;
    let table = grouped::percentile_table(&s, &args.probs)?;
    let index = exact_i(&s, ExactSe::None)?.value;
    let body = if args.json {
        let config = json!({ "input": args.input.display().to_string(), "n": s.len(), "probs": args.probs });
        envelope("percentiles", config, json!({ "table": table, "exact_index": index }))
    } else {
        let mut out = format!("n = {}\n", s.len());
        for (p, v) in &table.rows {
            out.push_str(&format!("P{:<5} {v:.4}\n", format!("{}", p * 100.0)));
        }
        out.push_str(&format!("max    {:.4}\nI      {index:.4}\n", table.max));
        out
    };
    io::emit(None, &body)
}

fn kde(args: KdeArgs) -> CliResult {
    io::check_output(args.out.as_ref())?;
    let s = io::read_sample(&args.input)?;
    let curve = grouped::kde_export(&s, args.truncate, args.points)?;
    io::emit(args.out.as_ref(), &io::curve_csv("x,density", &curve))
}

fn coverage(args: CoverageArgs) -> CliResult {
    io::check_output(args.out.as_ref())?;
    let cfg = args.grid.config()?;
    let partition = args.partition.resolve(SymmetricPartition::quartile())?;
    let jobs: Vec<(DistributionSpec, usize)> = match (args.suite, args.dist) {
        (Some(suite), _) => {
            let (families, sizes): (Vec<usize>, &[usize]) = match suite {
                Suite::Desk => (sim::DESK_SUBSET.to_vec(), &[100, 1000]),
                Suite::Full => ((0..sim::FAMILIES.len()).collect(), &[100, 500, 1000]),
            };
            families
                .iter()
                .flat_map(|&i| {
                    let d: DistributionSpec = sim::FAMILIES[i].1.parse().expect("bundled literal");
                    sizes.iter().map(move |&n| (d, n))
                })
                .collect()
        }
        (None, Some(d)) => vec![(d, args.n)],
        (None, None) => return Err(CliError::Usage("--dist or --suite is required".into())),
    };
    let reports = jobs
        .iter()
        .enumerate()
        .map(|(i, (d, n))| sim::coverage_experiment(d, *n, &partition, args.trials, &cfg, args.seed.wrapping_add(i as u64)))
        .collect::<Result<Vec<CoverageReport>, _>>()?;

    let config = json!({
        "partition": partition.interior_cuts(),
        "trials": args.trials,
        "grid": grid_json(&cfg),
        "seed": args.seed,
        "rng": qri::distributions::RNG_ALGORITHM,
        "suite": args.suite.map(|s| match s { Suite::Desk => "desk", Suite::Full => "full" }),
    });
    let doc = if reports.len() == 1 {
        envelope("coverage", config, &reports[0])
    } else {
        envelope("coverage", config, &reports)
    };
    if let Some(path) = &args.out {
        io::emit(Some(path), &doc)?;
    }
    if args.json {
        return io::emit(None, &doc);
    }
    let mut out = format!(
        "nominal {:.3}, {} trials, J = {}, cuts {:?}\n",
        1.0 - cfg.alpha,
        args.trials,
        cfg.grid,
        partition.interior_cuts()
    );
    for r in &reports {
        out.push_str(&format!(
            "{:<16} n={:<5} coverage {}  width {}  failed {}\n",
            r.distribution.to_string(),
            r.n,
            r.coverages().iter().map(|c| format!("{c:.3}")).collect::<Vec<_>>().join(" "),
            r.per_component.iter().map(|c| format!("{:.4}", c.mean_width)).collect::<Vec<_>>().join(" "),
            r.failed_trials
        ));
    }
    io::emit(None, &out)
}

fn run(cli: Cli) -> CliResult {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot configure {threads} threads: {e}")))?;
    }
    match cli.command {
        Command::Estimate(a) => estimate(a),
        Command::DecomposeExact(a) => exact(a),
        Command::Theory(a) => theory_cmd(a),
        Command::Synth(a) => synth(a),
        Command::Percentiles(a) => percentiles(a),
        Command::Kde(a) => kde(a),
        Command::Coverage(a) => coverage(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Usage(msg) => eprintln!("error: {msg}"),
                CliError::Data { name, message } => eprintln!("error: {name}: {message}"),
            }
            ExitCode::from(e.exit_code())
        }
    }
}
