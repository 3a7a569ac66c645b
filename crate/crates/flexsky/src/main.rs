use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use flexsky::bench::{
    self, parse_list, Axis, ConstraintSpec, ExperimentGrid, FileConfig, Figure, Improvement, Profile,
    RunSettings, VerifySettings,
};
use flexsky::metrics::{read_metrics, MetricsSink};
use flexsky::{io, Op};
use flexsky_core::datagen::{generate, Distribution, GenSpec};
use flexsky_core::partition::Strategy;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "flexsky", version, about = "Parallel flexible skyline computation and benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic dataset.
    Gen(GenArgs),
    /// Run an experiment grid and append metrics rows.
    Run(RunArgs),
    /// Compare the parallel engine against brute-force oracles.
    Verify(VerifyArgs),
    /// Turn a metrics file into per-figure plot tables.
    Plotdata(PlotArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value = "anticorrelated")]
    kind: Distribution,
    #[arg(short, long)]
    n: usize,
    #[arg(short, long, default_value_t = 4)]
    d: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = GenSpec::DEFAULT_JITTER)]
    jitter: f64,
    /// Output CSV; a `.meta.toml` sidecar is written next to it.
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum OnOff {
    On,
    Off,
}

#[derive(Args, Default)]
struct ConstraintArgs {
    /// Weight constraint such as `w1 >= w2`; repeatable.
    #[arg(long = "constraint")]
    constraint: Vec<String>,
    #[arg(long)]
    constraints_file: Option<PathBuf>,
    /// Use the whole weight simplex.
    #[arg(long, conflicts_with_all = ["constraint", "constraints_file"])]
    unconstrained: bool,
}

impl ConstraintArgs {
    fn spec(&self) -> anyhow::Result<Option<ConstraintSpec>> {
        if self.unconstrained {
            return Ok(Some(ConstraintSpec::Unconstrained));
        }
        let mut lines = self.constraint.clone();
        if let Some(path) = &self.constraints_file {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            lines.extend(text.lines().map(str::to_string));
        }
        Ok((!lines.is_empty()).then_some(ConstraintSpec::Inequalities(lines)))
    }
}

#[derive(Args)]
struct RunArgs {
    /// TOML file with defaults for any of these options.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    profile: Option<Profile>,
    /// Sweep this axis over the profile's values.
    #[arg(long, value_enum)]
    vary: Option<Axis>,
    #[arg(short, long, value_delimiter = ',')]
    n: Vec<usize>,
    #[arg(short, long, value_delimiter = ',')]
    d: Vec<usize>,
    #[arg(short, long = "partitions", value_delimiter = ',')]
    partitions: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    cores: Vec<usize>,
    #[arg(long = "strategy", value_delimiter = ',')]
    strategies: Vec<String>,
    #[arg(long = "op", value_delimiter = ',')]
    ops: Vec<String>,
    /// Improvement sets such as `base`, `rep`, `rep+noseq`, `gf`.
    #[arg(long, value_delimiter = ',')]
    improvements: Vec<String>,
    /// Representatives per partition; 0 turns them off.
    #[arg(long)]
    representatives: Option<usize>,
    #[arg(long)]
    noseq: bool,
    #[arg(long, value_enum)]
    grid_filter: Option<OnOff>,
    #[arg(long = "seed", value_delimiter = ',')]
    seeds: Vec<u64>,
    #[arg(long)]
    kind: Option<Distribution>,
    /// Dataset CSV to use instead of generated data.
    #[arg(long)]
    dataset: Option<PathBuf>,
    /// 1-based attributes where larger is better.
    #[arg(long, value_delimiter = ',')]
    maximize: Vec<usize>,
    /// 1-based attribute for Sliced partitioning.
    #[arg(long)]
    slice_dim: Option<usize>,
    #[command(flatten)]
    constraints: ConstraintArgs,
    #[arg(long)]
    grid_cap: Option<usize>,
    /// Metrics CSV, appended to.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_delimiter = ',', default_value = "anticorrelated,independent")]
    kind: Vec<Distribution>,
    #[arg(short, long, default_value_t = 300)]
    n: usize,
    #[arg(short, long, default_value_t = 3)]
    d: usize,
    /// Number of seeds, starting at --seed.
    #[arg(long, default_value_t = 10)]
    seeds: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    dataset: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    maximize: Vec<usize>,
    #[arg(short, long = "partitions", value_delimiter = ',', default_value = "1,3,8")]
    partitions: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "2")]
    cores: Vec<usize>,
    #[arg(long = "op", value_delimiter = ',', default_value = "nd,po")]
    ops: Vec<Op>,
    #[arg(long, default_value_t = bench::DEFAULT_VERIFY_CAP)]
    cap: usize,
    /// Skip the final pass to check that the harness notices.
    #[arg(long)]
    inject_fault: bool,
    #[command(flatten)]
    constraints: ConstraintArgs,
}

#[derive(Args)]
struct PlotArgs {
    metrics: PathBuf,
    /// Figures to emit; all when omitted.
    #[arg(long = "figure", value_delimiter = ',')]
    figures: Vec<String>,
    #[arg(short, long, default_value = "plots")]
    out_dir: PathBuf,
}

#[derive(Serialize)]
struct GenMeta<'a> {
    kind: &'a str,
    n: usize,
    d: usize,
    seed: u64,
    jitter: f64,
}

fn cmd_gen(args: &GenArgs) -> anyhow::Result<()> {
    let spec = GenSpec { jitter: args.jitter, ..GenSpec::new(args.kind, args.n, args.d, args.seed) };
    let data = generate(&spec)?;
    let file = fs::File::create(&args.output).with_context(|| format!("creating {}", args.output.display()))?;
    io::write_dataset(file, &data)?;
    let meta = GenMeta { kind: args.kind.name(), n: args.n, d: args.d, seed: args.seed, jitter: args.jitter };
    fs::write(sidecar(&args.output), toml::to_string(&meta)?)?;
    eprintln!("wrote {} tuples to {}", data.len(), args.output.display());
    Ok(())
}

fn sidecar(path: &Path) -> PathBuf {
    let mut name = path.file_stem().unwrap_or_default().to_os_string();
    name.push(".meta.toml");
    path.with_file_name(name)
}

fn one_based(values: &[usize], what: &str) -> anyhow::Result<Vec<usize>> {
    values
        .iter()
        .map(|&k| if k == 0 { bail!("{what} is 1-based; got 0") } else { Ok(k - 1) })
        .collect()
}

/// Flags first, then the config file, then the profile.
fn pick<T: Clone>(flag: Vec<T>, file: Option<Vec<T>>, profile: Vec<T>) -> Vec<T> {
    if !flag.is_empty() {
        flag
    } else {
        file.unwrap_or(profile)
    }
}

fn run_plan(args: RunArgs) -> anyhow::Result<(ExperimentGrid, RunSettings, PathBuf)> {
    let file = match &args.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let profile = args.profile.or(file.profile).unwrap_or(Profile::Desk);
    let base = ExperimentGrid::from_profile(profile, args.vary.or(file.vary));

    let strategies: Vec<Strategy> = parse_list(&pick(args.strategies, file.strategies, vec![]))?;
    let ops: Vec<Op> = parse_list(&pick(args.ops, file.ops, vec![]))?;
    let representatives = args.representatives.or(file.representatives).unwrap_or(bench::DEFAULT_REPRESENTATIVES);
    let improvements: Vec<Improvement> = match pick(args.improvements, file.improvements, vec![]) {
        list if !list.is_empty() => parse_list(&list)?,
        _ => vec![Improvement {
            representatives: representatives > 0,
            noseq: args.noseq,
            grid_filter: matches!(args.grid_filter, Some(OnOff::On)),
        }],
    };
    let grid = ExperimentGrid {
        n: pick(args.n, file.n, base.n),
        d: pick(args.d, file.d, base.d),
        p: pick(args.partitions, file.p, base.p),
        cores: pick(args.cores, file.cores, base.cores),
        strategies: if strategies.is_empty() { base.strategies } else { strategies },
        ops: if ops.is_empty() { base.ops } else { ops },
        improvements,
        seeds: pick(args.seeds, file.seeds, base.seeds),
        cap: args.grid_cap.or(file.grid_cap).unwrap_or(base.cap),
    };

    let constraints = match args.constraints.spec()? {
        Some(spec) => spec,
        None if file.unconstrained == Some(true) => ConstraintSpec::Unconstrained,
        None => file.constraints.map(ConstraintSpec::Inequalities).unwrap_or_default(),
    };
    let kind = match (args.kind, file.kind) {
        (Some(k), _) => k,
        (None, Some(k)) => k.parse()?,
        (None, None) => Distribution::Anticorrelated,
    };
    let slice_dim = args.slice_dim.or(file.slice_dim).unwrap_or(1);
    let settings = RunSettings {
        kind,
        dataset: args.dataset.or(file.dataset),
        maximize: one_based(&args.maximize, "--maximize")?,
        constraints,
        representatives,
        slice_dim: one_based(&[slice_dim], "--slice-dim")?[0],
    };
    let output = args.output.or(file.output).unwrap_or_else(|| PathBuf::from("metrics.csv"));
    Ok((grid, settings, output))
}

fn cmd_run(args: RunArgs) -> anyhow::Result<()> {
    let (grid, settings, output) = run_plan(args)?;
    let mut sink = MetricsSink::append(&output)?;
    let total = grid.len();
    let mut done = 0;
    let rows = bench::cmd_run(&grid, &settings, |row| {
        done += 1;
        if row.is_ok() {
            eprintln!(
                "[{done}/{total}] {} n={} d={} p={} cores={} seed={}: {:.3}s, union {}, result {}",
                row.series(),
                row.n,
                row.d,
                row.p,
                row.cores,
                row.seed,
                row.t_total,
                row.union_size,
                row.result_size
            );
        } else {
            eprintln!("[{done}/{total}] {} failed: {}", row.series(), row.status);
        }
        sink.write(row)
    })?;
    let failed = rows.iter().filter(|r| !r.is_ok()).count();
    eprintln!("{} rows appended to {} ({failed} failed)", rows.len(), output.display());
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> anyhow::Result<bool> {
    let settings = VerifySettings {
        kinds: args.kind,
        n: args.n,
        d: args.d,
        seeds: (args.seed..args.seed + args.seeds).collect(),
        dataset: args.dataset,
        maximize: one_based(&args.maximize, "--maximize")?,
        constraints: args.constraints.spec()?.unwrap_or_default(),
        partitions: args.partitions,
        cores: args.cores,
        ops: args.ops,
        cap: args.cap,
        inject_fault: args.inject_fault,
    };
    let report = bench::cmd_verify(&settings)?;
    for m in &report.mismatches {
        println!("MISMATCH {m}");
    }
    for c in &report.containment_failures {
        println!("CONTAINMENT {c}");
    }
    for e in &report.errors {
        println!("ERROR {e}");
    }
    let verdict = if report.passed() { "PASS" } else { "FAIL" };
    println!(
        "{verdict}: {} datasets, {} checks, {} mismatches",
        report.datasets,
        report.checks,
        report.mismatches.len()
    );
    Ok(report.passed())
}

fn cmd_plotdata(args: PlotArgs) -> anyhow::Result<()> {
    let figures: Vec<Figure> =
        if args.figures.is_empty() { Figure::ALL.to_vec() } else { parse_list(&args.figures)? };
    let rows = read_metrics(&args.metrics).with_context(|| format!("reading {}", args.metrics.display()))?;
    if rows.is_empty() {
        bail!("{} has no rows", args.metrics.display());
    }
    fs::create_dir_all(&args.out_dir)?;
    for figure in figures {
        let path = args.out_dir.join(format!("{}.csv", figure.name()));
        fs::write(&path, bench::plot_table(&rows, figure))?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Gen(args) => cmd_gen(&args).map(|_| true),
        Command::Run(args) => cmd_run(args).map(|_| true),
        Command::Verify(args) => cmd_verify(args),
        Command::Plotdata(args) => cmd_plotdata(args).map(|_| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
