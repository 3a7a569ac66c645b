//! Experiment harness: parameter grids, metric collection, oracle
//! verification and plot data.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, ensure, Context};
use flexsky_core::datagen::{generate, Distribution, GenSpec};
use flexsky_core::oracle::{nd_bruteforce, po_full_lp};
use flexsky_core::partition::Strategy;
use flexsky_core::{skyline_bruteforce, Dataset, FDomContext, Tuple, TupleId, WeightConstraintSet};
use serde::Deserialize;

use crate::engine::{run_parallel, EngineConfig, Op};
use crate::io;
use crate::metrics::{MetricsRow, RowKey};

pub const DEFAULT_GRID_CAP: usize = 512;
pub const DEFAULT_REPRESENTATIVES: usize = 5;
pub const DEFAULT_VERIFY_CAP: usize = 2000;

/// Optional improvements on top of a partitioning strategy.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Improvement {
    pub representatives: bool,
    pub noseq: bool,
    pub grid_filter: bool,
}

impl Improvement {
    pub const BASE: Self = Self { representatives: false, noseq: false, grid_filter: false };

    pub fn name(self) -> String {
        let mut parts = Vec::new();
        if self.representatives {
            parts.push("rep");
        }
        if self.noseq {
            parts.push("noseq");
        }
        if self.grid_filter {
            parts.push("gf");
        }
        if parts.is_empty() {
            "base".into()
        } else {
            parts.join("+")
        }
    }
}

impl fmt::Display for Improvement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Improvement {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        let mut imp = Self::BASE;
        for token in s.split('+').map(str::trim) {
            match token.to_ascii_lowercase().as_str() {
                "base" | "none" => {}
                "rep" | "reps" | "representatives" => imp.representatives = true,
                "noseq" => imp.noseq = true,
                "gf" | "grid-filter" => imp.grid_filter = true,
                other => bail!("unknown improvement `{other}` (expected base, rep, noseq, gf joined by +)"),
            }
        }
        Ok(imp)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    /// Laptop-sized grid.
    Desk,
    /// The 1M to 10M tuple, 30-core grid.
    Paper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    N,
    D,
    P,
    Cores,
}

struct AxisValues {
    n: (&'static [usize], usize),
    d: (&'static [usize], usize),
    p: (&'static [usize], usize),
    cores: (&'static [usize], usize),
}

impl Profile {
    fn values(self) -> AxisValues {
        match self {
            Profile::Desk => AxisValues {
                n: (&[10_000, 50_000, 100_000], 50_000),
                d: (&[2, 3, 4], 4),
                p: (&[4, 16, 32], 16),
                cores: (&[1, 2, 4, 8], 4),
            },
            Profile::Paper => AxisValues {
                n: (&[200_000, 500_000, 1_000_000, 2_000_000, 5_000_000, 10_000_000], 1_000_000),
                d: (&[2, 4, 6, 7], 4),
                p: (&[10, 50, 100, 150, 200, 300], 100),
                cores: (&[5, 10, 20, 30], 30),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridPoint {
    pub n: usize,
    pub d: usize,
    pub p: usize,
    pub cores: usize,
    pub strategy: Strategy,
    pub op: Op,
    pub improvement: Improvement,
    pub seed: u64,
}

impl GridPoint {
    pub fn key(&self) -> RowKey {
        RowKey {
            strategy: self.strategy.name().into(),
            improvements: self.improvement.name(),
            op: self.op.name().into(),
            n: self.n,
            d: self.d,
            p: self.p,
            cores: self.cores,
            seed: self.seed,
        }
    }
}

/// Cross product of every axis.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentGrid {
    pub n: Vec<usize>,
    pub d: Vec<usize>,
    pub p: Vec<usize>,
    pub cores: Vec<usize>,
    pub strategies: Vec<Strategy>,
    pub ops: Vec<Op>,
    pub improvements: Vec<Improvement>,
    pub seeds: Vec<u64>,
    pub cap: usize,
}

impl ExperimentGrid {
    /// Profile defaults everywhere, with `vary` swept over the profile's
    /// full list.
    pub fn from_profile(profile: Profile, vary: Option<Axis>) -> Self {
        let v = profile.values();
        let pick = |axis: Axis, (all, default): (&'static [usize], usize)| {
            if vary == Some(axis) {
                all.to_vec()
            } else {
                vec![default]
            }
        };
        Self {
            n: pick(Axis::N, v.n),
            d: pick(Axis::D, v.d),
            p: pick(Axis::P, v.p),
            cores: pick(Axis::Cores, v.cores),
            strategies: Strategy::ALL.to_vec(),
            ops: vec![Op::Nd],
            improvements: vec![Improvement { representatives: true, ..Improvement::BASE }],
            seeds: vec![0],
            cap: DEFAULT_GRID_CAP,
        }
    }

    pub fn len(&self) -> usize {
        [
            self.n.len(),
            self.d.len(),
            self.p.len(),
            self.cores.len(),
            self.strategies.len(),
            self.ops.len(),
            self.improvements.len(),
            self.seeds.len(),
        ]
        .iter()
        .product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Points ordered so that runs sharing a dataset are adjacent.
    pub fn points(&self) -> anyhow::Result<Vec<GridPoint>> {
        for (name, empty) in [
            ("n", self.n.is_empty()),
            ("d", self.d.is_empty()),
            ("p", self.p.is_empty()),
            ("cores", self.cores.is_empty()),
            ("strategies", self.strategies.is_empty()),
            ("ops", self.ops.is_empty()),
            ("improvements", self.improvements.is_empty()),
            ("seeds", self.seeds.is_empty()),
        ] {
            ensure!(!empty, "experiment grid axis `{name}` is empty");
        }
        ensure!(
            self.len() <= self.cap,
            "experiment grid has {} points, above the cap of {} (raise it with --grid-cap)",
            self.len(),
            self.cap
        );
        let mut out = Vec::with_capacity(self.len());
        for &n in &self.n {
            for &d in &self.d {
                for &seed in &self.seeds {
                    for &op in &self.ops {
                        for &p in &self.p {
                            for &cores in &self.cores {
                                for &strategy in &self.strategies {
                                    for &improvement in &self.improvements {
                                        out.push(GridPoint { n, d, p, cores, strategy, op, improvement, seed });
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// How weight constraints are obtained for a given dimensionality.
#[derive(Debug, Clone, PartialEq)]
pub enum ConstraintSpec {
    Unconstrained,
    /// Inequalities in the constraint file grammar.
    Inequalities(Vec<String>),
}

impl Default for ConstraintSpec {
    fn default() -> Self {
        ConstraintSpec::Inequalities(vec!["w1 >= w2".into()])
    }
}

impl ConstraintSpec {
    pub fn build(&self, dim: usize) -> anyhow::Result<WeightConstraintSet> {
        match self {
            ConstraintSpec::Unconstrained => Ok(WeightConstraintSet::unconstrained(dim)?),
            ConstraintSpec::Inequalities(lines) => Ok(io::parse_constraints(&lines.join("\n"), dim)?),
        }
    }
}

/// Everything a run needs besides the grid.
#[derive(Debug, Clone)]
pub struct RunSettings {
    pub kind: Distribution,
    /// Load this file instead of generating; the grid's `n` and `d` are then
    /// taken from the file.
    pub dataset: Option<PathBuf>,
    pub maximize: Vec<usize>,
    pub constraints: ConstraintSpec,
    pub representatives: usize,
    /// 0-based.
    pub slice_dim: usize,
}

impl Default for RunSettings {
    fn default() -> Self {
        Self {
            kind: Distribution::Anticorrelated,
            dataset: None,
            maximize: Vec::new(),
            constraints: ConstraintSpec::default(),
            representatives: DEFAULT_REPRESENTATIVES,
            slice_dim: 0,
        }
    }
}

pub fn engine_config(point: &GridPoint, settings: &RunSettings) -> EngineConfig {
    EngineConfig {
        op: point.op,
        strategy: point.strategy,
        partitions: point.p,
        cores: point.cores,
        representatives: if point.improvement.representatives { settings.representatives } else { 0 },
        noseq: point.improvement.noseq,
        grid_filter: point.improvement.grid_filter,
        slice_dim: settings.slice_dim,
        seed: point.seed,
        skip_final_pass: false,
    }
}

#[derive(Default)]
struct DatasetCache {
    key: Option<(usize, usize, u64)>,
    data: Option<Dataset>,
    nd: BTreeMap<String, Vec<Tuple>>,
}

impl DatasetCache {
    fn get(&mut self, settings: &RunSettings, point: &GridPoint) -> anyhow::Result<&Dataset> {
        let key = (point.n, point.d, point.seed);
        let fixed = settings.dataset.is_some() && self.data.is_some();
        if !fixed && self.key != Some(key) {
            self.data = None;
            self.nd.clear();
            let data = match &settings.dataset {
                Some(path) => io::read_dataset(path, &settings.maximize)
                    .with_context(|| format!("loading {}", path.display()))?,
                None => generate(&GenSpec::new(settings.kind, point.n, point.d, point.seed))?,
            };
            self.key = Some(key);
            self.data = Some(data);
        }
        Ok(self.data.as_ref().expect("dataset loaded above"))
    }
}

fn nd_for_po(
    cache: &mut DatasetCache,
    point: &GridPoint,
    settings: &RunSettings,
    c: &WeightConstraintSet,
) -> anyhow::Result<Vec<Tuple>> {
    let tag = format!("{:?}", c.rows());
    if let Some(nd) = cache.nd.get(&tag) {
        return Ok(nd.clone());
    }
    let data = cache.get(settings, point)?;
    let nd_cfg = EngineConfig {
        op: Op::Nd,
        strategy: Strategy::Sliced,
        representatives: settings.representatives,
        noseq: false,
        grid_filter: false,
        ..engine_config(point, settings)
    };
    let (ids, _) = run_parallel(data.tuples(), data.dim(), c, &nd_cfg)?;
    let nd = select(data.tuples(), &ids);
    cache.nd.insert(tag, nd.clone());
    Ok(nd)
}

fn select(tuples: &[Tuple], ids: &[TupleId]) -> Vec<Tuple> {
    let keep: BTreeSet<TupleId> = ids.iter().copied().collect();
    tuples.iter().filter(|t| keep.contains(&t.id())).cloned().collect()
}

fn run_point(cache: &mut DatasetCache, point: &mut GridPoint, settings: &RunSettings) -> anyhow::Result<MetricsRow> {
    let (n, d) = {
        let data = cache.get(settings, point)?;
        (data.len(), data.dim())
    };
    point.n = n;
    point.d = d;
    let c = settings.constraints.build(d)?;
    let cfg = engine_config(point, settings);
    cfg.validate(d)?;
    let input = match point.op {
        Op::Nd => None,
        // The ND stage is computed up front and kept out of the timings.
        Op::Po => Some(nd_for_po(cache, point, settings, &c)?),
    };
    let data = cache.get(settings, point)?;
    let tuples = input.as_deref().unwrap_or(data.tuples());
    let (_, report) = run_parallel(tuples, d, &c, &cfg)?;
    Ok(MetricsRow::from_report(point.key(), &report))
}

/// Runs every grid point in order, calling `emit` with each row. A point that
/// fails produces a row whose `status` holds the error.
pub fn cmd_run(
    grid: &ExperimentGrid,
    settings: &RunSettings,
    mut emit: impl FnMut(&MetricsRow) -> anyhow::Result<()>,
) -> anyhow::Result<Vec<MetricsRow>> {
    let points = grid.points()?;
    let mut cache = DatasetCache::default();
    let mut rows = Vec::with_capacity(points.len());
    for mut point in points {
        let row = run_point(&mut cache, &mut point, settings)
            .unwrap_or_else(|e| MetricsRow::failed(point.key(), format!("{e:#}")));
        emit(&row)?;
        rows.push(row);
    }
    Ok(rows)
}

/// One engine configuration checked by [`verify_dataset`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Combo {
    pub strategy: Strategy,
    pub improvement: Improvement,
    pub partitions: usize,
    pub cores: usize,
}

impl fmt::Display for Combo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{} p={} cores={}", self.strategy, self.improvement, self.partitions, self.cores)
    }
}

/// Every strategy with every applicable improvement set.
pub fn all_combos(partitions: &[usize], cores: &[usize]) -> Vec<Combo> {
    let mut improvements = Vec::new();
    for representatives in [false, true] {
        for noseq in [false, true] {
            for grid_filter in [false, true] {
                improvements.push(Improvement { representatives, noseq, grid_filter });
            }
        }
    }
    let mut out = Vec::new();
    for &strategy in &Strategy::ALL {
        for &improvement in &improvements {
            if improvement.grid_filter && strategy != Strategy::Grid {
                continue;
            }
            for &partitions in partitions {
                for &cores in cores {
                    out.push(Combo { strategy, improvement, partitions, cores });
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub seed: u64,
    pub op: Op,
    pub combo: Combo,
    pub extra: Vec<TupleId>,
    pub missing: Vec<TupleId>,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "seed {} {} {}: extra ids {:?}, missing ids {:?}",
            self.seed, self.op, self.combo, self.extra, self.missing
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    pub datasets: usize,
    pub checks: usize,
    pub mismatches: Vec<Mismatch>,
    /// Oracle results that broke `PO ⊆ ND ⊆ Sky`.
    pub containment_failures: Vec<String>,
    pub errors: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.containment_failures.is_empty() && self.errors.is_empty()
    }

    pub fn merge(&mut self, other: VerifyReport) {
        self.datasets += other.datasets;
        self.checks += other.checks;
        self.mismatches.extend(other.mismatches);
        self.containment_failures.extend(other.containment_failures);
        self.errors.extend(other.errors);
    }
}

fn diff(got: &[TupleId], want: &[TupleId]) -> (Vec<TupleId>, Vec<TupleId>) {
    let got: BTreeSet<_> = got.iter().copied().collect();
    let want: BTreeSet<_> = want.iter().copied().collect();
    (got.difference(&want).copied().collect(), want.difference(&got).copied().collect())
}

fn is_subset(a: &[TupleId], b: &[TupleId]) -> bool {
    let b: BTreeSet<_> = b.iter().copied().collect();
    a.iter().all(|x| b.contains(x))
}

/// Checks every combo and op on one dataset against the brute-force
/// oracles. `seed` is only used for labelling and for Random partitioning.
pub fn verify_dataset(
    data: &Dataset,
    c: &WeightConstraintSet,
    combos: &[Combo],
    ops: &[Op],
    seed: u64,
    fault: bool,
) -> VerifyReport {
    let mut report = VerifyReport { datasets: 1, ..Default::default() };
    let ctx = match FDomContext::new(c) {
        Ok(ctx) => ctx,
        Err(e) => {
            report.errors.push(format!("seed {seed}: {e}"));
            return report;
        }
    };
    let sky = skyline_bruteforce(data);
    let nd = nd_bruteforce(data.tuples(), &ctx);
    let nd_tuples = select(data.tuples(), &nd);
    let po = match po_full_lp(&nd_tuples, c) {
        Ok(po) => po,
        Err(e) => {
            report.errors.push(format!("seed {seed}: PO oracle failed: {e}"));
            return report;
        }
    };
    if !is_subset(&nd, &sky) || !is_subset(&po, &nd) {
        report.containment_failures.push(format!("seed {seed}: oracle sets are not nested"));
    }
    for &op in ops {
        let (input, want) = match op {
            Op::Nd => (data.tuples(), &nd),
            Op::Po => (nd_tuples.as_slice(), &po),
        };
        for &combo in combos {
            let cfg = EngineConfig {
                op,
                strategy: combo.strategy,
                partitions: combo.partitions,
                cores: combo.cores,
                representatives: if combo.improvement.representatives { DEFAULT_REPRESENTATIVES } else { 0 },
                noseq: combo.improvement.noseq,
                grid_filter: combo.improvement.grid_filter,
                slice_dim: 0,
                seed,
                skip_final_pass: fault,
            };
            report.checks += 1;
            match run_parallel(input, data.dim(), c, &cfg) {
                Ok((got, _)) => {
                    let (extra, missing) = diff(&got, want);
                    if !extra.is_empty() || !missing.is_empty() {
                        report.mismatches.push(Mismatch { seed, op, combo, extra, missing });
                    }
                    let upper = match op {
                        Op::Nd => &sky,
                        Op::Po => &nd,
                    };
                    if !is_subset(&got, upper) {
                        report
                            .containment_failures
                            .push(format!("seed {seed} {op} {combo}: result escapes its containing set"));
                    }
                }
                Err(e) => report.errors.push(format!("seed {seed} {op} {combo}: {e}")),
            }
        }
    }
    report
}

#[derive(Debug, Clone)]
pub struct VerifySettings {
    pub kinds: Vec<Distribution>,
    pub n: usize,
    pub d: usize,
    pub seeds: Vec<u64>,
    pub dataset: Option<PathBuf>,
    pub maximize: Vec<usize>,
    pub constraints: ConstraintSpec,
    pub partitions: Vec<usize>,
    pub cores: Vec<usize>,
    pub ops: Vec<Op>,
    pub cap: usize,
    /// Skip the final pass so that wrong answers reach the comparison.
    pub inject_fault: bool,
}

impl Default for VerifySettings {
    fn default() -> Self {
        Self {
            kinds: vec![Distribution::Anticorrelated],
            n: 300,
            d: 3,
            seeds: (0..10).collect(),
            dataset: None,
            maximize: Vec::new(),
            constraints: ConstraintSpec::default(),
            partitions: vec![1, 3, 8],
            cores: vec![2],
            ops: vec![Op::Nd, Op::Po],
            cap: DEFAULT_VERIFY_CAP,
            inject_fault: false,
        }
    }
}

pub fn cmd_verify(settings: &VerifySettings) -> anyhow::Result<VerifyReport> {
    let combos = all_combos(&settings.partitions, &settings.cores);
    let mut report = VerifyReport::default();
    if let Some(path) = &settings.dataset {
        let data = io::read_dataset(path, &settings.maximize)?;
        ensure!(
            data.len() <= settings.cap,
            "dataset has {} tuples, above the verification cap of {}",
            data.len(),
            settings.cap
        );
        let c = settings.constraints.build(data.dim())?;
        report.merge(verify_dataset(&data, &c, &combos, &settings.ops, 0, settings.inject_fault));
        return Ok(report);
    }
    ensure!(
        settings.n <= settings.cap,
        "N = {} is above the verification cap of {}",
        settings.n,
        settings.cap
    );
    ensure!(!settings.kinds.is_empty(), "no distributions to verify");
    let c = settings.constraints.build(settings.d)?;
    for (i, &seed) in settings.seeds.iter().enumerate() {
        let kind = settings.kinds[i % settings.kinds.len()];
        let data = generate(&GenSpec::new(kind, settings.n, settings.d, seed))?;
        report.merge(verify_dataset(&data, &c, &combos, &settings.ops, seed, settings.inject_fault));
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    TimeVsN,
    ParallelVsN,
    RemovalVsN,
    TimeVsD,
    TimeVsP,
    TimeVsCores,
}

impl Figure {
    pub const ALL: [Figure; 6] = [
        Figure::TimeVsN,
        Figure::ParallelVsN,
        Figure::RemovalVsN,
        Figure::TimeVsD,
        Figure::TimeVsP,
        Figure::TimeVsCores,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Figure::TimeVsN => "time-vs-n",
            Figure::ParallelVsN => "parallel-vs-n",
            Figure::RemovalVsN => "removal-vs-n",
            Figure::TimeVsD => "time-vs-d",
            Figure::TimeVsP => "time-vs-p",
            Figure::TimeVsCores => "time-vs-cores",
        }
    }

    fn x(self, row: &MetricsRow) -> usize {
        match self {
            Figure::TimeVsN | Figure::ParallelVsN | Figure::RemovalVsN => row.n,
            Figure::TimeVsD => row.d,
            Figure::TimeVsP => row.p,
            Figure::TimeVsCores => row.cores,
        }
    }

    fn y(self, row: &MetricsRow) -> f64 {
        match self {
            Figure::ParallelVsN => row.t_parallel,
            Figure::RemovalVsN => {
                if row.input_size == 0 {
                    0.0
                } else {
                    1.0 - row.union_size as f64 / row.input_size as f64
                }
            }
            _ => row.t_total,
        }
    }
}

impl FromStr for Figure {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        Figure::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| {
            let names: Vec<_> = Figure::ALL.iter().map(|f| f.name()).collect();
            anyhow::anyhow!("unknown figure `{s}` (expected one of {})", names.join(", "))
        })
    }
}

type AxisFn = fn(&MetricsRow) -> usize;

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        (values[mid - 1] + values[mid]) / 2.0
    }
}

/// Builds the `x,series...` table for one figure. Seeds are collapsed with
/// the median; axes other than `x` that take several values are folded into
/// the series label.
pub fn plot_table(rows: &[MetricsRow], figure: Figure) -> String {
    let rows: Vec<&MetricsRow> = rows.iter().filter(|r| r.is_ok()).collect();
    let distinct = |f: fn(&MetricsRow) -> usize| rows.iter().map(|r| f(r)).collect::<BTreeSet<_>>().len() > 1;
    let mut extras: Vec<(&str, AxisFn)> = Vec::new();
    for (name, f, skip) in [
        ("n", (|r: &MetricsRow| r.n) as AxisFn, matches!(figure, Figure::TimeVsN | Figure::ParallelVsN | Figure::RemovalVsN)),
        ("d", |r: &MetricsRow| r.d, figure == Figure::TimeVsD),
        ("p", |r: &MetricsRow| r.p, figure == Figure::TimeVsP),
        ("cores", |r: &MetricsRow| r.cores, figure == Figure::TimeVsCores),
    ] {
        if !skip && distinct(f) {
            extras.push((name, f));
        }
    }
    let mut cells: BTreeMap<(usize, String), Vec<f64>> = BTreeMap::new();
    let mut series = BTreeSet::new();
    for r in &rows {
        let mut label = r.series();
        for (name, f) in &extras {
            label.push_str(&format!(" {name}={}", f(r)));
        }
        series.insert(label.clone());
        cells.entry((figure.x(r), label)).or_default().push(figure.y(r));
    }
    let xs: BTreeSet<usize> = cells.keys().map(|(x, _)| *x).collect();
    let mut out = String::from("x");
    for s in &series {
        out.push(',');
        out.push_str(s);
    }
    out.push('\n');
    for x in xs {
        out.push_str(&x.to_string());
        for s in &series {
            out.push(',');
            if let Some(v) = cells.get_mut(&(x, s.clone())) {
                out.push_str(&median(v).to_string());
            }
        }
        out.push('\n');
    }
    out
}

/// Settings file for `run`; every field is optional and command-line flags
/// take precedence.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub profile: Option<Profile>,
    pub vary: Option<Axis>,
    pub n: Option<Vec<usize>>,
    pub d: Option<Vec<usize>>,
    pub p: Option<Vec<usize>>,
    pub cores: Option<Vec<usize>>,
    pub strategies: Option<Vec<String>>,
    pub ops: Option<Vec<String>>,
    pub improvements: Option<Vec<String>>,
    pub seeds: Option<Vec<u64>>,
    pub kind: Option<String>,
    pub dataset: Option<PathBuf>,
    pub representatives: Option<usize>,
    pub slice_dim: Option<usize>,
    pub constraints: Option<Vec<String>>,
    pub unconstrained: Option<bool>,
    pub grid_cap: Option<usize>,
    pub output: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &std::path::Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

pub fn parse_list<T>(items: &[String]) -> anyhow::Result<Vec<T>>
where
    T: FromStr,
    T::Err: fmt::Display,
{
    items
        .iter()
        .flat_map(|s| s.split(','))
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|e| anyhow::anyhow!("{e}")))
        .collect()
}
