//! Partition, compute local results concurrently, merge, then finish with a
//! sequential pass over the union (or, with NoSeq, a second parallel pass
//! that checks each union member against the whole union).

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use flexsky_core::fdom::Profile;
use flexsky_core::partition::{self, PartitionPlan, PlanOptions, Strategy};
use flexsky_core::sequential::{is_potentially_optimal_incremental, nd_sve1f_indices, po_popi2_indices};
use flexsky_core::{FDomContext, Tuple, TupleId, WeightConstraintSet};

/// Slack on the presort key when looking for dominators of a tuple.
const KEY_SLACK: f64 = 1e-9;

#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] flexsky_core::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    Nd,
    Po,
}

impl Op {
    pub fn name(self) -> &'static str {
        match self {
            Op::Nd => "nd",
            Op::Po => "po",
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Op {
    type Err = EngineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "nd" => Ok(Op::Nd),
            "po" => Ok(Op::Po),
            other => Err(EngineError::Config(format!("unknown operator `{other}` (expected nd or po)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EngineConfig {
    pub op: Op,
    pub strategy: Strategy,
    pub partitions: usize,
    /// Upper bound on partitions processed at the same time.
    pub cores: usize,
    /// Representatives taken from the head of each partition; 0 disables.
    pub representatives: usize,
    pub noseq: bool,
    pub grid_filter: bool,
    /// 0-based attribute used by Sliced partitioning.
    pub slice_dim: usize,
    pub seed: u64,
    /// Returns the merged local results without the final pass. Only for
    /// checking that the verification harness catches wrong answers.
    #[doc(hidden)]
    pub skip_final_pass: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            op: Op::Nd,
            strategy: Strategy::Sliced,
            partitions: 16,
            cores: 1,
            representatives: 0,
            noseq: false,
            grid_filter: false,
            slice_dim: 0,
            seed: 0,
            skip_final_pass: false,
        }
    }
}

impl EngineConfig {
    pub fn validate(&self, dim: usize) -> Result<(), EngineError> {
        if self.partitions == 0 {
            return Err(EngineError::Config("partitions must be at least 1".into()));
        }
        if self.cores == 0 {
            return Err(EngineError::Config("cores must be at least 1".into()));
        }
        if self.grid_filter && self.strategy != Strategy::Grid {
            return Err(EngineError::Config(format!(
                "grid filtering needs grid partitioning, not {}",
                self.strategy
            )));
        }
        if self.slice_dim >= dim {
            return Err(EngineError::Config(format!(
                "slice dimension {} out of range for {dim} attributes",
                self.slice_dim + 1
            )));
        }
        Ok(())
    }
}

/// Side data shared read-only with every worker.
#[derive(Debug, Clone, Default)]
pub struct MetaInfo {
    pub representatives: Vec<Tuple>,
    pub global_union: Option<Vec<Tuple>>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExecutionReport {
    pub t_partition: f64,
    pub t_parallel: f64,
    pub t_sequential: f64,
    pub t_total: f64,
    pub input_size: usize,
    pub union_size: usize,
    pub removed_pct: f64,
    pub result_ids: Vec<TupleId>,
    pub effective_partitions: usize,
    pub representatives: usize,
    pub pruned_cells: usize,
    pub partition_sizes: Vec<usize>,
    pub partition_secs: Vec<f64>,
}

/// Runs `f` over `tasks` with at most `cores` tasks in flight. Results come
/// back in task order whatever the scheduling.
pub fn run_pool<T, R, F>(tasks: &[T], cores: usize, f: F) -> Vec<(R, Duration)>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let timed = |t: &T| {
        let start = Instant::now();
        let r = f(t);
        (r, start.elapsed())
    };
    let workers = cores.max(1).min(tasks.len());
    if workers <= 1 {
        return tasks.iter().map(timed).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<(R, Duration)>>> = Mutex::new((0..tasks.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= tasks.len() {
                    break;
                }
                let out = timed(&tasks[i]);
                slots.lock().expect("worker panicked")[i] = Some(out);
            });
        }
    });
    slots
        .into_inner()
        .expect("worker panicked")
        .into_iter()
        .map(|slot| slot.expect("every task ran"))
        .collect()
}

/// Heads of each partition in presort order, pooled and reduced to the
/// members no other pooled tuple F-dominates.
pub fn select_representatives(
    tuples: &[Tuple],
    plan: &PartitionPlan,
    k: usize,
    ctx: &FDomContext,
) -> Vec<Tuple> {
    if k == 0 {
        return Vec::new();
    }
    let mut pool: Vec<Tuple> = Vec::new();
    for group in plan.groups() {
        let part: Vec<Tuple> = group.iter().map(|&i| tuples[i].clone()).collect();
        pool.extend(ctx.presort(&part).into_iter().take(k).map(|i| part[i].clone()));
    }
    let profiles: Vec<Profile> = pool.iter().map(|t| ctx.profile(t)).collect();
    pool.iter()
        .enumerate()
        .filter(|&(i, _)| !profiles.iter().any(|p| p.dominates(&profiles[i])))
        .map(|(_, t)| t.clone())
        .collect()
}

struct Local<'a> {
    op: Op,
    ctx: &'a FDomContext,
    constraints: &'a WeightConstraintSet,
    reps: &'a [(TupleId, Profile)],
}

impl Local<'_> {
    fn compute(&self, part: &[Tuple]) -> Result<Vec<Tuple>, flexsky_core::Error> {
        let filtered: Vec<Tuple>;
        let part = if self.reps.is_empty() {
            part
        } else {
            filtered = part
                .iter()
                .filter(|t| {
                    let p = self.ctx.profile(t);
                    !self.reps.iter().any(|(id, r)| *id != t.id() && r.dominates(&p))
                })
                .cloned()
                .collect();
            &filtered
        };
        let keep = match self.op {
            Op::Nd => nd_sve1f_indices(part, self.ctx),
            Op::Po => po_popi2_indices(part, self.constraints, self.ctx)?,
        };
        Ok(keep.into_iter().map(|i| part[i].clone()).collect())
    }
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

fn sorted_ids<'a>(tuples: impl IntoIterator<Item = &'a Tuple>) -> Vec<TupleId> {
    let mut ids: Vec<TupleId> = tuples.into_iter().map(Tuple::id).collect();
    ids.sort_unstable();
    ids
}

/// Computes `ND` (from a dataset) or `PO` (from an `ND` set) of `input` with
/// the partition / parallel / merge pattern.
pub fn run_parallel(
    input: &[Tuple],
    dim: usize,
    constraints: &WeightConstraintSet,
    cfg: &EngineConfig,
) -> Result<(Vec<TupleId>, ExecutionReport), EngineError> {
    let start = Instant::now();
    cfg.validate(dim)?;
    if constraints.dim() != dim {
        return Err(EngineError::Config(format!(
            "constraints are over {} weights but the data has {dim} attributes",
            constraints.dim()
        )));
    }
    if let Some(t) = input.iter().find(|t| t.dim() != dim) {
        return Err(flexsky_core::Error::DimensionMismatch { expected: dim, found: t.dim() }.into());
    }
    let ctx = FDomContext::new(constraints)?;
    let mut report = ExecutionReport { input_size: input.len(), ..Default::default() };

    // Partitioning and meta-information.
    let plan = partition::plan(
        cfg.strategy,
        input,
        dim,
        cfg.partitions,
        PlanOptions { slice_dim: cfg.slice_dim, seed: cfg.seed },
    )?;
    let mut groups = plan.groups();
    if cfg.grid_filter {
        let m = plan.slices.expect("grid plans record their slices");
        let cells = partition::grid_cells(dim, m, &plan.sizes());
        let pruned = partition::grid_filter(&cells);
        report.pruned_cells = pruned.len();
        for cell in pruned {
            groups[cell].clear();
        }
    }
    let meta = MetaInfo {
        representatives: select_representatives(input, &plan, cfg.representatives, &ctx),
        global_union: None,
    };
    let reps: Vec<(TupleId, Profile)> =
        meta.representatives.iter().map(|t| (t.id(), ctx.profile(t))).collect();
    let parts: Vec<Vec<Tuple>> = groups
        .iter()
        .map(|g| g.iter().map(|&i| input[i].clone()).collect())
        .collect();
    report.effective_partitions = plan.partitions;
    report.representatives = reps.len();
    report.partition_sizes = parts.iter().map(Vec::len).collect();
    report.t_partition = secs(start.elapsed());

    // Local results, at most `cores` partitions at a time.
    let phase = Instant::now();
    let local = Local { op: cfg.op, ctx: &ctx, constraints, reps: &reps };
    let outputs = run_pool(&parts, cfg.cores, |part| local.compute(part));
    report.partition_secs = outputs.iter().map(|(_, d)| secs(*d)).collect();
    let mut union = Vec::new();
    for (out, _) in outputs {
        union.extend(out?);
    }
    report.t_parallel = secs(phase.elapsed());
    report.union_size = union.len();
    report.removed_pct = if input.is_empty() {
        0.0
    } else {
        1.0 - union.len() as f64 / input.len() as f64
    };

    // Final pass.
    let ids = if cfg.skip_final_pass {
        sorted_ids(&union)
    } else if cfg.noseq {
        let phase = Instant::now();
        let ids = noseq_finalize(&union, cfg.op, cfg.partitions, cfg.cores, cfg.slice_dim, &ctx, constraints)?;
        report.t_parallel += secs(phase.elapsed());
        ids
    } else {
        let phase = Instant::now();
        let keep = match cfg.op {
            Op::Nd => nd_sve1f_indices(&union, &ctx),
            Op::Po => po_popi2_indices(&union, constraints, &ctx)?,
        };
        report.t_sequential = secs(phase.elapsed());
        sorted_ids(keep.iter().map(|&i| &union[i]))
    };
    report.result_ids = ids.clone();
    report.t_total = secs(start.elapsed());
    Ok((ids, report))
}

/// Second parallel pass replacing the sequential one: `union` is re-sliced
/// into `p` parts and every member is checked against the whole union.
pub fn noseq_finalize(
    union: &[Tuple],
    op: Op,
    p: usize,
    cores: usize,
    slice_dim: usize,
    ctx: &FDomContext,
    constraints: &WeightConstraintSet,
) -> Result<Vec<TupleId>, EngineError> {
    if union.is_empty() {
        return Ok(Vec::new());
    }
    let order = ctx.presort(union);
    let sorted: Vec<&Tuple> = order.iter().map(|&i| &union[i]).collect();
    let profiles: Vec<Profile> = sorted.iter().map(|t| ctx.profile(t)).collect();
    let plan = partition::sliced_assign(union, p.max(1), slice_dim);
    let tasks = plan.groups();

    let survives = |i: usize| -> Result<bool, flexsky_core::Error> {
        let t = &union[i];
        match op {
            Op::Nd => {
                let me = ctx.profile(t);
                // Dominators always sort no later than the tuple they dominate.
                let bound = me.key + KEY_SLACK;
                Ok(!profiles
                    .iter()
                    .take_while(|q| q.key <= bound)
                    .any(|q| q.dominates(&me)))
            }
            Op::Po => {
                let competitors: Vec<&Tuple> =
                    sorted.iter().copied().filter(|s| s.id() != t.id()).collect();
                is_potentially_optimal_incremental(t, &competitors, constraints)
            }
        }
    };
    let outputs = run_pool(&tasks, cores, |group| -> Result<Vec<TupleId>, flexsky_core::Error> {
        let mut kept = Vec::new();
        for &i in group {
            if survives(i)? {
                kept.push(union[i].id());
            }
        }
        Ok(kept)
    });
    let mut ids = Vec::new();
    for (out, _) in outputs {
        ids.extend(out?);
    }
    ids.sort_unstable();
    Ok(ids)
}
