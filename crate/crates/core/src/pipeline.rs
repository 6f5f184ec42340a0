//! Coordinator/worker simulation of the three distributed algorithms.
//!
//! A run distributes the dataset across `s` in-process nodes according to an
//! assignment matrix, draws a straggler set, computes the recovery weights
//! for the survivors, fans the local computations out in parallel, and folds
//! the surviving summaries at the coordinator:
//!
//! * k-median: nodes send local weighted k-median centers with cluster
//!   masses; the coordinator reclusters the reweighted centers.
//! * subspace clustering: nodes send coresets of their shares; the
//!   coordinator merges them with recovery weights and fits k subspaces.
//! * r-PCA: nodes send truncated-SVD summaries; the coordinator stacks the
//!   surviving rows and takes the top-r principal subspace.
//!
//! Straggling is set-based: a straggler's result is simply discarded before
//! aggregation. There is no timing model.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assignment::{
    self, assignment_without_empty_columns, pa_from_theorem, partition_assignment,
    recovery_vector, survivors_of, AssignmentMatrix, RecoveryVector, StragglerModel,
};
use crate::coresets::{
    identity_coreset, merge_coresets, relaxed_svd_coreset, sample_coreset, Coreset,
};
use crate::data::{
    cluster_of, cost_points, cost_subspaces, CenterSet, CostKind, Dataset, KahanSum, SubspaceSet,
    WeightedDataset,
};
use crate::io::fmt_g17;
use crate::linalg::Mat;
use crate::solvers::{kmedian_exact, kmedian_heuristic, r_pca, subspace_cluster};
use crate::{seeds, Error, Result};

/// Which distributed algorithm a run executes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    KMedian,
    Subspace,
    Pca,
}

impl Algorithm {
    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::KMedian => "kmedian",
            Algorithm::Subspace => "subspace",
            Algorithm::Pca => "pca",
        }
    }
}

/// Where the assignment probability comes from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AssignmentSource {
    /// Use this probability directly.
    ExplicitPa(f64),
    /// Derive `p_a = min(ell / s, 1)` from the resilience bound at the
    /// configured delta and this straggler probability.
    Theorem { p_t: f64 },
}

/// Which k-median solver nodes and coordinator use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    Heuristic,
    /// Brute-force discrete search; only viable on tiny instances.
    Exact,
}

/// Which per-node summary the subspace pipeline sends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoresetSpec {
    Identity,
    Sample { m: usize },
}

/// What to do when no recovery vector exists for the drawn survivors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecoveryPolicy {
    /// Fail the run. Guarantees only hold on this path.
    Strict,
    /// Fall back to unit weights for all survivors; uncovered points are
    /// simply lost. Uniform weights leave the fitted model unchanged, so
    /// this mirrors running the algorithms below the resilience threshold.
    BestEffort,
}

/// Seeds for the independent random stages of a run. Node `i` solves with
/// `solver ^ i` and the coordinator with `solver` itself, so an `s = 1` run
/// reproduces a centralized solve bit for bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seeds {
    pub assignment: u64,
    pub solver: u64,
}

/// Full description of one simulated run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub data: WeightedDataset,
    pub algorithm: Algorithm,
    pub s: usize,
    pub k: usize,
    /// Subspace dimension; ignored by the k-median algorithm.
    pub r: usize,
    pub delta: f64,
    pub cost_kind: CostKind,
    pub assignment: AssignmentSource,
    pub straggler: StragglerModel,
    pub seeds: Seeds,
    pub solver: SolverKind,
    pub coreset: CoresetSpec,
    pub recovery: RecoveryPolicy,
    /// No-redundancy comparison mode: balanced random partition, unit b.
    pub baseline: bool,
    /// Refuse summaries that carry no coreset guarantee.
    pub require_guarantees: bool,
    /// Probe the cost sandwiches with random center sets after the run.
    pub verify_lemmas: bool,
    pub compute_centralized: bool,
    /// Independent heuristic k-median starts per solve; the cheapest wins.
    pub restarts: usize,
}

impl RunConfig {
    /// A starting configuration with the common defaults filled in.
    pub fn new(data: WeightedDataset, algorithm: Algorithm, s: usize, k: usize) -> Self {
        Self {
            data,
            algorithm,
            s,
            k,
            r: 1,
            delta: 1.0,
            cost_kind: CostKind::KMedian,
            assignment: AssignmentSource::ExplicitPa(0.2),
            straggler: StragglerModel::fixed_count(0, 0),
            seeds: Seeds { assignment: 0, solver: 0 },
            solver: SolverKind::Heuristic,
            coreset: CoresetSpec::Identity,
            recovery: RecoveryPolicy::Strict,
            baseline: false,
            require_guarantees: false,
            verify_lemmas: false,
            compute_centralized: false,
            restarts: 5,
        }
    }
}

/// The model a run produced.
#[derive(Debug, Clone, PartialEq)]
pub enum FittedModel {
    Centers(CenterSet),
    Subspaces(SubspaceSet),
}

/// Wall-clock seconds spent in each phase. Excluded from serialization so
/// that identical runs produce identical bytes.
#[derive(Debug, Clone, Copy, Default)]
pub struct PhaseTimings {
    pub distribute: f64,
    pub local: f64,
    pub aggregate: f64,
}

/// Everything a finished run reports.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub algorithm: Algorithm,
    pub model: FittedModel,
    /// Cost of the final model on the full dataset.
    pub cost: f64,
    pub centralized_cost: Option<f64>,
    pub stragglers: Vec<usize>,
    /// Recovery weights, one per survivor in ascending node order.
    pub b: Vec<f64>,
    /// `None` when the run fell back to unit weights (baseline/best-effort).
    pub delta_achieved: Option<f64>,
    /// Points per node, for all s nodes.
    pub loads: Vec<usize>,
    /// Assignment redraws burned to avoid empty columns.
    pub retries: usize,
    pub seed_block: SeedBlock,
    pub timings: PhaseTimings,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedBlock {
    pub assignment: u64,
    pub stragglers: u64,
    pub solver: u64,
}

impl RunResult {
    /// Canonical JSON: `{schema, algorithm, cost, centralized_cost?,
    /// stragglers, b, delta_achieved, loads, retries, seed_block}`.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct View<'a> {
            schema: u32,
            algorithm: &'a str,
            cost: f64,
            #[serde(skip_serializing_if = "Option::is_none")]
            centralized_cost: Option<f64>,
            stragglers: &'a [usize],
            b: &'a [f64],
            delta_achieved: Option<f64>,
            loads: &'a [usize],
            retries: usize,
            seed_block: SeedBlock,
        }
        serde_json::to_string_pretty(&View {
            schema: 1,
            algorithm: self.algorithm.as_str(),
            cost: self.cost,
            centralized_cost: self.centralized_cost,
            stragglers: &self.stragglers,
            b: &self.b,
            delta_achieved: self.delta_achieved,
            loads: &self.loads,
            retries: self.retries,
            seed_block: self.seed_block,
        })
        .expect("run result serializes")
    }

    /// Writes the fitted model as CSV: centers one per row; subspace bases
    /// one basis vector per row with the subspace index as leading column.
    pub fn model_csv(&self) -> String {
        let mut out = String::new();
        match &self.model {
            FittedModel::Centers(c) => {
                for center in c.centers() {
                    let cells: Vec<String> = center.iter().map(|&x| fmt_g17(x)).collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
            }
            FittedModel::Subspaces(s) => {
                for (i, basis) in s.bases().iter().enumerate() {
                    for col in basis {
                        let mut cells = vec![i.to_string()];
                        cells.extend(col.iter().map(|&x| fmt_g17(x)));
                        out.push_str(&cells.join(","));
                        out.push('\n');
                    }
                }
            }
        }
        out
    }
}

/// Draws the straggler set for a model over `s` nodes, deterministically
/// from the model's own seed.
pub fn draw_stragglers(model: &StragglerModel, s: usize) -> Result<Vec<usize>> {
    let mut rng = ChaCha12Rng::seed_from_u64(model.seed);
    assignment::draw_stragglers_rng(&model.variant, s, &mut rng)
}

/// Recovery weights actually used by a run.
enum Recovery {
    Strict(RecoveryVector),
    /// Unit weight for every survivor (baseline and best-effort fallback).
    Ones(Vec<usize>),
}

impl Recovery {
    fn survivors(&self) -> &[usize] {
        match self {
            Recovery::Strict(rv) => rv.survivors(),
            Recovery::Ones(s) => s,
        }
    }

    fn b_for(&self, node: usize) -> f64 {
        match self {
            Recovery::Strict(rv) => rv.b_for(node).expect("node is a survivor"),
            Recovery::Ones(_) => 1.0,
        }
    }

    fn b_vec(&self) -> Vec<f64> {
        match self {
            Recovery::Strict(rv) => rv.b().to_vec(),
            Recovery::Ones(s) => vec![1.0; s.len()],
        }
    }

    fn delta_achieved(&self) -> Option<f64> {
        match self {
            Recovery::Strict(rv) => Some(rv.delta_achieved()),
            Recovery::Ones(_) => None,
        }
    }
}

struct Prepared {
    a: AssignmentMatrix,
    stragglers: Vec<usize>,
    recovery: Recovery,
    loads: Vec<usize>,
    retries: usize,
    distribute_secs: f64,
}

fn prepare(config: &RunConfig) -> Result<Prepared> {
    let started = Instant::now();
    let n = config.data.len();
    if config.s == 0 {
        return Err(Error::Invalid("s must be >= 1".into()));
    }

    let (a, retries) = if config.baseline {
        (partition_assignment(n, config.s, config.seeds.assignment)?, 0)
    } else {
        let p_a = match config.assignment {
            AssignmentSource::ExplicitPa(p_a) => p_a,
            AssignmentSource::Theorem { p_t } => pa_from_theorem(config.delta, p_t, n, config.s),
        };
        match config.recovery {
            RecoveryPolicy::Strict => {
                assignment_without_empty_columns(n, config.s, p_a, config.seeds.assignment, 100)?
            }
            RecoveryPolicy::BestEffort => {
                // Low p_a cannot cover every point no matter how often we
                // redraw; patch each uncovered point onto one random node
                // instead so that nothing is lost before stragglers strike.
                let mut a =
                    assignment::random_assignment(n, config.s, p_a, config.seeds.assignment)?;
                let patched =
                    a.patch_empty_columns(seeds::derive(config.seeds.assignment, 0xC0));
                if patched > 0 {
                    log::warn!("patched {patched} of {n} unassigned points onto random nodes");
                }
                (a, 0)
            }
        }
    };

    let stragglers = draw_stragglers(&config.straggler, config.s)?;
    let survivors = survivors_of(config.s, &stragglers);

    let recovery = if config.baseline {
        Recovery::Ones(survivors)
    } else {
        match recovery_vector(&a, &survivors, config.delta) {
            Ok(rv) => Recovery::Strict(rv),
            Err(e @ (Error::PointUnrecoverable { .. } | Error::DeltaExceeded { .. }))
                if config.recovery == RecoveryPolicy::BestEffort =>
            {
                log::warn!("recovery unavailable ({e}); falling back to unit survivor weights");
                Recovery::Ones(survivors)
            }
            Err(e) => return Err(e),
        }
    };

    let loads = a.loads();
    Ok(Prepared {
        a,
        stragglers,
        recovery,
        loads,
        retries,
        distribute_secs: started.elapsed().as_secs_f64(),
    })
}

fn seed_block(config: &RunConfig) -> SeedBlock {
    SeedBlock {
        assignment: config.seeds.assignment,
        stragglers: config.straggler.seed,
        solver: config.seeds.solver,
    }
}

/// Weighted k-median solve that tolerates `k >= n` by returning the points
/// themselves (zero cost). The heuristic path runs `restarts` independent
/// seeded starts and keeps the cheapest result (first on ties).
pub(crate) fn solve_weighted_kmedian(
    p: &WeightedDataset,
    k: usize,
    kind: SolverKind,
    seed: u64,
    restarts: usize,
) -> Result<(CenterSet, f64)> {
    if p.len() <= k {
        return Ok((CenterSet::new(p.base().points().to_vec())?, 0.0));
    }
    match kind {
        SolverKind::Exact => kmedian_exact(p, k),
        SolverKind::Heuristic => {
            let mut best: Option<(CenterSet, f64)> = None;
            for j in 0..restarts.max(1) {
                let run = kmedian_heuristic(p, k, seeds::derive(seed, j as u64))?;
                if best.as_ref().is_none_or(|(_, cost)| run.1 < *cost) {
                    best = Some(run);
                }
            }
            Ok(best.expect("at least one start"))
        }
    }
}

/// One node's k-median summary: centers plus their cluster masses.
struct LocalCenters {
    node: usize,
    centers: CenterSet,
    masses: Vec<f64>,
}

fn local_kmedian(
    data: &WeightedDataset,
    a: &AssignmentMatrix,
    node: usize,
    k: usize,
    solver: SolverKind,
    solver_seed: u64,
    restarts: usize,
) -> Result<Option<LocalCenters>> {
    let members = a.node_points(node);
    if members.is_empty() {
        return Ok(None);
    }
    let local = data.subset(members)?;
    let (centers, _) =
        solve_weighted_kmedian(&local, k, solver, solver_seed ^ node as u64, restarts)?;
    let mut masses = vec![0.0; centers.k()];
    for j in 0..local.len() {
        masses[cluster_of(local.point(j), &centers)] += local.weight(j);
    }
    Ok(Some(LocalCenters { node, centers, masses }))
}

/// Executes the distributed k-median algorithm.
pub fn run_kmedian(config: &RunConfig) -> Result<RunResult> {
    if config.algorithm != Algorithm::KMedian {
        return Err(Error::Unsupported("run_kmedian requires the kmedian algorithm".into()));
    }
    if config.cost_kind != CostKind::KMedian {
        return Err(Error::Unsupported("the k-median pipeline optimizes the k-median cost".into()));
    }
    let prep = prepare(config)?;
    let data = &config.data;

    let local_started = Instant::now();
    let locals: Vec<Option<LocalCenters>> = prep
        .recovery
        .survivors()
        .par_iter()
        .map(|&i| {
            local_kmedian(
                data,
                &prep.a,
                i,
                config.k,
                config.solver,
                config.seeds.solver,
                config.restarts,
            )
        })
        .collect::<Result<_>>()?;
    let local_secs = local_started.elapsed().as_secs_f64();

    let agg_started = Instant::now();
    let mut points = Vec::new();
    let mut weights = Vec::new();
    for local in locals.iter().flatten() {
        let b = prep.recovery.b_for(local.node);
        for (c, &mass) in local.centers.centers().iter().zip(&local.masses) {
            points.push(c.clone());
            // The no-redundancy comparison reclusters the accumulated
            // centers as-is, without cluster masses.
            weights.push(if config.baseline { 1.0 } else { b * mass });
        }
    }
    if points.is_empty() {
        return Err(Error::EmptyAggregate);
    }
    let merged = WeightedDataset::new(Dataset::new(points)?, weights)?;
    let (model, _) = solve_weighted_kmedian(
        &merged,
        config.k,
        config.solver,
        config.seeds.solver,
        config.restarts,
    )?;
    let cost = cost_points(data, &model, CostKind::KMedian);

    if config.verify_lemmas {
        if let Recovery::Strict(rv) = &prep.recovery {
            lemma2_probe(data, &prep.a, rv, config.delta, config.seeds.solver)?;
            if config.solver == SolverKind::Exact {
                let pairs: Vec<(&LocalCenters, f64)> = locals
                    .iter()
                    .flatten()
                    .map(|l| (l, prep.recovery.b_for(l.node)))
                    .collect();
                lemma3_probe(data, &prep.a, &pairs, &merged, config.delta, config.seeds.solver)?;
            }
        } else {
            return Err(Error::Unsupported(
                "lemma verification requires a successful strict recovery".into(),
            ));
        }
    }

    let centralized_cost = if config.compute_centralized {
        let solved = solve_weighted_kmedian(
            data,
            config.k,
            config.solver,
            config.seeds.solver,
            config.restarts,
        )?;
        Some(solved.1)
    } else {
        None
    };

    Ok(RunResult {
        algorithm: config.algorithm,
        model: FittedModel::Centers(model),
        cost,
        centralized_cost,
        stragglers: prep.stragglers,
        b: prep.recovery.b_vec(),
        delta_achieved: prep.recovery.delta_achieved(),
        loads: prep.loads,
        retries: prep.retries,
        seed_block: seed_block(config),
        timings: PhaseTimings {
            distribute: prep.distribute_secs,
            local: local_secs,
            aggregate: agg_started.elapsed().as_secs_f64(),
        },
    })
}

/// Executes distributed (r, k)-subspace clustering via merged coresets.
pub fn run_subspace(config: &RunConfig) -> Result<RunResult> {
    if config.algorithm != Algorithm::Subspace {
        return Err(Error::Unsupported("run_subspace requires the subspace algorithm".into()));
    }
    if config.require_guarantees {
        if let CoresetSpec::Sample { .. } = config.coreset {
            return Err(Error::Unsupported(
                "sampled coresets claim no epsilon and cannot back guarantees".into(),
            ));
        }
    }
    let prep = prepare(config)?;
    let data = &config.data;

    let local_started = Instant::now();
    let parts: Vec<Option<(Coreset, usize)>> = prep
        .recovery
        .survivors()
        .par_iter()
        .map(|&i| -> Result<Option<(Coreset, usize)>> {
            let members = prep.a.node_points(i);
            if members.is_empty() {
                return Ok(None);
            }
            let local = data.subset(members)?;
            let coreset = match config.coreset {
                CoresetSpec::Identity => identity_coreset(&local),
                CoresetSpec::Sample { m } => {
                    sample_coreset(&local, m.min(local.len()), config.seeds.solver ^ i as u64)?
                }
            };
            Ok(Some((coreset, i)))
        })
        .collect::<Result<_>>()?;
    let parts: Vec<(Coreset, usize)> = parts.into_iter().flatten().collect();
    let local_secs = local_started.elapsed().as_secs_f64();

    let agg_started = Instant::now();
    if parts.is_empty() {
        return Err(Error::EmptyAggregate);
    }
    let merged = match &prep.recovery {
        Recovery::Strict(rv) => merge_coresets(&parts, rv)?.summary().clone(),
        Recovery::Ones(_) => {
            let mut points = Vec::new();
            let mut weights = Vec::new();
            for (part, _) in &parts {
                for j in 0..part.summary().len() {
                    points.push(part.summary().point(j).to_vec());
                    weights.push(part.summary().weight(j));
                }
            }
            WeightedDataset::new(Dataset::new(points)?, weights)?
        }
    };
    let (model, _) = subspace_cluster(&merged, config.r, config.k, config.seeds.solver)?;
    let cost = cost_subspaces(data, &model);

    if config.verify_lemmas {
        if let Recovery::Strict(rv) = &prep.recovery {
            lemma2_probe(data, &prep.a, rv, config.delta, config.seeds.solver)?;
        } else {
            return Err(Error::Unsupported(
                "lemma verification requires a successful strict recovery".into(),
            ));
        }
    }

    let centralized_cost = if config.compute_centralized {
        Some(subspace_cluster(data, config.r, config.k, config.seeds.solver)?.1)
    } else {
        None
    };

    Ok(RunResult {
        algorithm: config.algorithm,
        model: FittedModel::Subspaces(model),
        cost,
        centralized_cost,
        stragglers: prep.stragglers,
        b: prep.recovery.b_vec(),
        delta_achieved: prep.recovery.delta_achieved(),
        loads: prep.loads,
        retries: prep.retries,
        seed_block: seed_block(config),
        timings: PhaseTimings {
            distribute: prep.distribute_secs,
            local: local_secs,
            aggregate: agg_started.elapsed().as_secs_f64(),
        },
    })
}

/// The stacked survivor summaries for the PCA pipeline: weighted rows plus
/// the combined correction `Delta = sum b_i Delta_i`.
pub(crate) struct PcaStack {
    pub rows: WeightedDataset,
    pub total_delta: f64,
}

pub(crate) fn build_pca_stack(
    data: &WeightedDataset,
    a: &AssignmentMatrix,
    survivors: &[usize],
    b_of: impl Fn(usize) -> f64,
    r: usize,
    delta: f64,
) -> Result<Option<PcaStack>> {
    let summaries: Vec<Option<(usize, crate::coresets::RelaxedCoreset)>> = survivors
        .par_iter()
        .map(|&i| -> Result<Option<(usize, crate::coresets::RelaxedCoreset)>> {
            let members = a.node_points(i);
            if members.is_empty() {
                return Ok(None);
            }
            let scaled: Vec<Vec<f64>> = members
                .iter()
                .map(|&j| {
                    let sw = data.weight(j).sqrt();
                    data.point(j).iter().map(|x| sw * x).collect()
                })
                .collect();
            let m = Mat::from_rows(&scaled)?;
            Ok(Some((i, relaxed_svd_coreset(&m, r, delta)?)))
        })
        .collect::<Result<_>>()?;

    let mut points = Vec::new();
    let mut weights = Vec::new();
    let mut total_delta = KahanSum::default();
    for (node, summary) in summaries.into_iter().flatten() {
        let b = b_of(node);
        for row in summary.nonzero_rows() {
            points.push(row);
            weights.push(b);
        }
        total_delta.add(b * summary.delta_term());
    }
    if points.is_empty() {
        return Ok(None);
    }
    let rows = WeightedDataset::new(Dataset::new(points)?, weights)?;
    Ok(Some(PcaStack { rows, total_delta: total_delta.value() }))
}

/// Executes straggler-resilient distributed r-PCA (k = 1).
pub fn run_pca(config: &RunConfig) -> Result<RunResult> {
    if config.algorithm != Algorithm::Pca {
        return Err(Error::Unsupported("run_pca requires the pca algorithm".into()));
    }
    if config.k != 1 {
        return Err(Error::Unsupported("r-PCA is the k = 1 case; set k = 1".into()));
    }
    let prep = prepare(config)?;
    let data = &config.data;

    let local_started = Instant::now();
    let stack = build_pca_stack(
        data,
        &prep.a,
        prep.recovery.survivors(),
        |node| prep.recovery.b_for(node),
        config.r,
        config.delta,
    )?
    .ok_or(Error::EmptyAggregate)?;
    let local_secs = local_started.elapsed().as_secs_f64();

    let agg_started = Instant::now();
    let (model, _) = r_pca(&stack.rows, config.r)?;
    let cost = cost_subspaces(data, &model);

    if config.verify_lemmas {
        if let Recovery::Strict(rv) = &prep.recovery {
            lemma2_probe(data, &prep.a, rv, config.delta, config.seeds.solver)?;
            lemma7_probe(data, &stack, config.r, config.delta, config.seeds.solver)?;
        } else {
            return Err(Error::Unsupported(
                "lemma verification requires a successful strict recovery".into(),
            ));
        }
    }

    let centralized_cost = if config.compute_centralized {
        Some(r_pca(data, config.r)?.1)
    } else {
        None
    };

    Ok(RunResult {
        algorithm: config.algorithm,
        model: FittedModel::Subspaces(model),
        cost,
        centralized_cost,
        stragglers: prep.stragglers,
        b: prep.recovery.b_vec(),
        delta_achieved: prep.recovery.delta_achieved(),
        loads: prep.loads,
        retries: prep.retries,
        seed_block: seed_block(config),
        timings: PhaseTimings {
            distribute: prep.distribute_secs,
            local: local_secs,
            aggregate: agg_started.elapsed().as_secs_f64(),
        },
    })
}

/// Dispatches on the configured algorithm.
pub fn run(config: &RunConfig) -> Result<RunResult> {
    match config.algorithm {
        Algorithm::KMedian => run_kmedian(config),
        Algorithm::Subspace => run_subspace(config),
        Algorithm::Pca => run_pca(config),
    }
}

fn probe_centers(
    data: &WeightedDataset,
    k: usize,
    count: usize,
    rng: &mut ChaCha12Rng,
) -> Vec<CenterSet> {
    use rand::Rng;
    let d = data.dim();
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for j in 0..data.len() {
        for (c, &x) in data.point(j).iter().enumerate() {
            lo[c] = lo[c].min(x);
            hi[c] = hi[c].max(x);
        }
    }
    (0..count)
        .map(|_| {
            let centers: Vec<Vec<f64>> = (0..k)
                .map(|_| {
                    (0..d)
                        .map(|c| {
                            let pad = (hi[c] - lo[c]).max(1.0) * 0.1;
                            rng.gen_range((lo[c] - pad)..=(hi[c] + pad))
                        })
                        .collect()
                })
                .collect();
            CenterSet::new(centers).expect("probe centers are finite")
        })
        .collect()
}

/// Cost sandwich under recovery weights: for random probe centers C,
/// `cost(P, C, w) <= sum_i b_i cost(P_i, C, w) <= (1 + delta) cost(P, C, w)`.
fn lemma2_probe(
    data: &WeightedDataset,
    a: &AssignmentMatrix,
    rv: &RecoveryVector,
    delta: f64,
    seed: u64,
) -> Result<()> {
    let mut rng = ChaCha12Rng::seed_from_u64(seeds::derive(seed, 0x5a2));
    for probe in probe_centers(data, 3, 20, &mut rng) {
        for kind in [CostKind::KMedian, CostKind::KMeans] {
            let whole = cost_points(data, &probe, kind);
            let mut split = KahanSum::default();
            for (&i, &b) in rv.survivors().iter().zip(rv.b()) {
                let members = a.node_points(i);
                if members.is_empty() {
                    continue;
                }
                split.add(b * cost_points(&data.subset(members)?, &probe, kind));
            }
            let split = split.value();
            let slack = 1e-9 * whole.max(1e-300);
            if split < whole - slack || split > (1.0 + delta) * whole + slack {
                return Err(Error::GuaranteeViolated {
                    name: "cost-sandwich",
                    detail: format!(
                        "sum b_i cost(P_i) = {split} outside [{whole}, {}]",
                        (1.0 + delta) * whole
                    ),
                });
            }
        }
    }
    Ok(())
}

/// Center-summary sandwich: for random probe centers C,
/// `cost(P, C) - sum_i b_i cost(P_i, Y_i) <= cost(Y, C, w) <= 2 (1 + delta) cost(P, C)`.
fn lemma3_probe(
    data: &WeightedDataset,
    a: &AssignmentMatrix,
    locals: &[(&LocalCenters, f64)],
    merged: &WeightedDataset,
    delta: f64,
    seed: u64,
) -> Result<()> {
    let mut rng = ChaCha12Rng::seed_from_u64(seeds::derive(seed, 0x5a3));
    let mut local_fit = KahanSum::default();
    for (local, b) in locals {
        let members = a.node_points(local.node);
        let subset = data.subset(members)?;
        local_fit.add(b * cost_points(&subset, &local.centers, CostKind::KMedian));
    }
    let local_fit = local_fit.value();

    for probe in probe_centers(data, 2, 20, &mut rng) {
        let whole = cost_points(data, &probe, CostKind::KMedian);
        let summary = cost_points(merged, &probe, CostKind::KMedian);
        let slack = 1e-9 * whole.max(1e-300);
        if summary < whole - local_fit - slack || summary > 2.0 * (1.0 + delta) * whole + slack {
            return Err(Error::GuaranteeViolated {
                name: "center-summary-sandwich",
                detail: format!(
                    "cost(Y, C, w) = {summary} outside [{} - {local_fit}, {}]",
                    whole,
                    2.0 * (1.0 + delta) * whole
                ),
            });
        }
    }
    Ok(())
}

/// Relaxed-summary sandwich: for random probe subspaces L,
/// `cost(P, L) <= cost(Y, L, w) + Delta <= (1 + 4 delta) cost(P, L)`.
fn lemma7_probe(
    data: &WeightedDataset,
    stack: &PcaStack,
    r: usize,
    delta: f64,
    seed: u64,
) -> Result<()> {
    let mut rng = ChaCha12Rng::seed_from_u64(seeds::derive(seed, 0x5a7));
    for _ in 0..20 {
        let l = crate::verify::random_subspace(data.dim(), r, &mut rng);
        let whole = cost_subspaces(data, &l);
        let summary = cost_subspaces(&stack.rows, &l) + stack.total_delta;
        let slack = 1e-8 * whole.max(1e-300);
        if summary < whole - slack || summary > (1.0 + 4.0 * delta) * whole + slack {
            return Err(Error::GuaranteeViolated {
                name: "relaxed-summary-sandwich",
                detail: format!(
                    "cost(Y, L, w) + Delta = {summary} outside [{whole}, {}]",
                    (1.0 + 4.0 * delta) * whole
                ),
            });
        }
    }
    Ok(())
}
