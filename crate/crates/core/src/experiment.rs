//! Multi-condition benchmark runner for the distributed k-median pipeline.
//!
//! Each repetition generates a fresh Gaussian mixture and evaluates four
//! conditions on it: the ground-truth centers, a no-redundancy baseline
//! (balanced partition, stragglers simply lost), and two redundant
//! assignments at a low and a high assignment probability. A centralized
//! heuristic solve on the full data provides the reference for cost ratios.

use rayon::prelude::*;
use serde::Serialize;

use crate::data::{cost_points, CenterSet, CostKind, WeightedDataset};
use crate::pipeline::{
    run_kmedian, solve_weighted_kmedian, Algorithm, AssignmentSource, FittedModel,
    RecoveryPolicy, RunConfig, Seeds, SolverKind,
};
use crate::synth::{gaussian_mixture, Mixture};
use crate::{assignment::StragglerModel, seeds, Result};

/// Parameters of one experiment.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub s: usize,
    /// Stragglers per repetition (drawn uniformly).
    pub t: usize,
    pub reps: usize,
    pub master_seed: u64,
    /// Gaussian noise standard deviation around each true center.
    pub spread: f64,
    /// True centers are drawn uniformly from `[0, box_side]^d`.
    pub box_side: f64,
    pub pa_low: f64,
    pub pa_high: f64,
    pub delta: f64,
    /// Heuristic k-median starts per solve.
    pub restarts: usize,
}

impl ExperimentConfig {
    /// The benchmark scale: 5000 two-dimensional points in 15 clusters on
    /// 10 nodes with 3 stragglers.
    pub fn benchmark(master_seed: u64) -> Self {
        Self {
            n: 5000,
            d: 2,
            k: 15,
            s: 10,
            t: 3,
            reps: 20,
            master_seed,
            spread: 20.0,
            box_side: 1000.0,
            pa_low: 0.1,
            pa_high: 0.2,
            delta: 1.0,
            restarts: 5,
        }
    }
}

/// The four evaluated conditions, in fixed order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    GroundTruth,
    Baseline,
    PaLow,
    PaHigh,
}

impl Condition {
    pub const ALL: [Condition; 4] =
        [Condition::GroundTruth, Condition::Baseline, Condition::PaLow, Condition::PaHigh];

    pub fn as_str(&self) -> &'static str {
        match self {
            Condition::GroundTruth => "ground_truth",
            Condition::Baseline => "baseline",
            Condition::PaLow => "pa_low",
            Condition::PaHigh => "pa_high",
        }
    }
}

/// Costs of one repetition, indexed like [`Condition::ALL`].
#[derive(Debug, Clone, Serialize)]
pub struct RepOutcome {
    pub rep: usize,
    pub costs: [f64; 4],
    pub centralized: f64,
}

/// Mean/stddev aggregates for one condition.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConditionStats {
    pub mean_cost: f64,
    pub std_cost: f64,
    /// Cost divided by the same repetition's centralized cost.
    pub mean_ratio: f64,
    pub std_ratio: f64,
}

/// First-repetition artifacts kept for plotting.
pub struct Rep0Artifacts {
    pub mixture: Mixture,
    /// Fitted centers for baseline, pa_low, pa_high.
    pub models: [CenterSet; 3],
}

pub struct ExperimentOutput {
    pub config: ExperimentConfig,
    pub per_rep: Vec<RepOutcome>,
    pub stats: [(Condition, ConditionStats); 4],
    pub rep0: Rep0Artifacts,
}

impl ExperimentOutput {
    pub fn stats_for(&self, condition: Condition) -> ConditionStats {
        self.stats.iter().find(|(c, _)| *c == condition).expect("all conditions present").1
    }
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

struct RepRun {
    outcome: RepOutcome,
    artifacts: Option<Rep0Artifacts>,
}

fn expect_centers(model: FittedModel) -> CenterSet {
    match model {
        FittedModel::Centers(c) => c,
        FittedModel::Subspaces(_) => unreachable!("k-median runs return centers"),
    }
}

fn run_rep(config: &ExperimentConfig, rep: usize) -> Result<RepRun> {
    let rep_seed = seeds::derive(config.master_seed, rep as u64);
    let mixture =
        gaussian_mixture(config.n, config.d, config.k, config.spread, config.box_side, rep_seed)?;
    let data = WeightedDataset::uniform(mixture.data.clone());
    let run_seeds =
        Seeds { assignment: seeds::derive(rep_seed, 1), solver: seeds::derive(rep_seed, 3) };
    let straggler_seed = seeds::derive(rep_seed, 2);

    let (_, centralized) = solve_weighted_kmedian(
        &data,
        config.k,
        SolverKind::Heuristic,
        run_seeds.solver,
        config.restarts,
    )?;
    let ground_truth = cost_points(&data, &mixture.centers, CostKind::KMedian);

    let mut base = RunConfig::new(data.clone(), Algorithm::KMedian, config.s, config.k);
    base.delta = config.delta;
    base.restarts = config.restarts;
    base.seeds = run_seeds;
    base.straggler = StragglerModel::fixed_count(config.t, straggler_seed);

    let mut baseline_cfg = base.clone();
    baseline_cfg.baseline = true;
    let baseline = run_kmedian(&baseline_cfg)?;

    let mut low_cfg = base.clone();
    low_cfg.assignment = AssignmentSource::ExplicitPa(config.pa_low);
    low_cfg.recovery = RecoveryPolicy::BestEffort;
    let low = run_kmedian(&low_cfg)?;

    let mut high_cfg = base;
    high_cfg.assignment = AssignmentSource::ExplicitPa(config.pa_high);
    high_cfg.recovery = RecoveryPolicy::BestEffort;
    let high = run_kmedian(&high_cfg)?;

    let outcome = RepOutcome {
        rep,
        costs: [ground_truth, baseline.cost, low.cost, high.cost],
        centralized,
    };
    let artifacts = (rep == 0).then(|| Rep0Artifacts {
        mixture,
        models: [
            expect_centers(baseline.model),
            expect_centers(low.model),
            expect_centers(high.model),
        ],
    });
    Ok(RepRun { outcome, artifacts })
}

/// Runs all repetitions (in parallel, merged in repetition order) and
/// aggregates per-condition statistics.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    if config.reps == 0 {
        return Err(crate::Error::Invalid("reps must be >= 1".into()));
    }
    let mut runs: Vec<RepRun> =
        (0..config.reps).into_par_iter().map(|rep| run_rep(config, rep)).collect::<Result<_>>()?;

    let per_rep: Vec<RepOutcome> = runs.iter().map(|r| r.outcome.clone()).collect();
    let rep0 = runs
        .iter_mut()
        .find_map(|r| r.artifacts.take())
        .expect("repetition 0 keeps its artifacts");

    let stats = Condition::ALL.map(|condition| {
        let idx = Condition::ALL.iter().position(|c| *c == condition).expect("fixed order");
        let costs: Vec<f64> = per_rep.iter().map(|r| r.costs[idx]).collect();
        let ratios: Vec<f64> = per_rep.iter().map(|r| r.costs[idx] / r.centralized).collect();
        let (mean_cost, std_cost) = mean_std(&costs);
        let (mean_ratio, std_ratio) = mean_std(&ratios);
        (condition, ConditionStats { mean_cost, std_cost, mean_ratio, std_ratio })
    });

    Ok(ExperimentOutput { config: *config, per_rep, stats, rep0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn experiment_is_deterministic_and_ordered() {
        let mut config = ExperimentConfig::benchmark(5);
        config.n = 400;
        config.k = 4;
        config.reps = 2;
        let a = run_experiment(&config).unwrap();
        let b = run_experiment(&config).unwrap();
        for (ra, rb) in a.per_rep.iter().zip(&b.per_rep) {
            assert_eq!(ra.costs.map(f64::to_bits), rb.costs.map(f64::to_bits));
            assert_eq!(ra.centralized.to_bits(), rb.centralized.to_bits());
        }
        assert_eq!(a.stats.map(|(c, _)| c), Condition::ALL);
    }
}
