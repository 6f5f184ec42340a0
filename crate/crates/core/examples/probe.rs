use redclust::experiment::{run_experiment, ExperimentConfig};

fn paired(per_rep: &[redclust::experiment::RepOutcome], a: usize, b: usize) -> (f64, f64) {
    let diffs: Vec<f64> = per_rep.iter().map(|r| r.costs[a] - r.costs[b]).collect();
    let mean = diffs.iter().sum::<f64>() / diffs.len() as f64;
    let sd = (diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (diffs.len() - 1) as f64).sqrt();
    (mean, sd / (diffs.len() as f64).sqrt())
}

fn main() {
    for (spread, restarts) in [(20.0, 12), (60.0, 12), (100.0, 12)] {
        let mut config = ExperimentConfig::benchmark(909);
        config.reps = 120;
        config.spread = spread;
        config.restarts = restarts;
        let out = run_experiment(&config).unwrap();
        // costs: [ground_truth, baseline, pa_low, pa_high]
        let (bl, bl_sem) = paired(&out.per_rep, 1, 2); // baseline - low (want > 0)
        let (lh, lh_sem) = paired(&out.per_rep, 2, 3); // low - high (want > 0)
        println!(
            "spread {spread:>5.0} restarts {restarts}: base-low {bl:>7.0} +- {bl_sem:>5.0} | low-high {lh:>7.0} +- {lh_sem:>5.0}"
        );
    }
}
