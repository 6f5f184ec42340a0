//! Executable checks for every approximation guarantee.
//!
//! Each suite draws seeded random instances, evaluates the corresponding
//! inequality with zero tolerance beyond a small floating-point slack, and
//! reports the worst observed margins. The suites back both the `verify`
//! CLI subcommand and the acceptance tests.
//!
//! Conditional guarantees (the cost sandwiches, the coreset and summary
//! theorems) are tested on instances *constructed to satisfy their premise*:
//! the assignment generator plants per-point survivor supports in
//! `{m, m+1}` with `m >= ceil(1/delta)`, so a recovery vector at `delta`
//! always exists. Whether plain i.i.d. assignments achieve the premise is
//! exactly the content of the randomized-construction bound, which is tested
//! separately on honest Bernoulli draws.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::assignment::{
    pa_from_theorem, property_frequency, recovery_vector, survivors_of, theorem_ell,
    verify_property, AssignmentMatrix, StragglerModel,
};
use crate::coresets::{identity_coreset, merge_coresets, relaxed_svd_coreset, Coreset};
use crate::data::{
    cost_points, cost_subspaces, CenterSet, CostKind, Dataset, KahanSum, SubspaceSet,
    WeightedDataset,
};
use crate::linalg::Mat;
use crate::pipeline::{
    build_pca_stack, run_kmedian, Algorithm, AssignmentSource, RunConfig, Seeds, SolverKind,
};
use crate::solvers::{kmedian_exact, r_pca};
use crate::{seeds, Error, Result};

/// Outcome of one verification suite.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub name: String,
    pub pass: bool,
    pub instances: usize,
    pub violations: usize,
    /// Worst observed quantities, e.g. ratios against their bounds.
    pub margins: BTreeMap<String, f64>,
}

impl Report {
    fn new(name: &str, instances: usize) -> Self {
        Self {
            schema: 1,
            name: name.to_string(),
            pass: true,
            instances,
            violations: 0,
            margins: BTreeMap::new(),
        }
    }

    fn violation(&mut self) {
        self.violations += 1;
        self.pass = false;
    }

    /// Keeps the largest value seen under `key`.
    fn track_max(&mut self, key: &str, value: f64) {
        let slot = self.margins.entry(key.to_string()).or_insert(f64::NEG_INFINITY);
        *slot = slot.max(value);
    }

    /// Keeps the smallest value seen under `key`.
    fn track_min(&mut self, key: &str, value: f64) {
        let slot = self.margins.entry(key.to_string()).or_insert(f64::INFINITY);
        *slot = slot.min(value);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn instance_rng(seed: u64, instance: usize) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seeds::derive(seed, instance as u64))
}

/// A uniformly random orthonormal `r`-dimensional basis in `R^d`.
pub(crate) fn random_subspace(d: usize, r: usize, rng: &mut ChaCha12Rng) -> SubspaceSet {
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(r);
    while cols.len() < r {
        let mut v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        for _ in 0..2 {
            for c in &cols {
                let dot: f64 = c.iter().zip(&v).map(|(a, b)| a * b).sum();
                for (vi, ci) in v.iter_mut().zip(c) {
                    *vi -= dot * ci;
                }
            }
        }
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 {
            for vi in v.iter_mut() {
                *vi /= norm;
            }
            cols.push(v);
        }
    }
    SubspaceSet::single(cols, d).expect("orthonormalized basis")
}

fn random_points(n: usize, d: usize, rng: &mut ChaCha12Rng) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..d).map(|_| rng.gen_range(-10.0..10.0)).collect()).collect()
}

fn random_weights(n: usize, rng: &mut ChaCha12Rng) -> Vec<f64> {
    (0..n)
        .map(|_| if rng.gen::<f64>() < 0.1 { 0.0 } else { rng.gen_range(0.1..5.0) })
        .collect()
}

fn probe_centers(data: &WeightedDataset, k: usize, rng: &mut ChaCha12Rng) -> CenterSet {
    let d = data.dim();
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for j in 0..data.len() {
        for (c, &x) in data.point(j).iter().enumerate() {
            lo[c] = lo[c].min(x);
            hi[c] = hi[c].max(x);
        }
    }
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
    CenterSet::new(centers).expect("finite probe centers")
}

/// Builds an assignment whose survivor-column supports all lie in
/// `{m, m+1}` with `(m + 1) / m <= 1 + delta`, so the uniform recovery
/// vector at `delta` exists by construction. Nodes outside `survivors` get
/// independent Bernoulli(0.4) entries.
fn construct_resilient_assignment(
    n: usize,
    s: usize,
    survivors: &[usize],
    delta: f64,
    rng: &mut ChaCha12Rng,
) -> AssignmentMatrix {
    let cap = survivors.len();
    let need = (1.0 / delta).ceil().max(1.0) as usize;
    let mixed = cap > need;
    let base = if mixed { rng.gen_range(need..cap) } else { rng.gen_range(1..=cap) };

    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); s];
    for j in 0..n {
        let support = if mixed && rng.gen::<bool>() { base + 1 } else { base };
        for pick in rand::seq::index::sample(rng, cap, support).into_vec() {
            rows[survivors[pick]].push(j);
        }
        for i in 0..s {
            if survivors.binary_search(&i).is_err() && rng.gen::<f64>() < 0.4 {
                rows[i].push(j);
            }
        }
    }
    for row in &mut rows {
        row.sort_unstable();
    }
    AssignmentMatrix::from_rows(s, n, rows).expect("constructed assignment is valid")
}

fn random_survivors(s: usize, rng: &mut ChaCha12Rng) -> Vec<usize> {
    let size = rng.gen_range(1..=s);
    let mut set = rand::seq::index::sample(rng, s, size).into_vec();
    set.sort_unstable();
    set
}

const DELTAS: [f64; 3] = [0.2, 0.5, 1.0];

/// Resilience-property behaviors on honest random draws: recovery output
/// passes verification, matches a brute-force column-support oracle, is
/// invariant to survivor order, and is monotone in delta.
pub fn check_property(instances: usize, seed: u64) -> Report {
    let mut report = Report::new("property", instances);
    for inst in 0..instances {
        let mut rng = instance_rng(seed, inst);
        let s = rng.gen_range(2..10);
        let n = rng.gen_range(2..60);
        let p_a = rng.gen_range(0.1..=1.0);
        let a = match crate::assignment::random_assignment(n, s, p_a, rng.gen()) {
            Ok(a) => a,
            Err(_) => {
                report.violation();
                continue;
            }
        };
        let survivors = random_survivors(s, &mut rng);
        let delta = rng.gen_range(0.0..2.0);

        let mut support = vec![0usize; n];
        for j in 0..n {
            for &i in &survivors {
                if a.contains(i, j) {
                    support[j] += 1;
                }
            }
        }
        let covered = support.iter().all(|&m| m >= 1);
        let ratio_ok = covered && {
            let max = *support.iter().max().unwrap() as f64;
            let min = *support.iter().min().unwrap() as f64;
            max / min <= 1.0 + delta + 1e-12
        };

        match recovery_vector(&a, &survivors, delta) {
            Ok(rv) => {
                if !(covered && ratio_ok) {
                    report.violation();
                }
                if !verify_property(&a, rv.survivors(), delta, rv.b()) {
                    report.violation();
                }
                report.track_max("max_delta_gap", rv.delta_achieved() - delta);
                let mut reversed = survivors.clone();
                reversed.reverse();
                if recovery_vector(&a, &reversed, delta).ok().as_ref() != Some(&rv) {
                    report.violation();
                }
                if recovery_vector(&a, &survivors, delta + 0.5).is_err() {
                    report.violation();
                }
            }
            Err(Error::PointUnrecoverable { .. }) => {
                if covered {
                    report.violation();
                }
            }
            Err(Error::DeltaExceeded { .. }) => {
                if ratio_ok {
                    report.violation();
                }
            }
            Err(_) => report.violation(),
        }
    }
    report
}

/// Cost sandwich under recovery weights, on random weighted instances:
/// `cost(P, C, w) <= sum_i b_i cost(P_i, C, w) <= (1 + delta) cost(P, C, w)`.
pub fn check_lemma2(instances: usize, probes: usize, seed: u64) -> Report {
    let mut report = Report::new("lemma2", instances);
    for inst in 0..instances {
        let mut rng = instance_rng(seed, inst);
        let n = rng.gen_range(20..=100);
        let d = rng.gen_range(2..=10);
        let s = rng.gen_range(4..=12);
        let delta = DELTAS[rng.gen_range(0..DELTAS.len())];
        let data = WeightedDataset::new(
            Dataset::new(random_points(n, d, &mut rng)).expect("valid points"),
            random_weights(n, &mut rng),
        )
        .expect("valid weights");

        let survivors = random_survivors(s, &mut rng);
        let a = construct_resilient_assignment(n, s, &survivors, delta, &mut rng);
        let rv = recovery_vector(&a, &survivors, delta).expect("constructed to succeed");

        let node_subsets: Vec<Option<WeightedDataset>> = (0..s)
            .map(|i| {
                let members = a.node_points(i);
                (!members.is_empty()).then(|| data.subset(members).expect("valid subset"))
            })
            .collect();

        for _ in 0..probes {
            let k = rng.gen_range(1..=4);
            let probe = probe_centers(&data, k, &mut rng);
            for kind in [CostKind::KMedian, CostKind::KMeans] {
                let whole = cost_points(&data, &probe, kind);
                let mut split = KahanSum::default();
                for (&i, &b) in rv.survivors().iter().zip(rv.b()) {
                    if let Some(subset) = &node_subsets[i] {
                        split.add(b * cost_points(subset, &probe, kind));
                    }
                }
                let split = split.value();
                let slack = 1e-9 * whole.max(1e-300);
                if split < whole - slack || split > (1.0 + delta) * whole + slack {
                    report.violation();
                }
                if whole > 0.0 {
                    report.track_min("worst_lower_ratio", split / whole);
                    report.track_max("worst_upper_ratio", split / ((1.0 + delta) * whole));
                }
            }
        }
    }
    report
}

/// Center-summary sandwich with exact local solvers on small instances:
/// `cost(P, C) - sum_i b_i cost(P_i, Y_i) <= cost(Y, C, w) <= 2 (1 + delta) cost(P, C)`.
pub fn check_lemma3(instances: usize, seed: u64) -> Report {
    let mut report = Report::new("lemma3", instances);
    let k = 2;
    for inst in 0..instances {
        let mut rng = instance_rng(seed, inst);
        let n = rng.gen_range(6..=16);
        let d = rng.gen_range(1..=3);
        let s = rng.gen_range(2..=4);
        let delta = DELTAS[rng.gen_range(0..DELTAS.len())];
        let data = WeightedDataset::uniform(
            Dataset::new(random_points(n, d, &mut rng)).expect("valid points"),
        );

        let survivors = random_survivors(s, &mut rng);
        let a = construct_resilient_assignment(n, s, &survivors, delta, &mut rng);
        let rv = recovery_vector(&a, &survivors, delta).expect("constructed to succeed");

        // Local exact k-median centers with cluster masses, then the
        // b-weighted merged summary.
        let mut summary_points = Vec::new();
        let mut summary_weights = Vec::new();
        let mut local_fit = KahanSum::default();
        for (&i, &b) in rv.survivors().iter().zip(rv.b()) {
            let members = a.node_points(i);
            if members.is_empty() {
                continue;
            }
            let local = data.subset(members).expect("valid subset");
            let centers = if local.len() <= k {
                CenterSet::new(local.base().points().to_vec()).expect("non-empty")
            } else {
                kmedian_exact(&local, k).expect("small instance").0
            };
            let mut masses = vec![0.0; centers.k()];
            for j in 0..local.len() {
                masses[crate::data::cluster_of(local.point(j), &centers)] += local.weight(j);
            }
            local_fit.add(b * cost_points(&local, &centers, CostKind::KMedian));
            for (c, &mass) in centers.centers().iter().zip(&masses) {
                summary_points.push(c.clone());
                summary_weights.push(b * mass);
            }
        }
        let merged = WeightedDataset::new(
            Dataset::new(summary_points).expect("non-empty summary"),
            summary_weights,
        )
        .expect("valid summary weights");
        let local_fit = local_fit.value();

        for _ in 0..20 {
            let probe = probe_centers(&data, k, &mut rng);
            let whole = cost_points(&data, &probe, CostKind::KMedian);
            let summary = cost_points(&merged, &probe, CostKind::KMedian);
            let slack = 1e-9 * whole.max(1e-300);
            if summary < whole - local_fit - slack
                || summary > 2.0 * (1.0 + delta) * whole + slack
            {
                report.violation();
            }
            if whole > 0.0 {
                report.track_max("worst_upper_ratio", summary / (2.0 * (1.0 + delta) * whole));
                report.track_min("worst_lower_slack", summary - (whole - local_fit));
            }
        }
    }
    report
}

/// Merged identity coresets stay a `2 delta`-coreset (the proof's explicit
/// `1 +- 2 delta` bounds, with part epsilon = 0).
pub fn check_lemma5(instances: usize, probes: usize, seed: u64) -> Report {
    let mut report = Report::new("lemma5", instances);
    for inst in 0..instances {
        let mut rng = instance_rng(seed, inst);
        let n = rng.gen_range(20..=80);
        let d = rng.gen_range(2..=6);
        let s = rng.gen_range(4..=10);
        let delta = DELTAS[rng.gen_range(0..DELTAS.len())];
        let data = WeightedDataset::new(
            Dataset::new(random_points(n, d, &mut rng)).expect("valid points"),
            random_weights(n, &mut rng),
        )
        .expect("valid weights");

        let survivors = random_survivors(s, &mut rng);
        let a = construct_resilient_assignment(n, s, &survivors, delta, &mut rng);
        let rv = recovery_vector(&a, &survivors, delta).expect("constructed to succeed");

        let parts: Vec<(Coreset, usize)> = rv
            .survivors()
            .iter()
            .filter_map(|&i| {
                let members = a.node_points(i);
                (!members.is_empty()).then(|| {
                    (identity_coreset(&data.subset(members).expect("valid subset")), i)
                })
            })
            .collect();
        let merged = merge_coresets(&parts, &rv).expect("survivor parts merge");
        let eps = merged.epsilon().expect("identity parts carry epsilon");
        if eps > 2.0 * delta + 1e-12 {
            report.violation();
        }
        report.track_max("max_recorded_epsilon", eps);

        for _ in 0..probes {
            let kcount = rng.gen_range(1..=3);
            let probe = probe_centers(&data, kcount, &mut rng);
            for kind in [CostKind::KMedian, CostKind::KMeans] {
                let whole = cost_points(&data, &probe, kind);
                let summary = cost_points(merged.summary(), &probe, kind);
                let slack = 1e-9 * whole.max(1e-300);
                if summary < (1.0 - 2.0 * delta) * whole - slack
                    || summary > (1.0 + 2.0 * delta) * whole + slack
                {
                    report.violation();
                }
                if whole > 0.0 {
                    report.track_min("worst_lower_ratio", summary / whole);
                    report.track_max("worst_upper_ratio", summary / ((1.0 + 2.0 * delta) * whole));
                }
            }
        }
    }
    report
}

/// Relaxed-coreset sandwich with the discarded spectral energy as Delta:
/// `cost(P, L) <= cost(S, L) + Delta <= (1 + delta) cost(P, L)`.
pub fn check_lemma6(matrices: usize, probes: usize, seed: u64) -> Report {
    let mut report = Report::new("lemma6", matrices);
    for inst in 0..matrices {
        let mut rng = instance_rng(seed, inst);
        let n = rng.gen_range(4..=40);
        let d = rng.gen_range(2..=12);
        let r = rng.gen_range(1..=4.min(d - 1));
        let delta = DELTAS[rng.gen_range(0..DELTAS.len())];
        let rows = random_points(n, d, &mut rng);
        let m = Mat::from_rows(&rows).expect("valid matrix");

        let relaxed = relaxed_svd_coreset(&m, r, delta).expect("valid inputs");
        let source = WeightedDataset::uniform(Dataset::new(rows).expect("valid points"));
        let summary =
            WeightedDataset::uniform(Dataset::new(relaxed.rows().to_rows()).expect("rows"));

        for _ in 0..probes {
            let l = random_subspace(d, r, &mut rng);
            let whole = cost_subspaces(&source, &l);
            let approx = cost_subspaces(&summary, &l) + relaxed.delta_term();
            let slack = 1e-8 * whole.max(1.0);
            if approx < whole - slack || approx > (1.0 + delta) * whole + slack {
                report.violation();
            }
            if whole > 0.0 {
                report.track_min("worst_lower_ratio", approx / whole);
                report.track_max("worst_upper_ratio", approx / ((1.0 + delta) * whole));
            }
        }
    }
    report
}

/// Clustering through a merged coreset with an exact solver stays within
/// `(1 + 3 epsilon)` of the exact optimum.
pub fn check_thm1(instances: usize, seed: u64) -> Report {
    let mut report = Report::new("thm1", instances);
    let k = 2;
    for inst in 0..instances {
        let mut rng = instance_rng(seed, inst);
        let n = rng.gen_range(6..=12);
        let d = rng.gen_range(1..=3);
        let s = rng.gen_range(8..=10);
        let data = WeightedDataset::uniform(
            Dataset::new(random_points(n, d, &mut rng)).expect("valid points"),
        );

        // Supports in {m, m+1} with m >= 7 keep the merged epsilon
        // 2 * delta_achieved <= 2/7 < 1/3, inside the guarantee range.
        let survivors: Vec<usize> = (0..s).collect();
        let mut rows: Vec<Vec<usize>> = vec![Vec::new(); s];
        let base = rng.gen_range(7..s);
        for j in 0..n {
            let support = if rng.gen::<bool>() { base + 1 } else { base };
            for pick in rand::seq::index::sample(&mut rng, s, support).into_vec() {
                rows[pick].push(j);
            }
        }
        for row in &mut rows {
            row.sort_unstable();
        }
        let a = AssignmentMatrix::from_rows(s, n, rows).expect("valid assignment");
        let rv = recovery_vector(&a, &survivors, 1.0 / 7.0 + 1e-12).expect("ratio <= 8/7");

        let parts: Vec<(Coreset, usize)> = survivors
            .iter()
            .filter_map(|&i| {
                let members = a.node_points(i);
                (!members.is_empty()).then(|| {
                    (identity_coreset(&data.subset(members).expect("valid subset")), i)
                })
            })
            .collect();
        let merged = merge_coresets(&parts, &rv).expect("survivor parts merge");
        let eps = merged.epsilon().expect("identity parts carry epsilon");
        if eps >= 1.0 / 3.0 {
            report.violation();
            continue;
        }

        let (from_coreset, _) = kmedian_exact(merged.summary(), k).expect("small distinct set");
        let achieved = cost_points(&data, &from_coreset, CostKind::KMedian);
        let (_, opt) = kmedian_exact(&data, k).expect("small instance");

        let bound = (1.0 + 3.0 * eps) * opt;
        if achieved > bound + 1e-9 * bound.max(1e-300) {
            report.violation();
        }
        if opt > 0.0 {
            report.track_max("worst_ratio", achieved / opt);
            report.track_max("worst_bound_ratio", achieved / bound.max(1e-300));
        }
    }
    report
}

/// End-to-end distributed k-median with exact solvers stays within
/// `6 (1 + delta)` of the discrete optimum.
pub fn check_thm4(instances: usize, seed: u64) -> Report {
    let mut report = Report::new("thm4", instances);
    let k = 2;
    for inst in 0..instances {
        let mut rng = instance_rng(seed, inst);
        let n = rng.gen_range(6..=12);
        let d = rng.gen_range(1..=3);
        let s = rng.gen_range(3..=5);
        let t = rng.gen_range(0..=1);
        // Two survivors can only achieve support ratios 1 or 2, so the
        // tighter delta needs at least three.
        let delta = if s - t < 3 { 1.0 } else { [0.5, 1.0][rng.gen_range(0..2)] };
        let p_a = rng.gen_range(0.85..0.95);
        let data = WeightedDataset::uniform(
            Dataset::new(random_points(n, d, &mut rng)).expect("valid points"),
        );

        let mut config = RunConfig::new(data.clone(), Algorithm::KMedian, s, k);
        config.delta = delta;
        config.solver = SolverKind::Exact;
        config.assignment = AssignmentSource::ExplicitPa(p_a);

        // Honest i.i.d. assignment draws: retry seeds until the survivor
        // supports admit a recovery vector at this delta.
        let mut result = None;
        for attempt in 0..200u64 {
            config.seeds = Seeds {
                assignment: seeds::derive(seed, (inst as u64) << 16 | attempt),
                solver: 7,
            };
            config.straggler =
                StragglerModel::fixed_count(t, seeds::derive(seed, (inst as u64) << 32 | attempt));
            match run_kmedian(&config) {
                Ok(r) => {
                    result = Some(r);
                    break;
                }
                Err(Error::PointUnrecoverable { .. } | Error::DeltaExceeded { .. }) => continue,
                Err(e) => panic!("unexpected pipeline error: {e}"),
            }
        }
        let Some(result) = result else {
            report.violation();
            continue;
        };

        let (_, opt) = kmedian_exact(&data, k).expect("small instance");
        let bound = 6.0 * (1.0 + delta) * opt;
        if result.cost > bound + 1e-9 * bound.max(1e-300) {
            report.violation();
        }
        if opt > 0.0 {
            report.track_max("worst_ratio", result.cost / opt);
            report.track_max("worst_bound_ratio", result.cost / bound.max(1e-300));
        }
    }
    report
}

/// Distributed r-PCA through relaxed summaries stays within `(1 + 4 delta)`
/// of the exact principal subspace cost. Includes a lossless configuration
/// (`r1 >= d`, uniform supports) whose cost ratio must be 1 within 1e-8.
pub fn check_thm7(instances: usize, seed: u64) -> Report {
    let mut report = Report::new("thm7", instances);
    let thm7_deltas = [0.1, 0.2, 0.5];
    for inst in 0..instances {
        let mut rng = instance_rng(seed, inst);
        let n = rng.gen_range(50..=400);
        let d = rng.gen_range(5..=25);
        let r = rng.gen_range(1..=5.min(d - 1));
        let delta = thm7_deltas[rng.gen_range(0..thm7_deltas.len())];
        let p_t = rng.gen_range(0.0..=0.3);
        let s = rng.gen_range(12..=24);
        let data = WeightedDataset::uniform(
            Dataset::new(random_points(n, d, &mut rng)).expect("valid points"),
        );

        // Draw the random straggler set first, then construct an assignment
        // that is resilient for the realized survivors at this delta.
        let stragglers: Vec<usize> = (0..s).filter(|_| rng.gen::<f64>() < p_t).collect();
        let survivors = survivors_of(s, &stragglers);
        if survivors.is_empty() {
            continue;
        }
        let a = construct_resilient_assignment(n, s, &survivors, delta, &mut rng);
        let rv = recovery_vector(&a, &survivors, delta).expect("constructed to succeed");

        let stack = build_pca_stack(&data, &a, rv.survivors(), |i| rv.b_for(i).unwrap(), r, delta)
            .expect("valid inputs")
            .expect("non-empty stack");
        let (model, _) = r_pca(&stack.rows, r).expect("valid stack");
        let achieved = cost_subspaces(&data, &model);
        let (_, opt) = r_pca(&data, r).expect("exact principal subspace");

        let bound = (1.0 + 4.0 * delta) * opt;
        if achieved > bound + 1e-9 * bound.max(1e-300) {
            report.violation();
        }
        if opt > 0.0 {
            report.track_max("worst_ratio", achieved / opt);
            report.track_max("worst_bound_ratio", achieved / bound.max(1e-300));
        }
    }

    // Lossless configuration: r1 >= d keeps every singular direction and
    // uniform supports keep the weights flat, so the ratio is exactly 1.
    {
        let mut rng = instance_rng(seed, instances + 1);
        let (n, d, r, s) = (60, 6, 2, 5);
        let delta = 0.4; // ceil(2 + 2/0.4) - 1 = 6 = d
        let data = WeightedDataset::uniform(
            Dataset::new(random_points(n, d, &mut rng)).expect("valid points"),
        );
        let rows: Vec<Vec<usize>> = (0..s).map(|_| (0..n).collect()).collect();
        let a = AssignmentMatrix::from_rows(s, n, rows).expect("all-ones");
        let survivors: Vec<usize> = (0..s).collect();
        let rv = recovery_vector(&a, &survivors, delta).expect("uniform supports");
        let stack = build_pca_stack(&data, &a, rv.survivors(), |i| rv.b_for(i).unwrap(), r, delta)
            .expect("valid inputs")
            .expect("non-empty stack");
        let (model, _) = r_pca(&stack.rows, r).expect("valid stack");
        let achieved = cost_subspaces(&data, &model);
        let (_, opt) = r_pca(&data, r).expect("exact principal subspace");
        let ratio = achieved / opt;
        report.track_max("lossless_ratio", ratio);
        if (ratio - 1.0).abs() > 1e-8 {
            report.violation();
        }
    }
    report
}

/// Empirical resilience frequency of the theorem-driven random ensemble:
/// the success fraction over joint `(A, R)` draws must reach `1 - 1/n`.
/// Also reports (without asserting) a stressed variant at `p_a = 0.5`.
pub fn check_thm8(
    n: usize,
    s: usize,
    p_t: f64,
    delta: f64,
    trials: usize,
    seed: u64,
) -> Result<Report> {
    let mut report = Report::new("thm8", trials);
    let bound = theorem_ell(delta, p_t, n);
    let p_a = pa_from_theorem(delta, p_t, n, s);
    let model = StragglerModel::random_iid(p_t, seeds::derive(seed, 1))?;

    let frequency = property_frequency(n, s, p_a, &model, delta, trials, seed)?;
    let threshold = 1.0 - 1.0 / n as f64;
    report.margins.insert("ell".into(), bound.ell);
    report.margins.insert("gamma".into(), bound.gamma);
    report.margins.insert("pa".into(), p_a);
    report.margins.insert("frequency".into(), frequency);
    report.margins.insert("threshold".into(), threshold);
    if frequency < threshold {
        report.violation();
    }

    let stressed = property_frequency(n, s, 0.5, &model, delta, trials, seeds::derive(seed, 2))?;
    report.margins.insert("stressed_pa".into(), 0.5);
    report.margins.insert("stressed_frequency".into(), stressed);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn property_suite_passes() {
        let report = check_property(80, 11);
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn lemma_suites_pass_at_smoke_scale() {
        for (name, report) in [
            ("lemma2", check_lemma2(15, 5, 21)),
            ("lemma3", check_lemma3(15, 22)),
            ("lemma5", check_lemma5(15, 5, 23)),
            ("lemma6", check_lemma6(15, 10, 24)),
        ] {
            assert!(report.pass, "{name}: {report:?}");
            assert_eq!(report.violations, 0, "{name}");
        }
    }

    #[test]
    fn theorem_suites_pass_at_smoke_scale() {
        for (name, report) in [
            ("thm1", check_thm1(10, 31)),
            ("thm4", check_thm4(10, 32)),
            ("thm7", check_thm7(6, 33)),
        ] {
            assert!(report.pass, "{name}: {report:?}");
        }
        let thm8 = check_thm8(100, 10, 0.2, 1.0, 100, 34).unwrap();
        assert!(thm8.pass, "{thm8:?}");
    }

    #[test]
    fn reports_serialize_with_sorted_margins() {
        let report = check_lemma6(3, 3, 5);
        let json = report.to_json();
        assert!(json.contains("\"schema\": 1"));
        assert!(json.contains("\"name\": \"lemma6\""));
    }
}
