//! Local and coordinator-side optimization.
//!
//! Two weighted k-median solvers live here: a brute-force exact search over
//! discrete (medoid) centers for proofs and tests, and a scalable seeded
//! heuristic (k-median++ seeding, then alternation with Weiszfeld center
//! updates). Subspace fitting is powered by the Jacobi SVD in [`crate::linalg`]:
//! `r_pca` for a single subspace and `subspace_cluster` for k of them.
//!
//! All solvers are pure functions of their inputs; randomized ones take an
//! explicit seed and return bit-identical results for identical calls.

use std::collections::HashMap;

use itertools::Itertools;
use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::data::{
    cluster_of, cost_points, cost_subspaces, distance, nearest_subspace, CenterSet, CostKind,
    SubspaceSet, WeightedDataset,
};
use crate::linalg::{complete_orthonormal, svd, Mat};
use crate::{Error, Result};

pub use crate::linalg::Svd;

/// Hard cap on distinct points for the exact combinatorial search.
pub const MAX_EXACT_DISTINCT: usize = 20;

const OUTER_ROUNDS: usize = 100;
const OUTER_TOL: f64 = 1e-6;
const WEISZFELD_ITERS: usize = 100;
const WEISZFELD_TOL: f64 = 1e-7;
const WEISZFELD_SNAP: f64 = 1e-12;

/// Exact weighted k-median over discrete (medoid) candidates.
///
/// Searches every k-subset of the distinct points of `p` and returns the
/// cheapest, breaking cost ties toward the lexicographically smallest index
/// tuple. Bitwise-identical duplicate points collapse into one candidate, so
/// the size cap applies to distinct points.
pub fn kmedian_exact(p: &WeightedDataset, k: usize) -> Result<(CenterSet, f64)> {
    if k == 0 {
        return Err(Error::Invalid("k must be >= 1".into()));
    }
    if k > p.len() {
        return Err(Error::Invalid(format!("k = {k} exceeds n = {}", p.len())));
    }
    // First-occurrence representatives of each distinct point.
    let mut seen: HashMap<Vec<u64>, ()> = HashMap::new();
    let mut reps: Vec<usize> = Vec::new();
    for j in 0..p.len() {
        let key: Vec<u64> = p.point(j).iter().map(|x| x.to_bits()).collect();
        if seen.insert(key, ()).is_none() {
            reps.push(j);
        }
    }
    if reps.len() > MAX_EXACT_DISTINCT {
        return Err(Error::InstanceTooLarge { distinct: reps.len(), max: MAX_EXACT_DISTINCT });
    }

    if k >= reps.len() {
        // Every distinct point becomes a center: cost is exactly zero.
        let mut centers: Vec<Vec<f64>> = reps.iter().map(|&j| p.point(j).to_vec()).collect();
        while centers.len() < k {
            centers.push(p.point(reps[0]).to_vec());
        }
        return Ok((CenterSet::new(centers)?, 0.0));
    }

    let mut best_cost = f64::INFINITY;
    let mut best: Option<Vec<usize>> = None;
    for combo in reps.iter().copied().combinations(k) {
        let mut cost = 0.0;
        for j in 0..p.len() {
            let w = p.weight(j);
            if w == 0.0 {
                continue;
            }
            let d = combo
                .iter()
                .map(|&c| distance(p.point(j), p.point(c)))
                .fold(f64::INFINITY, f64::min);
            cost += w * d;
        }
        if cost < best_cost {
            best_cost = cost;
            best = Some(combo);
        }
    }
    let combo = best.expect("at least one subset");
    let centers = CenterSet::new(combo.iter().map(|&j| p.point(j).to_vec()).collect())?;
    Ok((centers, best_cost))
}

/// Weighted geometric median by Weiszfeld iteration, started from the
/// weighted coordinate-wise mean.
///
/// Stops when an iterate lands within `1e-12` of a data point (where the
/// update is singular) or when relative movement drops below `1e-7`.
pub fn geometric_median(points: &[Vec<f64>], weights: &[f64]) -> Result<Vec<f64>> {
    if points.is_empty() || points.len() != weights.len() {
        return Err(Error::Invalid("geometric_median needs matching non-empty inputs".into()));
    }
    let pairs: Vec<(&[f64], f64)> =
        points.iter().map(Vec::as_slice).zip(weights.iter().copied()).collect();
    Ok(weiszfeld(&pairs))
}

fn weiszfeld(pairs: &[(&[f64], f64)]) -> Vec<f64> {
    let dim = pairs[0].0.len();
    let total: f64 = pairs.iter().map(|&(_, w)| w).sum();

    let mut y = vec![0.0; dim];
    if total > 0.0 {
        for (p, w) in pairs {
            for (yi, pi) in y.iter_mut().zip(*p) {
                *yi += w * pi;
            }
        }
        for yi in y.iter_mut() {
            *yi /= total;
        }
    } else {
        // All-zero weights: any center costs zero; use the plain mean.
        for (p, _) in pairs {
            for (yi, pi) in y.iter_mut().zip(*p) {
                *yi += pi;
            }
        }
        for yi in y.iter_mut() {
            *yi /= pairs.len() as f64;
        }
        return y;
    }

    for _ in 0..WEISZFELD_ITERS {
        if pairs.iter().any(|(p, _)| distance(&y, p) <= WEISZFELD_SNAP) {
            return y;
        }
        let mut num = vec![0.0; dim];
        let mut den = 0.0;
        for (p, w) in pairs {
            if *w == 0.0 {
                continue;
            }
            let inv = w / distance(&y, p);
            den += inv;
            for (ni, pi) in num.iter_mut().zip(*p) {
                *ni += inv * pi;
            }
        }
        if den == 0.0 {
            return y;
        }
        let next: Vec<f64> = num.iter().map(|x| x / den).collect();
        let moved = distance(&next, &y);
        let scale = next.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
        y = next;
        if moved <= WEISZFELD_TOL * scale {
            break;
        }
    }
    y
}

fn weighted_pick(scores: &[f64], rng: &mut ChaCha12Rng) -> usize {
    match WeightedIndex::new(scores) {
        Ok(dist) => dist.sample(rng),
        // All-zero scores: any choice is equally good.
        Err(_) => rng.gen_range(0..scores.len()),
    }
}

fn seed_centers(p: &WeightedDataset, k: usize, rng: &mut ChaCha12Rng) -> Vec<Vec<f64>> {
    let n = p.len();
    let first = weighted_pick(p.weights(), rng);
    let mut centers = vec![p.point(first).to_vec()];
    let mut nearest: Vec<f64> = (0..n).map(|j| distance(p.point(j), &centers[0])).collect();
    while centers.len() < k {
        let scores: Vec<f64> = (0..n).map(|j| p.weight(j) * nearest[j]).collect();
        let pick = weighted_pick(&scores, rng);
        centers.push(p.point(pick).to_vec());
        for j in 0..n {
            nearest[j] = nearest[j].min(distance(p.point(j), centers.last().unwrap()));
        }
    }
    centers
}

/// Seeded weighted k-median heuristic.
///
/// Seeds centers k-median++ style (first center sampled proportionally to
/// weight, later ones to weight times distance), then alternates nearest-
/// center assignment with Weiszfeld updates until the relative cost
/// improvement drops below `1e-6` or 100 rounds pass. Empty clusters are
/// reseeded with the point of maximum weighted distance. The returned cost
/// is the best cost seen, so it never exceeds any intermediate round's.
pub fn kmedian_heuristic(p: &WeightedDataset, k: usize, seed: u64) -> Result<(CenterSet, f64)> {
    if k == 0 {
        return Err(Error::Invalid("k must be >= 1".into()));
    }
    if k > p.len() {
        return Err(Error::Invalid(format!("k = {k} exceeds n = {}", p.len())));
    }
    let n = p.len();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut centers = seed_centers(p, k, &mut rng);

    let eval = |centers: &[Vec<f64>]| -> f64 {
        let cs = CenterSet::new(centers.to_vec()).expect("validated centers");
        cost_points(p, &cs, CostKind::KMedian)
    };

    let mut best_centers = centers.clone();
    let mut best_cost = eval(&centers);
    let mut prev_cost = best_cost;

    for _ in 0..OUTER_ROUNDS {
        let center_set = CenterSet::new(centers.clone()).expect("validated centers");
        let mut assign: Vec<usize> = (0..n).map(|j| cluster_of(p.point(j), &center_set)).collect();

        // Reseed empty clusters one at a time; each fix changes assignments.
        loop {
            let mut counts = vec![0usize; k];
            for &c in &assign {
                counts[c] += 1;
            }
            let Some(empty) = counts.iter().position(|&c| c == 0) else { break };
            let (mut best_j, mut best_score) = (0usize, 0.0f64);
            for j in 0..n {
                let d = (0..k)
                    .map(|c| distance(p.point(j), &centers[c]))
                    .fold(f64::INFINITY, f64::min);
                let score = p.weight(j) * d;
                if score > best_score {
                    best_score = score;
                    best_j = j;
                }
            }
            if best_score <= 0.0 {
                break; // every weighted point already sits on a center
            }
            centers[empty] = p.point(best_j).to_vec();
            let refreshed = CenterSet::new(centers.clone()).expect("validated centers");
            for (j, slot) in assign.iter_mut().enumerate() {
                *slot = cluster_of(p.point(j), &refreshed);
            }
        }

        for c in 0..k {
            let members: Vec<(&[f64], f64)> = (0..n)
                .filter(|&j| assign[j] == c)
                .map(|j| (p.point(j), p.weight(j)))
                .collect();
            if !members.is_empty() {
                centers[c] = weiszfeld(&members);
            }
        }

        let cost = eval(&centers);
        if cost < best_cost {
            best_cost = cost;
            best_centers = centers.clone();
        }
        if prev_cost <= 0.0 || (prev_cost - cost) / prev_cost < OUTER_TOL {
            break;
        }
        prev_cost = cost;
    }

    Ok((CenterSet::new(best_centers)?, best_cost))
}

/// Weighted r-PCA: the span of the top `r` right singular vectors of the
/// matrix whose rows are `sqrt(w_j) * p_j`, with its residual cost on `p`.
pub fn r_pca(p: &WeightedDataset, r: usize) -> Result<(SubspaceSet, f64)> {
    let d = p.dim();
    if r == 0 || r > d {
        return Err(Error::Invalid(format!("r = {r} outside [1, {d}]")));
    }
    let scaled: Vec<Vec<f64>> = (0..p.len())
        .map(|j| {
            let sw = p.weight(j).sqrt();
            p.point(j).iter().map(|x| sw * x).collect()
        })
        .collect();
    let m = Mat::from_rows(&scaled)?;
    let decomp = svd(&m)?;
    let available = decomp.sigma.len().min(r);
    let mut basis: Vec<Vec<f64>> = (0..available).map(|i| decomp.vt.row(i)).collect();
    // Fewer singular directions than r: any completion is optimal.
    complete_orthonormal(&mut basis, d, r);
    let subspace = SubspaceSet::single(basis, d)?;
    let cost = cost_subspaces(p, &subspace);
    Ok((subspace, cost))
}

/// Seeded (r, k)-subspace clustering by alternation.
///
/// Initial subspaces come from r-PCA over k random groups of points; rounds
/// then alternate residual-based assignment with per-cluster r-PCA refits.
/// Empty clusters keep their previous basis. Stops when the relative cost
/// improvement drops below `1e-6` or after 100 rounds.
pub fn subspace_cluster(
    p: &WeightedDataset,
    r: usize,
    k: usize,
    seed: u64,
) -> Result<(SubspaceSet, f64)> {
    let d = p.dim();
    if k == 0 {
        return Err(Error::Invalid("k must be >= 1".into()));
    }
    if r == 0 || r >= d {
        return Err(Error::Invalid(format!("r = {r} outside [1, {d})")));
    }
    let n = p.len();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let perm = rand::seq::index::sample(&mut rng, n, n).into_vec();

    let mut bases: Vec<Vec<Vec<f64>>> = Vec::with_capacity(k);
    for g in 0..k {
        let members: Vec<usize> = perm.iter().skip(g).step_by(k).copied().collect();
        if members.is_empty() {
            let mut basis = Vec::new();
            complete_orthonormal(&mut basis, d, r);
            bases.push(basis);
        } else {
            let (ss, _) = r_pca(&p.subset(&members)?, r)?;
            bases.push(ss.basis(0).to_vec());
        }
    }

    let assemble = |bases: &Vec<Vec<Vec<f64>>>| SubspaceSet::new(bases.clone(), d, r);
    let mut current = assemble(&bases)?;
    let mut best = current.clone();
    let mut best_cost = cost_subspaces(p, &current);
    let mut prev_cost = best_cost;

    for _ in 0..OUTER_ROUNDS {
        let assign: Vec<usize> = (0..n).map(|j| nearest_subspace(p.point(j), &current)).collect();
        for c in 0..k {
            let members: Vec<usize> = (0..n).filter(|&j| assign[j] == c).collect();
            if members.is_empty() {
                continue; // degenerate cluster: keep the previous basis
            }
            let (ss, _) = r_pca(&p.subset(&members)?, r)?;
            bases[c] = ss.basis(0).to_vec();
        }
        current = assemble(&bases)?;
        let cost = cost_subspaces(p, &current);
        if cost < best_cost {
            best_cost = cost;
            best = current.clone();
        }
        if prev_cost <= 0.0 || (prev_cost - cost) / prev_cost < OUTER_TOL {
            break;
        }
        prev_cost = cost;
    }

    Ok((best, best_cost))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Dataset;

    fn wd1(points: &[f64]) -> WeightedDataset {
        WeightedDataset::uniform(Dataset::new(points.iter().map(|&x| vec![x]).collect()).unwrap())
    }

    fn random_instance(rng: &mut ChaCha12Rng, n_max: usize, d_max: usize) -> WeightedDataset {
        let n = rng.gen_range(4..=n_max);
        let d = rng.gen_range(1..=d_max);
        let pts: Vec<Vec<f64>> =
            (0..n).map(|_| (0..d).map(|_| rng.gen_range(-10.0..10.0)).collect()).collect();
        let ws: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..4.0)).collect();
        WeightedDataset::new(Dataset::new(pts).unwrap(), ws).unwrap()
    }

    #[test]
    fn exact_examples() {
        // Candidates 0, 1, 10 give costs 11, 10, 19: center 1 wins.
        let p = wd1(&[0.0, 1.0, 10.0]);
        let (c, cost) = kmedian_exact(&p, 1).unwrap();
        assert_eq!(c.center(0), &[1.0]);
        assert_eq!(cost, 10.0);

        // k = n: zero cost, all points become centers.
        let (c, cost) = kmedian_exact(&p, 3).unwrap();
        assert_eq!(cost, 0.0);
        assert_eq!(c.k(), 3);

        // Weighted: 50 at candidate 0 vs 10 at candidate 10.
        let p = WeightedDataset::new(
            Dataset::new(vec![vec![0.0], vec![10.0]]).unwrap(),
            vec![1.0, 5.0],
        )
        .unwrap();
        let (c, cost) = kmedian_exact(&p, 1).unwrap();
        assert_eq!(c.center(0), &[10.0]);
        assert_eq!(cost, 10.0);
    }

    #[test]
    fn exact_brute_force_oracle_agrees_on_tiny_instances() {
        // Independent oracle: enumerate all 1-subsets by hand.
        let p = wd1(&[0.0, 1.0, 10.0]);
        let mut oracle_best = f64::INFINITY;
        for c in 0..3 {
            let cost: f64 = (0..3).map(|j| (p.point(j)[0] - p.point(c)[0]).abs()).sum();
            oracle_best = oracle_best.min(cost);
        }
        let (_, cost) = kmedian_exact(&p, 1).unwrap();
        assert_eq!(cost, oracle_best);
    }

    #[test]
    fn exact_rejects_large_instances_but_tolerates_duplicates() {
        let pts: Vec<Vec<f64>> = (0..25).map(|i| vec![i as f64]).collect();
        let p = WeightedDataset::uniform(Dataset::new(pts).unwrap());
        assert!(matches!(kmedian_exact(&p, 2), Err(Error::InstanceTooLarge { .. })));

        // 60 entries but only 3 distinct points.
        let pts: Vec<Vec<f64>> = (0..60).map(|i| vec![(i % 3) as f64]).collect();
        let p = WeightedDataset::uniform(Dataset::new(pts).unwrap());
        let (_, cost) = kmedian_exact(&p, 2).unwrap();
        assert_eq!(cost, 20.0); // 20 copies of the stranded value, each at distance 1
    }

    #[test]
    fn heuristic_on_k_distinct_points_is_free() {
        let p = WeightedDataset::uniform(
            Dataset::new(vec![vec![0.0, 0.0], vec![5.0, 0.0], vec![0.0, 5.0]]).unwrap(),
        );
        let (_, cost) = kmedian_heuristic(&p, 3, 11).unwrap();
        assert_eq!(cost, 0.0);
    }

    #[test]
    fn heuristic_brackets_the_exact_oracle_in_1d() {
        let p = wd1(&[0.0, 1.0, 10.0]);
        for seed in 0..10 {
            let (_, cost) = kmedian_heuristic(&p, 1, seed).unwrap();
            assert!((10.0..=11.0).contains(&cost), "seed {seed}: cost {cost}");
        }
    }

    #[test]
    fn heuristic_splits_two_far_pairs() {
        let p = WeightedDataset::uniform(
            Dataset::new(vec![
                vec![0.0, 0.0],
                vec![0.0, 1.0],
                vec![100.0, 0.0],
                vec![100.0, 1.0],
            ])
            .unwrap(),
        );
        for seed in 0..10 {
            let (_, cost) = kmedian_heuristic(&p, 2, seed).unwrap();
            assert!((cost - 2.0).abs() <= 1e-9, "seed {seed}: cost {cost}");
        }
    }

    #[test]
    fn heuristic_is_seed_deterministic() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let p = random_instance(&mut rng, 30, 3);
        let (c1, cost1) = kmedian_heuristic(&p, 3, 99).unwrap();
        let (c2, cost2) = kmedian_heuristic(&p, 3, 99).unwrap();
        assert_eq!(c1, c2);
        assert_eq!(cost1.to_bits(), cost2.to_bits());
    }

    /// The heuristic returns a feasible continuous solution, so twice its
    /// cost dominates the discrete optimum (medoid factor), and in 1-d the
    /// discrete optimum equals the continuous one, so it lower-bounds the
    /// heuristic directly.
    #[test]
    fn heuristic_respects_exact_oracle_bounds() {
        let mut rng = ChaCha12Rng::seed_from_u64(21);
        for trial in 0..100 {
            let p = random_instance(&mut rng, 12, 3);
            let k = rng.gen_range(1..=3.min(p.len()));
            let (_, exact) = kmedian_exact(&p, k).unwrap();
            let (_, heur) = kmedian_heuristic(&p, k, trial).unwrap();
            assert!(
                2.0 * heur >= exact - 1e-9,
                "trial {trial}: exact {exact} > 2 * heuristic {heur}"
            );
        }
        for trial in 0..100u64 {
            let mut rng2 = ChaCha12Rng::seed_from_u64(1000 + trial);
            let p = random_instance(&mut rng2, 12, 1);
            let k = rng2.gen_range(1..=3.min(p.len()));
            let (_, exact) = kmedian_exact(&p, k).unwrap();
            let (_, heur) = kmedian_heuristic(&p, k, trial).unwrap();
            assert!(
                heur >= exact * (1.0 - 1e-9),
                "trial {trial}: 1-d heuristic {heur} beat the discrete optimum {exact}"
            );
        }
    }

    /// Any continuous center set, re-projected per cluster onto its nearest
    /// member point, costs at most twice as much; the exact discrete search
    /// can only improve on that.
    #[test]
    fn medoid_restriction_loses_at_most_factor_two() {
        let mut rng = ChaCha12Rng::seed_from_u64(33);
        for trial in 0..100 {
            let p = random_instance(&mut rng, 12, 3);
            let d = p.dim();
            let k = rng.gen_range(1..=3.min(p.len()));
            let continuous: Vec<Vec<f64>> =
                (0..k).map(|_| (0..d).map(|_| rng.gen_range(-10.0..10.0)).collect()).collect();
            let c = CenterSet::new(continuous).unwrap();
            let cont_cost = cost_points(&p, &c, CostKind::KMedian);

            // Replace each center by the nearest member of its cluster.
            let mut projected: Vec<Vec<f64>> = Vec::new();
            for ci in 0..k {
                let members: Vec<usize> =
                    (0..p.len()).filter(|&j| cluster_of(p.point(j), &c) == ci).collect();
                if let Some(&best) = members.iter().min_by(|&&a, &&b| {
                    distance(p.point(a), c.center(ci))
                        .partial_cmp(&distance(p.point(b), c.center(ci)))
                        .unwrap()
                }) {
                    projected.push(p.point(best).to_vec());
                }
            }
            let proj = CenterSet::new(projected).unwrap();
            let proj_cost = cost_points(&p, &proj, CostKind::KMedian);
            assert!(proj_cost <= 2.0 * cont_cost + 1e-9, "trial {trial}");

            let (_, exact) = kmedian_exact(&p, k).unwrap();
            assert!(exact <= proj_cost + 1e-9, "trial {trial}");
            assert!(exact <= 2.0 * cont_cost + 1e-9, "trial {trial}");
        }
    }

    #[test]
    fn weiszfeld_stops_on_a_data_point_and_beats_the_mean() {
        // The weighted mean of {-1, 0, 1} is the data point 0: snap there.
        let pts = vec![vec![-1.0], vec![0.0], vec![1.0]];
        let m = geometric_median(&pts, &[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(m, vec![0.0]);

        let mut rng = ChaCha12Rng::seed_from_u64(8);
        for _ in 0..50 {
            let n = rng.gen_range(2..10);
            let d = rng.gen_range(1..4);
            let pts: Vec<Vec<f64>> =
                (0..n).map(|_| (0..d).map(|_| rng.gen_range(-5.0..5.0)).collect()).collect();
            let ws: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..3.0)).collect();
            let total: f64 = ws.iter().sum();
            if total == 0.0 {
                continue;
            }
            let mut mean = vec![0.0; d];
            for (p, w) in pts.iter().zip(&ws) {
                for (mi, pi) in mean.iter_mut().zip(p) {
                    *mi += w * pi / total;
                }
            }
            let objective =
                |y: &[f64]| -> f64 { pts.iter().zip(&ws).map(|(p, w)| w * distance(y, p)).sum() };
            let med = geometric_median(&pts, &ws).unwrap();
            assert!(objective(&med) <= objective(&mean) + 1e-12);
        }
    }

    #[test]
    fn r_pca_examples() {
        let p =
            WeightedDataset::uniform(Dataset::new(vec![vec![1.0, 0.0], vec![2.0, 0.0]]).unwrap());
        let (l, cost) = r_pca(&p, 1).unwrap();
        assert!(cost.abs() < 1e-15);
        assert!((l.basis(0)[0][0].abs() - 1.0).abs() < 1e-12);

        // Identity rows: equal singular values, tie broken by SVD order.
        let p =
            WeightedDataset::uniform(Dataset::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap());
        let (_, cost) = r_pca(&p, 1).unwrap();
        assert!((cost - 1.0).abs() < 1e-12);

        // Weights tilt the principal direction to e2.
        let p = WeightedDataset::new(
            Dataset::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap(),
            vec![1.0, 4.0],
        )
        .unwrap();
        let (l, cost) = r_pca(&p, 1).unwrap();
        assert!((l.basis(0)[0][1].abs() - 1.0).abs() < 1e-12);
        assert!((cost - 1.0).abs() < 1e-12);
    }

    #[test]
    fn r_pca_residual_matches_discarded_spectrum() {
        let mut rng = ChaCha12Rng::seed_from_u64(17);
        for trial in 0..100 {
            let p = random_instance(&mut rng, 30, 6);
            let d = p.dim();
            if d < 2 {
                continue;
            }
            let r = rng.gen_range(1..d);
            let (_, cost) = r_pca(&p, r).unwrap();
            let scaled: Vec<Vec<f64>> = (0..p.len())
                .map(|j| p.point(j).iter().map(|x| x * p.weight(j).sqrt()).collect())
                .collect();
            let s = svd(&Mat::from_rows(&scaled).unwrap()).unwrap();
            let tail: f64 = s.sigma.iter().skip(r).map(|x| x * x).sum();
            assert!(
                (cost - tail).abs() <= 1e-8 * tail.max(1.0),
                "trial {trial}: cost {cost} vs spectral tail {tail}"
            );
        }
    }

    #[test]
    fn r_pca_handles_fewer_points_than_rank() {
        let p = WeightedDataset::uniform(Dataset::new(vec![vec![1.0, 2.0, 3.0]]).unwrap());
        let (l, cost) = r_pca(&p, 2).unwrap();
        assert_eq!(l.basis(0).len(), 2);
        assert!(cost.abs() < 1e-12); // the single row lies inside the fitted plane
    }

    #[test]
    fn subspace_cluster_with_one_cluster_is_r_pca() {
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        let p = loop {
            let cand = random_instance(&mut rng, 25, 4);
            if cand.dim() >= 2 {
                break cand;
            }
        };
        let (pca, pca_cost) = r_pca(&p, 1).unwrap();
        let (clus, clus_cost) = subspace_cluster(&p, 1, 1, 7).unwrap();
        assert_eq!(pca.basis(0), clus.basis(0));
        assert_eq!(pca_cost.to_bits(), clus_cost.to_bits());
    }

    #[test]
    fn subspace_cluster_recovers_planted_orthogonal_lines() {
        let pts = vec![
            vec![1.0, 0.0],
            vec![2.5, 0.0],
            vec![-3.0, 0.0],
            vec![4.0, 0.0],
            vec![0.0, 1.5],
            vec![0.0, -2.0],
            vec![0.0, 3.5],
            vec![0.0, 5.0],
        ];
        let p = WeightedDataset::uniform(Dataset::new(pts).unwrap());
        let (_, cost) = subspace_cluster(&p, 1, 2, 3).unwrap();
        assert!(cost <= 1e-8, "planted instance should fit exactly, cost {cost}");
    }

    #[test]
    fn subspace_cluster_rejects_r_zero_and_is_deterministic() {
        let p = WeightedDataset::uniform(
            Dataset::new(vec![vec![1.0, 2.0], vec![3.0, 4.0], vec![0.0, 1.0]]).unwrap(),
        );
        assert!(subspace_cluster(&p, 0, 2, 1).is_err());

        let (a, ca) = subspace_cluster(&p, 1, 2, 40).unwrap();
        let (b, cb) = subspace_cluster(&p, 1, 2, 40).unwrap();
        assert_eq!(a, b);
        assert_eq!(ca.to_bits(), cb.to_bits());
    }
}
