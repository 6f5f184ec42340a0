//! Datasets, distances, cost functions, and cluster membership.
//!
//! Everything here is immutable after construction and shared by reference,
//! so values are safe to send across threads. Costs accumulate through
//! compensated (Kahan) summation to keep the tight relative tolerances used
//! by the guarantee checks honest at realistic sizes.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Absolute tolerance for the orthonormality check `B^T B = I`.
pub const ORTHONORMAL_TOL: f64 = 1e-8;

/// Compensated accumulator for long sums of nonnegative-ish terms.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn add(&mut self, x: f64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// An ordered set of `n` points in `R^d`.
///
/// Point order is stable: index `j` identifies the point matching column `j`
/// of any assignment matrix built for the dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    points: Vec<Vec<f64>>,
    dim: usize,
}

impl Dataset {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Invalid("dataset must contain at least one point".into()));
        }
        let dim = points[0].len();
        if dim == 0 {
            return Err(Error::Invalid("points must have dimension >= 1".into()));
        }
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: p.len() });
            }
            if !p.iter().all(|x| x.is_finite()) {
                return Err(Error::NonFinite { context: "dataset point" });
            }
        }
        Ok(Self { points, dim })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, j: usize) -> &[f64] {
        &self.points[j]
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    /// The sub-dataset with the given point indices, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let points = indices.iter().map(|&j| self.points[j].clone()).collect();
        Self::new(points)
    }
}

/// A dataset with one nonnegative finite weight per point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedDataset {
    base: Dataset,
    weights: Vec<f64>,
}

impl WeightedDataset {
    pub fn new(base: Dataset, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != base.len() {
            return Err(Error::Invalid(format!(
                "{} weights for {} points",
                weights.len(),
                base.len()
            )));
        }
        if !weights.iter().all(|w| w.is_finite() && *w >= 0.0) {
            return Err(Error::Invalid("weights must be finite and nonnegative".into()));
        }
        Ok(Self { base, weights })
    }

    /// Wraps a dataset with unit weights.
    pub fn uniform(base: Dataset) -> Self {
        let weights = vec![1.0; base.len()];
        Self { base, weights }
    }

    pub fn base(&self) -> &Dataset {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn point(&self, j: usize) -> &[f64] {
        self.base.point(j)
    }

    pub fn weight(&self, j: usize) -> f64 {
        self.weights[j]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_weight(&self) -> f64 {
        let mut acc = KahanSum::default();
        for &w in &self.weights {
            acc.add(w);
        }
        acc.value()
    }

    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let base = self.base.subset(indices)?;
        let weights = indices.iter().map(|&j| self.weights[j]).collect();
        Self::new(base, weights)
    }

    /// Collapses bitwise-identical points into single entries with summed
    /// weights. Cost functions cannot tell the difference, but the exact
    /// k-median search needs the distinct-point count to stay small.
    pub fn merge_duplicates(&self) -> Self {
        use std::collections::HashMap;
        let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
        let mut points: Vec<Vec<f64>> = Vec::new();
        let mut weights: Vec<f64> = Vec::new();
        for (p, &w) in self.base.points().iter().zip(&self.weights) {
            let key: Vec<u64> = p.iter().map(|x| x.to_bits()).collect();
            match index.entry(key) {
                std::collections::hash_map::Entry::Occupied(e) => weights[*e.get()] += w,
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(points.len());
                    points.push(p.clone());
                    weights.push(w);
                }
            }
        }
        Self {
            base: Dataset { points, dim: self.base.dim },
            weights,
        }
    }
}

/// Which clustering objective a cost evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostKind {
    /// Sum of Euclidean distances to the nearest center.
    KMedian,
    /// Sum of squared Euclidean distances to the nearest center.
    KMeans,
}

/// An ordered set of `k` cluster centers; centers need not be dataset points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CenterSet {
    centers: Vec<Vec<f64>>,
    dim: usize,
}

impl CenterSet {
    pub fn new(centers: Vec<Vec<f64>>) -> Result<Self> {
        if centers.is_empty() {
            return Err(Error::Invalid("center set must be non-empty".into()));
        }
        let dim = centers[0].len();
        for c in &centers {
            if c.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: c.len() });
            }
            if !c.iter().all(|x| x.is_finite()) {
                return Err(Error::NonFinite { context: "center" });
            }
        }
        Ok(Self { centers, dim })
    }

    pub fn k(&self) -> usize {
        self.centers.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn center(&self, i: usize) -> &[f64] {
        &self.centers[i]
    }

    pub fn centers(&self) -> &[Vec<f64>] {
        &self.centers
    }
}

/// A set of `k` linear subspaces, each given by an orthonormal basis of `r`
/// column vectors in `R^d`. Subspaces pass through the origin; `r = 0` means
/// the subspace is the single point `0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubspaceSet {
    // One basis per subspace: `r` orthonormal columns, each of length `d`.
    bases: Vec<Vec<Vec<f64>>>,
    dim: usize,
    r: usize,
}

impl SubspaceSet {
    pub fn new(bases: Vec<Vec<Vec<f64>>>, dim: usize, r: usize) -> Result<Self> {
        if bases.is_empty() {
            return Err(Error::Invalid("subspace set must be non-empty".into()));
        }
        if r > dim {
            return Err(Error::Invalid(format!("subspace dimension {r} exceeds ambient {dim}")));
        }
        for basis in &bases {
            if basis.len() != r {
                return Err(Error::Invalid(format!(
                    "basis has {} columns, expected {r}",
                    basis.len()
                )));
            }
            for col in basis {
                if col.len() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, got: col.len() });
                }
            }
            // B^T B = I_r within ORTHONORMAL_TOL, absolute.
            for (a, ca) in basis.iter().enumerate() {
                for (b, cb) in basis.iter().enumerate() {
                    let dot: f64 = ca.iter().zip(cb).map(|(x, y)| x * y).sum();
                    let target = if a == b { 1.0 } else { 0.0 };
                    if (dot - target).abs() > ORTHONORMAL_TOL {
                        return Err(Error::Invalid(format!(
                            "basis not orthonormal: |<b{a}, b{b}> - {target}| = {:e}",
                            (dot - target).abs()
                        )));
                    }
                }
            }
        }
        Ok(Self { bases, dim, r })
    }

    /// A single-subspace set (the `k = 1` case used by PCA).
    pub fn single(basis: Vec<Vec<f64>>, dim: usize) -> Result<Self> {
        let r = basis.len();
        Self::new(vec![basis], dim, r)
    }

    pub fn k(&self) -> usize {
        self.bases.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn basis(&self, i: usize) -> &[Vec<f64>] {
        &self.bases[i]
    }

    pub fn bases(&self) -> &[Vec<Vec<f64>>] {
        &self.bases
    }
}

/// Euclidean distance between two points of equal dimension.
///
/// Panics on dimension mismatch; callers own shape agreement.
pub fn distance(x: &[f64], y: &[f64]) -> f64 {
    distance_sq(x, y).sqrt()
}

/// Squared Euclidean distance.
pub fn distance_sq(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len(), "distance: dimension mismatch {} vs {}", x.len(), y.len());
    let mut acc = 0.0;
    for (a, b) in x.iter().zip(y) {
        let d = a - b;
        acc += d * d;
    }
    acc
}

/// Index of the nearest center; ties break toward the lowest center index.
pub fn cluster_of(x: &[f64], centers: &CenterSet) -> usize {
    assert_eq!(x.len(), centers.dim(), "cluster_of: dimension mismatch");
    let mut best = 0;
    let mut best_d = distance_sq(x, centers.center(0));
    for i in 1..centers.k() {
        let d = distance_sq(x, centers.center(i));
        if d < best_d {
            best = i;
            best_d = d;
        }
    }
    best
}

/// Weighted clustering cost of `points` against `centers`.
///
/// `KMedian` sums `w_j * d(p_j, C)`, `KMeans` sums `w_j * d^2(p_j, C)`.
pub fn cost_points(points: &WeightedDataset, centers: &CenterSet, kind: CostKind) -> f64 {
    assert_eq!(points.dim(), centers.dim(), "cost_points: dimension mismatch");
    let mut acc = KahanSum::default();
    for j in 0..points.len() {
        let p = points.point(j);
        let mut best = f64::INFINITY;
        for c in centers.centers() {
            let d = distance_sq(p, c);
            if d < best {
                best = d;
            }
        }
        let term = match kind {
            CostKind::KMedian => best.sqrt(),
            CostKind::KMeans => best,
        };
        acc.add(points.weight(j) * term);
    }
    acc.value()
}

/// Squared residual of `x` against a single subspace basis, clamped at zero
/// to absorb roundoff: `max(0, ||x||^2 - ||B^T x||^2)`.
pub fn subspace_residual_sq(x: &[f64], basis: &[Vec<f64>]) -> f64 {
    let norm_sq: f64 = x.iter().map(|v| v * v).sum();
    let mut proj_sq = 0.0;
    for col in basis {
        let dot: f64 = col.iter().zip(x).map(|(a, b)| a * b).sum();
        proj_sq += dot * dot;
    }
    (norm_sq - proj_sq).max(0.0)
}

/// Index of the subspace with the smallest squared residual for `x`;
/// ties break toward the lowest index.
pub fn nearest_subspace(x: &[f64], subspaces: &SubspaceSet) -> usize {
    let mut best = 0;
    let mut best_r = subspace_residual_sq(x, subspaces.basis(0));
    for i in 1..subspaces.k() {
        let r = subspace_residual_sq(x, subspaces.basis(i));
        if r < best_r {
            best = i;
            best_r = r;
        }
    }
    best
}

/// Weighted subspace-clustering cost: `sum_j w_j min_i d^2(p_j, L_i)`.
pub fn cost_subspaces(points: &WeightedDataset, subspaces: &SubspaceSet) -> f64 {
    assert_eq!(points.dim(), subspaces.dim(), "cost_subspaces: dimension mismatch");
    let mut acc = KahanSum::default();
    for j in 0..points.len() {
        let p = points.point(j);
        let mut best = f64::INFINITY;
        for basis in subspaces.bases() {
            let r = subspace_residual_sq(p, basis);
            if r < best {
                best = r;
            }
        }
        acc.add(points.weight(j) * best);
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn wd(points: Vec<Vec<f64>>) -> WeightedDataset {
        WeightedDataset::uniform(Dataset::new(points).unwrap())
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance(&[0.0, 0.0], &[0.0, 0.0]), 0.0);
        assert_eq!(distance(&[0.0, 0.0], &[3.0, 4.0]), 5.0);
        let d = distance(&[1.0, 1.0], &[2.0, 2.0]);
        assert!((d - 2f64.sqrt()).abs() < 1e-15, "sqrt(2) expected, got {d}");
    }

    #[test]
    #[should_panic(expected = "dimension mismatch")]
    fn distance_rejects_mismatched_dims() {
        distance(&[0.0], &[0.0, 1.0]);
    }

    #[test]
    fn cluster_of_examples() {
        let c = CenterSet::new(vec![vec![0.0, 0.0], vec![5.0, 5.0]]).unwrap();
        assert_eq!(cluster_of(&[0.0, 0.0], &c), 0);

        // Equidistant: lowest index wins.
        let c = CenterSet::new(vec![vec![0.0, 0.0], vec![2.0, 0.0]]).unwrap();
        assert_eq!(cluster_of(&[1.0, 0.0], &c), 0);

        let c = CenterSet::new(vec![vec![0.0, 0.0], vec![10.0, 0.0]]).unwrap();
        assert_eq!(cluster_of(&[9.0, 0.0], &c), 1);
    }

    #[test]
    fn cost_points_examples() {
        let p = wd(vec![vec![0.0, 0.0], vec![2.0, 0.0]]);
        let c = CenterSet::new(vec![vec![0.0, 0.0]]).unwrap();
        assert_eq!(cost_points(&p, &c, CostKind::KMedian), 2.0);

        let c = CenterSet::new(vec![vec![1.0, 0.0]]).unwrap();
        assert_eq!(cost_points(&p, &c, CostKind::KMeans), 2.0);

        let p = WeightedDataset::new(Dataset::new(vec![vec![0.0, 0.0]]).unwrap(), vec![3.0]).unwrap();
        let c = CenterSet::new(vec![vec![0.0, 4.0]]).unwrap();
        assert_eq!(cost_points(&p, &c, CostKind::KMedian), 12.0);
    }

    #[test]
    fn cost_subspaces_examples() {
        let e1 = vec![vec![1.0, 0.0]];
        let l = SubspaceSet::single(e1.clone(), 2).unwrap();

        let p = wd(vec![vec![1.0, 0.0], vec![2.0, 0.0]]);
        assert_eq!(cost_subspaces(&p, &l), 0.0);

        let p = wd(vec![vec![0.0, 1.0]]);
        assert_eq!(cost_subspaces(&p, &l), 1.0);

        let p = wd(vec![vec![1.0, 1.0]]);
        let got = cost_subspaces(&p, &l);
        assert!((got - 1.0).abs() < 1e-12, "||p||^2 - (B^T p)^2 = 2 - 1, got {got}");
    }

    #[test]
    fn subspace_set_rejects_non_orthonormal_basis() {
        let bad = vec![vec![1.0, 1.0]]; // not unit length
        assert!(SubspaceSet::single(bad, 2).is_err());
        let bad2 = vec![vec![1.0, 0.0], vec![1.0, 0.0]]; // repeated column
        assert!(SubspaceSet::single(bad2, 2).is_err());
    }

    #[test]
    fn r0_subspace_matches_kmeans_cost_at_origin() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let points: Vec<Vec<f64>> =
            (0..40).map(|_| (0..3).map(|_| rng.gen_range(-5.0..5.0)).collect()).collect();
        let p = wd(points);
        let l = SubspaceSet::new(vec![vec![]], 3, 0).unwrap();
        let origin = CenterSet::new(vec![vec![0.0, 0.0, 0.0]]).unwrap();
        let a = cost_subspaces(&p, &l);
        let b = cost_points(&p, &origin, CostKind::KMeans);
        assert!((a - b).abs() <= 1e-9 * b.max(1.0));
    }

    #[test]
    fn triangle_inequality_over_random_triples() {
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        for _ in 0..1000 {
            let d = rng.gen_range(1..6);
            let mut pt = || (0..d).map(|_| rng.gen_range(-100.0..100.0)).collect::<Vec<f64>>();
            let (x, y, z) = (pt(), pt(), pt());
            assert!(distance(&x, &z) <= distance(&x, &y) + distance(&y, &z) + 1e-9);
        }
    }

    #[test]
    fn merge_duplicates_sums_weights() {
        let base = Dataset::new(vec![vec![1.0, 2.0], vec![3.0, 4.0], vec![1.0, 2.0]]).unwrap();
        let w = WeightedDataset::new(base, vec![2.0, 1.0, 0.5]).unwrap();
        let merged = w.merge_duplicates();
        assert_eq!(merged.len(), 2);
        assert_eq!(merged.weight(0), 2.5);
        assert_eq!(merged.weight(1), 1.0);
    }

    proptest! {
        #[test]
        fn cost_is_nonnegative_and_scales_linearly(
            seed in 0u64..500,
            lambda in 0.0f64..8.0,
        ) {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let n = rng.gen_range(1..20);
            let d = rng.gen_range(1..4);
            let pts: Vec<Vec<f64>> =
                (0..n).map(|_| (0..d).map(|_| rng.gen_range(-10.0..10.0)).collect()).collect();
            let ws: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..5.0)).collect();
            let p = WeightedDataset::new(Dataset::new(pts).unwrap(), ws.clone()).unwrap();
            let k = rng.gen_range(1..4);
            let cs: Vec<Vec<f64>> =
                (0..k).map(|_| (0..d).map(|_| rng.gen_range(-10.0..10.0)).collect()).collect();
            let c = CenterSet::new(cs).unwrap();

            for kind in [CostKind::KMedian, CostKind::KMeans] {
                let base = cost_points(&p, &c, kind);
                prop_assert!(base >= 0.0);
                let scaled_w: Vec<f64> = ws.iter().map(|w| w * lambda).collect();
                let ps = WeightedDataset::new(p.base().clone(), scaled_w).unwrap();
                let scaled = cost_points(&ps, &c, kind);
                prop_assert!((scaled - lambda * base).abs() <= 1e-9 * (lambda * base).abs().max(1e-12));
            }
        }

        #[test]
        fn cost_is_monotone_in_centers(seed in 0u64..500) {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let n = rng.gen_range(1..20);
            let d = rng.gen_range(1..4);
            let pts: Vec<Vec<f64>> =
                (0..n).map(|_| (0..d).map(|_| rng.gen_range(-10.0..10.0)).collect()).collect();
            let p = WeightedDataset::uniform(Dataset::new(pts).unwrap());
            let mut centers: Vec<Vec<f64>> =
                (0..2).map(|_| (0..d).map(|_| rng.gen_range(-10.0..10.0)).collect()).collect();
            let small = CenterSet::new(centers.clone()).unwrap();
            centers.push((0..d).map(|_| rng.gen_range(-10.0..10.0)).collect());
            let large = CenterSet::new(centers).unwrap();
            for kind in [CostKind::KMedian, CostKind::KMeans] {
                prop_assert!(cost_points(&p, &large, kind) <= cost_points(&p, &small, kind) + 1e-12);
            }
        }
    }

    #[test]
    fn cost_zero_iff_positive_weight_points_sit_on_centers() {
        let base = Dataset::new(vec![vec![0.0, 0.0], vec![7.0, 7.0], vec![1.0, 0.0]]).unwrap();
        // The off-center point has zero weight, so cost is zero.
        let p = WeightedDataset::new(base, vec![1.0, 0.0, 1.0]).unwrap();
        let c = CenterSet::new(vec![vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(cost_points(&p, &c, CostKind::KMedian), 0.0);

        // Give it weight and the cost becomes positive.
        let p = WeightedDataset::new(p.base().clone(), vec![1.0, 0.5, 1.0]).unwrap();
        assert!(cost_points(&p, &c, CostKind::KMedian) > 0.0);
    }
}
