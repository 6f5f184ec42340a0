//! Coresets, relaxed SVD coresets, and recovery-weighted merging.
//!
//! A coreset is a weighted point set whose cost against any center set stays
//! within `(1 +- epsilon)` of the source dataset's. Two constructions live
//! here: the exact identity coreset (`epsilon = 0`, used to test merge
//! guarantees tightly) and a uniform sample that claims no epsilon at all.
//!
//! A *relaxed* coreset summarizes a matrix by its truncated SVD rows plus a
//! nonnegative correction term `Delta` (the discarded spectral energy):
//! `cost(P, L) <= cost(S, L) + Delta <= (1 + delta) cost(P, L)` for every
//! r-dimensional subspace `L`, with the truncation rank
//! `r1 = ceil(r + r/delta) - 1`.

use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::assignment::RecoveryVector;
use crate::data::{Dataset, KahanSum, WeightedDataset};
use crate::io::fmt_g17;
use crate::linalg::{svd, Mat};
use crate::{Error, Result};

/// A weighted summary of a dataset with an optional accuracy guarantee.
///
/// `epsilon` is `Some(e)` when the summary is an e-coreset of its source
/// (guarantees need `e < 1/3`) and `None` for heuristic summaries that claim
/// nothing, like uniform samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Coreset {
    summary: WeightedDataset,
    epsilon: Option<f64>,
    source_size: usize,
}

impl Coreset {
    pub fn new(summary: WeightedDataset, epsilon: Option<f64>, source_size: usize) -> Result<Self> {
        if let Some(e) = epsilon {
            if !(e.is_finite() && e >= 0.0) {
                return Err(Error::Invalid(format!("epsilon = {e} must be finite and >= 0")));
            }
        }
        Ok(Self { summary, epsilon, source_size })
    }

    pub fn summary(&self) -> &WeightedDataset {
        &self.summary
    }

    pub fn epsilon(&self) -> Option<f64> {
        self.epsilon
    }

    /// True when the recorded epsilon supports clustering guarantees.
    pub fn has_guarantee(&self) -> bool {
        self.epsilon.is_some_and(|e| e < 1.0 / 3.0)
    }

    pub fn source_size(&self) -> usize {
        self.source_size
    }
}

/// The dataset itself as an exact coreset (`epsilon = 0`).
pub fn identity_coreset(p: &WeightedDataset) -> Coreset {
    Coreset { summary: p.clone(), epsilon: Some(0.0), source_size: p.len() }
}

/// Uniform sample of `m` points without replacement. Sampled weights are
/// rescaled by a common factor so the total weight is preserved exactly;
/// no epsilon is claimed.
pub fn sample_coreset(p: &WeightedDataset, m: usize, seed: u64) -> Result<Coreset> {
    let n = p.len();
    if m == 0 || m > n {
        return Err(Error::Invalid(format!("sample size {m} outside [1, {n}]")));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut picked = rand::seq::index::sample(&mut rng, n, m).into_vec();
    picked.sort_unstable();

    let total = p.total_weight();
    let mut sampled_total = KahanSum::default();
    for &j in &picked {
        sampled_total.add(p.weight(j));
    }
    let sampled_total = sampled_total.value();

    let points: Vec<Vec<f64>> = picked.iter().map(|&j| p.point(j).to_vec()).collect();
    let weights: Vec<f64> = if sampled_total > 0.0 {
        let scale = total / sampled_total;
        picked.iter().map(|&j| p.weight(j) * scale).collect()
    } else if total > 0.0 {
        // Sampled only zero-weight points: spread the mass uniformly.
        vec![total / m as f64; m]
    } else {
        vec![0.0; m]
    };
    let summary = WeightedDataset::new(Dataset::new(points)?, weights)?;
    Ok(Coreset { summary, epsilon: None, source_size: n })
}

/// Truncated-SVD summary `S = Sigma^(r1) V^T` with the discarded spectral
/// energy as its correction term.
#[derive(Debug, Clone)]
pub struct RelaxedCoreset {
    rows: Mat,
    delta_term: f64,
    r1: usize,
}

impl RelaxedCoreset {
    /// The summary matrix: `min(rows, cols)` rows of width `d`, with every
    /// row past `r1` exactly zero.
    pub fn rows(&self) -> &Mat {
        &self.rows
    }

    /// `Delta = sum of sigma_j^2 for j > r1`; nonnegative.
    pub fn delta_term(&self) -> f64 {
        self.delta_term
    }

    pub fn r1(&self) -> usize {
        self.r1
    }

    /// The potentially nonzero summary rows (index < r1) as points.
    pub fn nonzero_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows.rows().min(self.r1)).map(|i| self.rows.row(i)).collect()
    }
}

/// Truncation rank `min(ceil(r + r/delta) - 1, min(rows, cols))`.
pub fn relaxed_rank(r: usize, delta: f64, rows: usize, cols: usize) -> usize {
    let ideal = (r as f64 + r as f64 / delta).ceil() as usize - 1;
    ideal.min(rows.min(cols))
}

/// Builds the relaxed SVD coreset of a matrix for subspace dimension `r`
/// and slack `delta`.
pub fn relaxed_svd_coreset(p_i: &Mat, r: usize, delta: f64) -> Result<RelaxedCoreset> {
    if r == 0 {
        return Err(Error::Invalid("r must be >= 1".into()));
    }
    if !(delta > 0.0) {
        return Err(Error::Invalid(format!("delta = {delta} must be > 0")));
    }
    if !p_i.is_finite() {
        return Err(Error::NonFinite { context: "relaxed coreset input" });
    }
    let r1 = relaxed_rank(r, delta, p_i.rows(), p_i.cols());
    let decomp = svd(p_i)?;
    let p = decomp.sigma.len();

    let mut rows = Mat::zeros(p, p_i.cols());
    for i in 0..p.min(r1) {
        for j in 0..p_i.cols() {
            rows.set(i, j, decomp.sigma[i] * decomp.vt.get(i, j));
        }
    }
    let mut tail = KahanSum::default();
    for &s in decomp.sigma.iter().skip(r1) {
        tail.add(s * s);
    }
    Ok(RelaxedCoreset { rows, delta_term: tail.value(), r1 })
}

/// Merges per-node coresets under a recovery vector: each part's weights are
/// scaled by its node's `b_i` and the summaries are concatenated in ascending
/// node order. Duplicate points stay as separate weighted entries, which is
/// cost-equivalent to summing their weights.
///
/// The result records `epsilon = 2 (max part epsilon + delta_achieved)`, or
/// `None` if any part carries no guarantee.
pub fn merge_coresets(parts: &[(Coreset, usize)], rv: &RecoveryVector) -> Result<Coreset> {
    if parts.is_empty() {
        return Err(Error::Invalid("merge needs at least one part".into()));
    }
    let mut ordered: Vec<&(Coreset, usize)> = parts.iter().collect();
    ordered.sort_by_key(|(_, node)| *node);

    let mut points = Vec::new();
    let mut weights = Vec::new();
    let mut eps: Option<f64> = Some(0.0);
    let mut source_size = 0usize;
    for (part, node) in ordered {
        let Some(b) = rv.b_for(*node) else {
            return Err(Error::Invalid(format!("node {node} is not in the survivor set")));
        };
        let s = part.summary();
        for j in 0..s.len() {
            points.push(s.point(j).to_vec());
            weights.push(s.weight(j) * b);
        }
        eps = match (eps, part.epsilon()) {
            (Some(acc), Some(e)) => Some(acc.max(e)),
            _ => None,
        };
        source_size += part.source_size();
    }
    let epsilon = eps.map(|max_part| 2.0 * (max_part + rv.delta_achieved()));
    let summary = WeightedDataset::new(Dataset::new(points)?, weights)?;
    Ok(Coreset { summary, epsilon, source_size })
}

/// JSON sidecar stored next to a coreset CSV.
#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct CoresetSidecar {
    schema: u32,
    epsilon: Option<f64>,
    source_size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta_term: Option<f64>,
}

/// Writes a coreset as CSV (point columns plus a trailing weight column)
/// with a JSON sidecar `{epsilon, source_size}`.
pub fn save_coreset(coreset: &Coreset, csv_path: &Path, sidecar_path: &Path) -> Result<()> {
    crate::io::write_weighted_csv(csv_path, coreset.summary())?;
    let sidecar = CoresetSidecar {
        schema: 1,
        epsilon: coreset.epsilon(),
        source_size: coreset.source_size(),
        delta_term: None,
    };
    fs::write(sidecar_path, serde_json::to_string_pretty(&sidecar)?)?;
    Ok(())
}

/// Loads a coreset saved by [`save_coreset`].
pub fn load_coreset(csv_path: &Path, sidecar_path: &Path) -> Result<Coreset> {
    let summary = crate::io::load_dataset(csv_path, true)?;
    let sidecar: CoresetSidecar = serde_json::from_str(&fs::read_to_string(sidecar_path)?)?;
    Coreset::new(summary, sidecar.epsilon, sidecar.source_size)
}

/// Writes a relaxed coreset: the summary rows as CSV plus a sidecar carrying
/// `delta_term`.
pub fn save_relaxed_coreset(
    coreset: &RelaxedCoreset,
    csv_path: &Path,
    sidecar_path: &Path,
) -> Result<()> {
    let mut buf = String::new();
    for i in 0..coreset.rows().rows() {
        let row = coreset.rows().row(i);
        let cells: Vec<String> = row.iter().map(|&x| fmt_g17(x)).collect();
        buf.push_str(&cells.join(","));
        buf.push('\n');
    }
    fs::write(csv_path, buf)?;
    let sidecar = CoresetSidecar {
        schema: 1,
        epsilon: None,
        source_size: coreset.rows().rows(),
        delta_term: Some(coreset.delta_term()),
    };
    fs::write(sidecar_path, serde_json::to_string_pretty(&sidecar)?)?;
    Ok(())
}
