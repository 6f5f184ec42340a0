//! Dense column-major matrices and a one-sided Jacobi SVD.
//!
//! The matrices in this crate are small (at most a few thousand rows and a
//! few dozen columns), so a dependency-free Jacobi SVD is both fast enough
//! and numerically excellent: it orthogonalizes the columns of `A` by plane
//! rotations accumulated into `V`, giving `A V = U diag(sigma)` to near
//! machine precision.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Dense `rows x cols` matrix, column-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds a matrix from row slices; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Invalid("matrix needs at least one row".into()));
        }
        let cols = rows[0].len();
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, got: row.len() });
            }
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.rows + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: f64) {
        self.data[j * self.rows + i] = x;
    }

    pub fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        (0..self.cols).map(|j| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transposed(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for j in 0..self.cols {
            for i in 0..self.rows {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn matmul(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows, "matmul: inner dimensions differ");
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for j in 0..rhs.cols {
            for k in 0..self.cols {
                let r = rhs.get(k, j);
                if r == 0.0 {
                    continue;
                }
                let col = self.col(k);
                let out_col = out.col_mut(j);
                for i in 0..self.rows {
                    out_col[i] += col[i] * r;
                }
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }
}

/// Thin singular value decomposition `M = U diag(sigma) V^T`.
///
/// With `p = min(rows, cols)`: `u` is `rows x p`, `sigma` has `p` entries
/// sorted descending, and `vt` is `p x cols`. Both `u` and `vt^T` have
/// orthonormal columns (rank-deficient directions are completed).
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: Mat,
    pub sigma: Vec<f64>,
    pub vt: Mat,
}

const JACOBI_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 64;

/// One-sided Jacobi on the columns of `a` (rows >= cols), accumulating the
/// right rotations into `v`. On return the columns of `a` are mutually
/// orthogonal and `a_in * v = a_out`.
fn jacobi_orthogonalize(a: &mut Mat, v: &mut Mat) {
    let n = a.cols();
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                {
                    let (cp, cq) = (a.col(p), a.col(q));
                    for i in 0..a.rows() {
                        alpha += cp[i] * cp[i];
                        beta += cq[i] * cq[i];
                        gamma += cp[i] * cq[i];
                    }
                }
                if gamma.abs() <= JACOBI_TOL * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                // Rotation zeroing the (p, q) entry of the column Gram matrix.
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_cols(a, p, q, c, s);
                rotate_cols(v, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }
}

fn rotate_cols(m: &mut Mat, p: usize, q: usize, c: f64, s: f64) {
    let rows = m.rows();
    // Split borrows via raw indexing; columns p and q are disjoint.
    for i in 0..rows {
        let xp = m.get(i, p);
        let xq = m.get(i, q);
        m.set(i, p, c * xp - s * xq);
        m.set(i, q, s * xp + c * xq);
    }
}

/// Completes `existing` (orthonormal columns of length `dim`) with further
/// orthonormal columns drawn from the standard basis, deterministically.
pub(crate) fn complete_orthonormal(existing: &mut Vec<Vec<f64>>, dim: usize, want: usize) {
    let mut k = 0;
    while existing.len() < want {
        assert!(k < dim, "cannot complete beyond ambient dimension");
        let mut v = vec![0.0; dim];
        v[k] = 1.0;
        k += 1;
        // Two rounds of Gram-Schmidt for numerical safety.
        for _ in 0..2 {
            for col in existing.iter() {
                let dot: f64 = col.iter().zip(&v).map(|(a, b)| a * b).sum();
                for (vi, ci) in v.iter_mut().zip(col) {
                    *vi -= dot * ci;
                }
            }
        }
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.5 {
            for vi in v.iter_mut() {
                *vi /= norm;
            }
            existing.push(v);
        }
    }
}

/// Thin SVD via one-sided Jacobi. Errors on non-finite input.
pub fn svd(m: &Mat) -> Result<Svd> {
    if !m.is_finite() {
        return Err(Error::NonFinite { context: "svd input" });
    }
    let transposed = m.rows() < m.cols();
    let mut a = if transposed { m.transposed() } else { m.clone() };
    let n = a.cols();
    let mut v = Mat::identity(n);
    jacobi_orthogonalize(&mut a, &mut v);

    // Singular values are the column norms; sort descending (stable).
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n)
        .map(|j| a.col(j).iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());

    let mut sigma = Vec::with_capacity(n);
    let mut u_cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut v_cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    for &j in &order {
        sigma.push(norms[j]);
        v_cols.push(v.col(j).to_vec());
        if norms[j] > 0.0 {
            u_cols.push(a.col(j).iter().map(|x| x / norms[j]).collect());
        }
    }
    // Zero singular values leave U columns undefined; fill orthonormally.
    complete_orthonormal(&mut u_cols, a.rows(), n);

    let mut u = Mat::zeros(a.rows(), n);
    let mut vt = Mat::zeros(n, n);
    for (j, col) in u_cols.iter().enumerate() {
        for (i, &x) in col.iter().enumerate() {
            u.set(i, j, x);
        }
    }
    for (j, col) in v_cols.iter().enumerate() {
        for (i, &x) in col.iter().enumerate() {
            vt.set(j, i, x);
        }
    }

    if transposed {
        // M^T = U S V^T  =>  M = V S U^T.
        let vt_of_m = u.transposed();
        let u_of_m = vt.transposed();
        Ok(Svd { u: u_of_m, sigma, vt: vt_of_m })
    } else {
        Ok(Svd { u, sigma, vt })
    }
}

/// Principal angles (radians, ascending) between the column spans of two
/// orthonormal bases of equal rank: `theta_i = acos sigma_i(B1^T B2)`.
pub fn principal_angles(b1: &[Vec<f64>], b2: &[Vec<f64>]) -> Result<Vec<f64>> {
    assert_eq!(b1.len(), b2.len(), "principal_angles: ranks differ");
    if b1.is_empty() {
        return Ok(Vec::new());
    }
    let r = b1.len();
    let mut cross = Mat::zeros(r, r);
    for (i, ci) in b1.iter().enumerate() {
        for (j, cj) in b2.iter().enumerate() {
            let dot: f64 = ci.iter().zip(cj).map(|(a, b)| a * b).sum();
            cross.set(i, j, dot);
        }
    }
    let decomp = svd(&cross)?;
    let mut angles: Vec<f64> =
        decomp.sigma.iter().map(|s| s.clamp(-1.0, 1.0).acos()).collect();
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(angles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn reconstruction_error(m: &Mat, s: &Svd) -> f64 {
        let p = s.sigma.len();
        let mut scaled = s.u.clone();
        for j in 0..p {
            for i in 0..scaled.rows() {
                let x = scaled.get(i, j) * s.sigma[j];
                scaled.set(i, j, x);
            }
        }
        let rec = scaled.matmul(&s.vt);
        let mut err = 0.0f64;
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                err += (rec.get(i, j) - m.get(i, j)).powi(2);
            }
        }
        err.sqrt()
    }

    fn max_orthonormality_defect(cols: &Mat) -> f64 {
        let mut worst = 0.0f64;
        for a in 0..cols.cols() {
            for b in a..cols.cols() {
                let dot: f64 = cols.col(a).iter().zip(cols.col(b)).map(|(x, y)| x * y).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    #[test]
    fn svd_identity_and_diagonal() {
        let s = svd(&Mat::identity(2)).unwrap();
        assert!((s.sigma[0] - 1.0).abs() < 1e-14);
        assert!((s.sigma[1] - 1.0).abs() < 1e-14);

        let m = Mat::from_rows(&[vec![3.0, 0.0], vec![0.0, 4.0]]).unwrap();
        let s = svd(&m).unwrap();
        assert!((s.sigma[0] - 4.0).abs() < 1e-12);
        assert!((s.sigma[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn svd_rank_one_matrix() {
        let m = Mat::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let s = svd(&m).unwrap();
        assert!((s.sigma[0] - 2.0).abs() < 1e-12, "sigma = {:?}", s.sigma);
        assert!(s.sigma[1].abs() < 1e-12);
        assert!(reconstruction_error(&m, &s) < 1e-10);
        assert!(max_orthonormality_defect(&s.u) < 1e-8);
    }

    #[test]
    fn svd_rejects_non_finite() {
        let m = Mat::from_rows(&[vec![f64::NAN, 0.0]]).unwrap();
        assert!(svd(&m).is_err());
    }

    #[test]
    fn svd_contract_on_random_matrices() {
        let mut rng = ChaCha12Rng::seed_from_u64(314);
        for trial in 0..100 {
            let rows = rng.gen_range(1..40);
            let cols = rng.gen_range(1..12);
            let mut m = Mat::zeros(rows, cols);
            for j in 0..cols {
                for i in 0..rows {
                    m.set(i, j, rng.gen_range(-10.0..10.0));
                }
            }
            // A third of the trials get an exactly rank-deficient matrix.
            if trial % 3 == 0 && cols >= 2 {
                for i in 0..rows {
                    m.set(i, cols - 1, m.get(i, 0));
                }
            }
            let s = svd(&m).unwrap();
            let scale = m.frobenius_norm().max(1.0);
            assert!(
                reconstruction_error(&m, &s) <= 1e-8 * scale,
                "reconstruction failed at trial {trial}"
            );
            assert!(max_orthonormality_defect(&s.u) < 1e-8, "U defect at trial {trial}");
            assert!(
                max_orthonormality_defect(&s.vt.transposed()) < 1e-8,
                "V defect at trial {trial}"
            );
            for w in s.sigma.windows(2) {
                assert!(w[0] >= w[1], "sigma not sorted: {:?}", s.sigma);
            }
            assert!(s.sigma.iter().all(|x| *x >= 0.0));
        }
    }

    #[test]
    fn svd_handles_wide_matrices() {
        let m = Mat::from_rows(&[vec![1.0, 2.0, 3.0, 4.0]]).unwrap();
        let s = svd(&m).unwrap();
        let expected = (1.0f64 + 4.0 + 9.0 + 16.0).sqrt();
        assert!((s.sigma[0] - expected).abs() < 1e-12);
        assert!(reconstruction_error(&m, &s) < 1e-10);
    }

    #[test]
    fn principal_angles_detect_equality_and_orthogonality() {
        let e1 = vec![vec![1.0, 0.0, 0.0]];
        let e1b = vec![vec![-1.0, 0.0, 0.0]]; // same span, flipped sign
        let e2 = vec![vec![0.0, 1.0, 0.0]];
        let a = principal_angles(&e1, &e1b).unwrap();
        assert!(a[0] < 1e-12);
        let a = principal_angles(&e1, &e2).unwrap();
        assert!((a[0] - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }
}
