//! Synthetic Gaussian mixture benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::data::{CenterSet, Dataset};
use crate::{Error, Result};

/// A generated mixture: points grouped center-major, plus the ground truth.
#[derive(Debug, Clone)]
pub struct Mixture {
    pub data: Dataset,
    pub centers: CenterSet,
    /// Index of the generating center for each point.
    pub labels: Vec<usize>,
}

/// Draws `k_true` centers uniformly from `[0, box_side]^d`, then splits `n`
/// points as evenly as possible across them with isotropic Gaussian noise of
/// standard deviation `spread`. Deterministic per seed.
pub fn gaussian_mixture(
    n: usize,
    d: usize,
    k_true: usize,
    spread: f64,
    box_side: f64,
    seed: u64,
) -> Result<Mixture> {
    if n == 0 || d == 0 || k_true == 0 {
        return Err(Error::Invalid("n, d, k_true must all be >= 1".into()));
    }
    if k_true > n {
        return Err(Error::Invalid(format!("k_true = {k_true} exceeds n = {n}")));
    }
    if !(spread.is_finite() && spread >= 0.0) || !(box_side.is_finite() && box_side >= 0.0) {
        return Err(Error::Invalid("spread and box must be finite and >= 0".into()));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let centers: Vec<Vec<f64>> =
        (0..k_true).map(|_| (0..d).map(|_| rng.gen::<f64>() * box_side).collect()).collect();

    let base = n / k_true;
    let extra = n % k_true;
    let mut points = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for (c, center) in centers.iter().enumerate() {
        let count = base + usize::from(c < extra);
        for _ in 0..count {
            let p: Vec<f64> = center
                .iter()
                .map(|&m| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    m + spread * z
                })
                .collect();
            points.push(p);
            labels.push(c);
        }
    }
    Ok(Mixture { data: Dataset::new(points)?, centers: CenterSet::new(centers)?, labels })
}
