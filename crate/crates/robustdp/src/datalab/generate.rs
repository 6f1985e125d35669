//! Gaussian samples and strong-contamination adversaries.

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::rng_from_seed;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::seq::index::sample;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

/// `n` i.i.d. draws from `N(mean, cov)`, with `cov` row-major `d×d`.
pub fn gaussian_sample(n: usize, mean: &[f64], cov: &[f64], seed: u64) -> Result<Dataset> {
    let d = mean.len();
    if n == 0 || d == 0 || cov.len() != d * d {
        return Err(Error::InvalidParameter(format!("n={n}, mean of length {d}, covariance of length {}", cov.len())));
    }
    let sigma = DMatrix::from_row_slice(d, d, cov);
    if (&sigma - sigma.transpose()).amax() > 1e-12 * sigma.amax().max(1.0) {
        return Err(Error::NotPsd);
    }
    let eig = SymmetricEigen::new(sigma.clone());
    if eig.eigenvalues.iter().any(|l| *l < -1e-12 * sigma.amax().max(1.0)) {
        return Err(Error::NotPsd);
    }
    let factor = &eig.eigenvectors * DMatrix::from_diagonal(&eig.eigenvalues.map(|l| l.max(0.0).sqrt()));
    let mut rng = rng_from_seed(seed);
    let mut values = Vec::with_capacity(n * d);
    let mut g = vec![0.0; d];
    for _ in 0..n {
        for v in g.iter_mut() {
            *v = StandardNormal.sample(&mut rng);
        }
        for j in 0..d {
            values.push(mean[j] + (0..d).map(|k| factor[(j, k)] * g[k]).sum::<f64>());
        }
    }
    Dataset::new(d, values)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum CorruptionMode {
    /// Every corrupted row becomes `value` (a single entry is broadcast).
    ReplaceWithConstant { value: Vec<f64> },
    /// Corrupted rows are moved by `delta`.
    ShiftCluster { delta: Vec<f64> },
    /// Corrupted rows all take the value that puts the sample mean at `target`.
    AdversarialMeanPull { target: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorruptionPlan {
    pub eta: f64,
    pub mode: CorruptionMode,
    pub seed: u64,
}

fn broadcast(v: &[f64], d: usize) -> Result<Vec<f64>> {
    match v.len() {
        1 => Ok(vec![v[0]; d]),
        l if l == d => Ok(v.to_vec()),
        l => Err(Error::InvalidParameter(format!("corruption vector of length {l} for dimension {d}"))),
    }
}

/// Replaces exactly `⌊ηn⌋` rows chosen uniformly at random and flags them.
pub fn corrupt(x: &Dataset, plan: &CorruptionPlan) -> Result<Dataset> {
    if !(0.0..1.0).contains(&plan.eta) {
        return Err(Error::InvalidParameter(format!("eta={}", plan.eta)));
    }
    let (n, d) = (x.n(), x.dim);
    let k = (plan.eta * n as f64).floor() as usize;
    let mut rng = rng_from_seed(plan.seed);
    let mut idx = sample(&mut rng, n, k).into_vec();
    idx.sort_unstable();
    let mut out = x.clone();
    let new_row = |i: usize| -> Result<Vec<f64>> {
        Ok(match &plan.mode {
            CorruptionMode::ReplaceWithConstant { value } => broadcast(value, d)?,
            CorruptionMode::ShiftCluster { delta } => x.row(i).iter().zip(broadcast(delta, d)?).map(|(a, b)| a + b).collect(),
            CorruptionMode::AdversarialMeanPull { target } => {
                let target = broadcast(target, d)?;
                (0..d)
                    .map(|j| {
                        let kept: f64 = (0..n).filter(|r| idx.binary_search(r).is_err()).map(|r| x.row(r)[j]).sum();
                        (n as f64 * target[j] - kept) / k as f64
                    })
                    .collect()
            }
        })
    };
    for &i in &idx {
        let row = new_row(i)?;
        out.values[i * d..(i + 1) * d].copy_from_slice(&row);
        out.corrupted[i] = true;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_covariance_gives_constant_rows() {
        let x = gaussian_sample(5, &[1.0, 2.0], &[0.0; 4], 3).unwrap();
        assert!(x.rows().all(|r| r == [1.0, 2.0]));
        assert!(matches!(gaussian_sample(5, &[0.0, 0.0], &[1.0, 0.0, 0.0, -1.0], 3), Err(Error::NotPsd)));
    }

    #[test]
    fn large_sample_moments() {
        let x = gaussian_sample(100_000, &[0.0], &[1.0], 11).unwrap();
        let m = x.mean()[0];
        let v = x.values.iter().map(|a| (a - m).powi(2)).sum::<f64>() / x.n() as f64;
        assert!(m.abs() < 0.02 && (v - 1.0).abs() < 0.05, "{m} {v}");
        assert_eq!(x, gaussian_sample(100_000, &[0.0], &[1.0], 11).unwrap());
    }

    #[test]
    fn corruption_counts() {
        let x = gaussian_sample(100, &[0.0], &[1.0], 1).unwrap();
        let plan = CorruptionPlan { eta: 0.1, mode: CorruptionMode::ReplaceWithConstant { value: vec![50.0] }, seed: 2 };
        let y = corrupt(&x, &plan).unwrap();
        assert_eq!(y.values.iter().filter(|v| **v == 50.0).count(), 10);
        let diff = x.values.iter().zip(&y.values).filter(|(a, b)| a.to_bits() != b.to_bits()).count();
        assert_eq!(diff, 10);
        assert_eq!(y.corrupted.iter().filter(|c| **c).count(), 10);
        let same = corrupt(&x, &CorruptionPlan { eta: 0.0, ..plan }).unwrap();
        assert_eq!(same.values, x.values);
    }

    #[test]
    fn mean_pull_hits_target() {
        let x = gaussian_sample(50, &[0.0, 0.0], &[1.0, 0.0, 0.0, 1.0], 4).unwrap();
        let plan = CorruptionPlan { eta: 0.2, mode: CorruptionMode::AdversarialMeanPull { target: vec![3.0, -1.0] }, seed: 5 };
        let m = corrupt(&x, &plan).unwrap().mean();
        assert!((m[0] - 3.0).abs() < 1e-9 && (m[1] + 1.0).abs() < 1e-9);
    }
}
