//! Empirical privacy audit on a pair of neighbouring datasets.
//!
//! Both output distributions are histogrammed over a fixed grid of bins
//! spanning Θ's bounding box (plus one bin for REJECT). The report gives the
//! largest add-one-smoothed log ratio between matching bins and, for a
//! reference ε, the mass by which one histogram exceeds `e^ε` times the other.

use super::{Domain, MechanismOutcome, MechanismResult};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AuditSide {
    First,
    Second,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditBins {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub per_axis: usize,
}

impl AuditBins {
    pub fn from_domain(domain: &Domain, per_axis: usize) -> Self {
        let (lo, hi) = match domain {
            Domain::Box { lo, hi } => (lo.clone(), hi.clone()),
            Domain::Ball { center, radius } => {
                (center.iter().map(|c| c - radius).collect(), center.iter().map(|c| c + radius).collect())
            }
        };
        AuditBins { lo, hi, per_axis }
    }

    pub fn len(&self) -> usize {
        self.per_axis.pow(self.lo.len() as u32) + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index(&self, outcome: &MechanismOutcome) -> usize {
        let theta = match &outcome.result {
            MechanismResult::Theta(t) => t,
            MechanismResult::Reject => return self.len() - 1,
        };
        let mut idx = 0;
        for ((x, a), b) in theta.iter().zip(&self.lo).zip(&self.hi) {
            let f = ((x - a) / (b - a) * self.per_axis as f64).floor();
            let k = (f.max(0.0) as usize).min(self.per_axis - 1);
            idx = idx * self.per_axis + k;
        }
        idx
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub trials: usize,
    pub epsilon_hat: f64,
    pub delta_hat: f64,
    pub epsilon_ref: f64,
    pub counts_first: Vec<usize>,
    pub counts_second: Vec<usize>,
}

pub fn histogram_epsilon(a: &[usize], b: &[usize]) -> f64 {
    a.iter()
        .zip(b)
        .filter(|(x, y)| **x + **y > 0)
        .map(|(x, y)| ((*x as f64 + 1.0) / (*y as f64 + 1.0)).ln().abs())
        .fold(0.0, f64::max)
}

pub fn histogram_delta(a: &[usize], b: &[usize], epsilon: f64) -> f64 {
    let (na, nb) = (a.iter().sum::<usize>() as f64, b.iter().sum::<usize>() as f64);
    let excess = |p: &[usize], np: f64, q: &[usize], nq: f64| -> f64 {
        p.iter().zip(q).map(|(x, y)| (*x as f64 / np - epsilon.exp() * *y as f64 / nq).max(0.0)).sum()
    };
    excess(a, na, b, nb).max(excess(b, nb, a, na))
}

/// Runs the mechanism `trials` times on each side and compares histograms.
pub fn privacy_audit<F>(mut run: F, trials: usize, bins: &AuditBins, epsilon_ref: f64) -> Result<AuditReport>
where
    F: FnMut(AuditSide, u64) -> Result<MechanismOutcome>,
{
    if trials == 0 {
        return Err(Error::InvalidParameter("audit needs at least one trial".into()));
    }
    let mut first = vec![0usize; bins.len()];
    let mut second = vec![0usize; bins.len()];
    for i in 0..trials as u64 {
        first[bins.index(&run(AuditSide::First, 2 * i)?)] += 1;
        second[bins.index(&run(AuditSide::Second, 2 * i + 1)?)] += 1;
    }
    Ok(AuditReport {
        trials,
        epsilon_hat: histogram_epsilon(&first, &second),
        delta_hat: histogram_delta(&first, &second, epsilon_ref),
        epsilon_ref,
        counts_first: first,
        counts_second: second,
    })
}
