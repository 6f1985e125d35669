//! Adapters around score implementations: evaluation cache, contract self-check,
//! and a synthetic distance score with a known exponential-mechanism law.

use crate::error::{Error, Result};
use crate::mechanism::{Domain, LowScorer, ScoreOracle};
use crate::rng_from_seed;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::Mutex;

/// Memoises `evaluate` by the exact bit pattern of θ.
pub struct CachedScore<S> {
    pub inner: S,
    cache: Mutex<HashMap<Vec<u64>, f64>>,
}

pub fn wrap_as_score_oracle<S: ScoreOracle>(inner: S) -> CachedScore<S> {
    CachedScore { inner, cache: Mutex::new(HashMap::new()) }
}

impl<S> CachedScore<S> {
    pub fn cached_len(&self) -> usize {
        self.cache.lock().map(|c| c.len()).unwrap_or(0)
    }
}

impl<S: ScoreOracle> ScoreOracle for CachedScore<S> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn n(&self) -> usize {
        self.inner.n()
    }
    fn domain(&self) -> &Domain {
        self.inner.domain()
    }
    fn evaluate(&self, theta: &[f64], tol: f64) -> Result<f64> {
        let key: Vec<u64> = theta.iter().map(|x| x.to_bits()).collect();
        if let Some(v) = self.cache.lock().ok().and_then(|c| c.get(&key).copied()) {
            return Ok(v);
        }
        let v = self.inner.evaluate(theta, tol)?;
        if let Ok(mut c) = self.cache.lock() {
            c.insert(key, v);
        }
        Ok(v)
    }
    fn low_scorer(&self) -> Result<LowScorer> {
        self.inner.low_scorer()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ContractReport {
    pub probes: usize,
    pub out_of_range: usize,
    pub quasi_convexity_violations: usize,
    pub valid: bool,
}

/// Probes random segments of Θ for `score ∈ [0, n]` and `S(mid) ≤ max(S(a), S(b)) + slack`.
pub fn contract_self_check<S: ScoreOracle + ?Sized>(score: &S, probes: usize, tol: f64, slack: f64, seed: u64) -> Result<ContractReport> {
    let mut rng = rng_from_seed(seed);
    let (lo, hi) = match score.domain() {
        Domain::Box { lo, hi } => (lo.clone(), hi.clone()),
        Domain::Ball { center, radius } => {
            (center.iter().map(|c| c - radius).collect(), center.iter().map(|c| c + radius).collect())
        }
    };
    let n = score.n() as f64;
    let mut report = ContractReport { probes, ..Default::default() };
    let point = |rng: &mut crate::DetRng| loop {
        let p: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| rng.random_range(*a..=*b)).collect();
        if score.domain().contains(&p) {
            return p;
        }
    };
    for _ in 0..probes {
        let a = point(&mut rng);
        let b = point(&mut rng);
        let l: f64 = rng.random();
        let m: Vec<f64> = a.iter().zip(&b).map(|(x, y)| l * x + (1.0 - l) * y).collect();
        let (sa, sb, sm) = (score.evaluate(&a, tol)?, score.evaluate(&b, tol)?, score.evaluate(&m, tol)?);
        for s in [sa, sb, sm] {
            if s < -tol || s > n + tol {
                report.out_of_range += 1;
            }
        }
        if sm > sa.max(sb) + slack {
            report.quasi_convexity_violations += 1;
        }
    }
    report.valid = report.out_of_range == 0 && report.quasi_convexity_violations == 0;
    Ok(report)
}

/// `S(θ) = min(n, ⌈‖θ − center‖ / width⌉)` on a given domain.
#[derive(Clone, Debug)]
pub struct DistanceScore {
    pub center: Vec<f64>,
    pub width: f64,
    pub n: usize,
    pub domain: Domain,
}

impl DistanceScore {
    pub fn new(center: Vec<f64>, width: f64, n: usize, domain: Domain) -> Result<Self> {
        if !(width > 0.0) || !domain.contains(&center) || center.len() != domain.dim() {
            return Err(Error::InvalidParameter("distance score center/width".into()));
        }
        Ok(DistanceScore { center, width, n, domain })
    }

    pub fn exact(&self, theta: &[f64]) -> f64 {
        let d = crate::geometry::dist2(theta, &self.center).sqrt();
        (d / self.width).ceil().min(self.n as f64)
    }
}

impl ScoreOracle for DistanceScore {
    fn dim(&self) -> usize {
        self.center.len()
    }
    fn n(&self) -> usize {
        self.n
    }
    fn domain(&self) -> &Domain {
        &self.domain
    }
    fn evaluate(&self, theta: &[f64], _tol: f64) -> Result<f64> {
        Ok(self.exact(theta))
    }
    fn low_scorer(&self) -> Result<LowScorer> {
        let mut r = self.width;
        while !(self.domain.clamp_inside(&self.center, r) == self.center) {
            r /= 2.0;
            if r < 1e-12 {
                return Err(Error::SamplerFailure("center touches the domain boundary".into()));
            }
        }
        Ok(LowScorer { theta0: self.center.clone(), radius: r, t_prime: 0.0 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cache_is_deterministic() {
        let s = wrap_as_score_oracle(DistanceScore::new(vec![0.0], 1.0, 10, Domain::interval(-5.0, 5.0)).unwrap());
        let a = s.evaluate(&[2.5], 0.0).unwrap();
        let b = s.evaluate(&[2.5], 0.0).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, 3.0);
        assert_eq!(s.cached_len(), 1);
    }

    #[test]
    fn distance_score_passes_self_check() {
        let s = DistanceScore::new(vec![0.5, -0.5], 0.7, 10, Domain::Ball { center: vec![0.0, 0.0], radius: 4.0 }).unwrap();
        let rep = contract_self_check(&s, 500, 0.0, 0.0, 1).unwrap();
        assert!(rep.valid, "{rep:?}");
    }

    #[test]
    fn non_quasi_convex_score_is_flagged() {
        struct Bump(Domain);
        impl ScoreOracle for Bump {
            fn dim(&self) -> usize {
                1
            }
            fn n(&self) -> usize {
                10
            }
            fn domain(&self) -> &Domain {
                &self.0
            }
            fn evaluate(&self, t: &[f64], _: f64) -> Result<f64> {
                Ok(if t[0].abs() < 1.0 { 10.0 } else { 0.0 })
            }
            fn low_scorer(&self) -> Result<LowScorer> {
                Ok(LowScorer { theta0: vec![3.0], radius: 1.0, t_prime: 0.0 })
            }
        }
        let rep = contract_self_check(&Bump(Domain::interval(-5.0, 5.0)), 500, 0.0, 0.0, 2).unwrap();
        assert!(!rep.valid && rep.quasi_convexity_violations > 0);
    }
}
