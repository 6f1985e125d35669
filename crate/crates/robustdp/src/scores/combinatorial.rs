//! Inverse-sensitivity scores of 1-d robust estimators.
//!
//! The score of θ is the least number of points that must be replaced so
//! that the estimator of the modified data lies in `[θ − α, θ + α]`.
//!
//! Median (lower median, index `k = ⌊(n−1)/2⌋`): with `L = #{y < θ−α}` and
//! `G = #{y > θ+α}` the score is `max(0, L − k) + max(0, G − (n−1−k))`.
//!
//! Trimmed mean dropping `t = ⌊η0·n⌋` points at each end: replacing the `s`
//! smallest points by huge values shifts the kept window to
//! `sorted[s+t ..= n−1−t+s]`, which is the largest reachable value `hi_s`;
//! `lo_s` is symmetric, every value in between is reachable, and for `s > t`
//! the reach is unbounded. The score is the least `s` with
//! `θ ∈ [lo_s − α, hi_s + α]`.

use crate::error::{Error, Result};
use crate::mechanism::{Domain, LowScorer, ScoreOracle};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Estimator {
    Median,
    TrimmedMean { eta0: f64 },
}

impl Estimator {
    pub fn trim(&self, n: usize) -> usize {
        match self {
            Estimator::Median => 0,
            Estimator::TrimmedMean { eta0 } => (eta0 * n as f64).floor() as usize,
        }
    }

    /// Estimator value on unsorted data.
    pub fn apply(&self, data: &[f64]) -> f64 {
        let mut s = data.to_vec();
        s.sort_by(f64::total_cmp);
        let n = s.len();
        match self {
            Estimator::Median => s[(n - 1) / 2],
            Estimator::TrimmedMean { .. } => {
                let t = self.trim(n);
                s[t..n - t].iter().sum::<f64>() / (n - 2 * t) as f64
            }
        }
    }
}

/// Sorted data with prefix sums, scoring θ in `O(log n)`.
#[derive(Clone, Debug)]
pub struct SortedScorer {
    sorted: Vec<f64>,
    prefix: Vec<f64>,
    estimator: Estimator,
    alpha: f64,
}

impl SortedScorer {
    pub fn new(data: &[f64], estimator: Estimator, alpha: f64) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::InvalidParameter("empty dataset".into()));
        }
        if !(alpha > 0.0) {
            return Err(Error::InvalidParameter(format!("alpha={alpha}")));
        }
        if let Estimator::TrimmedMean { eta0 } = estimator {
            if !(0.0..0.5).contains(&eta0) || 2 * estimator.trim(data.len()) >= data.len() {
                return Err(Error::InvalidParameter(format!("trim fraction {eta0}")));
            }
        }
        let mut sorted = data.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mut prefix = Vec::with_capacity(sorted.len() + 1);
        prefix.push(0.0);
        for v in &sorted {
            prefix.push(prefix.last().unwrap() + v);
        }
        Ok(SortedScorer { sorted, prefix, estimator, alpha })
    }

    pub fn n(&self) -> usize {
        self.sorted.len()
    }

    pub fn estimate(&self) -> f64 {
        let n = self.n();
        match self.estimator {
            Estimator::Median => self.sorted[(n - 1) / 2],
            Estimator::TrimmedMean { .. } => {
                let t = self.estimator.trim(n);
                self.window_mean(t, n - 1 - t)
            }
        }
    }

    fn window_mean(&self, a: usize, b: usize) -> f64 {
        (self.prefix[b + 1] - self.prefix[a]) / (b + 1 - a) as f64
    }

    /// Largest and smallest trimmed means reachable with `s ≤ t` replacements.
    pub fn trimmed_reach(&self, s: usize) -> (f64, f64) {
        let n = self.n();
        let t = self.estimator.trim(n);
        let hi = self.window_mean(s + t, n - 1 - t + s);
        let lo = self.window_mean(t - s, n - 1 - t - s);
        (lo, hi)
    }

    pub fn score(&self, theta: f64) -> usize {
        let n = self.n();
        let (a, b) = (theta - self.alpha, theta + self.alpha);
        match self.estimator {
            Estimator::Median => {
                let k = (n - 1) / 2;
                let below = self.sorted.partition_point(|v| *v < a);
                let above = n - self.sorted.partition_point(|v| *v <= b);
                below.saturating_sub(k) + above.saturating_sub(n - 1 - k)
            }
            Estimator::TrimmedMean { .. } => {
                let t = self.estimator.trim(n);
                let fits = |s: usize| {
                    let (lo, hi) = self.trimmed_reach(s);
                    lo - self.alpha <= theta && theta <= hi + self.alpha
                };
                if !fits(t) {
                    return (t + 1).min(n);
                }
                let (mut lo, mut hi) = (0usize, t);
                if fits(0) {
                    return 0;
                }
                while hi - lo > 1 {
                    let mid = (lo + hi) / 2;
                    if fits(mid) {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                hi
            }
        }
    }
}

/// Score oracle over a 1-d domain for a [`SortedScorer`].
#[derive(Clone, Debug)]
pub struct CombinatorialScore {
    pub scorer: SortedScorer,
    pub domain: Domain,
}

impl CombinatorialScore {
    pub fn new(data: &[f64], estimator: Estimator, alpha: f64, domain: Domain) -> Result<Self> {
        if domain.dim() != 1 {
            return Err(Error::InvalidParameter("combinatorial scores are 1-d".into()));
        }
        Ok(CombinatorialScore { scorer: SortedScorer::new(data, estimator, alpha)?, domain })
    }
}

impl ScoreOracle for CombinatorialScore {
    fn dim(&self) -> usize {
        1
    }
    fn n(&self) -> usize {
        self.scorer.n()
    }
    fn domain(&self) -> &Domain {
        &self.domain
    }
    fn evaluate(&self, theta: &[f64], _tol: f64) -> Result<f64> {
        Ok(self.scorer.score(theta[0]) as f64)
    }
    fn low_scorer(&self) -> Result<LowScorer> {
        let est = [self.scorer.estimate()];
        let t_prime = self.scorer.score(self.domain.clamp_inside(&est, 0.0)[0]) as f64;
        let mut r = self.scorer.alpha;
        for _ in 0..64 {
            let theta0 = self.domain.clamp_inside(&est, r);
            let c = theta0[0];
            let ok = [c - r, c, c + r].iter().all(|x| self.scorer.score(*x) as f64 <= t_prime + 1.0);
            if ok && self.domain.contains(&[c - r]) && self.domain.contains(&[c + r]) {
                return Ok(LowScorer { theta0, radius: r, t_prime });
            }
            r /= 2.0;
        }
        Err(Error::SamplerFailure("no low-scoring ball found".into()))
    }
}

/// Exhaustive inverse-sensitivity score. Each replaced point goes to `±1e9`
/// except at most one, which takes a value from `candidates`.
pub fn brute_force_score(theta: f64, data: &[f64], estimator: Estimator, alpha: f64, candidates: &[f64]) -> usize {
    let n = data.len();
    let within = |d: &[f64]| (estimator.apply(d) - theta).abs() <= alpha;
    fn search(d: &mut Vec<f64>, from: usize, left: usize, free: bool, cands: &[f64], ok: &dyn Fn(&[f64]) -> bool) -> bool {
        if left == 0 {
            return ok(d);
        }
        for i in from..d.len() {
            let orig = d[i];
            for v in [-1e9, 1e9] {
                d[i] = v;
                if search(d, i + 1, left - 1, free, cands, ok) {
                    return true;
                }
            }
            if free {
                for &v in cands {
                    d[i] = v;
                    if search(d, i + 1, left - 1, false, cands, ok) {
                        return true;
                    }
                }
            }
            d[i] = orig;
        }
        false
    }
    for s in 0..=n {
        if search(&mut data.to_vec(), 0, s, true, candidates, &within) {
            return s;
        }
    }
    n
}

/// Inverse-sensitivity score of θ for a 1-d dataset.
pub fn inverse_sensitivity_score(theta: f64, data: &[f64], estimator: Estimator, alpha: f64) -> Result<usize> {
    Ok(SortedScorer::new(data, estimator, alpha)?.score(theta))
}
