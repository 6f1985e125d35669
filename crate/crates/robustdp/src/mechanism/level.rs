//! Level sets `{θ ∈ Θ : S(θ) ≤ threshold}` as bodies: membership, counting, sampling.

use super::{LowScorer, MechanismConfig, ScoreOracle};
use crate::error::{Error, Result};
use crate::geometry::{round_coord, MembershipOracle};
use crate::sampler::{LatticeSampler, PrecisionBudget};
use crate::volume::estimate_with_rng;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// How level sets are counted and sampled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelBackend {
    /// Volume estimation and perturb-round-reject sampling from membership queries; any dimension.
    Sampling,
    /// Exact lattice counts by bisection on the (contiguous) 1-d level set.
    ExactGrid1d,
}

/// Accepts `θ ∈ Θ` whose estimated score is at most `threshold`.
pub struct LevelOracle<'a, S: ?Sized> {
    pub score: &'a S,
    pub threshold: f64,
    pub center: Vec<f64>,
    pub radius: f64,
    pub tol: f64,
}

impl<S: ScoreOracle + ?Sized> MembershipOracle for LevelOracle<'_, S> {
    fn dim(&self) -> usize {
        self.score.dim()
    }
    fn query(&self, x: &[f64]) -> bool {
        self.score.domain().contains(x) && self.score.evaluate(x, self.tol).map(|s| s <= self.threshold).unwrap_or(false)
    }
    fn inner_radius(&self) -> f64 {
        self.radius
    }
    fn outer_radius(&self) -> f64 {
        self.score.domain().outer_radius()
    }
    fn inner_center(&self) -> Vec<f64> {
        self.center.clone()
    }
    fn outer_radius_about(&self, c: &[f64]) -> f64 {
        self.score.domain().outer_radius_about(c)
    }
}

pub(crate) enum LevelSampler<'a, S: ?Sized> {
    Lattice(LatticeSampler<LevelOracle<'a, S>>),
    Grid1d { lo: i64, hi: i64, spacing: f64 },
}

pub(crate) struct Level<'a, S: ?Sized> {
    pub threshold: f64,
    pub count: f64,
    pub sampler: LevelSampler<'a, S>,
}

impl<S: ScoreOracle + ?Sized> Level<'_, S> {
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<f64>> {
        match &self.sampler {
            LevelSampler::Lattice(s) => s.sample(rng),
            LevelSampler::Grid1d { lo, hi, spacing } => Ok(vec![rng.random_range(*lo..=*hi) as f64 * spacing]),
        }
    }
}

fn grid_edge<F: Fn(i64) -> bool>(accept: F, start: i64, limit: i64, step: i64) -> i64 {
    // `start` is accepted and `limit` is the last index inside the domain.
    let mut good = start;
    let mut jump = 1i64;
    let mut bad;
    loop {
        let probe = good + step * jump;
        if (step > 0 && probe > limit) || (step < 0 && probe < limit) {
            if accept(limit) {
                return limit;
            }
            bad = limit;
            break;
        }
        if accept(probe) {
            good = probe;
            jump *= 2;
        } else {
            bad = probe;
            break;
        }
    }
    while (bad - good).abs() > 1 {
        let mid = good + (bad - good) / 2;
        if accept(mid) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    good
}

pub(crate) fn build_level<'a, S: ScoreOracle + ?Sized, R: Rng + ?Sized>(
    score: &'a S,
    low: &LowScorer,
    threshold: f64,
    cfg: &MechanismConfig,
    rng: &mut R,
) -> Result<Level<'a, S>> {
    let oracle = LevelOracle { score, threshold, center: low.theta0.clone(), radius: low.radius, tol: cfg.score_tol };
    match cfg.backend {
        LevelBackend::ExactGrid1d => {
            if score.dim() != 1 {
                return Err(Error::InvalidParameter("exact grid backend needs a 1-d score".into()));
            }
            let s = cfg.spacing;
            let accept = |k: i64| oracle.query(&[k as f64 * s]);
            let k0 = (round_coord(low.theta0[0], s) / s).round() as i64;
            if !accept(k0) {
                return Err(Error::SamplerFailure("lattice point nearest the low scorer is outside the level set".into()));
            }
            let r = score.domain().outer_radius();
            let kmax = (r / s).floor() as i64 + 1;
            let hi = grid_edge(accept, k0, kmax, 1);
            let lo = grid_edge(accept, k0, -kmax, -1);
            Ok(Level { threshold, count: (hi - lo + 1) as f64, sampler: LevelSampler::Grid1d { lo, hi, spacing: s } })
        }
        LevelBackend::Sampling => {
            let options = crate::sampler::PrecisionOptions { spacing: Some(cfg.spacing), ..cfg.precision };
            let budget = PrecisionBudget::for_oracle(&oracle, cfg.gamma6, options)?;
            let est = estimate_with_rng(&oracle, &budget, cfg.volume_eps, cfg.volume_gamma, rng)?;
            let sampler = LatticeSampler::new(oracle, budget, rng)?;
            Ok(Level { threshold, count: est.count_estimate, sampler: LevelSampler::Lattice(sampler) })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_edge_finds_boundaries() {
        let acc = |k: i64| (-7..=12).contains(&k);
        assert_eq!(grid_edge(acc, 0, 100, 1), 12);
        assert_eq!(grid_edge(acc, 0, -100, -1), -7);
        assert_eq!(grid_edge(acc, 3, 12, 1), 12);
        assert_eq!(grid_edge(|_| true, 0, 5, 1), 5);
        assert_eq!(grid_edge(|k| k == 0, 0, 5, 1), 0);
    }
}
