//! Multiplicative lattice-point counting by telescoping over nested balls.
//!
//! With `c` the inner center, radii `ρ_0 = r < ρ_1 < … < ρ_M` grow by the
//! factor `1 + 1/d` until `B(c, ρ_M)` swallows the body. Stage `i` samples
//! from `K ∩ B(c, ρ_{i+1})` and records the fraction landing in
//! `B(c, ρ_i)`; the count is the analytic lattice count of the base ball
//! times the product of the inverted fractions.

use crate::error::{Error, Result};
use crate::geometry::{ball_volume, dist2, MembershipOracle, RestrictedOracle};
use crate::sampler::{LatticeSampler, PrecisionBudget};
use crate::rng_from_seed;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Stage ratios outside this range mark the run as suspicious.
pub const STAGE_RATIO_RANGE: (f64, f64) = (0.9, 3.0);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub count_estimate: f64,
    pub rel_error_target: f64,
    pub failure_prob: f64,
    pub samples_used: usize,
    pub base_count: f64,
    pub radii: Vec<f64>,
    pub stage_ratios: Vec<f64>,
    pub flagged: bool,
}

/// Radii `r, r(1+1/d), …` capped by the first one whose ball contains `B(0, R)`.
pub fn stage_radii(dim: usize, inner_radius: f64, reach: f64) -> Vec<f64> {
    let growth = 1.0 + 1.0 / dim as f64;
    let mut radii = vec![inner_radius];
    while *radii.last().unwrap() < reach {
        let next = (radii.last().unwrap() * growth).min(reach);
        radii.push(next);
    }
    radii
}

pub fn samples_per_stage(stages: usize, eps: f64, gamma: f64) -> usize {
    if stages == 0 {
        return 0;
    }
    let m = stages as f64;
    let e = eps / m;
    ((2.0 / (e * e)) * (4.0 * m / gamma).ln()).ceil() as usize
}

pub(crate) fn estimate_with_rng<O: MembershipOracle, R: Rng + ?Sized>(
    oracle: &O,
    budget: &PrecisionBudget,
    eps: f64,
    gamma: f64,
    rng: &mut R,
) -> Result<VolumeEstimate> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::InvalidParameter(format!("eps={eps} outside (0, 0.5)")));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::InvalidParameter(format!("gamma={gamma} outside (0, 1)")));
    }
    let d = oracle.dim();
    let center = oracle.inner_center();
    let r = oracle.inner_radius();
    let reach = oracle.outer_radius_about(&center);
    let radii = stage_radii(d, r, reach);
    let stages = radii.len() - 1;
    let per_stage = samples_per_stage(stages, eps, gamma);
    let base_count = (r / budget.gamma5).powi(d as i32) * ball_volume(d, 1.0);

    let mut ratios = Vec::with_capacity(stages);
    let mut count = base_count;
    for i in 0..stages {
        let big = RestrictedOracle::new(oracle, center.clone(), radii[i + 1]);
        let stage_budget = budget.restricted_to(&big)?;
        let sampler = LatticeSampler::new(&big, stage_budget, rng)?;
        let small2 = radii[i] * radii[i];
        let mut inside = 0usize;
        for _ in 0..per_stage {
            let z = sampler.sample(rng)?;
            if dist2(&z, &center) <= small2 {
                inside += 1;
            }
        }
        if inside == 0 {
            return Err(Error::SamplerFailure(format!("stage {i}: no samples in the inner ball")));
        }
        let ratio = per_stage as f64 / inside as f64;
        log::debug!("volume stage={i} radius={} ratio={ratio}", radii[i + 1]);
        ratios.push(ratio);
        count *= ratio;
    }
    let flagged = ratios.iter().any(|q| *q < STAGE_RATIO_RANGE.0 || *q > STAGE_RATIO_RANGE.1);
    Ok(VolumeEstimate {
        count_estimate: count,
        rel_error_target: eps,
        failure_prob: gamma,
        samples_used: per_stage * stages,
        base_count,
        radii,
        stage_ratios: ratios,
        flagged,
    })
}

/// Estimates the number of γ5-lattice points accepted by `oracle` to within `e^{±O(ε)}`.
pub fn estimate_grid_count<O: MembershipOracle>(
    oracle: &O,
    budget: &PrecisionBudget,
    eps: f64,
    gamma: f64,
    seed: u64,
) -> Result<VolumeEstimate> {
    let mut rng = rng_from_seed(seed);
    estimate_with_rng(oracle, budget, eps, gamma, &mut rng)
}
