//! Exponential mechanisms over quasi-convex scores.
//!
//! The output law `P(θ) ∝ exp(−ε·S(θ))` on the γ5-lattice of Θ is realised
//! through level sets `S^(t) = {θ : S(θ) ≤ T̂ + t}`: pick a level with weight
//! proportional to its lattice count times a telescoping coefficient, then
//! draw a uniform lattice point of that level. Level sets are convex because
//! the score is quasi-convex, so they can be counted and sampled through a
//! membership oracle.

mod approx;
mod audit;
mod level;
mod pure;
mod staircase;
mod threshold;

pub use approx::{approx_dp_sample, prepare_approx};
pub use audit::{privacy_audit, AuditBins, AuditReport, AuditSide};
pub use level::{LevelBackend, LevelOracle};
pub use pure::{prepare_pure, pure_dp_sample, PreparedMechanism};
pub use staircase::{staircase_g, truncated_h};
pub use threshold::{gamma7, gamma8, random_threshold};

use crate::error::{Error, Result};
use crate::geometry::{ball_volume, box_reach, dist2, norm, MembershipOracle};
use crate::sampler::PrecisionOptions;
use serde::{Deserialize, Serialize};

/// Convex parameter domain Θ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Ball { center: Vec<f64>, radius: f64 },
}

impl Domain {
    pub fn interval(lo: f64, hi: f64) -> Self {
        Domain::Box { lo: vec![lo], hi: vec![hi] }
    }

    pub fn dim(&self) -> usize {
        match self {
            Domain::Box { lo, .. } => lo.len(),
            Domain::Ball { center, .. } => center.len(),
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            Domain::Box { lo, hi } => x.iter().zip(lo.iter().zip(hi)).all(|(v, (a, b))| *a <= *v && *v <= *b),
            Domain::Ball { center, radius } => crate::geometry::dist2(x, center) <= radius * radius,
        }
    }

    pub fn outer_radius(&self) -> f64 {
        match self {
            Domain::Box { lo, hi } => lo.iter().zip(hi).map(|(a, b)| a.abs().max(b.abs()).powi(2)).sum::<f64>().sqrt(),
            Domain::Ball { center, radius } => norm(center) + radius,
        }
    }

    /// Radius of a ball about `c` containing Θ.
    pub fn outer_radius_about(&self, c: &[f64]) -> f64 {
        match self {
            Domain::Box { lo, hi } => box_reach(lo, hi, c),
            Domain::Ball { center, radius } => dist2(c, center).sqrt() + radius,
        }
    }

    /// Nearest point of Θ shrunk by `margin`.
    pub fn clamp_inside(&self, x: &[f64], margin: f64) -> Vec<f64> {
        match self {
            Domain::Box { lo, hi } => x
                .iter()
                .zip(lo.iter().zip(hi))
                .map(|(v, (a, b))| {
                    let (a, b) = (a + margin, b - margin);
                    if a > b {
                        0.5 * (a + b)
                    } else {
                        v.clamp(a, b)
                    }
                })
                .collect(),
            Domain::Ball { center, radius } => {
                let room = (radius - margin).max(0.0);
                let diff: Vec<f64> = x.iter().zip(center).map(|(a, c)| a - c).collect();
                let n = norm(&diff);
                if n <= room {
                    x.to_vec()
                } else {
                    center.iter().zip(&diff).map(|(c, v)| c + v * room / n).collect()
                }
            }
        }
    }

    /// Upper bound on the number of `spacing`-lattice points in Θ.
    pub fn lattice_upper_bound(&self, spacing: f64) -> f64 {
        match self {
            Domain::Box { lo, hi } => lo.iter().zip(hi).map(|(a, b)| ((b - a) / spacing).floor() + 1.0).product(),
            Domain::Ball { radius, center } => {
                let d = center.len();
                ball_volume(d, radius + spacing * (d as f64).sqrt()) / spacing.powi(d as i32)
            }
        }
    }
}

/// A point `theta0` whose `radius`-ball scores at most `t_prime + 1`, with `t_prime ∈ [min, min + 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowScorer {
    pub theta0: Vec<f64>,
    pub radius: f64,
    pub t_prime: f64,
}

/// Sensitivity-1, quasi-convex score with values in `[0, n]`.
pub trait ScoreOracle: Sync {
    fn dim(&self) -> usize;
    fn n(&self) -> usize;
    fn domain(&self) -> &Domain;
    /// Score at `theta`, accurate to within `tol`.
    fn evaluate(&self, theta: &[f64], tol: f64) -> Result<f64>;
    fn low_scorer(&self) -> Result<LowScorer>;
}

impl<T: ScoreOracle + ?Sized> ScoreOracle for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn n(&self) -> usize {
        (**self).n()
    }
    fn domain(&self) -> &Domain {
        (**self).domain()
    }
    fn evaluate(&self, theta: &[f64], tol: f64) -> Result<f64> {
        (**self).evaluate(theta, tol)
    }
    fn low_scorer(&self) -> Result<LowScorer> {
        (**self).low_scorer()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrivacyParams {
    pub epsilon: f64,
    pub delta: f64,
    pub beta: f64,
    pub eta: f64,
    pub eta_star: f64,
    pub n: usize,
}

impl PrivacyParams {
    pub fn validate_pure(&self) -> Result<()> {
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return Err(Error::InvalidParameter(format!("epsilon={}", self.epsilon)));
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(Error::InvalidParameter(format!("beta={}", self.beta)));
        }
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return Err(Error::InvalidParameter(format!("eta={}", self.eta)));
        }
        if self.n == 0 || self.epsilon * (self.n as f64) < 1.0 {
            return Err(Error::InvalidParameter("epsilon·n must be at least 1".into()));
        }
        Ok(())
    }

    pub fn validate_approx(&self) -> Result<()> {
        self.validate_pure()?;
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidParameter(format!("delta={}", self.delta)));
        }
        if !(self.eta_star >= 10.0 * self.eta && self.eta_star <= 1.0) {
            return Err(Error::InvalidParameter(format!("eta_star={} not in [10·eta, 1]", self.eta_star)));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MechanismConfig {
    /// Output lattice spacing γ5.
    pub spacing: f64,
    pub gamma6: f64,
    pub score_tol: f64,
    /// Relative accuracy of each level-count estimate.
    pub volume_eps: f64,
    /// Failure probability of each level-count estimate.
    pub volume_gamma: f64,
    pub backend: LevelBackend,
    pub precision: PrecisionOptions,
}

impl Default for MechanismConfig {
    fn default() -> Self {
        MechanismConfig {
            spacing: 0.01,
            gamma6: 0.01,
            score_tol: 0.05,
            volume_eps: 0.1,
            volume_gamma: 0.01,
            backend: LevelBackend::Sampling,
            precision: PrecisionOptions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MechanismResult {
    Theta(Vec<f64>),
    Reject,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub t_prime: f64,
    pub threshold: Option<f64>,
    pub level: Option<usize>,
    pub level_counts: Vec<f64>,
    pub accept_probability: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MechanismOutcome {
    pub result: MechanismResult,
    pub score_at_output: Option<f64>,
    pub diagnostics: Diagnostics,
}

impl MechanismOutcome {
    pub fn theta(&self) -> Option<&[f64]> {
        match &self.result {
            MechanismResult::Theta(t) => Some(t),
            MechanismResult::Reject => None,
        }
    }

    pub fn is_reject(&self) -> bool {
        matches!(self.result, MechanismResult::Reject)
    }
}

/// Θ as a membership oracle around a given inner ball.
pub struct DomainOracle<'a> {
    pub domain: &'a Domain,
    pub center: Vec<f64>,
    pub radius: f64,
}

impl MembershipOracle for DomainOracle<'_> {
    fn dim(&self) -> usize {
        self.domain.dim()
    }
    fn query(&self, x: &[f64]) -> bool {
        self.domain.contains(x)
    }
    fn inner_radius(&self) -> f64 {
        self.radius
    }
    fn outer_radius(&self) -> f64 {
        self.domain.outer_radius()
    }
    fn inner_center(&self) -> Vec<f64> {
        self.center.clone()
    }
    fn outer_radius_about(&self, c: &[f64]) -> f64 {
        self.domain.outer_radius_about(c)
    }
}
