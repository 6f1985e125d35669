//! Binary search for the least feasible level `T` of a constraint family.
//!
//! A feasible probe at `T` certifies exact feasibility at `T + 4γ`, and an
//! infeasible-ball probe at `T` certifies `T < T₀ + γ`. Bisecting until the
//! bracket is `γ` wide and reporting `lo + 2γ` (up to clamping) lands within
//! `3γ` of `T₀`.

use super::ellipsoid::{ellipsoid_search, EllipsoidOptions, SearchOutcome};
use super::functional::FunctionalRep;
use super::system::CompiledSystem;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    pub t: f64,
    pub feasible: bool,
    pub iterations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoreSearch {
    pub t_hat: f64,
    pub lo: f64,
    pub hi: f64,
    /// Feasible functional at the smallest feasible probe, with that probe's `T`.
    pub witness: Option<(f64, FunctionalRep)>,
    pub probes: Vec<Probe>,
}

/// Radius of a ball inside the feasible set at `T₀ + γ` whenever `Q_{T₀}` is feasible.
pub fn robust_ball_radius(sys: &CompiledSystem, t0: f64, gamma: f64) -> f64 {
    let tau = sys.system.tau;
    if tau == 0.0 {
        return 0.0;
    }
    let poly = sys.poly_factor();
    let mut r = tau * gamma / poly;
    let q_norm = sys.system.t_constraint.as_ref().map_or(0.0, |tc| tc.at(t0).max_abs_coeff());
    let t_term = if q_norm > 0.0 { (gamma / q_norm).min(1.0 / sys.system.t_max) } else { 1.0 / sys.system.t_max };
    r = r.min(tau / (4.0 * poly) * t_term);
    let k = sys.system.matrix_psd.iter().map(|m| m.value.len()).max().unwrap_or(0);
    let q_ij = sys.system.matrix_psd.iter().flat_map(|m| m.value.iter().flatten()).map(|q| q.max_abs_coeff()).fold(0.0, f64::max);
    if k > 0 && q_ij > 0.0 {
        r = r.min(tau * gamma / ((k as f64).sqrt() * poly * q_ij));
    }
    r
}

pub fn compute_score_t(sys: &CompiledSystem, gamma: f64, opts: &EllipsoidOptions) -> Result<ScoreSearch> {
    let t_max = sys.system.t_max;
    if !(gamma > 0.0 && gamma < t_max / 2.0) {
        return Err(Error::InvalidParameter(format!("gamma={gamma} must lie in (0, T_max/2)")));
    }
    let (mut lo, mut hi) = (0.0f64, t_max);
    let mut witness = None;
    let mut probes = Vec::new();
    while hi - lo > gamma {
        let t = 0.5 * (lo + hi);
        let r = robust_ball_radius(sys, t, gamma);
        let out = ellipsoid_search(sys, t, r, gamma, opts)?;
        probes.push(Probe { t, feasible: out.functional().is_some(), iterations: out.iterations() });
        match out {
            SearchOutcome::Feasible { functional, .. } => {
                hi = t;
                witness = Some((t, functional));
            }
            SearchOutcome::InfeasibleBall { .. } => lo = t,
        }
    }
    let t_hat = (0.5 * (lo + hi) + 1.5 * gamma).clamp(0.0, t_max);
    Ok(ScoreSearch { t_hat, lo, hi, witness, probes })
}
