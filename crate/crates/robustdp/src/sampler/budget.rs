//! The γ1..γ6 precision cascade for lattice sampling.
//!
//! With inner radius `r`, outer radius `R`, dimension `d` and pointwise
//! error target γ6:
//!
//! ```text
//! γ4 = min(r/(2d²), r/d^{3/2} − γ5/2 − γ2 − γ1)    perturbation half-width
//! γ5 = γ4·γ6/d  (or a caller-chosen spacing)       output grid spacing
//! γ2 = γ5·γ6/d²
//! γ3 = (γ5/2R)^d · γ6/d
//! m  = ⌈C d² D² ln(1/γ3)⌉                           chain length
//! ```
//!
//! The second term of γ4 keeps the rounding cell plus perturbation cube of
//! every point of `K` inside the dilated body `(1+1/d)K`. γ1 follows the
//! three-term minimum that closes the hit-and-run coupling argument, which
//! underflows double precision for any realistic `m`, so it is floored.

use crate::error::{Error, Result};
use crate::geometry::{GridSpec, MembershipOracle};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PrecisionOptions {
    /// The constant `C` in the chain length.
    pub mixing_constant: f64,
    pub gamma1_floor: f64,
    /// Overrides γ5 with a fixed output grid spacing.
    pub spacing: Option<f64>,
    /// Multiplier on `ln(1/γ3)` for the perturb-round-reject retry budget.
    pub retry_factor: f64,
}

impl Default for PrecisionOptions {
    fn default() -> Self {
        PrecisionOptions { mixing_constant: 1.0, gamma1_floor: 2f64.powi(-60), spacing: None, retry_factor: 4.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrecisionBudget {
    pub dim: usize,
    pub inner_radius: f64,
    pub outer_radius: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
    pub gamma4: f64,
    pub gamma5: f64,
    pub gamma6: f64,
    /// log2 of the unfloored γ1, for diagnostics.
    pub gamma1_log2_exact: f64,
    pub options: PrecisionOptions,
}

impl PrecisionBudget {
    pub fn new(dim: usize, r: f64, big_r: f64, gamma6: f64, options: PrecisionOptions) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension 0".into()));
        }
        if !(r > 0.0) || !(big_r >= r) || !big_r.is_finite() {
            return Err(Error::InvalidParameter(format!("radii r={r} R={big_r}")));
        }
        if !(gamma6 > 0.0 && gamma6 <= 0.01) {
            return Err(Error::InvalidParameter(format!("gamma6={gamma6} outside (0, 0.01]")));
        }
        if !(options.mixing_constant > 0.0) || !(options.gamma1_floor > 0.0) || !(options.retry_factor > 0.0) {
            return Err(Error::InvalidParameter("precision options".into()));
        }
        let d = dim as f64;
        let floor1 = options.gamma1_floor;
        let (gamma4, gamma5) = match options.spacing {
            Some(s) => {
                if !(s > 0.0) || !s.is_finite() {
                    return Err(Error::InvalidParameter(format!("spacing {s}")));
                }
                let g2 = s * gamma6 / (d * d);
                (f64::min(r / (2.0 * d * d), r / d.powf(1.5) - s / 2.0 - g2 - floor1), s)
            }
            None => {
                let g4 = r / (2.0 * d * d);
                (g4, g4 * gamma6 / d)
            }
        };
        if !(gamma4 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "grid spacing {gamma5} too coarse for inner radius {r} in dimension {dim}"
            )));
        }
        let gamma2 = gamma5 * gamma6 / (d * d);
        let gamma3 = (gamma5 / (2.0 * big_r)).powi(dim as i32) * gamma6 / d;
        let mut b = PrecisionBudget {
            dim,
            inner_radius: r,
            outer_radius: big_r,
            gamma1: floor1,
            gamma2,
            gamma3,
            gamma4,
            gamma5,
            gamma6,
            gamma1_log2_exact: 0.0,
            options,
        };
        let worst_d = 2.0 * d.powi(3);
        b.gamma1_log2_exact = b.gamma1_log2_paper(worst_d);
        b.gamma1 = floor1.max(b.gamma1_log2_exact.exp2());
        Ok(b)
    }

    pub fn for_oracle<O: MembershipOracle + ?Sized>(oracle: &O, gamma6: f64, options: PrecisionOptions) -> Result<Self> {
        Self::new(oracle.dim(), oracle.inner_radius(), oracle.outer_radius(), gamma6, options)
    }

    /// Budget for a sub-body sharing this budget's grid and γ1.
    pub fn restricted_to<O: MembershipOracle + ?Sized>(&self, oracle: &O) -> Result<Self> {
        let options = PrecisionOptions { spacing: Some(self.gamma5), gamma1_floor: self.gamma1, ..self.options };
        Self::new(oracle.dim(), oracle.inner_radius(), oracle.outer_radius(), self.gamma6, options)
    }

    pub fn grid(&self) -> GridSpec {
        GridSpec { spacing: self.gamma5, dim: self.dim }
    }

    pub fn chain_length(&self, mixing_radius: f64) -> usize {
        let d = self.dim as f64;
        let m = self.options.mixing_constant * d * d * mixing_radius * mixing_radius * (1.0 / self.gamma3).ln();
        (m.ceil() as usize).max(1)
    }

    pub fn rejection_trials(&self) -> usize {
        ((self.options.retry_factor * (1.0 / self.gamma3).ln()).ceil() as usize).max(8)
    }

    /// log2 of `min(γ2/(2Dm), γ(τ/2)^m/(mD), (τ/2)^{m+1}/(4Dm))` with γ = γ3, τ = γ/m².
    pub fn gamma1_log2_paper(&self, mixing_radius: f64) -> f64 {
        let m = self.chain_length(mixing_radius) as f64;
        let dd = mixing_radius;
        let g = self.gamma3;
        let ln_half_tau = (g / (m * m) / 2.0).ln();
        let t1 = (self.gamma2 / (2.0 * dd * m)).ln();
        let t2 = g.ln() + m * ln_half_tau - (m * dd).ln();
        let t3 = (m + 1.0) * ln_half_tau - (4.0 * dd * m).ln();
        t1.min(t2).min(t3) / std::f64::consts::LN_2
    }
}
