//! Isotropic rounding from membership queries alone.
//!
//! We keep an inner ellipsoid `E = {c + L u : ‖u‖ ≤ 1}` known to lie in the
//! body, starting from the advertised inner ball, and work in coordinates
//! `z = L⁻¹(x − c)` where `E` is the unit ball. Short hit-and-run probes from
//! the origin report chord endpoints. An endpoint `y` with
//! `‖y‖ ≥ 0.75·2d³` certifies that `conv(B(0,1) ∪ {y})` lies in the body,
//! and we replace `E` by the ellipsoid inscribed in that hull
//!
//! ```text
//! d = 1:  the segment [−1, ‖y‖]
//! d ≥ 2:  center (‖y‖/2d)·ŷ, semi-axis ‖y‖/2d along ŷ, 1 − 1/d across
//! ```
//!
//! whose volume is at least `(‖y‖/2d)(1 − 1/d)^{d−1} > 1` times the old one,
//! so the loop stops after `O(d log(R/r))` growths. When a probe round
//! finds no far endpoint the map is returned, together with the largest
//! endpoint norm seen, which serves as the mixing radius `D`.

use crate::error::{Error, Result};
use crate::geometry::{norm, MembershipOracle};
use crate::sampler::hit_and_run::step_in_place;
use crate::sampler::PrecisionBudget;
use crate::rng_from_seed;
use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// `x ↦ matrix·x + offset`, stored row-major together with its inverse.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    pub dim: usize,
    pub matrix: Vec<f64>,
    pub offset: Vec<f64>,
    pub inverse: Vec<f64>,
    pub inverse_offset: Vec<f64>,
    pub condition_number: f64,
}

fn matvec(a: &[f64], x: &[f64], out: &mut [f64]) {
    let d = x.len();
    for i in 0..d {
        out[i] = (0..d).map(|j| a[i * d + j] * x[j]).sum();
    }
}

impl AffineMap {
    pub fn identity(dim: usize) -> Self {
        let mut eye = vec![0.0; dim * dim];
        for i in 0..dim {
            eye[i * dim + i] = 1.0;
        }
        AffineMap {
            dim,
            matrix: eye.clone(),
            offset: vec![0.0; dim],
            inverse: eye,
            inverse_offset: vec![0.0; dim],
            condition_number: 1.0,
        }
    }

    /// Map sending the ellipsoid `{c + L u : ‖u‖ ≤ 1}` to the unit ball.
    pub fn from_ellipsoid(center: &[f64], l: &DMatrix<f64>) -> Result<Self> {
        let dim = center.len();
        let inv = l.clone().try_inverse().ok_or(Error::SamplerFailure("singular rounding ellipsoid".into()))?;
        let sv = l.singular_values();
        let cond = sv.max() / sv.min();
        let c = nalgebra::DVector::from_column_slice(center);
        let off = -(&inv * &c);
        Ok(AffineMap {
            dim,
            matrix: inv.transpose().as_slice().to_vec(),
            offset: off.as_slice().to_vec(),
            inverse: l.transpose().as_slice().to_vec(),
            inverse_offset: center.to_vec(),
            condition_number: cond,
        })
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        matvec(&self.matrix, x, &mut out);
        out.iter_mut().zip(&self.offset).for_each(|(o, b)| *o += b);
        out
    }

    pub fn apply_inverse_into(&self, z: &[f64], out: &mut [f64]) {
        matvec(&self.inverse, z, out);
        out.iter_mut().zip(&self.inverse_offset).for_each(|(o, b)| *o += b);
    }

    pub fn apply_inverse(&self, z: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.apply_inverse_into(z, &mut out);
        out
    }

    /// Operator norm of the forward matrix.
    pub fn matrix_norm(&self) -> f64 {
        DMatrix::from_row_slice(self.dim, self.dim, &self.matrix).singular_values().max()
    }
}

/// The body seen through a rounding map: `z` is accepted iff `A⁻¹z` is.
pub struct RoundedOracle<'a, O: ?Sized> {
    pub body: &'a O,
    pub map: &'a AffineMap,
    outer: f64,
}

impl<'a, O: MembershipOracle + ?Sized> RoundedOracle<'a, O> {
    pub fn new(body: &'a O, map: &'a AffineMap) -> Self {
        let outer = map.matrix_norm() * (body.outer_radius() + norm(&map.inverse_offset));
        RoundedOracle { body, map, outer }
    }
}

impl<O: MembershipOracle + ?Sized> MembershipOracle for RoundedOracle<'_, O> {
    fn dim(&self) -> usize {
        self.map.dim
    }
    fn query(&self, z: &[f64]) -> bool {
        let mut x = [0.0f64; 8];
        if self.map.dim <= 8 {
            self.map.apply_inverse_into(z, &mut x[..self.map.dim]);
            self.body.query(&x[..self.map.dim])
        } else {
            self.body.query(&self.map.apply_inverse(z))
        }
    }
    fn inner_radius(&self) -> f64 {
        1.0
    }
    fn outer_radius(&self) -> f64 {
        self.outer
    }
    fn inner_center(&self) -> Vec<f64> {
        vec![0.0; self.map.dim]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundingResult {
    pub map: AffineMap,
    pub iterations: usize,
    /// Largest chord-endpoint norm seen in the final probe round, clamped to `[1, 2d³]`.
    pub mixing_radius: f64,
}

pub(crate) fn round_with_rng<O: MembershipOracle + ?Sized, R: Rng + ?Sized>(
    oracle: &O,
    budget: &PrecisionBudget,
    rng: &mut R,
) -> Result<RoundingResult> {
    let d = oracle.dim();
    let df = d as f64;
    let target = 2.0 * df.powi(3);
    let threshold = 0.75 * target;
    let r = oracle.inner_radius();
    let cap = (10.0 * df * (oracle.outer_radius() / r).max(1.0).ln()).ceil() as usize + 10;
    let probe_steps = 64 * d;

    let mut center = oracle.inner_center();
    let mut l = DMatrix::<f64>::identity(d, d) * r;
    if !oracle.query(&center) {
        return Err(Error::NotInBody);
    }
    for iteration in 1..=cap {
        let map = AffineMap::from_ellipsoid(&center, &l)?;
        let rounded = RoundedOracle::new(oracle, &map);
        let mut z = vec![0.0; d];
        let mut v = vec![0.0; d];
        let mut buf = vec![0.0; d];
        let mut far: Option<Vec<f64>> = None;
        let mut far_norm = 0.0f64;
        for _ in 0..probe_steps {
            let here: Vec<f64> = z.clone();
            let (a1, a2) = step_in_place(&rounded, &mut z, &mut v, &mut buf, budget.gamma1, rng)?;
            for (a, sign) in [(a1, 1.0), (a2, -1.0)] {
                let t = sign * a as f64 * budget.gamma1;
                let e: Vec<f64> = here.iter().zip(&v).map(|(zi, vi)| zi + t * vi).collect();
                let n = norm(&e);
                if n > far_norm {
                    far_norm = n;
                    far = Some(e);
                }
            }
        }
        log::debug!("rounding iteration={iteration} far_norm={far_norm}");
        if far_norm < threshold {
            return Ok(RoundingResult { map, iterations: iteration, mixing_radius: far_norm.clamp(1.0, target) });
        }
        let y: Vec<f64> = far.unwrap().iter().map(|c| c * (1.0 - budget.gamma1)).collect();
        let len = norm(&y);
        let dir = nalgebra::DVector::from_iterator(d, y.iter().map(|c| c / len));
        let (shift, along, across) = if d == 1 {
            ((len - 1.0) / 2.0, (len + 1.0) / 2.0, 1.0)
        } else {
            (len / (2.0 * df), len / (2.0 * df), 1.0 - 1.0 / df)
        };
        let proj = &dir * dir.transpose();
        let q = &proj * along + (DMatrix::<f64>::identity(d, d) - &proj) * across;
        let shift_orig = &l * (&dir * shift);
        for (ci, s) in center.iter_mut().zip(shift_orig.iter()) {
            *ci += s;
        }
        l = &l * q;
    }
    Err(Error::IterationLimit(cap))
}

/// Affine map placing the oracle's body between `B(0,1)` and (empirically) `B(0, 2d³)`.
pub fn isotropic_round<O: MembershipOracle + ?Sized>(oracle: &O, budget: &PrecisionBudget, seed: u64) -> Result<RoundingResult> {
    let mut rng = rng_from_seed(seed);
    round_with_rng(oracle, budget, &mut rng)
}
