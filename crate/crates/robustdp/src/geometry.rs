//! Lattice grids, the weak membership-oracle contract, and analytic volumes.
//!
//! A `(K1, K2)`-membership oracle answers YES on `K1`, NO outside `K2` and
//! anything in between. Every body here also advertises a ball
//! `B(inner_center, inner_radius) ⊆ K1` and an enclosing ball `B(0, outer_radius)`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Largest number of lattice points the brute-force counter will visit.
pub const BRUTE_FORCE_BUDGET: u128 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub spacing: f64,
    pub dim: usize,
}

impl GridSpec {
    pub fn new(spacing: f64, dim: usize) -> Result<Self> {
        if !(spacing > 0.0) || !spacing.is_finite() {
            return Err(Error::InvalidParameter(format!("grid spacing {spacing}")));
        }
        if dim == 0 {
            return Err(Error::InvalidParameter("grid dimension 0".into()));
        }
        Ok(GridSpec { spacing, dim })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BodyVolume {
    pub value: f64,
    pub relative_error: f64,
}

/// Rounds one coordinate to the nearest multiple of `spacing`, ties toward +∞.
#[inline]
pub fn round_coord(x: f64, spacing: f64) -> f64 {
    (x / spacing + 0.5).floor() * spacing
}

pub fn grid_round(p: &[f64], g: &GridSpec) -> Vec<f64> {
    p.iter().map(|&x| round_coord(x, g.spacing)).collect()
}

pub trait MembershipOracle: Sync {
    fn dim(&self) -> usize;
    fn query(&self, x: &[f64]) -> bool;
    fn inner_radius(&self) -> f64;
    fn outer_radius(&self) -> f64;
    fn inner_center(&self) -> Vec<f64>;
    /// Radius of a ball about `c` containing the body.
    fn outer_radius_about(&self, c: &[f64]) -> f64 {
        self.outer_radius() + norm(c)
    }
}

/// Distance from `c` to the farthest corner of the box `[lo, hi]`.
pub fn box_reach(lo: &[f64], hi: &[f64], c: &[f64]) -> f64 {
    lo.iter().zip(hi).zip(c).map(|((a, b), ci)| (ci - a).abs().max((b - ci).abs()).powi(2)).sum::<f64>().sqrt()
}

impl<T: MembershipOracle + ?Sized> MembershipOracle for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn query(&self, x: &[f64]) -> bool {
        (**self).query(x)
    }
    fn inner_radius(&self) -> f64 {
        (**self).inner_radius()
    }
    fn outer_radius(&self) -> f64 {
        (**self).outer_radius()
    }
    fn inner_center(&self) -> Vec<f64> {
        (**self).inner_center()
    }
    fn outer_radius_about(&self, c: &[f64]) -> f64 {
        (**self).outer_radius_about(c)
    }
}

pub(crate) fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Closed Euclidean ball.
#[derive(Clone, Debug)]
pub struct BallOracle {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl BallOracle {
    pub fn new(center: Vec<f64>, radius: f64) -> Self {
        BallOracle { center, radius }
    }
}

impl MembershipOracle for BallOracle {
    fn dim(&self) -> usize {
        self.center.len()
    }
    fn query(&self, x: &[f64]) -> bool {
        dist2(x, &self.center) <= self.radius * self.radius
    }
    fn inner_radius(&self) -> f64 {
        self.radius
    }
    fn outer_radius(&self) -> f64 {
        norm(&self.center) + self.radius
    }
    fn inner_center(&self) -> Vec<f64> {
        self.center.clone()
    }
    fn outer_radius_about(&self, c: &[f64]) -> f64 {
        dist2(c, &self.center).sqrt() + self.radius
    }
}

/// Closed axis-aligned box.
#[derive(Clone, Debug)]
pub struct BoxOracle {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl BoxOracle {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() || lo.iter().zip(&hi).any(|(a, b)| !(a < b)) {
            return Err(Error::InvalidParameter("box bounds".into()));
        }
        Ok(BoxOracle { lo, hi })
    }

    pub fn cube(dim: usize, half: f64) -> Self {
        BoxOracle { lo: vec![-half; dim], hi: vec![half; dim] }
    }
}

impl MembershipOracle for BoxOracle {
    fn dim(&self) -> usize {
        self.lo.len()
    }
    fn query(&self, x: &[f64]) -> bool {
        x.iter().zip(self.lo.iter().zip(&self.hi)).all(|(v, (a, b))| *a <= *v && *v <= *b)
    }
    fn inner_radius(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| 0.5 * (b - a)).fold(f64::INFINITY, f64::min)
    }
    fn outer_radius(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| a.abs().max(b.abs()).powi(2)).sum::<f64>().sqrt()
    }
    fn inner_center(&self) -> Vec<f64> {
        self.lo.iter().zip(&self.hi).map(|(a, b)| 0.5 * (a + b)).collect()
    }
    fn outer_radius_about(&self, c: &[f64]) -> f64 {
        box_reach(&self.lo, &self.hi, c)
    }
}

/// `K ∩ B(center, radius)`; the inner ball of `K` must fit inside the restriction.
pub struct RestrictedOracle<O> {
    pub body: O,
    pub center: Vec<f64>,
    pub radius: f64,
}

impl<O: MembershipOracle> RestrictedOracle<O> {
    pub fn new(body: O, center: Vec<f64>, radius: f64) -> Self {
        RestrictedOracle { body, center, radius }
    }
}

impl<O: MembershipOracle> MembershipOracle for RestrictedOracle<O> {
    fn dim(&self) -> usize {
        self.body.dim()
    }
    fn query(&self, x: &[f64]) -> bool {
        dist2(x, &self.center) <= self.radius * self.radius && self.body.query(x)
    }
    fn inner_radius(&self) -> f64 {
        self.body.inner_radius().min(self.radius)
    }
    fn outer_radius(&self) -> f64 {
        self.body.outer_radius().min(norm(&self.center) + self.radius)
    }
    fn inner_center(&self) -> Vec<f64> {
        self.body.inner_center()
    }
    fn outer_radius_about(&self, c: &[f64]) -> f64 {
        self.body.outer_radius_about(c).min(dist2(c, &self.center).sqrt() + self.radius)
    }
}

/// Wraps a closure with explicit radii.
pub struct FnOracle<F> {
    pub f: F,
    pub dim: usize,
    pub inner_radius: f64,
    pub outer_radius: f64,
    pub inner_center: Vec<f64>,
}

impl<F: Fn(&[f64]) -> bool + Sync> MembershipOracle for FnOracle<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn query(&self, x: &[f64]) -> bool {
        (self.f)(x)
    }
    fn inner_radius(&self) -> f64 {
        self.inner_radius
    }
    fn outer_radius(&self) -> f64 {
        self.outer_radius
    }
    fn inner_center(&self) -> Vec<f64> {
        self.inner_center.clone()
    }
}

/// Calls `visit` on every lattice point of `g` inside the cube `[-R, R]^d`.
pub fn for_each_lattice_point<F: FnMut(&[f64])>(outer_radius: f64, g: &GridSpec, mut visit: F) -> Result<()> {
    let kmax = (outer_radius / g.spacing).floor();
    if kmax > 1e6 {
        return Err(Error::BudgetExceeded(u128::MAX));
    }
    let kmax = kmax as i64;
    let per_axis = (2 * kmax + 1) as u128;
    let total = per_axis.checked_pow(g.dim as u32).unwrap_or(u128::MAX);
    if total > BRUTE_FORCE_BUDGET {
        return Err(Error::BudgetExceeded(total));
    }
    let mut idx = vec![-kmax; g.dim];
    let mut p = vec![0.0; g.dim];
    loop {
        for (c, &k) in p.iter_mut().zip(&idx) {
            *c = k as f64 * g.spacing;
        }
        visit(&p);
        let mut axis = 0;
        loop {
            if axis == g.dim {
                return Ok(());
            }
            idx[axis] += 1;
            if idx[axis] <= kmax {
                break;
            }
            idx[axis] = -kmax;
            axis += 1;
        }
    }
}

/// Exact number of lattice points accepted by the oracle.
pub fn lattice_count_bruteforce<O: MembershipOracle + ?Sized>(oracle: &O, g: &GridSpec) -> Result<u64> {
    let mut count = 0u64;
    for_each_lattice_point(oracle.outer_radius(), g, |p| {
        if oracle.query(p) {
            count += 1;
        }
    })?;
    Ok(count)
}

/// `π^{d/2} r^d / Γ(d/2 + 1)` via the two-step recursion in d.
pub fn ball_volume(d: usize, radius: f64) -> f64 {
    let mut unit = if d % 2 == 0 { 1.0 } else { 2.0 };
    let mut k = if d % 2 == 0 { 2 } else { 3 };
    while k <= d {
        unit *= 2.0 * std::f64::consts::PI / k as f64;
        k += 2;
    }
    unit * radius.powi(d as i32)
}
