//! Constraint systems for 1-d robust statistics and checks on operators.
//!
//! Variables are `w_i` (index `i`) and `z'_i` (index `n + i`). Both systems
//! are built with `τ = ν` and are evaluated at `T = 1`, so every floor equals
//! `−ν` (times `‖h‖²` for localized constraints).

use crate::engine::{constraint_margins, ConstraintSystem, FunctionalRep, Labeled, Margin, MonomialBasis, Poly};
use crate::error::{Error, Result};
use crate::rng_from_seed;
use nalgebra::{DMatrix, DVector};
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

pub const OPERATOR_DEGREE: usize = 6;

/// Default slack for an operator over `n` points found with search slack `tau`.
pub fn default_nu(tau: f64, n: usize) -> f64 {
    tau * ((2 * n) as f64).powi(6)
}

fn w(i: usize) -> Poly {
    Poly::var(i)
}

fn zp(n: usize, i: usize) -> Poly {
    Poly::var(n + i)
}

fn push_equal_zero(sys: &mut ConstraintSystem, label: String, p: Poly) {
    sys.psd.push(Labeled::new(format!("{label}>=0"), p.clone()));
    sys.psd.push(Labeled::new(format!("{label}<=0"), &Poly::zero() - &p));
}

/// Shared part: `w_i² = w_i`, `w_i(z'_i − z_i) = 0`, `Σw ≥ (1−η)n`.
fn base_system(z: &[f64], eta: f64, nu: f64, norm_bound: f64) -> ConstraintSystem {
    let n = z.len();
    let mut sys = ConstraintSystem::new(2 * n, OPERATOR_DEGREE, 1.0, norm_bound, nu);
    for i in 0..n {
        push_equal_zero(&mut sys, format!("w{i}^2-w{i}"), &(&w(i) * &w(i)) - &w(i));
        push_equal_zero(&mut sys, format!("w{i}(z'{i}-z{i})"), &w(i) * &(&zp(n, i) - &Poly::constant(z[i])));
    }
    let total = (0..n).fold(Poly::constant(-(1.0 - eta) * n as f64), |acc, i| &acc + &w(i));
    sys.psd.push(Labeled::new("sum_w", total));
    sys
}

fn mean_of(ps: impl Iterator<Item = Poly>, n: usize) -> Poly {
    ps.fold(Poly::zero(), |acc, p| &acc + &p).scale(1.0 / n as f64)
}

/// Constraints of the 1-d certifiable-mean lemma with variance bound
/// `(1/n)Σ(z'_i − ζ')² ≤ (1+α)(cζ' + 1)²`, where `ζ' = (1/n)Σz'_i`.
pub fn sos_1d_mean_system(z: &[f64], eta: f64, alpha: f64, c: f64, nu: f64, norm_bound: f64) -> ConstraintSystem {
    let n = z.len();
    let mut sys = base_system(z, eta, nu, norm_bound);
    let zeta = mean_of((0..n).map(|i| zp(n, i)), n);
    let spread = mean_of(
        (0..n).map(|i| {
            let d = &zp(n, i) - &zeta;
            &d * &d
        }),
        n,
    );
    let scale = &zeta.scale(c) + &Poly::constant(1.0);
    let excess = &spread - &(&scale * &scale).scale(1.0 + alpha);
    sys.regular.push(Labeled::new("variance", &Poly::zero() - &excess));
    sys
}

/// Constraints of the 1-d lemma for arbitrary data: `Σw ≥ 0.99n` and
/// `(1/n)Σ(z'_i² − σ')² ≤ (2+α)σ'²`, where `σ' = (1/n)Σz'_i²`.
pub fn sos_1d_arbitrary_system(z: &[f64], alpha: f64, nu: f64, norm_bound: f64) -> ConstraintSystem {
    let n = z.len();
    let mut sys = base_system(z, 0.01, nu, norm_bound);
    let sigma = sigma_poly(n);
    let spread = mean_of(
        (0..n).map(|i| {
            let d = &(&zp(n, i) * &zp(n, i)) - &sigma;
            &d * &d
        }),
        n,
    );
    let excess = &spread - &(&sigma * &sigma).scale(2.0 + alpha);
    sys.regular.push(Labeled::new("fourth_moment", &Poly::zero() - &excess));
    sys
}

fn sigma_poly(n: usize) -> Poly {
    mean_of((0..n).map(|i| &zp(n, i) * &zp(n, i)), n)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorReport {
    pub nu: f64,
    pub margins: Vec<Margin>,
    pub failing: Vec<String>,
}

impl OperatorReport {
    pub fn passed(&self) -> bool {
        self.failing.is_empty()
    }
}

fn report(l: &FunctionalRep, sys: &ConstraintSystem) -> Result<OperatorReport> {
    let compiled = sys.compile()?;
    if l.coords.len() != compiled.len() {
        return Err(Error::InvalidParameter(format!("operator has {} moments, system needs {}", l.coords.len(), compiled.len())));
    }
    let margins = constraint_margins(l, &compiled, 1.0);
    let failing = margins
        .iter()
        .filter(|m| m.value < m.floor - 1e-9 * m.floor.abs().max(1.0))
        .map(|m| m.label.clone())
        .collect();
    Ok(OperatorReport { nu: sys.tau, margins, failing })
}

/// Margins of `l` against [`sos_1d_mean_system`].
pub fn verify_operator_1d(l: &FunctionalRep, z: &[f64], eta: f64, alpha: f64, c: f64, nu: f64) -> Result<OperatorReport> {
    report(l, &sos_1d_mean_system(z, eta, alpha, c, nu, f64::MAX.sqrt()))
}

/// Margins of `l` against [`sos_1d_arbitrary_system`].
pub fn verify_arbitrary_1d(l: &FunctionalRep, z: &[f64], alpha: f64, nu: f64) -> Result<OperatorReport> {
    report(l, &sos_1d_arbitrary_system(z, alpha, nu, f64::MAX.sqrt()))
}

/// `L[σ'] = (1/n)Σ L[z'_i²]` once `l` is verified against the arbitrary-data system.
pub fn empirical_sigma_bound(l: &FunctionalRep, z: &[f64], alpha: f64, nu: f64) -> Result<f64> {
    let r = verify_arbitrary_1d(l, z, alpha, nu)?;
    if !r.passed() {
        return Err(Error::ConstraintUnverified(r.failing.join(", ")));
    }
    let basis = MonomialBasis::new(2 * z.len(), OPERATOR_DEGREE)?;
    l.apply(&basis, &sigma_poly(z.len()))
}

/// `−2ν ≤ L[w_i] ≤ 1 + 3ν` for every `i < n`.
pub fn weights_in_unit_interval(l: &FunctionalRep, n: usize, nu: f64) -> Result<bool> {
    let basis = MonomialBasis::new(2 * n, OPERATOR_DEGREE)?;
    for i in 0..n {
        let v = l.apply(&basis, &w(i))?;
        if v < -2.0 * nu || v > 1.0 + 3.0 * nu {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Counts random pairs `p, q` with `2(L[p²] + L[q²]) + 4ν·max(‖p‖², ‖q‖²) < L[(p+q)²]`.
pub fn cauchy_schwarz_violations(l: &FunctionalRep, basis: &MonomialBasis, nu: f64, trials: usize, seed: u64) -> usize {
    let k = basis.count_upto(basis.max_degree / 2);
    let mut m = DMatrix::zeros(k, k);
    for a in 0..k {
        for b in a..k {
            let idx = basis.mul_index(a, b).expect("product of half-degree monomials is in the basis");
            m[(a, b)] = l.coords[idx];
            m[(b, a)] = l.coords[idx];
        }
    }
    let mut rng = rng_from_seed(seed);
    let mut draw = || DVector::from_iterator(k, (0..k).map(|_| StandardNormal.sample(&mut rng)));
    let mut bad = 0;
    for _ in 0..trials {
        let (p, q) = (draw(), draw());
        let sq = |v: &DVector<f64>| v.dot(&(&m * v));
        let lhs = 2.0 * (sq(&p) + sq(&q)) + 4.0 * nu * p.norm_squared().max(q.norm_squared());
        let rhs = sq(&(&p + &q));
        if lhs < rhs - 1e-9 * rhs.abs().max(1.0) {
            bad += 1;
        }
    }
    bad
}
