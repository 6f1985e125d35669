//! Deep-cut ellipsoid search over the non-constant moment coordinates.
//!
//! The start ball has radius `√((R + τT)² − 1)`. The search stops with a
//! feasible center, with an empty cut (the ellipsoid lies wholly outside a
//! valid halfspace), or once the ellipsoid volume drops below that of a ball of
//! radius `r`.

use super::check::{check_satisfies, Verdict};
use super::functional::FunctionalRep;
use super::system::CompiledSystem;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EllipsoidOptions {
    pub max_basis: usize,
    /// Overrides the volume-based iteration bound when smaller.
    pub iteration_cap: Option<usize>,
    pub resymmetrize_every: usize,
}

impl Default for EllipsoidOptions {
    fn default() -> Self {
        EllipsoidOptions { max_basis: 5000, iteration_cap: None, resymmetrize_every: 50 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum InfeasibleReason {
    EmptyCut,
    VolumeBelowBall,
    IterationCap,
    Degenerate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum SearchOutcome {
    Feasible { functional: FunctionalRep, iterations: usize },
    InfeasibleBall { radius: f64, iterations: usize, reason: InfeasibleReason },
}

impl SearchOutcome {
    pub fn functional(&self) -> Option<&FunctionalRep> {
        match self {
            SearchOutcome::Feasible { functional, .. } => Some(functional),
            _ => None,
        }
    }

    pub fn iterations(&self) -> usize {
        match self {
            SearchOutcome::Feasible { iterations, .. } | SearchOutcome::InfeasibleBall { iterations, .. } => *iterations,
        }
    }
}

pub fn ellipsoid_search(sys: &CompiledSystem, t: f64, r: f64, gamma: f64, opts: &EllipsoidOptions) -> Result<SearchOutcome> {
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!("ball radius {r} must be positive")));
    }
    let b = sys.len();
    if b > opts.max_basis {
        return Err(Error::InvalidParameter(format!("basis size {b} exceeds the dense ellipsoid guard {}", opts.max_basis)));
    }
    let n = b - 1;
    let nf = n as f64;
    let outer = sys.system.norm_bound + sys.system.tau * t;
    let r0 = (outer * outer - 1.0).max(0.0).sqrt();
    let infeasible = |iterations, reason| Ok(SearchOutcome::InfeasibleBall { radius: r, iterations, reason });
    if r0 < r {
        return infeasible(0, InfeasibleReason::VolumeBelowBall);
    }
    let bound = (2.0 * nf * (nf + 1.0) * (r0 / r).ln()).ceil() as usize + n;
    let cap = opts.iteration_cap.map_or(bound, |c| c.min(bound));

    let mut x = vec![0.0; n];
    let mut p = vec![0.0; n * n];
    for i in 0..n {
        p[i * n + i] = r0 * r0;
    }
    let mut log_det = 2.0 * nf * r0.ln();
    let target = nf * r.ln();
    let mut pa = vec![0.0; n];
    let mut y = FunctionalRep::from_tail(&x);

    for iter in 0..cap {
        y.coords[1..].copy_from_slice(&x);
        let cut = match check_satisfies(&y, sys, t, gamma)? {
            Verdict::Satisfied => {
                log::debug!("ellipsoid: feasible at T={t} after {iter} iterations");
                return Ok(SearchOutcome::Feasible { functional: y, iterations: iter });
            }
            Verdict::Separated(c) => c,
        };
        // feasible side is ⟨h, x⟩ ≥ offset; write it as aᵀx ≤ β with a = −h
        for (i, v) in pa.iter_mut().enumerate() {
            *v = -dot(&p[i * n..(i + 1) * n], &cut.h);
        }
        let apa = -dot(&pa, &cut.h);
        if !(apa > 0.0) || !apa.is_finite() {
            return infeasible(iter, InfeasibleReason::Degenerate);
        }
        let ax = -dot(&cut.h, &x);
        let alpha = (ax + cut.offset) / apa.sqrt();
        if alpha >= 1.0 {
            log::debug!("ellipsoid: empty cut '{}' at T={t} after {iter} iterations", cut.label);
            return infeasible(iter, InfeasibleReason::EmptyCut);
        }
        let s = apa.sqrt();
        let step = (1.0 + nf * alpha) / (nf + 1.0);
        let sigma = 2.0 * (1.0 + nf * alpha) / ((nf + 1.0) * (1.0 + alpha));
        let delta = nf * nf * (1.0 - alpha * alpha) / (nf * nf - 1.0);
        for v in pa.iter_mut() {
            *v /= s;
        }
        for (xi, bi) in x.iter_mut().zip(&pa) {
            *xi -= step * bi;
        }
        for (i, row) in p.chunks_exact_mut(n).enumerate() {
            let bi = sigma * pa[i];
            for (pij, bj) in row.iter_mut().zip(&pa) {
                *pij = delta * (*pij - bi * bj);
            }
        }
        if opts.resymmetrize_every > 0 && (iter + 1) % opts.resymmetrize_every == 0 {
            for i in 0..n {
                for j in i + 1..n {
                    let m = 0.5 * (p[i * n + j] + p[j * n + i]);
                    p[i * n + j] = m;
                    p[j * n + i] = m;
                }
            }
        }
        log_det += nf * delta.ln() + (1.0 - sigma).ln();
        if 0.5 * log_det < target {
            log::debug!("ellipsoid: volume below ball at T={t} after {} iterations", iter + 1);
            return infeasible(iter + 1, InfeasibleReason::VolumeBelowBall);
        }
    }
    infeasible(cap, InfeasibleReason::IterationCap)
}

/// Dot product with independent accumulators so the loop vectorizes.
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0; 4];
    let (ca, cb) = (a.chunks_exact(4), b.chunks_exact(4));
    let tail: f64 = ca.remainder().iter().zip(cb.remainder()).map(|(x, y)| x * y).sum();
    for (x, y) in ca.zip(cb) {
        for k in 0..4 {
            acc[k] += x[k] * y[k];
        }
    }
    acc[0] + acc[1] + acc[2] + acc[3] + tail
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::poly::Poly;
    use crate::engine::system::{ConstraintSystem, Labeled};

    #[test]
    fn positivity_only_is_feasible_at_the_origin() {
        let s = ConstraintSystem::new(2, 2, 1.0, 10.0, 0.0);
        let c = s.compile().unwrap();
        let out = ellipsoid_search(&c, 1.0, 1e-3, 0.01, &EllipsoidOptions::default()).unwrap();
        let f = out.functional().unwrap();
        assert!(f.tail().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn finds_a_functional_inside_an_interval_constraint() {
        let mut s = ConstraintSystem::new(1, 2, 1.0, 10.0, 0.01);
        let x = Poly::var(0);
        s.regular.push(Labeled::new("x>=2", &x - &Poly::constant(2.0)));
        s.regular.push(Labeled::new("x<=2.5", &Poly::constant(2.5) - &x));
        let c = s.compile().unwrap();
        let out = ellipsoid_search(&c, 1.0, 1e-6, 0.01, &EllipsoidOptions::default()).unwrap();
        let f = out.functional().expect("feasible");
        assert!(f.coords[1] >= 2.0 - 0.03 && f.coords[1] <= 2.5 + 0.03);
        // L[x²] ≥ L[x]² from the moment matrix up to slack
        assert!(f.coords[2] >= f.coords[1].powi(2) - 0.1);
    }

    #[test]
    fn contradictory_constraints_are_infeasible() {
        let mut s = ConstraintSystem::new(1, 2, 1.0, 10.0, 0.01);
        let x = Poly::var(0);
        s.regular.push(Labeled::new("x>=2", &x - &Poly::constant(2.0)));
        s.regular.push(Labeled::new("x<=1", &Poly::constant(1.0) - &x));
        let c = s.compile().unwrap();
        let out = ellipsoid_search(&c, 1.0, 1e-6, 0.01, &EllipsoidOptions::default()).unwrap();
        assert!(matches!(out, SearchOutcome::InfeasibleBall { .. }), "{out:?}");
    }

    #[test]
    fn guard_rejects_large_bases() {
        let s = ConstraintSystem::new(9, 6, 1.0, 10.0, 0.01);
        let c = s.compile().unwrap();
        assert_eq!(c.len(), 5005);
        assert!(ellipsoid_search(&c, 1.0, 1e-3, 0.01, &EllipsoidOptions::default()).is_err());
    }
}
