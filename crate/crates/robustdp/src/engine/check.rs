//! Approximate-satisfiability check with separating hyperplanes.
//!
//! Eigenvalue-type constraints are accepted down to `−sτ(T+3γ)`, regular
//! constraints down to `−τ(T+γ)` and the norm up to `R + τ(T+γ)`. A rejected
//! candidate gets a cut valid for every functional feasible at `T` exactly.

use super::functional::FunctionalRep;
use super::system::{CompiledSystem, Gather};
use crate::error::{Error, Result};
use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

/// Halfspace `⟨x, h⟩ ≥ offset` over the non-constant coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cut {
    pub h: Vec<f64>,
    pub offset: f64,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Verdict {
    Satisfied,
    Separated(Cut),
}

impl Verdict {
    pub fn is_satisfied(&self) -> bool {
        matches!(self, Verdict::Satisfied)
    }
}

/// Value of one constraint at a functional, with the floor it must clear at `T`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Margin {
    pub label: String,
    pub value: f64,
    pub floor: f64,
}

fn cut_from_full(full: Vec<f64>, bound: f64, label: &str) -> Verdict {
    Verdict::Separated(Cut { offset: bound - full[0], h: full[1..].to_vec(), label: label.to_string() })
}

/// Smallest eigenpair when `λ_min(x) < −thr`, using Cholesky of `x + thr·I` as the fast path.
/// Round-off of order `1e-10·max|x|` is never reported.
fn violation(x: DMatrix<f64>, thr: f64) -> Option<(f64, Vec<f64>)> {
    let n = x.nrows();
    let thr = thr + 1e-10 * x.amax().max(1.0);
    let shifted = &x + DMatrix::identity(n, n) * thr;
    if shifted.cholesky().is_some() {
        return None;
    }
    let (lam, v) = min_eigenpair(x);
    (lam < -thr).then_some((lam, v))
}

pub(crate) fn min_eigenpair(x: DMatrix<f64>) -> (f64, Vec<f64>) {
    let eig = SymmetricEigen::new(x);
    let (k, lam) = eig.eigenvalues.iter().enumerate().fold((0, f64::INFINITY), |acc, (i, &l)| if l < acc.1 { (i, l) } else { acc });
    (lam, eig.eigenvectors.column(k).iter().copied().collect())
}

struct Localized<'a> {
    label: &'a str,
    gather: &'a Gather,
    one: Option<(&'a Gather, f64)>,
    slack: f64,
}

impl Localized<'_> {
    fn matrix(&self, y: &[f64]) -> DMatrix<f64> {
        let mut x = DMatrix::zeros(self.gather.size, self.gather.size);
        self.gather.assemble_into(y, 1.0, &mut x);
        if let Some((one, c)) = self.one {
            one.assemble_into(y, c, &mut x);
        }
        x
    }

    fn hyperplane(&self, v: &[f64], len: usize) -> Vec<f64> {
        let mut h = vec![0.0; len];
        self.gather.hyperplane_into(v, 1.0, &mut h);
        if let Some((one, c)) = self.one {
            one.hyperplane_into(v, c, &mut h);
        }
        h
    }
}

fn localized<'a>(sys: &'a CompiledSystem, t: f64) -> Vec<Localized<'a>> {
    let mut out = Vec::new();
    if let (Some((g, one)), Some(tc)) = (&sys.t, &sys.system.t_constraint) {
        out.push(Localized { label: "t_constraint", gather: g, one: Some((one, tc.slope * t)), slack: tc.slack_scale });
    }
    for (g, q) in sys.psd.iter().zip(&sys.system.psd) {
        out.push(Localized { label: &q.label, gather: g, one: None, slack: 1.0 });
    }
    out.push(Localized { label: "moment", gather: &sys.moment, one: None, slack: 1.0 });
    out
}

fn matrix_value(rows: &[Vec<Vec<f64>>], y: &[f64]) -> DMatrix<f64> {
    let k = rows.len();
    DMatrix::from_fn(k, k, |i, j| rows[i][j].iter().zip(y).map(|(a, b)| a * b).sum())
}

pub fn check_satisfies(l: &FunctionalRep, sys: &CompiledSystem, t: f64, gamma: f64) -> Result<Verdict> {
    if !(gamma > 0.0) {
        return Err(Error::InvalidParameter(format!("gamma={gamma}")));
    }
    let y = &l.coords;
    let len = sys.len();
    if y.len() != len {
        return Err(Error::InvalidParameter(format!("functional has {} coordinates, basis {len}", y.len())));
    }
    if y[0] != 1.0 {
        return Err(Error::InvalidParameter("functional violates L1 = 1".into()));
    }
    let tau = sys.system.tau;
    let dot = |a: &[f64]| a.iter().zip(y).map(|(p, q)| p * q).sum::<f64>();

    for (q, reg) in sys.regular.iter().zip(&sys.system.regular) {
        if dot(q) < -tau * (t + gamma) {
            return Ok(cut_from_full(q.clone(), -tau * t, &reg.label));
        }
    }
    let norm = l.norm();
    let r = sys.system.norm_bound;
    if norm > r + tau * (t + gamma) {
        let full: Vec<f64> = y.iter().map(|v| -v / norm).collect();
        return Ok(cut_from_full(full, -(r + tau * t), "norm"));
    }
    for (rows, m) in sys.matrix.iter().zip(&sys.system.matrix_psd) {
        if let Some((_, v)) = violation(matrix_value(rows, y), tau * (t + 3.0 * gamma)) {
            let mut full = vec![0.0; len];
            for (i, row) in rows.iter().enumerate() {
                for (j, q) in row.iter().enumerate() {
                    let w = v[i] * v[j];
                    full.iter_mut().zip(q).for_each(|(f, c)| *f += w * c);
                }
            }
            return Ok(cut_from_full(full, -tau * t, &m.label));
        }
    }
    for loc in localized(sys, t) {
        if let Some((_, v)) = violation(loc.matrix(y), loc.slack * tau * (t + 3.0 * gamma)) {
            return Ok(cut_from_full(loc.hyperplane(&v, len), -loc.slack * tau * t, loc.label));
        }
    }
    Ok(Verdict::Satisfied)
}

/// Every constraint's value at `l` against its exact floor at `T`.
pub fn constraint_margins(l: &FunctionalRep, sys: &CompiledSystem, t: f64) -> Vec<Margin> {
    let y = &l.coords;
    let tau = sys.system.tau;
    let mut out = Vec::new();
    for (q, reg) in sys.regular.iter().zip(&sys.system.regular) {
        out.push(Margin { label: reg.label.clone(), value: q.iter().zip(y).map(|(a, b)| a * b).sum(), floor: -tau * t });
    }
    out.push(Margin { label: "norm".into(), value: -l.norm(), floor: -(sys.system.norm_bound + tau * t) });
    for (rows, m) in sys.matrix.iter().zip(&sys.system.matrix_psd) {
        out.push(Margin { label: m.label.clone(), value: min_eigenpair(matrix_value(rows, y)).0, floor: -tau * t });
    }
    for loc in localized(sys, t) {
        out.push(Margin { label: loc.label.to_string(), value: min_eigenpair(loc.matrix(y)).0, floor: -loc.slack * tau * t });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::poly::Poly;
    use crate::engine::system::{ConstraintSystem, Labeled};

    fn toy() -> ConstraintSystem {
        let mut s = ConstraintSystem::new(1, 4, 1.0, 100.0, 0.0);
        let x = Poly::var(0);
        s.psd.push(Labeled::new("x<=2", &Poly::constant(2.0) - &x));
        s.regular.push(Labeled::new("x>=1", &x - &Poly::constant(1.0)));
        s
    }

    #[test]
    fn point_mass_satisfies_its_constraints() {
        let c = toy().compile().unwrap();
        let l = FunctionalRep::point_mass(&c.basis, &[1.5]);
        assert!(check_satisfies(&l, &c, 0.0, 0.01).unwrap().is_satisfied());
    }

    #[test]
    fn negative_square_is_separated_by_the_moment_matrix() {
        let mut s = ConstraintSystem::new(1, 2, 1.0, 100.0, 0.0);
        s.norm_bound = 100.0;
        let c = s.compile().unwrap();
        let l = FunctionalRep::new(vec![1.0, 0.0, -1.0]).unwrap();
        match check_satisfies(&l, &c, 0.0, 0.01).unwrap() {
            Verdict::Separated(cut) => {
                assert_eq!(cut.label, "moment");
                let lhs: f64 = cut.h.iter().zip(l.tail()).map(|(a, b)| a * b).sum();
                assert!(lhs < cut.offset);
                // a genuine distribution lies on the feasible side
                let ok = FunctionalRep::point_mass(&c.basis, &[0.7]);
                let rhs: f64 = cut.h.iter().zip(ok.tail()).map(|(a, b)| a * b).sum();
                assert!(rhs >= cut.offset - 1e-12);
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn violations_yield_sound_cuts() {
        let c = toy().compile().unwrap();
        for x in [0.0, 3.0, 50.0] {
            let l = FunctionalRep::point_mass(&c.basis, &[x]);
            let Verdict::Separated(cut) = check_satisfies(&l, &c, 0.0, 0.01).unwrap() else { panic!("x={x}") };
            let at = |f: &FunctionalRep| cut.h.iter().zip(f.tail()).map(|(a, b)| a * b).sum::<f64>();
            assert!(at(&l) < cut.offset);
            for k in 0..=10 {
                let f = FunctionalRep::point_mass(&c.basis, &[1.0 + k as f64 / 10.0]);
                assert!(at(&f) >= cut.offset - 1e-9, "x={x} {}", cut.label);
            }
        }
    }

    #[test]
    fn margins_report_each_constraint() {
        let c = toy().compile().unwrap();
        let l = FunctionalRep::point_mass(&c.basis, &[1.5]);
        let m = constraint_margins(&l, &c, 0.0);
        assert_eq!(m.len(), 4);
        assert!(m.iter().all(|x| x.value >= x.floor - 1e-9));
    }
}
