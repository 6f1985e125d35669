//! Constraint systems `Q_T` and their compiled localizing-matrix gathers.
//!
//! A feasible functional at level `T` satisfies, with `s` the per-constraint
//! slack scale (1 unless stated):
//!
//! ```text
//! L1 = 1
//! L h² ≥ −τT‖h‖²                 moment matrix
//! L q ≥ −τT                      regular
//! L q h² ≥ −τT‖h‖²               psd
//! L q_T h² ≥ −sτT‖h‖²            q_T = base + slope·T
//! (L q_ij)_ij ⪰ −τT·I            matrix psd
//! ‖R(L)‖ ≤ R + τT
//! ```

use super::basis::MonomialBasis;
use super::poly::Poly;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Labeled<T> {
    pub label: String,
    pub value: T,
}

impl<T> Labeled<T> {
    pub fn new(label: impl Into<String>, value: T) -> Self {
        Labeled { label: label.into(), value }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TConstraint {
    pub base: Poly,
    pub slope: f64,
    pub slack_scale: f64,
}

impl TConstraint {
    pub fn at(&self, t: f64) -> Poly {
        &self.base + &Poly::constant(self.slope * t)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstraintSystem {
    pub n_vars: usize,
    pub degree: usize,
    pub regular: Vec<Labeled<Poly>>,
    pub psd: Vec<Labeled<Poly>>,
    pub matrix_psd: Vec<Labeled<Vec<Vec<Poly>>>>,
    pub t_constraint: Option<TConstraint>,
    pub t_max: f64,
    pub norm_bound: f64,
    pub tau: f64,
    /// Stand-in for the polynomial factors in the robust-ball radius; `None` means `B²`.
    pub poly_factor: Option<f64>,
}

impl ConstraintSystem {
    pub fn new(n_vars: usize, degree: usize, t_max: f64, norm_bound: f64, tau: f64) -> Self {
        ConstraintSystem {
            n_vars,
            degree,
            regular: Vec::new(),
            psd: Vec::new(),
            matrix_psd: Vec::new(),
            t_constraint: None,
            t_max,
            norm_bound,
            tau,
            poly_factor: None,
        }
    }

    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = tau;
        self
    }

    pub fn compile(&self) -> Result<CompiledSystem> {
        if self.degree % 2 != 0 {
            return Err(Error::InvalidParameter(format!("degree {} is odd", self.degree)));
        }
        if !(self.t_max > 0.0) || !(self.tau >= 0.0) || !(self.norm_bound >= 1.0) {
            return Err(Error::InvalidParameter("t_max, tau or norm bound out of range".into()));
        }
        let basis = MonomialBasis::new(self.n_vars, self.degree)?;
        let moment = Gather::localizing(&basis, &Poly::constant(1.0))?;
        let psd = self.psd.iter().map(|q| Gather::localizing(&basis, &q.value)).collect::<Result<Vec<_>>>()?;
        let t = match &self.t_constraint {
            Some(tc) => {
                let g = Gather::localizing(&basis, &tc.base)?;
                let one = Gather::localizing_sized(&basis, &Poly::constant(1.0), g.size)?;
                Some((g, one))
            }
            None => None,
        };
        let dense = |p: &Poly| p.dense(&basis).ok_or(Error::DegreeOverflow { needed: p.degree(), max: self.degree });
        let regular = self.regular.iter().map(|q| dense(&q.value)).collect::<Result<Vec<_>>>()?;
        let mut matrix = Vec::new();
        for m in &self.matrix_psd {
            let k = m.value.len();
            if m.value.iter().any(|row| row.len() != k) {
                return Err(Error::InvalidParameter(format!("matrix constraint '{}' is not square", m.label)));
            }
            let rows = m.value.iter().map(|row| row.iter().map(dense).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
            matrix.push(rows);
        }
        Ok(CompiledSystem { system: self.clone(), basis, moment, psd, t, regular, matrix })
    }
}

/// Sparse recipe for the localizing matrix `X_{ab} = Σ_U q_U L[U·a·b]` over
/// the first `size` monomials, upper triangle only.
#[derive(Clone, Debug)]
pub struct Gather {
    pub size: usize,
    pub entries: Vec<(u32, u32, f64, u32)>,
}

impl Gather {
    pub fn localizing(basis: &MonomialBasis, q: &Poly) -> Result<Self> {
        let dq = q.degree();
        if dq > basis.max_degree {
            return Err(Error::DegreeOverflow { needed: dq, max: basis.max_degree });
        }
        Self::localizing_sized(basis, q, basis.count_upto((basis.max_degree - dq) / 2))
    }

    pub fn localizing_sized(basis: &MonomialBasis, q: &Poly, size: usize) -> Result<Self> {
        let mut entries = Vec::new();
        for a in 0..size {
            for b in a..size {
                let ab = MonomialBasis::product(basis.monomial(a), basis.monomial(b));
                for (u, c) in &q.terms {
                    let m = MonomialBasis::product(&ab, u);
                    let idx = basis.index_of(&m).ok_or(Error::DegreeOverflow { needed: m.len(), max: basis.max_degree })?;
                    entries.push((a as u32, b as u32, *c, idx as u32));
                }
            }
        }
        Ok(Gather { size, entries })
    }

    pub fn assemble_into(&self, y: &[f64], scale: f64, x: &mut nalgebra::DMatrix<f64>) {
        for &(a, b, c, idx) in &self.entries {
            let v = scale * c * y[idx as usize];
            x[(a as usize, b as usize)] += v;
            if a != b {
                x[(b as usize, a as usize)] += v;
            }
        }
    }

    /// Adds `scale · R(q h²)` for the localizer `h = Σ v_a m_a`.
    pub fn hyperplane_into(&self, v: &[f64], scale: f64, h: &mut [f64]) {
        for &(a, b, c, idx) in &self.entries {
            let mult = if a == b { 1.0 } else { 2.0 };
            h[idx as usize] += scale * mult * c * v[a as usize] * v[b as usize];
        }
    }
}

pub struct CompiledSystem {
    pub system: ConstraintSystem,
    pub basis: MonomialBasis,
    pub moment: Gather,
    pub psd: Vec<Gather>,
    pub t: Option<(Gather, Gather)>,
    pub regular: Vec<Vec<f64>>,
    pub matrix: Vec<Vec<Vec<Vec<f64>>>>,
}

impl CompiledSystem {
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn poly_factor(&self) -> f64 {
        self.system.poly_factor.unwrap_or((self.len() as f64).powi(2))
    }
}
