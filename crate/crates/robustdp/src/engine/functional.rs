//! Linear functionals on polynomials, stored by their values on a monomial basis.

use super::basis::MonomialBasis;
use super::poly::Poly;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionalRep {
    /// `coords[i] = L(monomial i)`; `coords[0] = 1`.
    pub coords: Vec<f64>,
}

impl FunctionalRep {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.first() != Some(&1.0) || coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("functional must have L1 = 1 and finite moments".into()));
        }
        Ok(FunctionalRep { coords })
    }

    /// Functional whose only nonzero moment is `L1 = 1`.
    pub fn zero_moments(basis: &MonomialBasis) -> Self {
        let mut coords = vec![0.0; basis.len()];
        coords[0] = 1.0;
        FunctionalRep { coords }
    }

    /// Expectation under the point mass at `x`.
    pub fn point_mass(basis: &MonomialBasis, x: &[f64]) -> Self {
        let coords = (0..basis.len()).map(|i| basis.monomial(i).iter().map(|&v| x[v as usize]).product()).collect();
        FunctionalRep { coords }
    }

    /// Convex combination `Σ wᵢ Lᵢ` of functionals on the same basis.
    pub fn mixture(parts: &[(f64, &FunctionalRep)]) -> Self {
        let len = parts[0].1.coords.len();
        let mut coords = vec![0.0; len];
        for (w, l) in parts {
            for (c, v) in coords.iter_mut().zip(&l.coords) {
                *c += w * v;
            }
        }
        coords[0] = 1.0;
        FunctionalRep { coords }
    }

    /// Builds from the non-constant coordinates used by the ellipsoid.
    pub fn from_tail(tail: &[f64]) -> Self {
        let mut coords = Vec::with_capacity(tail.len() + 1);
        coords.push(1.0);
        coords.extend_from_slice(tail);
        FunctionalRep { coords }
    }

    pub fn tail(&self) -> &[f64] {
        &self.coords[1..]
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn apply(&self, basis: &MonomialBasis, p: &Poly) -> Result<f64> {
        let mut acc = 0.0;
        for (m, c) in &p.terms {
            let i = basis.index_of(m).ok_or(Error::DegreeOverflow { needed: m.len(), max: basis.max_degree })?;
            acc += c * self.coords[i];
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_mass_moments() {
        let b = MonomialBasis::new(2, 3).unwrap();
        let l = FunctionalRep::point_mass(&b, &[2.0, -1.0]);
        assert_eq!(l.coords[0], 1.0);
        let p = &(&Poly::var(0) * &Poly::var(0)) * &Poly::var(1);
        assert_eq!(l.apply(&b, &p).unwrap(), -4.0);
        let q = &p * &Poly::var(0);
        assert!(matches!(l.apply(&b, &q), Err(Error::DegreeOverflow { .. })));
    }

    #[test]
    fn mixture_is_linear() {
        let b = MonomialBasis::new(1, 2).unwrap();
        let a = FunctionalRep::point_mass(&b, &[1.0]);
        let c = FunctionalRep::point_mass(&b, &[3.0]);
        let m = FunctionalRep::mixture(&[(0.5, &a), (0.5, &c)]);
        assert_eq!(m.coords, vec![1.0, 2.0, 5.0]);
    }
}
