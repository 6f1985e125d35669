//! Sparse real polynomials keyed by sorted monomials.

use super::basis::{Monomial, MonomialBasis};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Poly {
    /// Sorted by monomial, no zero coefficients.
    pub terms: Vec<(Monomial, f64)>,
}

impl Poly {
    fn from_map(map: BTreeMap<Monomial, f64>) -> Self {
        Poly { terms: map.into_iter().filter(|(_, c)| *c != 0.0).collect() }
    }

    fn to_map(&self) -> BTreeMap<Monomial, f64> {
        self.terms.iter().cloned().collect()
    }

    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: f64) -> Self {
        Self::from_map(BTreeMap::from([(Vec::new(), c)]))
    }

    pub fn var(i: usize) -> Self {
        Poly { terms: vec![(vec![i as u16], 1.0)] }
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().map(|(m, _)| m.len()).max().unwrap_or(0)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_map(self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect())
    }

    pub fn constant_term(&self) -> f64 {
        self.terms.iter().find(|(m, _)| m.is_empty()).map(|(_, c)| *c).unwrap_or(0.0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.abs()).fold(0.0, f64::max)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|(m, c)| c * m.iter().map(|&v| x[v as usize]).product::<f64>()).sum()
    }

    /// Coefficient vector over `basis`; `None` if a monomial does not fit.
    pub fn dense(&self, basis: &MonomialBasis) -> Option<Vec<f64>> {
        let mut out = vec![0.0; basis.len()];
        for (m, c) in &self.terms {
            out[basis.index_of(m)?] += c;
        }
        Some(out)
    }

    pub fn coeff_norm(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c * c).sum::<f64>().sqrt()
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut map = self.to_map();
        for (m, c) in &rhs.terms {
            *map.entry(m.clone()).or_insert(0.0) += c;
        }
        Poly::from_map(map)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(-1.0)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut map = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                *map.entry(MonomialBasis::product(a, b)).or_insert(0.0) += ca * cb;
            }
        }
        Poly::from_map(map)
    }
}

macro_rules! owned_ops {
    ($tr:ident, $f:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: &Poly) -> Poly {
                (&self).$f(rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);
