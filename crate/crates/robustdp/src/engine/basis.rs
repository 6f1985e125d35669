//! Monomials of bounded degree in graded-lexicographic order.
//!
//! A monomial is the sorted multiset of its variable indices, so `x0²x2` is
//! `[0, 0, 2]` and the constant monomial is `[]` at position 0.

use crate::error::{Error, Result};
use std::collections::HashMap;

pub type Monomial = Vec<u16>;

/// Hard cap on basis size to keep dense linear algebra tractable.
pub const MAX_BASIS: usize = 200_000;

#[derive(Clone, Debug)]
pub struct MonomialBasis {
    pub n_vars: usize,
    pub max_degree: usize,
    monos: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    /// `degree_start[k]` is the position of the first monomial of degree `k`.
    degree_start: Vec<usize>,
}

pub fn binomial(n: usize, k: usize) -> usize {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc.min(usize::MAX as u128) as usize
}

impl MonomialBasis {
    pub fn new(n_vars: usize, max_degree: usize) -> Result<Self> {
        if n_vars == 0 || n_vars > u16::MAX as usize {
            return Err(Error::InvalidParameter(format!("{n_vars} variables")));
        }
        let size = binomial(n_vars + max_degree, max_degree);
        if size > MAX_BASIS {
            return Err(Error::InvalidParameter(format!("basis of size {size} exceeds {MAX_BASIS}")));
        }
        let mut monos: Vec<Monomial> = Vec::with_capacity(size);
        let mut degree_start = vec![0];
        monos.push(Vec::new());
        let mut layer: Vec<Monomial> = vec![Vec::new()];
        for _ in 1..=max_degree {
            degree_start.push(monos.len());
            let mut next = Vec::new();
            for m in &layer {
                let from = m.last().copied().unwrap_or(0) as usize;
                for v in from..n_vars {
                    let mut mm = m.clone();
                    mm.push(v as u16);
                    next.push(mm);
                }
            }
            monos.extend(next.iter().cloned());
            layer = next;
        }
        degree_start.push(monos.len());
        let index = monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        Ok(MonomialBasis { n_vars, max_degree, monos, index, degree_start })
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn monomial(&self, i: usize) -> &Monomial {
        &self.monos[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.monos[i].len()
    }

    pub fn index_of(&self, m: &[u16]) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Number of monomials of degree at most `deg`.
    pub fn count_upto(&self, deg: usize) -> usize {
        self.degree_start[(deg + 1).min(self.max_degree + 1)]
    }

    pub fn product(a: &[u16], b: &[u16]) -> Monomial {
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            if a[i] <= b[j] {
                out.push(a[i]);
                i += 1;
            } else {
                out.push(b[j]);
                j += 1;
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        out
    }

    /// Position of the product of monomials `i` and `j`, if it fits the basis.
    pub fn mul_index(&self, i: usize, j: usize) -> Option<usize> {
        self.index_of(&Self::product(&self.monos[i], &self.monos[j]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_match_binomials() {
        for (nv, d) in [(1, 6), (3, 6), (5, 6), (2, 3)] {
            let b = MonomialBasis::new(nv, d).unwrap();
            assert_eq!(b.len(), binomial(nv + d, d));
            assert_eq!(b.index_of(&[]), Some(0));
        }
        assert_eq!(MonomialBasis::new(3, 6).unwrap().len(), 84);
        assert_eq!(MonomialBasis::new(5, 6).unwrap().len(), 462);
        assert_eq!(binomial(15, 6), 5005);
    }

    #[test]
    fn graded_lex_order() {
        let b = MonomialBasis::new(2, 2).unwrap();
        let order: Vec<Monomial> = (0..b.len()).map(|i| b.monomial(i).clone()).collect();
        assert_eq!(order, vec![vec![], vec![0], vec![1], vec![0, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(b.count_upto(1), 3);
        assert_eq!(b.mul_index(1, 2), Some(4));
        assert_eq!(b.mul_index(3, 1), None);
    }
}
