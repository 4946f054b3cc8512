//! Sparse bivariate polynomials over the rationals, with the derivation
//! delta = d/dX + Y d/dY used throughout the interpolation machinery.

use crate::exactnum::FieldElem;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

/// Polynomial in X and Y, stored as (deg_x, deg_y) -> coefficient with no
/// zero entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), BigRational>,
}

impl BiPoly {
    pub fn zero() -> BiPoly {
        BiPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: BigRational) -> BiPoly {
        let mut p = BiPoly::zero();
        p.set_coeff(0, 0, c);
        p
    }

    /// X^i Y^j
    pub fn monomial(i: u32, j: u32, c: BigRational) -> BiPoly {
        let mut p = BiPoly::zero();
        p.set_coeff(i, j, c);
        p
    }

    pub fn set_coeff(&mut self, i: u32, j: u32, c: BigRational) {
        if c.is_zero() {
            self.terms.remove(&(i, j));
        } else {
            self.terms.insert((i, j), c);
        }
    }

    pub fn coeff(&self, i: u32, j: u32) -> BigRational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn deg_x(&self) -> u32 {
        self.terms.keys().map(|&(i, _)| i).max().unwrap_or(0)
    }

    pub fn deg_y(&self) -> u32 {
        self.terms.keys().map(|&(_, j)| j).max().unwrap_or(0)
    }

    pub fn add(&self, o: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&key, c) in &o.terms {
            let v = out.coeff(key.0, key.1) + c;
            out.set_coeff(key.0, key.1, v);
        }
        out
    }

    pub fn sub(&self, o: &BiPoly) -> BiPoly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> BiPoly {
        BiPoly {
            terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect(),
        }
    }

    pub fn scale(&self, s: &BigRational) -> BiPoly {
        if s.is_zero() {
            return BiPoly::zero();
        }
        BiPoly {
            terms: self.terms.iter().map(|(&k, c)| (k, c * s)).collect(),
        }
    }

    pub fn mul(&self, o: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &o.terms {
                let key = (i1 + i2, j1 + j2);
                let v = out.coeff(key.0, key.1) + c1 * c2;
                out.set_coeff(key.0, key.1, v);
            }
        }
        out
    }

    /// Apply delta = d/dX + Y d/dY once:
    /// X^i Y^j maps to i X^(i-1) Y^j + j X^i Y^j.
    pub fn apply_delta(&self) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i, j), c) in &self.terms {
            if i > 0 {
                let v = out.coeff(i - 1, j) + c * BigRational::from(BigInt::from(i));
                out.set_coeff(i - 1, j, v);
            }
            if j > 0 {
                let v = out.coeff(i, j) + c * BigRational::from(BigInt::from(j));
                out.set_coeff(i, j, v);
            }
        }
        out
    }

    /// sum_j w_j delta^j applied to self.
    pub fn apply_delta_poly(&self, weights: &[BigRational]) -> BiPoly {
        let mut out = BiPoly::zero();
        let mut cur = self.clone();
        for (j, w) in weights.iter().enumerate() {
            if !w.is_zero() {
                out = out.add(&cur.scale(w));
            }
            if j + 1 < weights.len() {
                cur = cur.apply_delta();
            }
        }
        out
    }

    pub fn eval(&self, x: &FieldElem, y: &FieldElem) -> FieldElem {
        let mut acc = FieldElem::zero();
        for (&(i, j), c) in &self.terms {
            let t = x.pow(i as u64).mul(&y.pow(j as u64)).scale(c);
            acc = acc.add(&t);
        }
        acc
    }

    /// Sum of absolute values of the coefficients.
    pub fn length(&self) -> BigRational {
        self.terms
            .values()
            .fold(BigRational::zero(), |acc, c| acc + c.abs())
    }

    /// True when every coefficient is an integer.
    pub fn has_integer_coeffs(&self) -> bool {
        self.terms.values().all(|c| c.denom().is_one())
    }
}
