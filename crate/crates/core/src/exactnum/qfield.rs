//! Exact arithmetic in Q and in imaginary quadratic fields Q(sqrt(-d)).

use crate::error::{Error, Result};
use crate::exactnum::dr::{CInt, RInt};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Element of Q or of Q(sqrt(-d)) with d > 0 squarefree.
///
/// The `Quad` variant keeps `b != 0`; constructors collapse to `Rat`
/// whenever the irrational part cancels, so structural equality is
/// semantic equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldElem {
    Rat(BigRational),
    Quad { a: BigRational, b: BigRational, d: BigInt },
}

impl FieldElem {
    pub fn zero() -> FieldElem {
        FieldElem::Rat(BigRational::zero())
    }

    pub fn one() -> FieldElem {
        FieldElem::Rat(BigRational::one())
    }

    pub fn from_rational(q: BigRational) -> FieldElem {
        FieldElem::Rat(q)
    }

    pub fn from_i64(v: i64) -> FieldElem {
        FieldElem::Rat(BigRational::from(BigInt::from(v)))
    }

    /// a + b*sqrt(-d); collapses to a rational when b = 0.
    pub fn quad(a: BigRational, b: BigRational, d: BigInt) -> FieldElem {
        if b.is_zero() {
            FieldElem::Rat(a)
        } else {
            FieldElem::Quad { a, b, d }
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, FieldElem::Rat(q) if q.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, FieldElem::Rat(_))
    }

    pub fn rational_part(&self) -> &BigRational {
        match self {
            FieldElem::Rat(q) => q,
            FieldElem::Quad { a, .. } => a,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldElem::Rat(q) => Some(q),
            FieldElem::Quad { .. } => None,
        }
    }

    /// Squarefree radicand when the element is irrational.
    pub fn field_d(&self) -> Option<&BigInt> {
        match self {
            FieldElem::Rat(_) => None,
            FieldElem::Quad { d, .. } => Some(d),
        }
    }

    fn parts(&self, d: &BigInt) -> (BigRational, BigRational) {
        match self {
            FieldElem::Rat(q) => (q.clone(), BigRational::zero()),
            FieldElem::Quad { a, b, d: dd } => {
                assert_eq!(dd, d, "incompatible quadratic fields");
                (a.clone(), b.clone())
            }
        }
    }

    /// The common radicand of two elements, or an error when they live in
    /// distinct quadratic fields.
    pub fn common_field(x: &FieldElem, y: &FieldElem) -> Result<Option<BigInt>> {
        match (x.field_d(), y.field_d()) {
            (None, None) => Ok(None),
            (Some(d), None) | (None, Some(d)) => Ok(Some(d.clone())),
            (Some(d1), Some(d2)) if d1 == d2 => Ok(Some(d1.clone())),
            (Some(d1), Some(d2)) => Err(Error::DistinctFields(d1.clone(), d2.clone())),
        }
    }

    pub fn add(&self, o: &FieldElem) -> FieldElem {
        match FieldElem::common_field(self, o).expect("incompatible quadratic fields") {
            None => FieldElem::Rat(self.rational_part() + o.rational_part()),
            Some(d) => {
                let (a1, b1) = self.parts(&d);
                let (a2, b2) = o.parts(&d);
                FieldElem::quad(a1 + a2, b1 + b2, d)
            }
        }
    }

    pub fn sub(&self, o: &FieldElem) -> FieldElem {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> FieldElem {
        match self {
            FieldElem::Rat(q) => FieldElem::Rat(-q.clone()),
            FieldElem::Quad { a, b, d } => FieldElem::Quad { a: -a.clone(), b: -b.clone(), d: d.clone() },
        }
    }

    pub fn mul(&self, o: &FieldElem) -> FieldElem {
        match FieldElem::common_field(self, o).expect("incompatible quadratic fields") {
            None => FieldElem::Rat(self.rational_part() * o.rational_part()),
            Some(d) => {
                let (a1, b1) = self.parts(&d);
                let (a2, b2) = o.parts(&d);
                let dq = BigRational::from(d.clone());
                FieldElem::quad(&a1 * &a2 - &dq * &b1 * &b2, &a1 * &b2 + &b1 * &a2, d)
            }
        }
    }

    pub fn scale(&self, s: &BigRational) -> FieldElem {
        match self {
            FieldElem::Rat(q) => FieldElem::Rat(q * s),
            FieldElem::Quad { a, b, d } => FieldElem::quad(a * s, b * s, d.clone()),
        }
    }

    pub fn pow(&self, mut e: u64) -> FieldElem {
        let mut result = FieldElem::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn conj(&self) -> FieldElem {
        match self {
            FieldElem::Rat(q) => FieldElem::Rat(q.clone()),
            FieldElem::Quad { a, b, d } => FieldElem::Quad { a: a.clone(), b: -b.clone(), d: d.clone() },
        }
    }

    /// Exact squared modulus |a + b*sqrt(-d)|^2 = a^2 + d b^2.
    pub fn abs_sq(&self) -> BigRational {
        match self {
            FieldElem::Rat(q) => q * q,
            FieldElem::Quad { a, b, d } => a * a + BigRational::from(d.clone()) * b * b,
        }
    }

    /// Complex rectangle containing the exact embedding (positive imaginary
    /// branch of sqrt(-d)).
    pub fn embed(&self, p: u32) -> CInt {
        match self {
            FieldElem::Rat(q) => CInt::from_real(RInt::from_ratio(q, p), p),
            FieldElem::Quad { a, b, d } => {
                let root = RInt::from_bigint(d, p).sqrt(p);
                CInt { re: RInt::from_ratio(a, p), im: RInt::from_ratio(b, p).mul(&root, p) }
            }
        }
    }

    /// Enclosure of |self| via the exact squared modulus.
    pub fn abs_interval(&self, p: u32) -> RInt {
        RInt::from_ratio(&self.abs_sq(), p).sqrt(p)
    }
}
