//! Algebraic numbers of degree at most two over Q: parsing, canonical
//! printing, minimal polynomials, Weil heights and complex embeddings.
//!
//! The accepted input grammar (whitespace ignored):
//!
//! ```text
//! number   := rational | quadratic
//! quadratic := [rational sign] [rational '*'] 'sqrt(' '-' uint ')'
//! rational  := ['+' | '-'] uint ['/' uint]
//! ```
//!
//! Radicands are normalized to their squarefree part, so `sqrt(-12)`
//! parses to `0+2*sqrt(-3)`. Printing always round-trips through `parse`.

use crate::error::{Error, Result};
use crate::exactnum::dr::{CInt, RInt};
use crate::exactnum::qfield::FieldElem;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// Largest radicand accepted by the parser; squarefree normalization uses
/// trial division and must stay cheap.
const MAX_RADICAND: u64 = 10_000_000_000;

/// A rational number or an element of an imaginary quadratic field,
/// carrying the exact-arithmetic operations the bound computations need.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicNumber {
    elem: FieldElem,
}

impl AlgebraicNumber {
    pub fn from_rational(q: BigRational) -> AlgebraicNumber {
        AlgebraicNumber { elem: FieldElem::Rat(q) }
    }

    pub fn from_i64(v: i64) -> AlgebraicNumber {
        AlgebraicNumber { elem: FieldElem::from_i64(v) }
    }

    /// a + b*sqrt(-d); the radicand is normalized to its squarefree part.
    pub fn from_parts(a: BigRational, b: BigRational, d: &BigInt) -> Result<AlgebraicNumber> {
        if !d.is_positive() {
            return Err(Error::Parse(format!("radicand -{d} must be negative")));
        }
        let (square, free) = squarefree_split(d)?;
        let b = b * BigRational::from(square);
        Ok(AlgebraicNumber { elem: FieldElem::quad(a, b, free) })
    }

    pub fn elem(&self) -> &FieldElem {
        &self.elem
    }

    pub fn is_zero(&self) -> bool {
        self.elem.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.elem.is_rational()
    }

    /// Degree of the minimal polynomial over Q (1 or 2).
    pub fn degree(&self) -> u32 {
        match self.elem {
            FieldElem::Rat(_) => 1,
            FieldElem::Quad { .. } => 2,
        }
    }

    pub fn abs_sq(&self) -> BigRational {
        self.elem.abs_sq()
    }

    pub fn embed(&self, p: u32) -> CInt {
        self.elem.embed(p)
    }

    /// Minimal polynomial over Z, primitive with positive leading
    /// coefficient, coefficients in ascending order of degree.
    pub fn minimal_poly(&self) -> Vec<BigInt> {
        match &self.elem {
            FieldElem::Rat(q) => {
                let num = q.numer().clone();
                let den = q.denom().clone();
                vec![-num, den]
            }
            FieldElem::Quad { a, b, d } => {
                let trace = a * BigRational::from(BigInt::from(2));
                let norm = a * a + BigRational::from(d.clone()) * b * b;
                let den = trace.denom().lcm(norm.denom());
                let c0 = (&norm * BigRational::from(den.clone())).to_integer();
                let c1 = -(&trace * BigRational::from(den.clone())).to_integer();
                let content = c0.gcd(&c1).gcd(&den);
                vec![c0 / &content, c1 / &content, den / content]
            }
        }
    }

    /// Enclosure of the absolute logarithmic Weil height.
    ///
    /// For p/q in lowest terms this is log max(|p|, |q|); for a quadratic
    /// number with primitive minimal polynomial c2 X^2 + c1 X + c0 it is
    /// (log c2 + log max(1, |alpha|^2)) / 2, using that the two conjugates
    /// share the same modulus.
    pub fn weil_height(&self, p: u32) -> RInt {
        match &self.elem {
            FieldElem::Rat(q) => {
                let m = q.numer().abs().max(q.denom().abs());
                if m.is_one() {
                    RInt::zero(p)
                } else {
                    RInt::from_bigint(&m, p).ln(p)
                }
            }
            FieldElem::Quad { .. } => {
                let lead = self.minimal_poly().pop().expect("quadratic poly");
                let mut h = if lead.is_one() {
                    RInt::zero(p)
                } else {
                    RInt::from_bigint(&lead, p).ln(p)
                };
                let m2 = self.abs_sq();
                if m2 > BigRational::one() {
                    h = h.add(&RInt::from_ratio(&m2, p).ln(p), p);
                }
                h.div(&RInt::from_u64(2, p), p)
            }
        }
    }

    /// Enclosure of log max(1, |alpha|).
    pub fn log_abs_plus(&self, p: u32) -> RInt {
        let m2 = self.abs_sq();
        if m2 <= BigRational::one() {
            RInt::zero(p)
        } else {
            let half = RInt::from_u64(2, p);
            RInt::from_ratio(&m2, p).ln(p).div(&half, p)
        }
    }

    pub fn parse(input: &str) -> Result<AlgebraicNumber> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty input".into()));
        }
        match s.find("sqrt(") {
            None => Ok(AlgebraicNumber::from_rational(parse_rational(&s)?)),
            Some(pos) => {
                let tail = &s[pos + 5..];
                let close = tail
                    .find(')')
                    .ok_or_else(|| Error::Parse(format!("missing ')' in '{input}'")))?;
                if !tail[close + 1..].is_empty() {
                    return Err(Error::Parse(format!("trailing input after ')' in '{input}'")));
                }
                let radicand = &tail[..close];
                let d_str = radicand
                    .strip_prefix('-')
                    .ok_or_else(|| Error::Parse(format!("radicand '{radicand}' must be negative")))?;
                if d_str.is_empty() || !d_str.bytes().all(|c| c.is_ascii_digit()) {
                    return Err(Error::Parse(format!("bad radicand '{radicand}'")));
                }
                let d: BigInt = d_str.parse().expect("digits");
                if d.is_zero() {
                    return Err(Error::Parse("radicand must be nonzero".into()));
                }

                let prefix = &s[..pos];
                let (a_str, b) = match prefix.strip_suffix('*') {
                    Some(head) => {
                        let split = split_last_sign(head);
                        let (a_part, b_part) = split;
                        if b_part.is_empty() || b_part == "+" || b_part == "-" {
                            return Err(Error::Parse(format!("missing coefficient before '*' in '{input}'")));
                        }
                        (a_part, parse_rational(b_part)?)
                    }
                    None => match prefix {
                        "" | "+" => ("", BigRational::one()),
                        "-" => ("", -BigRational::one()),
                        _ => {
                            let last = prefix.chars().last().unwrap();
                            if last != '+' && last != '-' {
                                return Err(Error::Parse(format!(
                                    "expected '*' or sign before sqrt in '{input}'"
                                )));
                            }
                            let sign = if last == '-' { -BigRational::one() } else { BigRational::one() };
                            (&prefix[..prefix.len() - 1], sign)
                        }
                    },
                };
                let a = if a_str.is_empty() { BigRational::zero() } else { parse_rational(a_str)? };
                AlgebraicNumber::from_parts(a, b, &d)
            }
        }
    }
}

/// Splits "A+B" / "A-B" at the last top-level sign, keeping the sign on B.
/// A leading sign belongs to A.
fn split_last_sign(s: &str) -> (&str, &str) {
    for (i, c) in s.char_indices().rev() {
        if (c == '+' || c == '-') && i > 0 {
            return (&s[..i], &s[i..]);
        }
    }
    ("", s)
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad rational '{s}'"));
    let (sign, body) = match s.strip_prefix('-') {
        Some(b) => (-1, b),
        None => (1, s.strip_prefix('+').unwrap_or(s)),
    };
    if body.is_empty() {
        return Err(bad());
    }
    let (num_str, den_str) = match body.find('/') {
        Some(i) => (&body[..i], &body[i + 1..]),
        None => (body, "1"),
    };
    if num_str.is_empty()
        || den_str.is_empty()
        || !num_str.bytes().all(|c| c.is_ascii_digit())
        || !den_str.bytes().all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let num: BigInt = num_str.parse().expect("digits");
    let den: BigInt = den_str.parse().expect("digits");
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in '{s}'")));
    }
    Ok(BigRational::new(BigInt::from(sign) * num, den))
}

/// Writes n = s^2 * f with f squarefree; returns (s, f).
fn squarefree_split(n: &BigInt) -> Result<(BigInt, BigInt)> {
    let mut m = n
        .to_u64()
        .filter(|&v| v <= MAX_RADICAND)
        .ok_or_else(|| Error::Parse(format!("radicand {n} exceeds the supported limit {MAX_RADICAND}")))?;
    let mut square = 1u64;
    let mut free = 1u64;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0u32;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            square *= p.pow(e / 2);
            if e % 2 == 1 {
                free *= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    free *= m;
    Ok((BigInt::from(square), BigInt::from(free)))
}

/// [Q(alpha, beta) : Q] / [R(alpha, beta) : R].
///
/// Both degrees are computed over the compositum. Rational pairs give 1/1;
/// a pair touching one imaginary quadratic field gives 2/2; two distinct
/// imaginary quadratic fields are rejected because the compositum leaves
/// degree 4 over Q against degree 2 over R, which the certified bound
/// machinery does not cover.
pub fn field_degree_ratio(alpha: &AlgebraicNumber, beta: &AlgebraicNumber) -> Result<u32> {
    match FieldElem::common_field(&alpha.elem, &beta.elem) {
        Ok(_) => Ok(1),
        Err(e) => Err(e),
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn rat(q: &BigRational) -> String {
            if q.denom().is_one() {
                q.numer().to_string()
            } else {
                format!("{}/{}", q.numer(), q.denom())
            }
        }
        match &self.elem {
            FieldElem::Rat(q) => write!(f, "{}", rat(q)),
            FieldElem::Quad { a, b, d } => {
                let sign = if b.is_negative() { "-" } else { "+" };
                write!(f, "{}{}{}*sqrt(-{})", rat(a), sign, rat(&b.abs()), d)
            }
        }
    }
}
