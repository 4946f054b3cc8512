//! Arbitrary-precision reals with directed rounding, plus the outward-rounded
//! interval types built on them.
//!
//! `RealDR` is a one-sided bound: a floating value tagged with the direction
//! it was rounded in. All certified quantities in this crate are produced by
//! first evaluating an enclosure (`RInt` for reals, `CInt` for complex
//! rectangles) with outward rounding and then extracting the requested side,
//! so the direction bookkeeping lives in one place.

use astro_float::{BigFloat, Consts, RoundingMode, Sign as FSign};
use num_bigint::{BigInt, Sign as ISign};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::cell::RefCell;
use std::cmp::Ordering;

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 256;

/// Rounding direction of a one-sided value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    Down,
    Nearest,
    Up,
}

impl Rounding {
    fn mode(self) -> RoundingMode {
        match self {
            Rounding::Down => RoundingMode::Down,
            Rounding::Nearest => RoundingMode::ToEven,
            Rounding::Up => RoundingMode::Up,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Rounding::Down => "down",
            Rounding::Nearest => "nearest",
            Rounding::Up => "up",
        }
    }

    pub fn parse(s: &str) -> Option<Rounding> {
        match s {
            "down" => Some(Rounding::Down),
            "nearest" => Some(Rounding::Nearest),
            "up" => Some(Rounding::Up),
            _ => None,
        }
    }
}

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

fn chk(x: BigFloat) -> BigFloat {
    assert!(!x.is_nan() && !x.is_inf(), "non-finite intermediate value");
    x
}

fn bf_zero(p: u32) -> BigFloat {
    BigFloat::from_word(0, p as usize)
}

/// Exact conversion; the result carries as many words as the integer needs.
fn bigint_to_bf_exact(n: &BigInt) -> BigFloat {
    if n.is_zero() {
        return bf_zero(64);
    }
    let (sign, words) = n.to_u64_digits();
    let bits = (words.len() * 64) as astro_float::Exponent;
    let s = if sign == ISign::Minus { FSign::Neg } else { FSign::Pos };
    chk(BigFloat::from_words(&words, s, bits))
}

fn bigint_to_bf(n: &BigInt, p: u32, rm: RoundingMode) -> BigFloat {
    let mut x = bigint_to_bf_exact(n);
    x.set_precision(p as usize, rm).expect("set_precision");
    chk(x)
}

/// Exact value of a finite BigFloat as a rational (mantissa times a power of two).
pub(crate) fn bf_to_rational(x: &BigFloat) -> BigRational {
    assert!(!x.is_nan() && !x.is_inf(), "non-finite value");
    if x.is_zero() {
        return BigRational::zero();
    }
    let (words, prec, sign, exp, _) = x.as_raw_parts().expect("finite value");
    let m = BigInt::from_bytes_le(
        ISign::Plus,
        &words.iter().flat_map(|w| w.to_le_bytes()).collect::<Vec<u8>>(),
    );
    let m = if sign == FSign::Neg { -m } else { m };
    let t = exp as i64 - prec as i64;
    if t >= 0 {
        BigRational::from(m << t as u64)
    } else {
        BigRational::new(m, BigInt::from(1) << (-t) as u64)
    }
}

/// Finite decimal expansion of the exact dyadic value of `x`.
pub(crate) fn bf_to_decimal(x: &BigFloat) -> String {
    let q = bf_to_rational(x);
    rational_to_decimal(&q)
}

/// Finite decimal expansion of a rational whose denominator is a power of two.
pub(crate) fn rational_to_decimal(q: &BigRational) -> String {
    if q.is_zero() {
        return "0".into();
    }
    let num = q.numer();
    let den = q.denom();
    let k = den.bits() - 1;
    assert_eq!(&(BigInt::from(1) << k), den, "denominator must be a power of two");
    let scaled = num.abs() * BigInt::from(5u8).pow(k as u32);
    let digits = scaled.to_string();
    let sign = if num.is_negative() { "-" } else { "" };
    let k = k as usize;
    let mut s = if digits.len() > k {
        let (int, frac) = digits.split_at(digits.len() - k);
        if k == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    } else {
        format!("{sign}0.{}{}", "0".repeat(k - digits.len()), digits)
    };
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

/// Parses a finite decimal string into an exact rational.
pub fn decimal_to_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, s),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let mut digits = String::with_capacity(int_part.len() + frac_part.len());
    digits.push_str(int_part);
    digits.push_str(frac_part);
    if digits.is_empty() {
        return None;
    }
    let num: BigInt = digits.parse().ok()?;
    let den = BigInt::from(10u8).pow(frac_part.len() as u32);
    Some(BigRational::new(BigInt::from(sign) * num, den))
}

/// One-sided arbitrary-precision bound.
#[derive(Clone, Debug)]
pub struct RealDR {
    value: BigFloat,
    prec: u32,
    dir: Rounding,
}

impl RealDR {
    pub fn from_rational(q: &BigRational, p: u32, dir: Rounding) -> RealDR {
        RInt::from_ratio(q, p).round_to(dir, p)
    }

    pub fn from_bigint(n: &BigInt, p: u32, dir: Rounding) -> RealDR {
        RealDR { value: bigint_to_bf(n, p, dir.mode()), prec: p, dir }
    }

    pub fn zero(p: u32, dir: Rounding) -> RealDR {
        RealDR { value: bf_zero(p), prec: p, dir }
    }

    pub(crate) fn from_parts(value: BigFloat, prec: u32, dir: Rounding) -> RealDR {
        RealDR { value: chk(value), prec, dir }
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn direction(&self) -> Rounding {
        self.dir
    }

    pub fn add(&self, o: &RealDR, dir: Rounding) -> RealDR {
        RealDR::from_parts(self.value.add(&o.value, self.prec as usize, dir.mode()), self.prec, dir)
    }

    pub fn sub(&self, o: &RealDR, dir: Rounding) -> RealDR {
        RealDR::from_parts(self.value.sub(&o.value, self.prec as usize, dir.mode()), self.prec, dir)
    }

    pub fn mul(&self, o: &RealDR, dir: Rounding) -> RealDR {
        RealDR::from_parts(self.value.mul(&o.value, self.prec as usize, dir.mode()), self.prec, dir)
    }

    pub fn div(&self, o: &RealDR, dir: Rounding) -> RealDR {
        RealDR::from_parts(self.value.div(&o.value, self.prec as usize, dir.mode()), self.prec, dir)
    }

    pub fn ln(&self, dir: Rounding) -> RealDR {
        let v = with_consts(|cc| self.value.ln(self.prec as usize, dir.mode(), cc));
        RealDR::from_parts(v, self.prec, dir)
    }

    pub fn exp(&self, dir: Rounding) -> RealDR {
        let v = with_consts(|cc| self.value.exp(self.prec as usize, dir.mode(), cc));
        RealDR::from_parts(v, self.prec, dir)
    }

    pub fn sqrt(&self, dir: Rounding) -> RealDR {
        RealDR::from_parts(self.value.sqrt(self.prec as usize, dir.mode()), self.prec, dir)
    }

    pub fn neg(&self) -> RealDR {
        let dir = match self.dir {
            Rounding::Down => Rounding::Up,
            Rounding::Nearest => Rounding::Nearest,
            Rounding::Up => Rounding::Down,
        };
        RealDR { value: self.value.neg(), prec: self.prec, dir }
    }

    /// Exact value as a rational; a RealDR is always a representable dyadic.
    pub fn to_rational(&self) -> BigRational {
        bf_to_rational(&self.value)
    }

    /// Exact finite decimal expansion of the stored dyadic value.
    pub fn exact_decimal(&self) -> String {
        bf_to_decimal(&self.value)
    }

    pub fn to_f64_lossy(&self) -> f64 {
        self.to_rational().to_f64().unwrap_or(f64::NAN)
    }

    pub fn cmp(&self, o: &RealDR) -> Ordering {
        match self.value.cmp(&o.value) {
            Some(c) => c.cmp(&0),
            None => panic!("non-finite comparison"),
        }
    }

    pub fn is_negative(&self) -> bool {
        self.value.is_negative()
    }
}

impl std::fmt::Display for RealDR {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let approx = self.to_f64_lossy();
        match self.dir {
            Rounding::Down => write!(f, ">= {approx:.6e}"),
            Rounding::Up => write!(f, "<= {approx:.6e}"),
            Rounding::Nearest => write!(f, "~ {approx:.6e}"),
        }
    }
}

/// Closed real interval with outward-rounded endpoints.
#[derive(Clone, Debug)]
pub struct RInt {
    lo: BigFloat,
    hi: BigFloat,
}

impl RInt {
    pub fn zero(p: u32) -> RInt {
        RInt { lo: bf_zero(p), hi: bf_zero(p) }
    }

    pub fn from_u64(v: u64, p: u32) -> RInt {
        let x = BigFloat::from_u64(v, p as usize);
        RInt { lo: x.clone(), hi: x }
    }

    pub fn from_i64(v: i64, p: u32) -> RInt {
        let x = BigFloat::from_i64(v, p as usize);
        RInt { lo: x.clone(), hi: x }
    }

    pub fn from_bigint(n: &BigInt, p: u32) -> RInt {
        RInt {
            lo: bigint_to_bf(n, p, RoundingMode::Down),
            hi: bigint_to_bf(n, p, RoundingMode::Up),
        }
    }

    pub fn from_ratio(q: &BigRational, p: u32) -> RInt {
        if q.denom().bits() <= 1 {
            return RInt::from_bigint(q.numer(), p);
        }
        let num = RInt::from_bigint(q.numer(), p);
        let den = RInt::from_bigint(q.denom(), p);
        num.div(&den, p)
    }

    pub(crate) fn from_endpoints(lo: BigFloat, hi: BigFloat) -> RInt {
        let r = RInt { lo: chk(lo), hi: chk(hi) };
        debug_assert!(r.well_formed());
        r
    }

    fn well_formed(&self) -> bool {
        matches!(self.lo.cmp(&self.hi), Some(c) if c <= 0)
    }

    pub fn pi(p: u32) -> RInt {
        with_consts(|cc| RInt {
            lo: cc.pi(p as usize, RoundingMode::Down),
            hi: cc.pi(p as usize, RoundingMode::Up),
        })
    }

    pub fn ln2(p: u32) -> RInt {
        with_consts(|cc| RInt {
            lo: cc.ln_2(p as usize, RoundingMode::Down),
            hi: cc.ln_2(p as usize, RoundingMode::Up),
        })
    }

    pub fn add(&self, o: &RInt, p: u32) -> RInt {
        RInt::from_endpoints(
            self.lo.add(&o.lo, p as usize, RoundingMode::Down),
            self.hi.add(&o.hi, p as usize, RoundingMode::Up),
        )
    }

    pub fn sub(&self, o: &RInt, p: u32) -> RInt {
        RInt::from_endpoints(
            self.lo.sub(&o.hi, p as usize, RoundingMode::Down),
            self.hi.sub(&o.lo, p as usize, RoundingMode::Up),
        )
    }

    pub fn neg(&self) -> RInt {
        RInt { lo: self.hi.neg(), hi: self.lo.neg() }
    }

    pub fn mul(&self, o: &RInt, p: u32) -> RInt {
        let pairs = [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let mut lo: Option<BigFloat> = None;
        let mut hi: Option<BigFloat> = None;
        for (a, b) in pairs {
            let d = a.mul(b, p as usize, RoundingMode::Down);
            let u = a.mul(b, p as usize, RoundingMode::Up);
            lo = Some(match lo {
                Some(c) => c.min(&d),
                None => d,
            });
            hi = Some(match hi {
                Some(c) => c.max(&u),
                None => u,
            });
        }
        RInt::from_endpoints(lo.unwrap(), hi.unwrap())
    }

    /// Division; the divisor interval must not contain zero.
    pub fn div(&self, o: &RInt, p: u32) -> RInt {
        assert!(!o.contains_zero(), "division by an interval containing zero");
        let pairs = [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let mut lo: Option<BigFloat> = None;
        let mut hi: Option<BigFloat> = None;
        for (a, b) in pairs {
            let d = a.div(b, p as usize, RoundingMode::Down);
            let u = a.div(b, p as usize, RoundingMode::Up);
            lo = Some(match lo {
                Some(c) => c.min(&d),
                None => d,
            });
            hi = Some(match hi {
                Some(c) => c.max(&u),
                None => u,
            });
        }
        RInt::from_endpoints(lo.unwrap(), hi.unwrap())
    }

    pub fn square(&self, p: u32) -> RInt {
        if self.contains_zero() {
            let a = self.lo.mul(&self.lo, p as usize, RoundingMode::Up);
            let b = self.hi.mul(&self.hi, p as usize, RoundingMode::Up);
            RInt::from_endpoints(bf_zero(p), a.max(&b))
        } else {
            self.mul(self, p)
        }
    }

    pub fn abs(&self) -> RInt {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            let a = self.lo.neg();
            RInt { lo: bf_zero(64), hi: a.max(&self.hi) }
        }
    }

    /// Natural logarithm; requires a strictly positive interval.
    pub fn ln(&self, p: u32) -> RInt {
        assert!(self.lo.is_positive(), "ln of a non-positive interval");
        with_consts(|cc| {
            RInt::from_endpoints(
                self.lo.ln(p as usize, RoundingMode::Down, cc),
                self.hi.ln(p as usize, RoundingMode::Up, cc),
            )
        })
    }

    pub fn exp(&self, p: u32) -> RInt {
        with_consts(|cc| {
            RInt::from_endpoints(
                self.lo.exp(p as usize, RoundingMode::Down, cc),
                self.hi.exp(p as usize, RoundingMode::Up, cc),
            )
        })
    }

    /// Square root; the interval must not be strictly negative. A lower
    /// endpoint below zero (only possible through outward rounding of an
    /// exact non-negative quantity) is clamped to zero.
    pub fn sqrt(&self, p: u32) -> RInt {
        assert!(!self.hi.is_negative(), "sqrt of a negative interval");
        let lo = if self.lo.is_negative() { bf_zero(p) } else { self.lo.sqrt(p as usize, RoundingMode::Down) };
        RInt::from_endpoints(lo, self.hi.sqrt(p as usize, RoundingMode::Up))
    }

    /// Enclosure of cos over the interval via 1-Lipschitz widening.
    pub fn cos(&self, p: u32) -> RInt {
        self.lipschitz_enclosure(p, |x, rm, cc| x.cos(p as usize, rm, cc))
    }

    /// Enclosure of sin over the interval via 1-Lipschitz widening.
    pub fn sin(&self, p: u32) -> RInt {
        self.lipschitz_enclosure(p, |x, rm, cc| x.sin(p as usize, rm, cc))
    }

    fn lipschitz_enclosure(
        &self,
        p: u32,
        f: impl Fn(&BigFloat, RoundingMode, &mut Consts) -> BigFloat,
    ) -> RInt {
        let w = self.hi.sub(&self.lo, p as usize, RoundingMode::Up);
        with_consts(|cc| {
            let a_d = f(&self.lo, RoundingMode::Down, cc);
            let b_d = f(&self.hi, RoundingMode::Down, cc);
            let a_u = f(&self.lo, RoundingMode::Up, cc);
            let b_u = f(&self.hi, RoundingMode::Up, cc);
            RInt::from_endpoints(
                a_d.min(&b_d).sub(&w, p as usize, RoundingMode::Down),
                a_u.max(&b_u).add(&w, p as usize, RoundingMode::Up),
            )
        })
    }

    /// Integer power by repeated squaring on intervals.
    pub fn powi(&self, mut e: u64, p: u32) -> RInt {
        let mut result = RInt::from_u64(1, p);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base, p);
            }
            e >>= 1;
            if e > 0 {
                base = base.square(p);
            }
        }
        result
    }

    pub fn scale_u64(&self, k: u64, p: u32) -> RInt {
        self.mul(&RInt::from_u64(k, p), p)
    }

    pub fn max(&self, o: &RInt) -> RInt {
        RInt::from_endpoints(self.lo.max(&o.lo), self.hi.max(&o.hi))
    }

    pub fn min(&self, o: &RInt) -> RInt {
        RInt::from_endpoints(self.lo.min(&o.lo), self.hi.min(&o.hi))
    }

    // astro-float zeros carry a sign, and its sign predicates report +0 as
    // positive; every test below must treat a zero endpoint as zero.
    pub fn contains_zero(&self) -> bool {
        (self.lo.is_zero() || self.lo.is_negative())
            && (self.hi.is_zero() || self.hi.is_positive())
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.lo.is_positive() && !self.lo.is_zero()
    }

    pub fn is_strictly_negative(&self) -> bool {
        self.hi.is_negative() && !self.hi.is_zero()
    }

    /// True when the whole interval lies strictly below `o`.
    pub fn strictly_below(&self, o: &RInt) -> bool {
        matches!(self.hi.cmp(&o.lo), Some(c) if c < 0)
    }

    /// True when `self.lo >= o.hi`, certifying `self >= o` pointwise.
    pub fn certainly_ge(&self, o: &RInt) -> bool {
        matches!(self.lo.cmp(&o.hi), Some(c) if c >= 0)
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        let lo = bf_to_rational(&self.lo);
        let hi = bf_to_rational(&self.hi);
        &lo <= q && q <= &hi
    }

    /// True when the interval contains the exact value of a finite decimal.
    pub fn contains_decimal(&self, s: &str) -> bool {
        match decimal_to_rational(s) {
            Some(q) => self.contains_rational(&q),
            None => false,
        }
    }

    pub fn width_rational(&self) -> BigRational {
        self.hi_rational() - self.lo_rational()
    }

    pub fn lo_rational(&self) -> BigRational {
        bf_to_rational(&self.lo)
    }

    pub fn hi_rational(&self) -> BigRational {
        bf_to_rational(&self.hi)
    }

    pub fn width(&self, p: u32) -> RealDR {
        RealDR::from_parts(self.hi.sub(&self.lo, p as usize, RoundingMode::Up), p, Rounding::Up)
    }

    pub fn round_to(&self, dir: Rounding, p: u32) -> RealDR {
        let value = match dir {
            Rounding::Down => self.lo.clone(),
            Rounding::Up => self.hi.clone(),
            Rounding::Nearest => {
                let two = BigFloat::from_u64(2, p as usize);
                self.lo
                    .add(&self.hi, p as usize, RoundingMode::ToEven)
                    .div(&two, p as usize, RoundingMode::ToEven)
            }
        };
        RealDR::from_parts(value, p, dir)
    }

    pub fn mid_f64(&self) -> f64 {
        let lo = bf_to_rational(&self.lo).to_f64().unwrap_or(f64::NAN);
        let hi = bf_to_rational(&self.hi).to_f64().unwrap_or(f64::NAN);
        (lo + hi) / 2.0
    }
}

impl std::fmt::Display for RInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{:.6e}, {:.6e}]", bf_to_rational(&self.lo).to_f64().unwrap_or(f64::NAN), bf_to_rational(&self.hi).to_f64().unwrap_or(f64::NAN))
    }
}

/// Complex rectangle with outward-rounded real and imaginary enclosures.
#[derive(Clone, Debug)]
pub struct CInt {
    pub re: RInt,
    pub im: RInt,
}

impl CInt {
    pub fn zero(p: u32) -> CInt {
        CInt { re: RInt::zero(p), im: RInt::zero(p) }
    }

    pub fn one(p: u32) -> CInt {
        CInt { re: RInt::from_u64(1, p), im: RInt::zero(p) }
    }

    pub fn from_real(re: RInt, p: u32) -> CInt {
        CInt { re, im: RInt::zero(p) }
    }

    pub fn add(&self, o: &CInt, p: u32) -> CInt {
        CInt { re: self.re.add(&o.re, p), im: self.im.add(&o.im, p) }
    }

    pub fn sub(&self, o: &CInt, p: u32) -> CInt {
        CInt { re: self.re.sub(&o.re, p), im: self.im.sub(&o.im, p) }
    }

    pub fn mul(&self, o: &CInt, p: u32) -> CInt {
        let re = self.re.mul(&o.re, p).sub(&self.im.mul(&o.im, p), p);
        let im = self.re.mul(&o.im, p).add(&self.im.mul(&o.re, p), p);
        CInt { re, im }
    }

    pub fn scale(&self, s: &RInt, p: u32) -> CInt {
        CInt { re: self.re.mul(s, p), im: self.im.mul(s, p) }
    }

    pub fn div_real(&self, s: &RInt, p: u32) -> CInt {
        CInt { re: self.re.div(s, p), im: self.im.div(s, p) }
    }

    pub fn neg(&self) -> CInt {
        CInt { re: self.re.neg(), im: self.im.neg() }
    }

    /// exp(re)*(cos(im) + i sin(im)) with outward rounding throughout.
    pub fn exp(&self, p: u32) -> CInt {
        let r = self.re.exp(p);
        CInt { re: r.mul(&self.im.cos(p), p), im: r.mul(&self.im.sin(p), p) }
    }

    pub fn abs_sq(&self, p: u32) -> RInt {
        self.re.square(p).add(&self.im.square(p), p)
    }

    pub fn abs(&self, p: u32) -> RInt {
        self.abs_sq(p).sqrt(p)
    }

    pub fn powi(&self, mut e: u64, p: u32) -> CInt {
        let mut result = CInt::one(p);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base, p);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, p);
            }
        }
        result
    }
}

impl std::fmt::Display for CInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} + {}i", self.re, self.im)
    }
}
