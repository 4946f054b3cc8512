use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exactnum::dr::decimal_to_rational;
use crate::exactnum::{RealDR, Rounding};

/// A decimal string together with the direction it was rounded in.
///
/// `value` is the exact decimal expansion of a binary floating-point number,
/// so converting back at the same precision is lossless.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectedValue {
    pub value: String,
    pub rounding: String,
}

impl DirectedValue {
    pub fn from_real(x: &RealDR) -> DirectedValue {
        DirectedValue {
            value: x.exact_decimal(),
            rounding: x.direction().as_str().to_string(),
        }
    }

    pub fn to_real(&self, precision: u32) -> Result<RealDR> {
        let dir = Rounding::parse(&self.rounding)
            .ok_or_else(|| Error::Parse(format!("unknown rounding mode {:?}", self.rounding)))?;
        let q = decimal_to_rational(&self.value)
            .ok_or_else(|| Error::Parse(format!("bad decimal literal {:?}", self.value)))?;
        Ok(RealDR::from_rational(&q, precision, dir))
    }

    pub fn rational(&self) -> Result<BigRational> {
        decimal_to_rational(&self.value)
            .ok_or_else(|| Error::Parse(format!("bad decimal literal {:?}", self.value)))
    }
}

/// Self-contained witness that `|e^beta - alpha| >= E^{-KL}`.
///
/// All numeric fields are decimal strings with explicit rounding directions;
/// `verify` reproduces them bit for bit from the stated inputs and precision,
/// so a certificate can be checked long after it was produced.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub version: String,
    pub alpha: String,
    pub beta: String,
    #[serde(rename = "D")]
    pub d: u32,
    #[serde(rename = "logA")]
    pub log_a: DirectedValue,
    #[serde(rename = "logB")]
    pub log_b: DirectedValue,
    #[serde(rename = "K")]
    pub k: u32,
    #[serde(rename = "L")]
    pub l: u32,
    /// Interpolation radius as an exact fraction `num/den`.
    #[serde(rename = "E")]
    pub e: String,
    /// `KL log E`, rounded down.
    pub lhs: DirectedValue,
    /// Right side of the certifying inequality, rounded up.
    pub rhs: DirectedValue,
    /// Certified lower bound for `log |e^beta - alpha|`.
    pub log_eps_lower: DirectedValue,
    pub precision_bits: u32,
}

pub const CERTIFICATE_VERSION: &str = "1";

impl BoundCertificate {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<BoundCertificate> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn e_ratio(&self) -> Result<BigRational> {
        parse_ratio(&self.e)
    }
}

pub fn format_ratio(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_ratio(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad rational literal {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
    let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
    if den == BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}
