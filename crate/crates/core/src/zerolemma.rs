//! Multiplicity counting for bivariate polynomials along the derivation
//! delta = d/dX + Y d/dY, and the combinatorial threshold that bounds the
//! total vanishing order of a nonzero polynomial over several points.

use crate::error::{Error, Result};
use crate::exactnum::FieldElem;
use crate::interp::BiPoly;

/// A polynomial with declared degree bounds and a family of evaluation
/// points (zeta_k, eta_k), zeta pairwise distinct and eta nonzero.
pub struct ZeroConfig {
    pub poly: BiPoly,
    pub points: Vec<(FieldElem, FieldElem)>,
    pub deg_x: u32,
    pub deg_y: u32,
}

impl ZeroConfig {
    /// (D0 + M)(D1 + 1) - M
    pub fn threshold(&self) -> u64 {
        let m = self.points.len() as u64;
        (self.deg_x as u64 + m) * (self.deg_y as u64 + 1) - m
    }

    fn validate(&self) -> Result<()> {
        if self.poly.is_zero() {
            return Err(Error::Parameter("zero polynomial".into()));
        }
        if self.poly.deg_x() > self.deg_x || self.poly.deg_y() > self.deg_y {
            return Err(Error::Parameter(
                "polynomial exceeds its declared degree bounds".into(),
            ));
        }
        if self.points.is_empty() {
            return Err(Error::Parameter("need at least one point".into()));
        }
        for (i, (z1, e1)) in self.points.iter().enumerate() {
            if e1.is_zero() {
                return Err(Error::Parameter(format!("eta at point {i} is zero")));
            }
            for (z2, _) in &self.points[..i] {
                if z1 == z2 {
                    return Err(Error::Parameter(
                        "zeta coordinates must be pairwise distinct".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Smallest sigma <= cap with delta^sigma P(zeta, eta) != 0, or cap+1 when
/// every scanned derivative vanishes (read as "order at least cap+1").
pub fn vanishing_order(
    p: &BiPoly,
    zeta: &FieldElem,
    eta: &FieldElem,
    cap: u64,
) -> Result<u64> {
    if p.is_zero() {
        return Err(Error::Parameter(
            "vanishing order of the zero polynomial is undefined".into(),
        ));
    }
    if eta.is_zero() {
        return Err(Error::Parameter("eta must be nonzero".into()));
    }
    let mut cur = p.clone();
    for sigma in 0..=cap {
        if !cur.eval(zeta, eta).is_zero() {
            return Ok(sigma);
        }
        if sigma < cap {
            cur = cur.apply_delta();
        }
    }
    Ok(cap + 1)
}

/// Vanishing orders at each point, their sum, and the threshold the sum
/// can never exceed for a nonzero polynomial within the degree bounds.
pub struct ZeroLemmaVerdict {
    pub orders: Vec<u64>,
    pub total: u64,
    pub threshold: u64,
    pub within: bool,
}

pub fn check_zero_lemma(config: &ZeroConfig) -> Result<ZeroLemmaVerdict> {
    config.validate()?;
    let threshold = config.threshold();
    let mut orders = Vec::with_capacity(config.points.len());
    for (zeta, eta) in &config.points {
        orders.push(vanishing_order(&config.poly, zeta, eta, threshold + 1)?);
    }
    let total: u64 = orders.iter().sum();
    Ok(ZeroLemmaVerdict {
        total,
        threshold,
        within: total <= threshold,
        orders,
    })
}
