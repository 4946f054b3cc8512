//! Arithmetic-analytic diagnostics for the interpolation determinant.
//!
//! For admissible parameters the value `G` attached to the interpolation
//! system satisfies two bounds pulling in opposite directions:
//!
//! * unconditionally, a Liouville-type lower bound driven by the heights of
//!   the inputs and of the order matrix;
//! * under the hypothesis `|e^beta - alpha| < E^{-KL}`, an upper bound driven
//!   by the Schwarz factor `-(KL - mu - 1) log E`.
//!
//! When the upper bound drops below the lower one, the hypothesis is absurd
//! and `|e^beta - alpha| >= E^{-KL}` follows. [`diagnose`] computes both
//! sides, the exact `log G` between them, and the length checks on the two
//! integer forms of `G`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::exactnum::{field_degree_ratio, AlgebraicNumber, RInt, RealDR, Rounding};
use crate::interp::{g_value, m0_height, InterpolationSystem};
use crate::numtheory;

use super::{hypothesis_threshold, pow_ratio, validate_shape};

const MIN_PRECISION: u32 = 64;

/// Largest `K * L` accepted by [`diagnose`]; the minor expansion of the
/// order matrix grows too fast beyond this.
pub const DIAGNOSE_CELL_CAP: u32 = 40;

/// Lower bound for `log |f(x_1, ..., x_n)|` at a point where `f` does not
/// vanish, for `f` an integer polynomial of length `length` and degree at
/// most `degrees[i]` in the `i`-th variable:
///
/// ```text
/// log |f| >= -(D - 1) log length
///          + sum_i degrees[i] (log max(1, |x_i|) - D h(x_i))
/// ```
///
/// `D` is the degree ratio of the field generated by the points; both
/// supported fields (rationals and imaginary quadratics) give `D = 1`, which
/// kills the length term. The caller is responsible for `f(x) != 0`.
pub fn liouville_lower(
    length: &BigRational,
    degrees: &[u64],
    points: &[AlgebraicNumber],
    precision: u32,
) -> Result<RealDR> {
    if !length.is_positive() {
        return Err(Error::Parameter(format!(
            "polynomial length must be positive, got {length}"
        )));
    }
    if degrees.len() != points.len() {
        return Err(Error::Parameter(format!(
            "{} degrees for {} points",
            degrees.len(),
            points.len()
        )));
    }
    let mut field: Option<&BigInt> = None;
    for pt in points {
        match (field, pt.elem().field_d()) {
            (None, d) => field = d,
            (Some(a), Some(b)) if a != b => {
                return Err(Error::DistinctFields(a.clone(), b.clone()))
            }
            _ => {}
        }
    }
    let d: u32 = 1;

    let p = precision.max(MIN_PRECISION);
    let mut acc = RInt::from_ratio(length, p)
        .ln(p)
        .scale_u64(d as u64 - 1, p)
        .neg();
    for (n, pt) in degrees.iter().zip(points.iter()) {
        acc = acc.add(&pt.log_abs_plus(p).scale_u64(*n, p), p);
        acc = acc.sub(&pt.weil_height(p).scale_u64(n * d as u64, p), p);
    }
    Ok(acc.round_to(Rounding::Down, p))
}

/// Two-sided report on `log G` for one parameter cell.
#[derive(Debug, Clone)]
pub struct DiagnosticReport {
    pub d: u32,
    pub k: u32,
    pub l: u32,
    pub e: BigRational,
    /// Smoothing order actually used (smallest with a nonvanishing value).
    pub mu: u32,
    /// The hypothetical distance `E^{-KL}` fed into the upper bound.
    pub eps_hypothesis: BigRational,
    /// Whether the observed `|e^beta - alpha|` provably sits below
    /// `E^{-KL}`; only then is the upper bound a theorem about the inputs.
    pub hypothesis_observed: bool,
    /// Unconditional lower bound for `log G`, rounded down.
    pub lower: RealDR,
    /// Upper bound for `log G` under the hypothesis, rounded up.
    pub upper: RealDR,
    pub exact_low: RealDR,
    pub exact_high: RealDR,
    /// True when `upper < lower`, refuting the hypothesis and certifying
    /// `|e^beta - alpha| >= E^{-KL}`.
    pub contradiction: bool,
    pub g1_length: BigRational,
    pub g1_length_bound: RealDR,
    pub g2_length: BigRational,
    pub g2_length_bound: RealDR,
}

/// Computes the arithmetic lower bound, the conditional analytic upper
/// bound, and the exact value of `log G` for the cell `(K, L, E)`, checking
/// every proven relation between them along the way.
pub fn diagnose(
    alpha: &AlgebraicNumber,
    beta: &AlgebraicNumber,
    k: u32,
    l: u32,
    e: &BigRational,
    precision: u32,
) -> Result<DiagnosticReport> {
    if alpha.is_zero() {
        return Err(Error::ZeroAlpha);
    }
    if beta.is_zero() {
        return Err(Error::ZeroBeta);
    }
    validate_shape(k, l, e)?;
    if k * l > DIAGNOSE_CELL_CAP {
        return Err(Error::Parameter(format!(
            "K*L = {} exceeds the diagnostic cap {DIAGNOSE_CELL_CAP}",
            k * l
        )));
    }
    let p = precision.max(MIN_PRECISION);
    let d = field_degree_ratio(alpha, beta)?;

    let sys = InterpolationSystem::new(k, l)?;
    let g = g_value(&sys, alpha, beta, p)?;
    let hr = m0_height(&sys, p);
    let mu = g.mu;
    let (ku, lu, mu_u) = (k as u64, l as u64, mu as u64);
    let mu_fact = numtheory::factorial(mu_u);

    // Shared length factor H(M0) 2^(mu+K-1) e^(L-1) sqrt(L).
    let core = {
        let pow2 = RInt::from_bigint(&(BigInt::one() << (mu_u + ku - 1)), p);
        let exp_l = RInt::from_u64(1, p).exp(p).powi(lu - 1, p);
        let sqrt_l = RInt::from_u64(lu, p).sqrt(p);
        hr.height.mul(&pow2, p).mul(&exp_l, p).mul(&sqrt_l, p)
    };
    let g1_length = g.g1.length();
    let g1_bound = RInt::from_bigint(&g.d_mu_pow, p).mul(&core, p);
    let g2_length = g.g2.length();
    let g2_bound = RInt::from_bigint(&mu_fact, p).mul(&core, p);
    for (name, len, bound) in [
        ("smoothed", &g1_length, &g1_bound),
        ("plain", &g2_length, &g2_bound),
    ] {
        if bound.strictly_below(&RInt::from_ratio(len, p)) {
            return Err(Error::Internal(format!(
                "{name} form length {} exceeds its proven bound {:.6}",
                len,
                bound.mid_f64()
            )));
        }
    }

    let log_a = hypothesis_threshold(alpha, d, p);
    let log_b = hypothesis_threshold(beta, d, p);
    let min_front = if g.d_mu_pow <= mu_fact {
        g.d_mu_pow.clone()
    } else {
        mu_fact.clone()
    };

    let lower_int = RInt::from_bigint(&min_front, p)
        .mul(&core, p)
        .ln(p)
        .scale_u64(d as u64 - 1, p)
        .neg()
        .sub(&log_b.scale_u64(ku - 1, p), p)
        .sub(&log_a.scale_u64(lu - 1, p), p);
    let lower = lower_int.round_to(Rounding::Down, p);

    let eps_hypothesis = pow_ratio(e, k * l).recip();
    let upper_int = {
        let ln2 = RInt::ln2(p);
        let e_int = RInt::from_ratio(e, p);
        let beta_abs = RInt::from_ratio(&beta.abs_sq(), p).sqrt(p);
        let schwarz = e_int.ln(p).scale_u64(ku * lu - mu_u - 1, p).neg();
        let envelope = {
            let direct = e_int.mul(&beta_abs, p).scale_u64(lu, p);
            let exp_term = beta_abs
                .exp(p)
                .add(&RInt::from_ratio(&eps_hypothesis, p), p)
                .ln(p)
                .scale_u64(lu, p);
            direct.max(&RInt::from_u64(lu, p).ln(p).add(&exp_term, p))
        };
        schwarz
            .add(&ln2.scale_u64(2, p), p)
            .add(&RInt::from_bigint(&numtheory::factorial(ku - 1), p).ln(p), p)
            .add(&envelope, p)
            .add(&RInt::from_u64(lu + 1, p).ln(p).scale_u64(mu_u + 1, p), p)
            .add(&RInt::from_bigint(&min_front, p).ln(p), p)
            .add(&hr.height.ln(p), p)
            .sub(&RInt::from_bigint(&mu_fact, p).ln(p), p)
    };
    let upper = upper_int.round_to(Rounding::Up, p);

    let log_g = g.g.ln(p);
    if log_g.strictly_below(&lower_int) {
        return Err(Error::Internal(format!(
            "exact log G ~ {:.6} undercuts its unconditional lower bound {:.6}",
            log_g.mid_f64(),
            lower_int.mid_f64()
        )));
    }

    let hypothesis_observed = match crate::analytic::eps_interval(alpha, beta, p.max(128)) {
        Ok(eps) => eps.hi_rational() < eps_hypothesis,
        Err(Error::PrecisionExhausted(_)) => false,
        Err(err) => return Err(err),
    };
    if hypothesis_observed && upper_int.strictly_below(&log_g) {
        return Err(Error::Internal(format!(
            "exact log G ~ {:.6} exceeds the conditional upper bound {:.6} \
             although the hypothesis holds",
            log_g.mid_f64(),
            upper_int.mid_f64()
        )));
    }

    let contradiction = upper.to_rational() < lower.to_rational();
    if contradiction && hypothesis_observed {
        return Err(Error::Internal(
            "both bounds hold yet cross each other; one of them is broken".into(),
        ));
    }

    Ok(DiagnosticReport {
        d,
        k,
        l,
        e: e.clone(),
        mu,
        eps_hypothesis,
        hypothesis_observed,
        lower,
        upper,
        exact_low: log_g.round_to(Rounding::Down, p),
        exact_high: log_g.round_to(Rounding::Up, p),
        contradiction,
        g1_length,
        g1_length_bound: g1_bound.round_to(Rounding::Up, p),
        g2_length,
        g2_length_bound: g2_bound.round_to(Rounding::Up, p),
    })
}
