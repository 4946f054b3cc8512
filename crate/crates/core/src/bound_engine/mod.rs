//! Certified lower bounds for `|e^beta - alpha|`.
//!
//! A certificate fixes integers `K >= 1`, `L >= 2` and a rational radius
//! `E > 1`, picks heights `A, B >= 1` with
//! `D h(alpha) - log max(1, |alpha|) <= log A` (and the same for `beta`, `B`),
//! where `D` is the degree ratio of the number field generated by the inputs,
//! and checks the single inequality
//!
//! ```text
//! KL log E >= D K L log 2
//!           + D (K-1) log(e sqrt(3L) d_{L-1})
//!           + D log Dfact(K-1, L-1)
//!           + D ((L-1) log(4e) + log min(d_{L-2}^{K-1}, (L-2)!))
//!           + log((K-1)!)
//!           + (K-1) log(B/2) + (L-1) log(A/2)
//!           + L E |beta| + L log E
//! ```
//!
//! with `d_n = lcm(1, ..., n)` and `Dfact(m, n)` the part of `m!` built from
//! primes exceeding `n`. When it holds, `|e^beta - alpha| >= E^{-KL}`. The
//! left side is rounded down and the right side up, so a passing certificate
//! is sound at any working precision; raising the precision only widens the
//! observed margin.
//!
//! [`certify`] derives the tightest admissible heights automatically,
//! [`certify_with_heights`] lets the caller declare larger ones, [`verify`]
//! re-checks a stored certificate bit for bit, and [`search_best`] scans a
//! `(K, L, E)` grid for the strongest certifiable exponent. [`diagnose`]
//! inspects the underlying interpolation determinant on small parameters.

mod certificate;
mod diagnose;

pub use certificate::{format_ratio, parse_ratio, BoundCertificate, DirectedValue, CERTIFICATE_VERSION};
pub use diagnose::{diagnose, liouville_lower, DiagnosticReport};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::exactnum::{field_degree_ratio, AlgebraicNumber, RInt, RealDR, Rounding};
use crate::numtheory;

/// Denominator of the search grid for `E`: candidates are `n / 2^20`.
pub const E_GRID_BITS: u32 = 20;

const MIN_PRECISION: u32 = 64;

fn validate_shape(k: u32, l: u32, e: &BigRational) -> Result<()> {
    if k < 1 {
        return Err(Error::Parameter("K must be at least 1".into()));
    }
    if l < 2 {
        return Err(Error::Parameter("L must be at least 2".into()));
    }
    if *e <= BigRational::one() {
        return Err(Error::Parameter(format!("E must exceed 1, got {e}")));
    }
    Ok(())
}

pub(crate) fn pow_ratio(q: &BigRational, n: u32) -> BigRational {
    BigRational::new(Pow::pow(q.numer(), n), Pow::pow(q.denom(), n))
}

/// Tightest admissible height exponent for one input:
/// `max(0, D h(x) - log max(1, |x|))` as an enclosure.
pub fn hypothesis_threshold(x: &AlgebraicNumber, d: u32, precision: u32) -> RInt {
    let p = precision.max(MIN_PRECISION);
    let t = x
        .weil_height(p)
        .scale_u64(d as u64, p)
        .sub(&x.log_abs_plus(p), p);
    t.max(&RInt::zero(p))
}

fn beta_abs(beta: &AlgebraicNumber, p: u32) -> RInt {
    RInt::from_ratio(&beta.abs_sq(), p).sqrt(p)
}

const RHS_TERMS: [&str; 9] = [
    "D*K*L*log(2)",
    "D*(K-1)*log(e*sqrt(3L)*d_{L-1})",
    "D*log(Dfact(K-1,L-1))",
    "D*((L-1)*log(4e) + log(min(d_{L-2}^(K-1), (L-2)!)))",
    "log((K-1)!)",
    "(K-1)*log(B/2)",
    "(L-1)*log(A/2)",
    "L*E*|beta|",
    "L*log(E)",
];

fn rhs_terms(
    d: u32,
    log_a: &BigRational,
    log_b: &BigRational,
    k: u32,
    l: u32,
    e: &BigRational,
    beta: &AlgebraicNumber,
    p: u32,
) -> [RInt; 9] {
    let (du, ku, lu) = (d as u64, k as u64, l as u64);
    let ln2 = RInt::ln2(p);
    let one = RInt::from_u64(1, p);
    let two = RInt::from_u64(2, p);

    let t1 = ln2.scale_u64(du * ku * lu, p);

    let half_ln_3l = RInt::from_u64(3 * lu, p).ln(p).div(&two, p);
    let ln_d = RInt::from_bigint(&numtheory::lcm_upto(lu - 1), p).ln(p);
    let t2 = one
        .add(&half_ln_3l, p)
        .add(&ln_d, p)
        .scale_u64(du * (ku - 1), p);

    let t3 = RInt::from_bigint(&numtheory::dmn(ku - 1, lu - 1), p)
        .ln(p)
        .scale_u64(du, p);

    let min_arg = {
        let a = Pow::pow(&numtheory::lcm_upto(lu - 2), k - 1);
        let b = numtheory::factorial(lu - 2);
        if a <= b { a } else { b }
    };
    let ln_4e = ln2.scale_u64(2, p).add(&one, p);
    let t4 = ln_4e
        .scale_u64(lu - 1, p)
        .add(&RInt::from_bigint(&min_arg, p).ln(p), p)
        .scale_u64(du, p);

    let t5 = RInt::from_bigint(&numtheory::factorial(ku - 1), p).ln(p);

    let t6 = RInt::from_ratio(log_b, p).sub(&ln2, p).scale_u64(ku - 1, p);
    let t7 = RInt::from_ratio(log_a, p).sub(&ln2, p).scale_u64(lu - 1, p);

    let e_int = RInt::from_ratio(e, p);
    let t8 = e_int.mul(&beta_abs(beta, p), p).scale_u64(lu, p);
    let t9 = e_int.ln(p).scale_u64(lu, p);

    [t1, t2, t3, t4, t5, t6, t7, t8, t9]
}

fn rhs_interval(
    d: u32,
    log_a: &BigRational,
    log_b: &BigRational,
    k: u32,
    l: u32,
    e: &BigRational,
    beta: &AlgebraicNumber,
    p: u32,
) -> RInt {
    let terms = rhs_terms(d, log_a, log_b, k, l, e, beta, p);
    let mut acc = terms[0].clone();
    for t in &terms[1..] {
        acc = acc.add(t, p);
    }
    acc
}

fn lhs_interval(k: u32, l: u32, e: &BigRational, p: u32) -> RInt {
    RInt::from_ratio(e, p)
        .ln(p)
        .scale_u64(k as u64 * l as u64, p)
}

/// Right side of the certifying inequality, rounded up.
///
/// `log_a` and `log_b` must be nonnegative; whether they dominate the true
/// height thresholds is the caller's responsibility here (certification
/// re-checks it).
pub fn theorem1_rhs(
    d: u32,
    log_a: &BigRational,
    log_b: &BigRational,
    k: u32,
    l: u32,
    e: &BigRational,
    beta: &AlgebraicNumber,
    precision: u32,
) -> Result<RealDR> {
    validate_shape(k, l, e)?;
    if d == 0 {
        return Err(Error::Parameter("degree ratio must be positive".into()));
    }
    if log_a.is_negative() || log_b.is_negative() {
        return Err(Error::Parameter(
            "height exponents log A and log B must be nonnegative".into(),
        ));
    }
    let p = precision.max(MIN_PRECISION);
    Ok(rhs_interval(d, log_a, log_b, k, l, e, beta, p).round_to(Rounding::Up, p))
}

/// `KL log E`, rounded down.
pub fn theorem1_lhs(k: u32, l: u32, e: &BigRational, precision: u32) -> Result<RealDR> {
    validate_shape(k, l, e)?;
    let p = precision.max(MIN_PRECISION);
    Ok(lhs_interval(k, l, e, p).round_to(Rounding::Down, p))
}

/// Checks, at quadruple precision, that the observed `|e^beta - alpha|` does
/// not definitely undercut the certified floor. A passing certificate proves
/// it cannot, so a definite violation is an internal defect, never a property
/// of the inputs. Inconclusive enclosures are accepted.
fn eps_floor_sanity(
    alpha: &AlgebraicNumber,
    beta: &AlgebraicNumber,
    k: u32,
    l: u32,
    e: &BigRational,
    p: u32,
) -> Result<()> {
    let ps = 4 * p;
    match crate::analytic::eps_interval(alpha, beta, ps) {
        Ok(eps) => {
            let floor = RInt::from_ratio(&pow_ratio(e, k * l).recip(), ps);
            if eps.strictly_below(&floor) {
                return Err(Error::Internal(format!(
                    "certified floor E^-KL exceeds the observed distance: \
                     eps in [{}, {}]",
                    eps.lo_rational().to_f64().unwrap_or(f64::NAN),
                    eps.hi_rational().to_f64().unwrap_or(f64::NAN),
                )));
            }
            Ok(())
        }
        Err(Error::PrecisionExhausted(_)) => Ok(()),
        Err(err) => Err(err),
    }
}

fn rejection_message(
    lhs: &RealDR,
    rhs: &RealDR,
    terms: &[RInt; 9],
    k: u32,
    l: u32,
    e: &BigRational,
) -> String {
    let mut msg = format!(
        "KL log E = {:.6} falls short of the required {:.6} at K={k}, L={l}, E={e}; terms:",
        lhs.to_f64_lossy(),
        rhs.to_f64_lossy(),
    );
    for (name, t) in RHS_TERMS.iter().zip(terms.iter()) {
        msg.push_str(&format!(" {name} ~ {:.6},", t.mid_f64()));
    }
    msg.pop();
    msg
}

/// Certifies `|e^beta - alpha| >= E^{-KL}` with caller-declared heights.
///
/// `log_a` and `log_b` must be nonnegative and provably dominate the
/// thresholds `D h(alpha) - log max(1, |alpha|)` and its `beta` counterpart.
/// Declaring larger heights than necessary only weakens the inequality.
pub fn certify_with_heights(
    alpha: &AlgebraicNumber,
    beta: &AlgebraicNumber,
    k: u32,
    l: u32,
    e: &BigRational,
    log_a: &BigRational,
    log_b: &BigRational,
    precision: u32,
) -> Result<BoundCertificate> {
    if beta.is_zero() {
        return Err(Error::ZeroBeta);
    }
    validate_shape(k, l, e)?;
    if log_a.is_negative() || log_b.is_negative() {
        return Err(Error::Parameter(
            "height exponents log A and log B must be nonnegative".into(),
        ));
    }
    let p = precision.max(MIN_PRECISION);
    let d = field_degree_ratio(alpha, beta)?;

    if *log_a < hypothesis_threshold(alpha, d, p).hi_rational() {
        return Err(Error::Parameter(
            "declared log A does not provably dominate D h(alpha) - log max(1, |alpha|)".into(),
        ));
    }
    if *log_b < hypothesis_threshold(beta, d, p).hi_rational() {
        return Err(Error::Parameter(
            "declared log B does not provably dominate D h(beta) - log max(1, |beta|)".into(),
        ));
    }

    let terms = rhs_terms(d, log_a, log_b, k, l, e, beta, p);
    let mut rhs_int = terms[0].clone();
    for t in &terms[1..] {
        rhs_int = rhs_int.add(t, p);
    }
    let rhs = rhs_int.round_to(Rounding::Up, p);
    let lhs_int = lhs_interval(k, l, e, p);
    let lhs = lhs_int.round_to(Rounding::Down, p);

    if lhs.to_rational() < rhs.to_rational() {
        return Err(Error::Certificate(rejection_message(
            &lhs, &rhs, &terms, k, l, e,
        )));
    }

    eps_floor_sanity(alpha, beta, k, l, e, p)?;

    let log_eps_lower = lhs_int.round_to(Rounding::Up, p).neg();
    Ok(BoundCertificate {
        version: CERTIFICATE_VERSION.to_string(),
        alpha: alpha.to_string(),
        beta: beta.to_string(),
        d,
        log_a: DirectedValue::from_real(&RealDR::from_rational(log_a, p, Rounding::Up)),
        log_b: DirectedValue::from_real(&RealDR::from_rational(log_b, p, Rounding::Up)),
        k,
        l,
        e: format_ratio(e),
        lhs: DirectedValue::from_real(&lhs),
        rhs: DirectedValue::from_real(&rhs),
        log_eps_lower: DirectedValue::from_real(&log_eps_lower),
        precision_bits: p,
    })
}

/// Certifies `|e^beta - alpha| >= E^{-KL}` with automatically derived
/// (tightest admissible) heights.
pub fn certify(
    alpha: &AlgebraicNumber,
    beta: &AlgebraicNumber,
    k: u32,
    l: u32,
    e: &BigRational,
    precision: u32,
) -> Result<BoundCertificate> {
    if beta.is_zero() {
        return Err(Error::ZeroBeta);
    }
    let p = precision.max(MIN_PRECISION);
    let d = field_degree_ratio(alpha, beta)?;
    let log_a = hypothesis_threshold(alpha, d, p)
        .round_to(Rounding::Up, p)
        .to_rational();
    let log_b = hypothesis_threshold(beta, d, p)
        .round_to(Rounding::Up, p)
        .to_rational();
    certify_with_heights(alpha, beta, k, l, e, &log_a, &log_b, precision)
}

/// Re-checks a stored certificate.
///
/// Every derived quantity is recomputed at the stated precision and must
/// reproduce the stored decimal bit for bit; the hypothesis thresholds and
/// the inequality itself are re-verified, and the observed distance is
/// sanity-checked against the certified floor.
pub fn verify(cert: &BoundCertificate) -> Result<()> {
    if cert.version != CERTIFICATE_VERSION {
        return Err(Error::Certificate(format!(
            "unsupported certificate version {:?}",
            cert.version
        )));
    }
    let p = cert.precision_bits;
    if p < MIN_PRECISION {
        return Err(Error::Certificate(format!(
            "stated precision {p} is below the minimum {MIN_PRECISION}"
        )));
    }
    let alpha = AlgebraicNumber::parse(&cert.alpha)?;
    let beta = AlgebraicNumber::parse(&cert.beta)?;
    if beta.is_zero() {
        return Err(Error::ZeroBeta);
    }
    let e = cert.e_ratio()?;
    validate_shape(cert.k, cert.l, &e)?;

    let d = field_degree_ratio(&alpha, &beta)?;
    if d != cert.d {
        return Err(Error::Certificate(format!(
            "stated degree ratio {} disagrees with the recomputed {d}",
            cert.d
        )));
    }

    let log_a = cert.log_a.rational()?;
    let log_b = cert.log_b.rational()?;
    if log_a.is_negative() || log_b.is_negative() {
        return Err(Error::Certificate(
            "height exponents must be nonnegative".into(),
        ));
    }
    if log_a < hypothesis_threshold(&alpha, d, p).hi_rational() {
        return Err(Error::Certificate(
            "stated log A does not dominate the height threshold for alpha".into(),
        ));
    }
    if log_b < hypothesis_threshold(&beta, d, p).hi_rational() {
        return Err(Error::Certificate(
            "stated log B does not dominate the height threshold for beta".into(),
        ));
    }

    let rhs = rhs_interval(d, &log_a, &log_b, cert.k, cert.l, &e, &beta, p)
        .round_to(Rounding::Up, p);
    if DirectedValue::from_real(&rhs) != cert.rhs {
        return Err(Error::Certificate(format!(
            "stored rhs {:?} does not reproduce; recomputed {:?}",
            cert.rhs.value,
            rhs.exact_decimal()
        )));
    }
    let lhs_int = lhs_interval(cert.k, cert.l, &e, p);
    let lhs = lhs_int.round_to(Rounding::Down, p);
    if DirectedValue::from_real(&lhs) != cert.lhs {
        return Err(Error::Certificate(format!(
            "stored lhs {:?} does not reproduce; recomputed {:?}",
            cert.lhs.value,
            lhs.exact_decimal()
        )));
    }
    let floor = lhs_int.round_to(Rounding::Up, p).neg();
    if DirectedValue::from_real(&floor) != cert.log_eps_lower {
        return Err(Error::Certificate(format!(
            "stored log_eps_lower {:?} does not reproduce; recomputed {:?}",
            cert.log_eps_lower.value,
            floor.exact_decimal()
        )));
    }

    if lhs.to_rational() < rhs.to_rational() {
        return Err(Error::Certificate(
            "the certifying inequality KL log E >= rhs fails".into(),
        ));
    }

    eps_floor_sanity(&alpha, &beta, cert.k, cert.l, &e, p)
}

/// Scans `K <= k_max`, `L <= l_max` and the rational grid `E = n / 2^20` for
/// the certificate maximizing the exponent `KL log E`, then certifies it.
///
/// Cells with `K = 1` are skipped: the right side then contains
/// `L E |beta| + L log E` on its own, which already exceeds `KL log E`.
/// Within a cell the margin is concave in `E`, so the search seeds near the
/// peak `(K-1)/|beta|`, doubles until infeasible, and bisects to the largest
/// feasible grid point.
pub fn search_best(
    alpha: &AlgebraicNumber,
    beta: &AlgebraicNumber,
    k_max: u32,
    l_max: u32,
    precision: u32,
) -> Result<BoundCertificate> {
    if beta.is_zero() {
        return Err(Error::ZeroBeta);
    }
    if k_max < 1 || l_max < 2 {
        return Err(Error::Parameter(
            "search needs k_max >= 1 and l_max >= 2".into(),
        ));
    }
    let p = precision.max(MIN_PRECISION);
    let sp = p.min(128);
    let d = field_degree_ratio(alpha, beta)?;
    let log_a = hypothesis_threshold(alpha, d, p)
        .round_to(Rounding::Up, p)
        .to_rational();
    let log_b = hypothesis_threshold(beta, d, p)
        .round_to(Rounding::Up, p)
        .to_rational();

    let denom = BigInt::one() << E_GRID_BITS;
    let grid = |n: &BigInt| BigRational::new(n.clone(), denom.clone());
    let beta_abs_f = beta.abs_sq().to_f64().map(f64::sqrt).unwrap_or(f64::NAN);

    let mut best: Option<(RInt, u32, u32, BigInt)> = None;
    for k in 2..=k_max {
        for l in 2..=l_max {
            let feasible = |n: &BigInt| {
                let e = grid(n);
                let rhs = rhs_interval(d, &log_a, &log_b, k, l, &e, beta, sp)
                    .round_to(Rounding::Up, sp);
                let lhs = lhs_interval(k, l, &e, sp).round_to(Rounding::Down, sp);
                lhs.to_rational() >= rhs.to_rational()
            };

            let floor_n = &denom + 1u32;
            let peak = (k - 1) as f64 / beta_abs_f * (1u64 << E_GRID_BITS) as f64;
            let mut seed = if peak.is_finite() && peak < 1e30 {
                BigInt::from(peak.ceil() as i128).max(floor_n.clone())
            } else {
                floor_n.clone()
            };
            if !feasible(&seed) {
                seed += 1u32;
                if !feasible(&seed) {
                    continue;
                }
            }

            let mut lo = seed.clone();
            let mut hi = seed;
            let mut bounded = false;
            for _ in 0..300 {
                let next = &hi * 2u32;
                if feasible(&next) {
                    lo = next.clone();
                    hi = next;
                } else {
                    hi = next;
                    bounded = true;
                    break;
                }
            }
            if !bounded {
                return Err(Error::Infeasible(format!(
                    "margin stays positive past E = 2^300 at K={k}, L={l}; \
                     inputs out of the supported range"
                )));
            }
            while &hi - &lo > BigInt::one() {
                let mid = (&lo + &hi) / 2u32;
                if feasible(&mid) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }

            let score = lhs_interval(k, l, &grid(&lo), sp);
            let better = match &best {
                None => true,
                Some((best_score, ..)) => best_score.strictly_below(&score),
            };
            if better {
                best = Some((score, k, l, lo));
            }
        }
    }

    let Some((_, k, l, mut n)) = best else {
        return Err(Error::Infeasible(format!(
            "no (K, L, E) with K <= {k_max}, L <= {l_max} satisfies the \
             inequality for these inputs; larger caps may help"
        )));
    };
    for _ in 0..64 {
        match certify_with_heights(alpha, beta, k, l, &grid(&n), &log_a, &log_b, p) {
            Ok(cert) => return Ok(cert),
            Err(Error::Certificate(_)) if n > &denom + 1u32 => n -= 1u32,
            Err(err) => return Err(err),
        }
    }
    Err(Error::Internal(
        "search found a feasible cell but certification kept failing".into(),
    ))
}
