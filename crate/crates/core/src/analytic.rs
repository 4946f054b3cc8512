//! Analytic side of the determinant method: derivative values of the
//! auxiliary functions z^k e^(lz), the perturbation weights w_(k,l), the
//! summation envelope N, a Schwarz-lemma transfer bound, and high-precision
//! evaluation of the bordered determinant D(z) for cross-checking.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{field_degree_ratio, AlgebraicNumber, CInt, FieldElem, RInt, RealDR, Rounding};
use crate::interp::InterpolationSystem;
use crate::numtheory::{binomial, factorial};

/// Shared inputs of the analytic estimates: the matrix dimensions K, L, the
/// derivative order mu, the radius E > 1, the pair (alpha, beta), and an
/// enclosure of eps = |exp(beta) - alpha|.
pub struct AnalyticParams {
    k: u32,
    l: u32,
    mu: u32,
    e: BigRational,
    alpha: AlgebraicNumber,
    beta: AlgebraicNumber,
    eps: RInt,
}

impl AnalyticParams {
    pub fn new(
        k: u32,
        l: u32,
        mu: u32,
        e: BigRational,
        alpha: AlgebraicNumber,
        beta: AlgebraicNumber,
        precision: u32,
    ) -> Result<AnalyticParams> {
        if k < 1 {
            return Err(Error::Parameter("K must be at least 1".into()));
        }
        if l < 2 {
            return Err(Error::Parameter("L must be at least 2".into()));
        }
        if e <= BigRational::one() {
            return Err(Error::Parameter("the radius E must be greater than 1".into()));
        }
        field_degree_ratio(&alpha, &beta)?;
        let eps = eps_interval(&alpha, &beta, precision)?;
        Ok(AnalyticParams { k, l, mu, e, alpha, beta, eps })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn mu(&self) -> u32 {
        self.mu
    }

    pub fn e_ratio(&self) -> &BigRational {
        &self.e
    }

    pub fn alpha(&self) -> &AlgebraicNumber {
        &self.alpha
    }

    pub fn beta(&self) -> &AlgebraicNumber {
        &self.beta
    }

    /// Enclosure of |exp(beta) - alpha|, strictly positive.
    pub fn eps(&self) -> &RInt {
        &self.eps
    }
}

/// Enclosure of |exp(beta) - alpha|, escalating the working precision until
/// the interval excludes zero.
///
/// alpha = exp(beta) is impossible for the supported inputs when beta != 0,
/// but an enclosure at fixed precision may still straddle zero when alpha
/// approximates exp(beta) extremely well; each escalation doubles the
/// precision, giving up after four doublings.
pub fn eps_interval(alpha: &AlgebraicNumber, beta: &AlgebraicNumber, precision: u32) -> Result<RInt> {
    let mut p = precision.max(64);
    for _ in 0..=4 {
        let expb = beta.embed(p).exp(p);
        let eps = expb.sub(&alpha.embed(p), p).abs(p);
        if !eps.contains_zero() {
            return Ok(eps);
        }
        p *= 2;
    }
    Err(Error::PrecisionExhausted(format!(
        "|exp(beta) - alpha| cannot be separated from zero at {} bits",
        p / 2
    )))
}

/// Value of the mu-th derivative of z^k e^(lz) at z:
/// e^(lz) * sum_j C(mu,j) k!/(k-j)! z^(k-j) l^(mu-j), with 0^0 = 1.
pub fn phi_mu_at(k: u32, ell: u32, mu: u32, z: &CInt, p: u32) -> CInt {
    let mut sum = CInt::zero(p);
    for j in 0..=mu.min(k) {
        let coef = binomial(mu as u64, j as u64)
            * (factorial(k as u64) / factorial((k - j) as u64))
            * BigInt::from(ell).pow(mu - j);
        if coef.is_zero() {
            continue;
        }
        let term = z.powi((k - j) as u64, p).scale(&RInt::from_bigint(&coef, p), p);
        sum = sum.add(&term, p);
    }
    let elz = z.scale(&RInt::from_u64(ell as u64, p), p).exp(p);
    elz.mul(&sum, p)
}

fn w_weight_core(
    k: u32,
    ell: u32,
    mu: u32,
    alpha: &AlgebraicNumber,
    beta: &AlgebraicNumber,
    eps: &RInt,
    p: u32,
) -> Result<CInt> {
    if ell == 0 {
        return Ok(CInt::zero(p));
    }
    // The inner sum is exact in the field generated by beta.
    let mut inner = FieldElem::zero();
    for j in 0..=mu.min(k) {
        let coef = binomial(mu as u64, j as u64)
            * (factorial(k as u64) / factorial((k - j) as u64))
            * BigInt::from(ell).pow(mu - j);
        if coef.is_zero() {
            continue;
        }
        let term = beta.elem().pow((k - j) as u64).scale(&BigRational::from(coef));
        inner = inner.add(&term);
    }
    let alpha_l = alpha.elem().pow(ell as u64).embed(p);
    let exp_bl = beta
        .embed(p)
        .scale(&RInt::from_u64(ell as u64, p), p)
        .exp(p);
    let w = alpha_l
        .sub(&exp_bl, p)
        .mul(&inner.embed(p), p)
        .div_real(eps, p);

    // |w| <= l (e^|beta| + eps)^l k! (l+1)^mu; only a definite violation of
    // the enclosure is reported, so low precision cannot raise false alarms.
    let envelope = beta
        .elem()
        .abs_interval(p)
        .exp(p)
        .add(eps, p)
        .powi(ell as u64, p)
        .scale_u64(ell as u64, p)
        .mul(&RInt::from_bigint(&factorial(k as u64), p), p)
        .mul(&RInt::from_u64((ell + 1) as u64, p).powi(mu as u64, p), p);
    if envelope.strictly_below(&w.abs(p)) {
        return Err(Error::Internal(format!(
            "weight at (k, l) = ({k}, {ell}) exceeds its envelope"
        )));
    }
    Ok(w)
}

/// The weight w_(k,l) = (alpha^l - e^(beta l)) / |e^beta - alpha| *
/// sum_j C(mu,j) k!/(k-j)! beta^(k-j) l^(mu-j).
///
/// Only the modulus of w_(k,l) enters any bound; the unimodular prefactor is
/// evaluated literally.
pub fn w_weight(
    k: u32,
    ell: u32,
    mu: u32,
    alpha: &AlgebraicNumber,
    beta: &AlgebraicNumber,
    p: u32,
) -> Result<CInt> {
    let eps = eps_interval(alpha, beta, p)?;
    w_weight_core(k, ell, mu, alpha, beta, &eps, p)
}

fn big_n_enclosure(params: &AnalyticParams, p: u32) -> RInt {
    let l = params.l as u64;
    let beta_abs = params.beta.elem().abs_interval(p);
    let growth = RInt::from_ratio(&params.e, p).mul(&beta_abs, p).scale_u64(l, p);
    let base = beta_abs.exp(p).add(&params.eps, p);
    let weight_side = RInt::from_u64(l - 1, p)
        .ln(p)
        .add(&base.ln(p).scale_u64(l - 1, p), p);
    growth
        .max(&weight_side)
        .add(&RInt::from_bigint(&factorial((params.k - 1) as u64), p).ln(p), p)
        .add(
            &RInt::from_u64(l + 1, p).ln(p).scale_u64((params.mu + 1) as u64, p),
            p,
        )
        .add(&RInt::ln2(p), p)
}

/// The envelope N = max{E|beta|L, log(L-1) + (L-1) log(e^|beta| + eps)}
/// + log((K-1)!) + (mu+1) log(L+1) + log(2), rounded up.
///
/// Both weighted sums it must dominate, sum |w_(k,l)| and the sup over
/// |z| = E of sum |Phi^(mu)_(k,l)(z beta)|, are sampled on a 64-point circle
/// as a sanity check with a safety factor 2; the closed form alone carries
/// the certificate, the sampling only guards against implementation faults.
pub fn big_n(params: &AnalyticParams, p: u32) -> Result<RealDR> {
    let n = big_n_enclosure(params, p);
    let threshold = n.exp(p).scale_u64(2, p);

    let mut w_sum = RInt::zero(p);
    for ell in 0..params.l {
        for k in 0..params.k {
            let w = w_weight_core(k, ell, params.mu, &params.alpha, &params.beta, &params.eps, p)?;
            w_sum = w_sum.add(&w.abs(p), p);
        }
    }
    if threshold.strictly_below(&w_sum) {
        return Err(Error::Internal(
            "the weight sum escapes the closed-form envelope".into(),
        ));
    }

    let e_r = RInt::from_ratio(&params.e, p);
    let beta_c = params.beta.embed(p);
    for t in 0..64u64 {
        let theta = RInt::pi(p).scale_u64(t, p).div(&RInt::from_u64(32, p), p);
        let z = CInt { re: e_r.mul(&theta.cos(p), p), im: e_r.mul(&theta.sin(p), p) };
        let zb = z.mul(&beta_c, p);
        let mut phi_sum = RInt::zero(p);
        for ell in 0..params.l {
            for k in 0..params.k {
                phi_sum = phi_sum.add(&phi_mu_at(k, ell, params.mu, &zb, p).abs(p), p);
            }
        }
        if threshold.strictly_below(&phi_sum) {
            return Err(Error::Internal(
                "a sampled derivative sum escapes the closed-form envelope".into(),
            ));
        }
    }

    Ok(n.round_to(Rounding::Up, p))
}

/// Transfer bound for a function with a zero of order at least T at the
/// origin: sup on |z| = r is at most (r/R)^T times sup on |z| = R, for
/// 0 < r <= R. Returns (r/R)^T * sup_R rounded up.
pub fn schwarz_bound(t: u64, r: &RealDR, big_r: &RealDR, sup_r: &RealDR) -> Result<RealDR> {
    let r_q = r.to_rational();
    let big_q = big_r.to_rational();
    if r_q <= BigRational::zero() {
        return Err(Error::Parameter("the inner radius must be positive".into()));
    }
    if r_q > big_q {
        return Err(Error::Parameter(
            "the inner radius must not exceed the outer radius".into(),
        ));
    }
    if sup_r.is_negative() {
        return Err(Error::Parameter("the sup on the outer circle must be nonnegative".into()));
    }
    let p = r.precision().max(big_r.precision()).max(sup_r.precision());
    let ratio = r.div(big_r, Rounding::Up);
    let mut acc = RealDR::from_bigint(&BigInt::one(), p, Rounding::Up);
    for _ in 0..t {
        acc = acc.mul(&ratio, Rounding::Up);
    }
    Ok(acc.mul(sup_r, Rounding::Up))
}

/// Upper bound for log |D(1)|, valid when eps < E^(-KL):
/// -(KL - mu - 1) log E + N + log |M0| + log 2, rounded up, where |M0| is
/// the Euclidean norm of the cofactor vector (not its primitive part).
pub fn det_upper_bound(
    params: &AnalyticParams,
    sys: &InterpolationSystem,
    p: u32,
) -> Result<RealDR> {
    if sys.k() != params.k || sys.l() != params.l {
        return Err(Error::Parameter("the matrix dimensions do not match".into()));
    }
    let s = params.k as u64 * params.l as u64;
    if params.mu as u64 >= s {
        return Err(Error::Parameter(
            "the derivative order must stay below K*L".into(),
        ));
    }
    let e_pow = BigRational::new(
        params.e.numer().pow(s as u32),
        params.e.denom().pow(s as u32),
    );
    if params.eps.hi_rational() * e_pow >= BigRational::one() {
        return Err(Error::Parameter(
            "the determinant bound needs |exp(beta) - alpha| < E^(-KL)".into(),
        ));
    }
    let n = big_n_enclosure(params, p);
    let ln_e = RInt::from_ratio(&params.e, p).ln(p);
    let raw_sum_sq: BigInt = sys.cofactors().iter().map(|c| c * c).sum();
    let m0_norm_ln = RInt::from_bigint(&raw_sum_sq, p).sqrt(p).ln(p);
    let bound = n
        .sub(&ln_e.scale_u64(s - 1 - params.mu as u64, p), p)
        .add(&m0_norm_ln, p)
        .add(&RInt::ln2(p), p);
    Ok(bound.round_to(Rounding::Up, p))
}

fn check_dims(params: &AnalyticParams, sys: &InterpolationSystem) -> Result<()> {
    if sys.k() != params.k || sys.l() != params.l {
        return Err(Error::Parameter("the matrix dimensions do not match".into()));
    }
    Ok(())
}

/// The unperturbed part D0(z): cofactor expansion of the order matrix
/// bordered by the row Phi^(mu)_(k,l)(beta z).
pub fn numeric_det0(
    params: &AnalyticParams,
    sys: &InterpolationSystem,
    z: &CInt,
    p: u32,
) -> Result<CInt> {
    check_dims(params, sys)?;
    let bz = params.beta.embed(p).mul(z, p);
    let mut acc = CInt::zero(p);
    for (c, cof) in sys.cofactors().iter().enumerate() {
        if cof.is_zero() {
            continue;
        }
        let k = (c as u32) % params.k;
        let ell = (c as u32) / params.k;
        let phi = phi_mu_at(k, ell, params.mu, &bz, p);
        acc = acc.add(&phi.scale(&RInt::from_bigint(cof, p), p), p);
    }
    Ok(acc)
}

/// The perturbation part D1: cofactor expansion against the constant row
/// w_(k,l); it does not depend on z.
pub fn numeric_det1(params: &AnalyticParams, sys: &InterpolationSystem, p: u32) -> Result<CInt> {
    check_dims(params, sys)?;
    let mut acc = CInt::zero(p);
    for (c, cof) in sys.cofactors().iter().enumerate() {
        if cof.is_zero() {
            continue;
        }
        let k = (c as u32) % params.k;
        let ell = (c as u32) / params.k;
        let w = w_weight_core(k, ell, params.mu, &params.alpha, &params.beta, &params.eps, p)?;
        acc = acc.add(&w.scale(&RInt::from_bigint(cof, p), p), p);
    }
    Ok(acc)
}

/// The bordered determinant D(z) = D0(z) + eps * D1; at z = 1 its value
/// equals the exact polynomial value delta^mu(H)(beta, alpha).
pub fn numeric_det(
    params: &AnalyticParams,
    sys: &InterpolationSystem,
    z: &CInt,
    p: u32,
) -> Result<CInt> {
    if p < 128 {
        return Err(Error::Parameter(
            "the determinant evaluation needs at least 128 bits".into(),
        ));
    }
    let d0 = numeric_det0(params, sys, z, p)?;
    let d1 = numeric_det1(params, sys, p)?;
    Ok(d0.add(&d1.scale(&params.eps, p), p))
}
