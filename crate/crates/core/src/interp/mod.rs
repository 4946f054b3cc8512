//! The interpolation determinant: the (S-1) x S integer matrix whose rows
//! encode vanishing of sum_{k,l} c_{k,l} z^k e^{lz} to order S-1 at the
//! origin, its cofactor vector, heights, and the delta-derivative evaluation
//! machinery built on top of it.

pub mod bipoly;

pub use bipoly::BiPoly;

use crate::error::{Error, Result};
use crate::exactnum::{field_degree_ratio, AlgebraicNumber, FieldElem, RInt};
use crate::feldman::feldman;
use crate::hermite_pade::hp_coefficients;
use crate::linalg::minors_drop_column;
use crate::numtheory::{binomial, factorial, lcm_upto};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Entry of the order matrix at row s, column (k, l):
/// C(s,k) k! l^(s-k), zero when k > s, with 0^0 = 1.
pub fn m0_entry(s: u64, k: u64, l: u64) -> BigInt {
    if k > s {
        return BigInt::zero();
    }
    binomial(s, k) * factorial(k) * BigInt::from(l).pow((s - k) as u32)
}

/// The (S-1) x S matrix with S = K*L, rows s = 0..S-2 and columns
/// c = l*K + k for 0 <= k < K, 0 <= l < L.
pub fn build_m0(k_count: u32, l_count: u32) -> Vec<Vec<BigInt>> {
    let s_total = (k_count as u64) * (l_count as u64);
    let mut rows = Vec::with_capacity((s_total - 1) as usize);
    for s in 0..s_total.saturating_sub(1) {
        let mut row = Vec::with_capacity(s_total as usize);
        for l in 0..l_count as u64 {
            for k in 0..k_count as u64 {
                row.push(m0_entry(s, k, l));
            }
        }
        rows.push(row);
    }
    rows
}

/// The order matrix together with its cofactor vector, content, and the
/// polynomial carried by the symbolic last row.
pub struct InterpolationSystem {
    k: u32,
    l: u32,
    size: u64,
    m0: Vec<Vec<BigInt>>,
    cofactors: Vec<BigInt>,
    gcd: BigInt,
    sum_sq_primitive: BigInt,
    h_poly: BiPoly,
}

impl InterpolationSystem {
    pub fn new(k_count: u32, l_count: u32) -> Result<InterpolationSystem> {
        if k_count < 1 || l_count < 1 {
            return Err(Error::Parameter("K and L must be at least 1".into()));
        }
        let size = (k_count as u64) * (l_count as u64);
        if size < 2 {
            return Err(Error::Parameter(
                "need K*L >= 2 for a nontrivial system".into(),
            ));
        }
        let m0 = build_m0(k_count, l_count);
        let minors = minors_drop_column(&m0);
        let s_minus_1 = (size - 1) as usize;
        let cofactors: Vec<BigInt> = minors
            .into_iter()
            .enumerate()
            .map(|(c, m)| if (s_minus_1 + c) % 2 == 0 { m } else { -m })
            .collect();
        let gcd = cofactors
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if gcd.is_zero() {
            return Err(Error::Internal(
                "order matrix has rank below S-1; cofactor vector vanished".into(),
            ));
        }
        for (s, row) in m0.iter().enumerate() {
            let dot: BigInt = row
                .iter()
                .zip(&cofactors)
                .map(|(a, b)| a * b)
                .sum();
            if !dot.is_zero() {
                return Err(Error::Internal(format!(
                    "cofactor vector is not in the kernel at row {s}"
                )));
            }
        }
        let sum_sq_primitive = cofactors
            .iter()
            .map(|c| {
                let u = c / &gcd;
                &u * &u
            })
            .sum();
        let mut h_poly = BiPoly::zero();
        for (c, cof) in cofactors.iter().enumerate() {
            let k = (c as u64 % k_count as u64) as u32;
            let l = (c as u64 / k_count as u64) as u32;
            h_poly.set_coeff(k, l, BigRational::from(cof.clone()));
        }
        Ok(InterpolationSystem {
            k: k_count,
            l: l_count,
            size,
            m0,
            cofactors,
            gcd,
            sum_sq_primitive,
            h_poly,
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    /// S = K*L
    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn m0(&self) -> &[Vec<BigInt>] {
        &self.m0
    }

    /// Cofactors of the symbolic last row: (-1)^((S-1)+c) times the minor
    /// with column c removed.
    pub fn cofactors(&self) -> &[BigInt] {
        &self.cofactors
    }

    /// Content of the cofactor vector; 1/gcd is the product of the
    /// ultrametric norms of the matrix.
    pub fn gcd(&self) -> &BigInt {
        &self.gcd
    }

    /// Sum of squares of the primitive kernel vector; its square root is
    /// the height of the matrix.
    pub fn sum_sq_primitive(&self) -> &BigInt {
        &self.sum_sq_primitive
    }

    /// H(X,Y) = sum_c cofactor_c X^k Y^l (content not removed).
    pub fn h_poly(&self) -> &BiPoly {
        &self.h_poly
    }

    /// sum_c cofactor_c * delta^mu(X^k Y^l)(x, y) by the monomial closed form.
    pub fn delta_h_at(&self, mu: u32, x: &FieldElem, y: &FieldElem) -> FieldElem {
        let mut acc = FieldElem::zero();
        for (c, cof) in self.cofactors.iter().enumerate() {
            let k = (c as u64 % self.k as u64) as u32;
            let l = (c as u64 / self.k as u64) as u32;
            let term = delta_power_monomial_at(k, l, mu, x, y);
            acc = acc.add(&term.scale(&BigRational::from(cof.clone())));
        }
        acc
    }
}

/// Apply delta = d/dX + Y d/dY once.
pub fn apply_delta(p: &BiPoly) -> BiPoly {
    p.apply_delta()
}

/// delta^mu(X^k Y^l) evaluated at (x, y):
/// y^l sum_{j=0}^{min(mu,k)} C(mu,j) (k!/(k-j)!) x^(k-j) l^(mu-j),
/// with 0^0 = 1 throughout.
pub fn delta_power_monomial_at(
    k: u32,
    l: u32,
    mu: u32,
    x: &FieldElem,
    y: &FieldElem,
) -> FieldElem {
    let mut acc = FieldElem::zero();
    for j in 0..=mu.min(k) {
        let falling = factorial(k as u64) / factorial((k - j) as u64);
        let coeff = binomial(mu as u64, j as u64)
            * falling
            * BigInt::from(l).pow(mu - j);
        if coeff.is_zero() {
            continue;
        }
        let term = x.pow((k - j) as u64).scale(&BigRational::from(coeff));
        acc = acc.add(&term);
    }
    y.pow(l as u64).mul(&acc)
}

/// Check that the cofactor vector spans the kernel of the order matrix and
/// agrees, up to sign, with the primitive vector of the exponential
/// approximation system at nodes 0..L-1 with uniform multiplicity K.
pub fn m0_orthogonal(sys: &InterpolationSystem) -> Result<()> {
    if sys.l < 2 {
        return Err(Error::Parameter(
            "the dual approximation system needs at least two nodes".into(),
        ));
    }
    let nodes: Vec<BigRational> = (0..sys.l as i64)
        .map(|i| BigRational::from(BigInt::from(i)))
        .collect();
    let params = vec![sys.k; sys.l as usize];
    let hp = hp_coefficients(&nodes, &params)?;
    let mut flat: Vec<BigRational> = Vec::with_capacity(sys.size as usize);
    for l in 0..sys.l as usize {
        for k in 0..sys.k {
            flat.push(hp.polynomial_coeff(l, k));
        }
    }
    let mut denom_lcm = BigInt::one();
    for q in &flat {
        denom_lcm = denom_lcm.lcm(q.denom());
    }
    let ints: Vec<BigInt> = flat
        .iter()
        .map(|q| (q * BigRational::from(denom_lcm.clone())).to_integer())
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if content.is_zero() {
        return Err(Error::Internal("approximation vector vanished".into()));
    }
    let w: Vec<BigInt> = ints.iter().map(|v| v / &content).collect();
    let u: Vec<BigInt> = sys.cofactors.iter().map(|c| c / &sys.gcd).collect();
    let same = u == w;
    let opposite = u.iter().zip(&w).all(|(a, b)| *a == -b);
    if !(same || opposite) {
        return Err(Error::Internal(
            "cofactor vector and approximation vector are not proportional".into(),
        ));
    }
    Ok(())
}

/// Height data of the order matrix: the archimedean norm is the root of
/// the primitive sum of squares, the ultrametric product is 1/gcd.
pub struct HeightReport {
    pub sum_sq: BigInt,
    pub gcd: BigInt,
    pub height: RInt,
}

pub fn m0_height(sys: &InterpolationSystem, precision: u32) -> HeightReport {
    let height = RInt::from_bigint(&sys.sum_sq_primitive, precision).sqrt(precision);
    HeightReport {
        sum_sq: sys.sum_sq_primitive.clone(),
        gcd: sys.gcd.clone(),
        height,
    }
}

/// Result of comparing the height of the order matrix against its a priori
/// bound sqrt(6)/(16L) 2^(KL+L) D_(K-1,L-1) (sqrt(3) e d_(L-1) min(K,L) / (2 sqrt(L)))^(K-1).
pub struct Prop310Report {
    pub k: u32,
    pub l: u32,
    pub holds: bool,
    /// exact square of the height
    pub height_sq: BigInt,
    /// enclosure of the square of the bound
    pub bound_sq_lo: BigRational,
    pub bound_sq_hi: BigRational,
}

pub fn check_prop310(sys: &InterpolationSystem, precision: u32) -> Result<Prop310Report> {
    if sys.l < 2 {
        return Err(Error::Parameter("the height bound needs L >= 2".into()));
    }
    let (k, l) = (sys.k, sys.l);
    let s2 = sys.sum_sq_primitive.clone();
    // rational part of bound^2:
    // 6/(256 L^2) * 4^(KL+L) * D_(K-1,L-1)^2 * (3 d_(L-1)^2 min(K,L)^2 / (4L))^(K-1)
    let dmn_sq = {
        let d = crate::numtheory::dmn((k - 1) as u64, (l - 1) as u64);
        &d * &d
    };
    let base = BigRational::new(BigInt::from(6), BigInt::from(256) * l * l)
        * BigRational::from(BigInt::from(4).pow(k * l + l))
        * BigRational::from(dmn_sq);
    let dl = lcm_upto((l - 1) as u64);
    let min_kl = BigInt::from(k.min(l));
    let per_power = BigRational::new(
        BigInt::from(3) * &dl * &dl * &min_kl * &min_kl,
        BigInt::from(4) * l,
    );
    let mut rational_factor = base;
    for _ in 0..k - 1 {
        rational_factor *= &per_power;
    }
    if k == 1 {
        // no transcendental factor; compare exactly
        let holds = rational_factor >= BigRational::from(s2.clone());
        return Ok(Prop310Report {
            k,
            l,
            holds,
            height_sq: s2,
            bound_sq_lo: rational_factor.clone(),
            bound_sq_hi: rational_factor,
        });
    }
    let s2_rint_target = &s2;
    let mut prec = precision;
    for _ in 0..=4 {
        let e_pow = RInt::from_u64(2 * (k as u64 - 1), prec).exp(prec);
        let bound_sq = RInt::from_ratio(&rational_factor, prec).mul(&e_pow, prec);
        let s2_i = RInt::from_bigint(s2_rint_target, prec);
        if bound_sq.certainly_ge(&s2_i) {
            return Ok(Prop310Report {
                k,
                l,
                holds: true,
                height_sq: s2,
                bound_sq_lo: bound_sq.lo_rational(),
                bound_sq_hi: bound_sq.hi_rational(),
            });
        }
        if bound_sq.strictly_below(&s2_i) {
            return Ok(Prop310Report {
                k,
                l,
                holds: false,
                height_sq: s2,
                bound_sq_lo: bound_sq.lo_rational(),
                bound_sq_hi: bound_sq.hi_rational(),
            });
        }
        prec *= 2;
    }
    Err(Error::PrecisionExhausted(
        "height bound comparison undecided after precision escalation".into(),
    ))
}

/// Smallest mu with a nonvanishing delta derivative at the evaluation point,
/// together with the exact value F(beta, alpha).
#[derive(Debug)]
pub struct MuReport {
    pub mu: u32,
    pub f_value: FieldElem,
}

/// Scan mu = 0..L-2 for delta^mu H(beta, alpha) != 0, computing each value
/// twice: by the monomial closed form and by iterated differentiation of
/// the polynomial. The scan is capped at L-2; on the curve where every
/// scanned derivative vanishes, an error is returned.
pub fn find_mu(
    sys: &InterpolationSystem,
    alpha: &AlgebraicNumber,
    beta: &AlgebraicNumber,
) -> Result<MuReport> {
    if beta.is_zero() {
        return Err(Error::ZeroBeta);
    }
    if alpha.is_zero() {
        return Err(Error::ZeroAlpha);
    }
    field_degree_ratio(alpha, beta)?;
    if sys.l < 2 {
        return Err(Error::Parameter("need L >= 2 to scan derivatives".into()));
    }
    let x = beta.elem();
    let y = alpha.elem();
    let mut h_cur = sys.h_poly.clone();
    for mu in 0..=sys.l - 2 {
        let closed = sys.delta_h_at(mu, x, y);
        let by_poly = h_cur.eval(x, y);
        if closed != by_poly {
            return Err(Error::Internal(format!(
                "derivative routes disagree at mu = {mu}"
            )));
        }
        if !closed.is_zero() {
            return Ok(MuReport {
                mu,
                f_value: closed,
            });
        }
        if mu < sys.l - 2 {
            h_cur = h_cur.apply_delta();
        }
    }
    Err(Error::Internal(format!(
        "delta derivatives through {} all vanish at the evaluation point; \
         the point lies on the exceptional curve of the order-{} system",
        sys.l - 2,
        sys.size
    )))
}

/// The two integer polynomials derived from H and the resulting
/// unconditional value G.
pub struct GReport {
    pub mu: u32,
    pub f_value: FieldElem,
    /// d_mu^(K-1)/gcd times the mu-th falling-power smoothing of H
    pub g1: BiPoly,
    /// 1/gcd times delta^mu H
    pub g2: BiPoly,
    /// gcd of the cofactor vector
    pub gcd: BigInt,
    /// d_mu^(K-1)
    pub d_mu_pow: BigInt,
    /// exact square of G
    pub g_sq: BigRational,
    /// G = min(1, d_mu^(K-1)/mu!) * (1/gcd) * |F(beta, alpha)|
    pub g: RInt,
}

pub fn g_value(
    sys: &InterpolationSystem,
    alpha: &AlgebraicNumber,
    beta: &AlgebraicNumber,
    precision: u32,
) -> Result<GReport> {
    let mu_rep = find_mu(sys, alpha, beta)?;
    let mu = mu_rep.mu;
    let inv_gcd = BigRational::new(BigInt::one(), sys.gcd.clone());
    let d_mu_pow = lcm_upto(mu as u64).pow(sys.k - 1);
    let fel = feldman(mu);
    let g1 = sys
        .h_poly
        .apply_delta_poly(fel.coeffs())
        .scale(&(&inv_gcd * BigRational::from(d_mu_pow.clone())));
    let mut g2 = sys.h_poly.clone();
    for _ in 0..mu {
        g2 = g2.apply_delta();
    }
    let g2 = g2.scale(&inv_gcd);
    if !g1.has_integer_coeffs() {
        return Err(Error::Internal(
            "smoothed kernel polynomial has a non-integer coefficient".into(),
        ));
    }
    if !g2.has_integer_coeffs() {
        return Err(Error::Internal(
            "differentiated kernel polynomial has a non-integer coefficient".into(),
        ));
    }
    let x = beta.elem();
    let y = alpha.elem();
    let mu_fact = BigRational::from(factorial(mu as u64));
    let lhs = g1.eval(x, y).scale(&mu_fact);
    let rhs = mu_rep
        .f_value
        .scale(&(BigRational::from(d_mu_pow.clone()) * &inv_gcd));
    if lhs != rhs {
        return Err(Error::Internal(
            "evaluation identity between the two kernel polynomials failed".into(),
        ));
    }
    let min_factor = {
        let ratio = BigRational::from(d_mu_pow.clone()) / &mu_fact;
        if ratio < BigRational::one() {
            ratio
        } else {
            BigRational::one()
        }
    };
    let scale = &min_factor * &inv_gcd;
    let g_sq = &scale * &scale * mu_rep.f_value.abs_sq();
    let g = RInt::from_ratio(&g_sq, precision).sqrt(precision);
    Ok(GReport {
        mu,
        f_value: mu_rep.f_value,
        g1,
        g2,
        gcd: sys.gcd.clone(),
        d_mu_pow,
        g_sq,
        g,
    })
}
