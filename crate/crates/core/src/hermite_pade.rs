//! Hermite-Pade approximants of the exponential at rational nodes.
//!
//! For distinct nodes x_0..x_m and multiplicities n_0..n_m with sigma = sum n_l,
//! there are polynomials P_l with deg P_l < n_l, unique up to scaling, such that
//! R(z) = sum_l P_l(z) e^{x_l z} vanishes to order at least sigma - 1 at z = 0.
//! The coefficients here come from an explicit partial-fraction formula and are
//! normalized so that p_{l,k} = P_l^{(k)}(0).

use crate::error::{Error, Result};
use crate::linalg::det_rational;
use crate::numtheory::{binomial, factorial};
use num_rational::BigRational;
use num_traits::{One, Zero};

fn rat_pow(x: &BigRational, e: u32) -> BigRational {
    if e == 0 {
        return BigRational::one();
    }
    BigRational::new(x.numer().pow(e), x.denom().pow(e))
}

/// The exponent tuples (gamma_p)_{p != ell} with sum n_ell - k - 1, in
/// lexicographic order. `positions` lists the node indices the entries of
/// each tuple refer to.
pub struct MultiIndexSet {
    positions: Vec<usize>,
    tuples: Vec<Vec<u32>>,
}

impl MultiIndexSet {
    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn tuples(&self) -> &[Vec<u32>] {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }
}

fn compositions(total: u32, slots: usize) -> Vec<Vec<u32>> {
    if slots == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; slots];
    fn rec(cur: &mut Vec<u32>, pos: usize, left: u32, out: &mut Vec<Vec<u32>>) {
        if pos + 1 == cur.len() {
            cur[pos] = left;
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur[pos] = v;
            rec(cur, pos + 1, left - v, out);
        }
    }
    rec(&mut cur, 0, total, &mut out);
    out
}

/// Enumerate the index set for coefficient p_{ell,k} of a system with the
/// given multiplicities. Requires k < params[ell].
pub fn enumerate_lambda(ell: usize, k: u32, params: &[u32]) -> MultiIndexSet {
    assert!(ell < params.len());
    assert!(k < params[ell], "k must be below the multiplicity at ell");
    let positions: Vec<usize> = (0..params.len()).filter(|&p| p != ell).collect();
    let total = params[ell] - k - 1;
    MultiIndexSet {
        tuples: compositions(total, positions.len()),
        positions,
    }
}

/// A solved approximation system: nodes, multiplicities, and the derivative
/// coefficients p_{l,k} = P_l^{(k)}(0).
pub struct HPSystem {
    nodes: Vec<BigRational>,
    params: Vec<u32>,
    sigma: u64,
    coeffs: Vec<Vec<BigRational>>,
}

impl HPSystem {
    pub fn nodes(&self) -> &[BigRational] {
        &self.nodes
    }

    pub fn params(&self) -> &[u32] {
        &self.params
    }

    pub fn sigma(&self) -> u64 {
        self.sigma
    }

    /// p_{ell,k}
    pub fn coeff(&self, ell: usize, k: u32) -> &BigRational {
        &self.coeffs[ell][k as usize]
    }

    /// Coefficient of z^k in P_ell, i.e. p_{ell,k} / k!.
    pub fn polynomial_coeff(&self, ell: usize, k: u32) -> BigRational {
        &self.coeffs[ell][k as usize] / BigRational::from(factorial(k as u64))
    }

    /// Leading coefficient of P_ell (degree is exactly params[ell] - 1).
    pub fn leading_coeff(&self, ell: usize) -> BigRational {
        self.polynomial_coeff(ell, self.params[ell] - 1)
    }

    /// Coefficient of z^s in the Taylor expansion of R(z) = sum P_l(z) e^{x_l z}.
    pub fn remainder_taylor_coeff(&self, s: u64) -> BigRational {
        let mut acc = BigRational::zero();
        for (ell, x) in self.nodes.iter().enumerate() {
            let kmax = (self.params[ell] as u64 - 1).min(s);
            for k in 0..=kmax {
                let q = self.polynomial_coeff(ell, k as u32);
                acc += q * rat_pow(x, (s - k) as u32)
                    / BigRational::from(factorial(s - k));
            }
        }
        acc
    }
}

/// Solve the approximation system by the explicit formula. Nodes must be
/// pairwise distinct, at least two, with positive multiplicities.
pub fn hp_coefficients(nodes: &[BigRational], params: &[u32]) -> Result<HPSystem> {
    if nodes.len() < 2 {
        return Err(Error::Parameter("need at least two nodes".into()));
    }
    if nodes.len() != params.len() {
        return Err(Error::Parameter("one multiplicity per node".into()));
    }
    if params.iter().any(|&n| n == 0) {
        return Err(Error::Parameter("multiplicities must be positive".into()));
    }
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            if nodes[i] == nodes[j] {
                return Err(Error::Parameter(format!(
                    "coincident nodes at positions {i} and {j}"
                )));
            }
        }
    }
    let sigma: u64 = params.iter().map(|&n| n as u64).sum();
    let mut coeffs = Vec::with_capacity(nodes.len());
    for ell in 0..nodes.len() {
        let mut row = Vec::with_capacity(params[ell] as usize);
        for k in 0..params[ell] {
            let lambda = enumerate_lambda(ell, k, params);
            let mut p = BigRational::zero();
            for gamma in lambda.tuples() {
                let mut term = BigRational::one();
                for (slot, &pidx) in lambda.positions().iter().enumerate() {
                    let g = gamma[slot];
                    let np = params[pidx];
                    let binom = binomial((g + np - 1) as u64, (np - 1) as u64);
                    let diff = &nodes[ell] - &nodes[pidx];
                    term *= BigRational::from(binom) / rat_pow(&diff, g + np);
                    if g % 2 == 1 {
                        term = -term;
                    }
                }
                p += term;
            }
            row.push(p);
        }
        coeffs.push(row);
    }
    Ok(HPSystem {
        nodes: nodes.to_vec(),
        params: params.to_vec(),
        sigma,
        coeffs,
    })
}

/// Exact vanishing order of R at z = 0, found by scanning Taylor
/// coefficients. `order_to_check` must be at least sigma - 1, the order
/// the construction guarantees; scanning less proves nothing.
pub fn remainder_order(sys: &HPSystem, order_to_check: u64) -> Result<u64> {
    if order_to_check + 1 < sys.sigma {
        return Err(Error::Parameter(format!(
            "order_to_check = {} cannot certify a zero of order {}",
            order_to_check,
            sys.sigma - 1
        )));
    }
    for s in 0..=order_to_check {
        if !sys.remainder_taylor_coeff(s).is_zero() {
            return Ok(s);
        }
    }
    Err(Error::Inconclusive(format!(
        "remainder vanishes through order {order_to_check}"
    )))
}

/// Determinant of the confluent Vandermonde matrix: rows s = 0..sigma-1,
/// one column block per node with columns k = 0..n_l-1 and entries
/// C(s,k) x_l^{s-k} (zero when k > s).
pub fn generalized_vandermonde(nodes: &[BigRational], params: &[u32]) -> BigRational {
    assert_eq!(nodes.len(), params.len());
    assert!(params.iter().all(|&n| n >= 1));
    let sigma: usize = params.iter().map(|&n| n as usize).sum();
    let mut m = Vec::with_capacity(sigma);
    for s in 0..sigma {
        let mut row = Vec::with_capacity(sigma);
        for (ell, x) in nodes.iter().enumerate() {
            for k in 0..params[ell] as usize {
                if k > s {
                    row.push(BigRational::zero());
                } else {
                    let b = BigRational::from(binomial(s as u64, k as u64));
                    row.push(b * rat_pow(x, (s - k) as u32));
                }
            }
        }
        m.push(row);
    }
    det_rational(&m)
}

/// The closed form the determinant above must equal:
/// prod_{k < l} (x_l - x_k)^{n_l n_k}.
pub fn vandermonde_product_formula(nodes: &[BigRational], params: &[u32]) -> BigRational {
    let mut acc = BigRational::one();
    for l in 0..nodes.len() {
        for k in 0..l {
            let diff = &nodes[l] - &nodes[k];
            acc *= rat_pow(&diff, params[l] * params[k]);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{RInt, DEFAULT_PRECISION};
    use num_bigint::BigInt;
    use num_traits::Signed;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn int_nodes(xs: &[i64]) -> Vec<BigRational> {
        xs.iter().map(|&x| BigRational::from(BigInt::from(x))).collect()
    }

    /// oracle: solve the vanishing conditions directly. Unknowns are the
    /// monomial coefficients q_{l,k} of the P_l in block order; the rows
    /// force Taylor coefficients 0..sigma-2 of R to vanish. Returns the
    /// kernel vector of the resulting (sigma-1) x sigma matrix, computed
    /// by Gauss-Jordan elimination.
    fn solve_by_elimination(nodes: &[BigRational], params: &[u32]) -> Vec<BigRational> {
        let sigma: usize = params.iter().map(|&n| n as usize).sum();
        let mut a = Vec::with_capacity(sigma - 1);
        for s in 0..sigma - 1 {
            let mut row = Vec::with_capacity(sigma);
            for (ell, x) in nodes.iter().enumerate() {
                for k in 0..params[ell] as usize {
                    if k > s {
                        row.push(BigRational::zero());
                    } else {
                        row.push(
                            rat_pow(x, (s - k) as u32)
                                / BigRational::from(factorial((s - k) as u64)),
                        );
                    }
                }
            }
            a.push(row);
        }
        let rows = a.len();
        let cols = sigma;
        let mut pivots: Vec<usize> = Vec::new();
        let mut r = 0usize;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, pr);
            let inv = a[r][c].recip();
            for j in c..cols {
                a[r][j] = &a[r][j] * &inv;
            }
            for i in 0..rows {
                if i != r && !a[i][c].is_zero() {
                    let f = a[i][c].clone();
                    for j in c..cols {
                        let t = &a[i][j] - &f * &a[r][j];
                        a[i][j] = t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        assert_eq!(r, rows, "vanishing conditions must have full rank");
        let pivset: HashSet<usize> = pivots.iter().copied().collect();
        let free = (0..cols).find(|c| !pivset.contains(c)).unwrap();
        let mut v = vec![BigRational::zero(); cols];
        v[free] = BigRational::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -a[row][free].clone();
        }
        v
    }

    fn assert_matches_oracle(nodes: &[BigRational], params: &[u32]) {
        let sys = hp_coefficients(nodes, params).unwrap();
        let kernel = solve_by_elimination(nodes, params);
        // flatten hp solution in the same block order
        let mut flat = Vec::new();
        for ell in 0..nodes.len() {
            for k in 0..params[ell] {
                flat.push(sys.polynomial_coeff(ell, k));
            }
        }
        // kernel is determined up to scale; anchor on the largest hp entry
        let anchor = (0..flat.len())
            .max_by_key(|&i| flat[i].abs())
            .unwrap();
        assert!(!kernel[anchor].is_zero(), "kernel degenerate at anchor");
        let scale = &flat[anchor] / &kernel[anchor];
        for i in 0..flat.len() {
            assert_eq!(flat[i], &kernel[i] * &scale, "entry {i}");
        }
    }

    #[test]
    fn frozen_two_simple_nodes() {
        let sys = hp_coefficients(&int_nodes(&[0, 1]), &[1, 1]).unwrap();
        assert_eq!(sys.coeff(0, 0), &rat(-1, 1));
        assert_eq!(sys.coeff(1, 0), &rat(1, 1));
        // R(z) = e^z - 1
        assert_eq!(sys.remainder_taylor_coeff(0), rat(0, 1));
        assert_eq!(sys.remainder_taylor_coeff(1), rat(1, 1));
        assert_eq!(sys.remainder_taylor_coeff(2), rat(1, 2));
        assert_eq!(remainder_order(&sys, 5).unwrap(), 1);
    }

    #[test]
    fn frozen_three_double_nodes() {
        let sys = hp_coefficients(&int_nodes(&[0, 1, 2]), &[2, 2, 2]).unwrap();
        assert_eq!(sys.coeff(0, 1), &rat(1, 4));
        assert_eq!(sys.coeff(1, 1), &rat(1, 1));
        assert_eq!(sys.coeff(2, 1), &rat(1, 4));
        assert_eq!(remainder_order(&sys, 8).unwrap(), 5);
    }

    #[test]
    fn matches_elimination_oracle() {
        assert_matches_oracle(&int_nodes(&[0, 1]), &[2, 1]);
        assert_matches_oracle(&int_nodes(&[0, 1]), &[2, 3]);
        assert_matches_oracle(&int_nodes(&[0, 1, 2]), &[2, 2, 2]);
        assert_matches_oracle(&int_nodes(&[0, 1, 2, 3]), &[1, 2, 3, 2]);
        assert_matches_oracle(&[rat(1, 2), rat(-1, 3), rat(2, 1)], &[2, 2, 1]);
    }

    #[test]
    fn matches_oracle_on_random_rational_nodes() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..10 {
            let count = rng.gen_range(2..=4usize);
            let mut nodes = Vec::new();
            while nodes.len() < count {
                let x = rat(rng.gen_range(-6..=6), rng.gen_range(1..=4));
                if !nodes.contains(&x) {
                    nodes.push(x);
                }
            }
            let params: Vec<u32> =
                (0..count).map(|_| rng.gen_range(1..=3u32)).collect();
            assert_matches_oracle(&nodes, &params);
        }
    }

    #[test]
    fn remainder_vanishes_to_sigma_minus_one_exactly() {
        let cases: &[(&[i64], &[u32])] = &[
            (&[0, 1], &[3, 3]),
            (&[0, 2], &[2, 4]),
            (&[0, 1, 2], &[3, 1, 2]),
            (&[-1, 0, 1, 2], &[2, 2, 2, 2]),
        ];
        for (xs, params) in cases {
            let nodes = int_nodes(xs);
            let sys = hp_coefficients(&nodes, params).unwrap();
            let sigma = sys.sigma();
            assert_eq!(remainder_order(&sys, sigma + 3).unwrap(), sigma - 1);
        }
    }

    #[test]
    fn short_scan_is_rejected() {
        let sys = hp_coefficients(&int_nodes(&[0, 1]), &[3, 3]).unwrap();
        assert!(remainder_order(&sys, 3).is_err());
    }

    #[test]
    fn leading_coeff_closed_form() {
        let nodes = [rat(0, 1), rat(3, 2), rat(-1, 1)];
        let params = [3u32, 2, 2];
        let sys = hp_coefficients(&nodes, &params).unwrap();
        for ell in 0..nodes.len() {
            let mut expect = BigRational::from(factorial(params[ell] as u64 - 1)).recip();
            for p in 0..nodes.len() {
                if p != ell {
                    let diff = &nodes[ell] - &nodes[p];
                    expect /= rat_pow(&diff, params[p]);
                }
            }
            assert_eq!(sys.leading_coeff(ell), expect, "node {ell}");
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(hp_coefficients(&int_nodes(&[0]), &[2]).is_err());
        assert!(hp_coefficients(&int_nodes(&[0, 0]), &[1, 1]).is_err());
        assert!(hp_coefficients(&int_nodes(&[0, 1]), &[1]).is_err());
        assert!(hp_coefficients(&int_nodes(&[0, 1]), &[1, 0]).is_err());
    }

    #[test]
    fn lambda_enumeration_is_lexicographic() {
        let lam = enumerate_lambda(0, 0, &[3, 2, 2]);
        assert_eq!(lam.positions(), &[1, 2]);
        let expect: Vec<Vec<u32>> = vec![vec![0, 2], vec![1, 1], vec![2, 0]];
        assert_eq!(lam.tuples(), expect.as_slice());
        for t in lam.tuples() {
            assert_eq!(t.iter().sum::<u32>(), 2);
        }
    }

    #[test]
    fn lambda_cardinality_stars_and_bars() {
        for total_nodes in 2..=5usize {
            for nl in 1..=5u32 {
                for k in 0..nl {
                    let mut params = vec![2u32; total_nodes];
                    params[0] = nl;
                    let lam = enumerate_lambda(0, k, &params);
                    let t = (nl - k - 1) as u64;
                    let m = (total_nodes - 1) as u64;
                    let expect = binomial(t + m - 1, m - 1);
                    assert_eq!(BigInt::from(lam.len()), expect);
                }
            }
        }
    }

    #[test]
    fn lambda_count_bound_equal_params() {
        // |Lambda(l,k)|^2 * L <= 2 * 4^(K+L-3) for equal multiplicities K
        for big_k in 1..=8u32 {
            for big_l in 2..=8usize {
                let params = vec![big_k; big_l];
                for k in 0..big_k {
                    let lam = enumerate_lambda(0, k, &params);
                    let lhs = BigInt::from(lam.len()).pow(2) * BigInt::from(big_l);
                    let rhs = BigInt::from(2) * BigInt::from(4).pow(big_k + big_l as u32 - 3);
                    assert!(lhs <= rhs, "K={big_k} L={big_l} k={k}");
                }
            }
        }
    }

    #[test]
    fn binomial_product_bound_over_tuples() {
        // prod_p C(gamma_p + K - 1, K - 1) <= (e * min(K, L))^(K-1)
        let p = DEFAULT_PRECISION;
        let e = RInt::from_u64(1, p).exp(p);
        for big_k in 1..=6u32 {
            for big_l in 2..=6usize {
                let params = vec![big_k; big_l];
                let base = e.mul(&RInt::from_u64(big_k.min(big_l as u32) as u64, p), p);
                let bound = base.powi((big_k - 1) as u64, p);
                for k in 0..big_k {
                    let lam = enumerate_lambda(0, k, &params);
                    for gamma in lam.tuples() {
                        let mut prod = BigInt::one();
                        for &g in gamma {
                            prod *= binomial((g + big_k - 1) as u64, (big_k - 1) as u64);
                        }
                        let prod_i = RInt::from_bigint(&prod, p);
                        assert!(
                            bound.certainly_ge(&prod_i),
                            "K={big_k} L={big_l} k={k} gamma={gamma:?} prod={prod}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn vandermonde_frozen_values() {
        // single node: unit lower-triangular
        assert_eq!(
            generalized_vandermonde(&int_nodes(&[5]), &[4]),
            BigRational::one()
        );
        // two double nodes at 0, 2: (2-0)^4 = 16
        assert_eq!(
            generalized_vandermonde(&int_nodes(&[0, 2]), &[2, 2]),
            BigRational::from(BigInt::from(16))
        );
        // classical 3x3 Vandermonde at 0, 1, 3
        assert_eq!(
            generalized_vandermonde(&int_nodes(&[0, 1, 3]), &[1, 1, 1]),
            BigRational::from(BigInt::from(6))
        );
    }

    #[test]
    fn vandermonde_equals_product_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..15 {
            let count = rng.gen_range(1..=4usize);
            let mut nodes = Vec::new();
            while nodes.len() < count {
                let x = rat(rng.gen_range(-5..=5), rng.gen_range(1..=3));
                if !nodes.contains(&x) {
                    nodes.push(x);
                }
            }
            let params: Vec<u32> =
                (0..count).map(|_| rng.gen_range(1..=3u32)).collect();
            assert_eq!(
                generalized_vandermonde(&nodes, &params),
                vandermonde_product_formula(&nodes, &params)
            );
        }
    }

    #[test]
    fn vandermonde_zero_on_coincident_nodes() {
        assert_eq!(
            generalized_vandermonde(&int_nodes(&[1, 1]), &[1, 1]),
            BigRational::zero()
        );
    }

    #[test]
    fn integer_grid_orders_up_to_sigma_fourteen() {
        // nodes 0..m with mixed multiplicities, sigma <= 14
        let cases: &[&[u32]] = &[
            &[7, 7],
            &[5, 4, 5],
            &[4, 3, 4, 3],
            &[3, 3, 3, 3, 2],
            &[2, 2, 2, 2, 2, 2, 2],
        ];
        for params in cases {
            let nodes: Vec<BigRational> = (0..params.len())
                .map(|i| BigRational::from(BigInt::from(i as i64)))
                .collect();
            let sys = hp_coefficients(&nodes, params).unwrap();
            let sigma = sys.sigma();
            assert!(sigma <= 14);
            let order = remainder_order(&sys, sigma + 1).unwrap();
            assert!(order >= sigma - 1, "params {params:?}");
        }
    }
}
