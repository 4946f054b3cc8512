//! Feldman polynomials F_nu(z) = z(z-1)...(z-nu+1)/nu!, whose coefficients
//! lambda_{j,nu} = s(nu,j)/nu! keep denominators small: the weighted sum
//! sum_j j!|lambda_{j,nu}| stays below 2^nu and d_nu^k F_nu^(u)(l) is an
//! integer for 0 <= u <= k.

use crate::numtheory::{factorial, stirling_first_row};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeldmanPoly {
    nu: u32,
    coeffs: Vec<BigRational>,
}

impl FeldmanPoly {
    pub fn nu(&self) -> u32 {
        self.nu
    }

    /// lambda_{0,nu} .. lambda_{nu,nu}.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, j: u32) -> BigRational {
        self.coeffs.get(j as usize).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, z: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }
}

pub fn feldman(nu: u32) -> FeldmanPoly {
    let fact = BigRational::from(factorial(nu as u64));
    let coeffs = stirling_first_row(nu)
        .into_iter()
        .map(|s| BigRational::from(s) / &fact)
        .collect();
    FeldmanPoly { nu, coeffs }
}

/// sum_j j! |lambda_{j,nu}|, exactly.
pub fn weighted_coeff_sum(nu: u32) -> BigRational {
    feldman(nu)
        .coeffs()
        .iter()
        .enumerate()
        .map(|(j, c)| BigRational::from(factorial(j as u64)) * c.abs())
        .sum()
}

/// F_nu^(u)(l) = sum_{i >= u} lambda_{i,nu} * i!/(i-u)! * l^{i-u}, exactly.
pub fn derivative_at_integer(nu: u32, u: u32, ell: i64) -> BigRational {
    let poly = feldman(nu);
    let mut acc = BigRational::zero();
    for i in u..=nu {
        let falling = factorial(i as u64) / factorial((i - u) as u64);
        let power = BigInt::from(ell).pow(i - u);
        acc += poly.coeff(i) * BigRational::from(falling * power);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::{binomial, lcm_upto};
    use num_traits::One;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    /// oracle: expand z(z-1)...(z-nu+1)/nu! by direct polynomial products
    fn brute_coeffs(nu: u32) -> Vec<BigRational> {
        let mut poly = vec![BigRational::one()];
        for t in 0..nu as i64 {
            let mut next = vec![BigRational::zero(); poly.len() + 1];
            for (i, c) in poly.iter().enumerate() {
                next[i + 1] += c;
                next[i] += c * BigRational::from(BigInt::from(-t));
            }
            poly = next;
        }
        let fact = BigRational::from(factorial(nu as u64));
        poly.into_iter().map(|c| c / &fact).collect()
    }

    #[test]
    fn frozen_coefficient_lists() {
        assert_eq!(feldman(0).coeffs(), &[ratio(1, 1)]);
        assert_eq!(feldman(2).coeffs(), &[ratio(0, 1), ratio(-1, 2), ratio(1, 2)]);
        assert_eq!(
            feldman(3).coeffs(),
            &[ratio(0, 1), ratio(1, 3), ratio(-1, 2), ratio(1, 6)]
        );
    }

    #[test]
    fn coefficients_match_brute_expansion() {
        for nu in 0..=15 {
            assert_eq!(feldman(nu).coeffs(), brute_coeffs(nu), "nu={nu}");
        }
    }

    #[test]
    fn leading_and_constant_coefficients() {
        for nu in 1..=20 {
            let f = feldman(nu);
            assert_eq!(f.coeff(nu), BigRational::from(factorial(nu as u64)).recip());
            assert!(f.coeff(0).is_zero());
        }
    }

    #[test]
    fn weighted_sums_frozen_and_bounded() {
        assert_eq!(weighted_coeff_sum(0), ratio(1, 1));
        assert_eq!(weighted_coeff_sum(1), ratio(1, 1));
        assert_eq!(weighted_coeff_sum(2), ratio(3, 2));
        assert_eq!(weighted_coeff_sum(3), ratio(7, 3));
        for nu in 0..=40 {
            let bound = BigRational::from(BigInt::from(2).pow(nu));
            assert!(weighted_coeff_sum(nu) <= bound, "nu={nu}");
        }
    }

    #[test]
    fn derivative_frozen_values() {
        assert_eq!(derivative_at_integer(2, 0, 3), ratio(3, 1));
        assert_eq!(derivative_at_integer(2, 1, 0), ratio(-1, 2));
        assert_eq!(derivative_at_integer(0, 0, 5), ratio(1, 1));
    }

    /// oracle: differentiate the coefficient vector u times, then Horner
    fn derivative_by_coefficient_shift(nu: u32, u: u32, ell: i64) -> BigRational {
        let mut coeffs = feldman(nu).coeffs().to_vec();
        for _ in 0..u {
            coeffs = coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from(BigInt::from(i as i64)))
                .collect();
            if coeffs.is_empty() {
                coeffs.push(BigRational::zero());
            }
        }
        let z = BigRational::from(BigInt::from(ell));
        let mut acc = BigRational::zero();
        for c in coeffs.iter().rev() {
            acc = acc * &z + c;
        }
        acc
    }

    #[test]
    fn derivative_matches_symbolic_oracle() {
        for nu in 0..=8 {
            for u in 0..=8 {
                for ell in -5..=5 {
                    assert_eq!(
                        derivative_at_integer(nu, u, ell),
                        derivative_by_coefficient_shift(nu, u, ell),
                        "nu={nu} u={u} ell={ell}"
                    );
                }
            }
        }
    }

    #[test]
    fn integrality_with_lcm_weights() {
        for nu in 0..=6u32 {
            for k in 0..=6u32 {
                let weight = BigRational::from(lcm_upto(nu as u64).pow(k));
                for u in 0..=k {
                    for ell in -6..=6 {
                        let v = &weight * derivative_at_integer(nu, u, ell);
                        assert!(v.is_integer(), "nu={nu} k={k} u={u} ell={ell}: {v}");
                    }
                }
            }
        }
    }

    #[test]
    fn values_at_naturals_are_binomials() {
        for nu in 0..=20u32 {
            let f = feldman(nu);
            for ell in 0..=20u64 {
                let v = f.eval(&BigRational::from(BigInt::from(ell)));
                assert_eq!(v, BigRational::from(binomial(ell, nu as u64)), "nu={nu} ell={ell}");
            }
        }
    }
}
