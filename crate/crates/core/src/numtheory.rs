//! Arithmetic functions underpinning the bound terms: d_n = lcm(1..n), the
//! factorial quotients D_{m,n}, Chebyshev's psi, signed Stirling numbers of
//! the first kind, and exhaustive checks of the binomial estimates.

use crate::exactnum::dr::{RInt, RealDR, Rounding};
use num_bigint::BigInt;
use num_traits::One;
use std::cell::RefCell;

/// Ascending list of primes up to a fixed bound.
pub struct PrimeTable {
    bound: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn new(bound: u64) -> PrimeTable {
        let n = bound as usize;
        let mut sieve = vec![true; n + 1];
        if n >= 1 {
            sieve[0] = false;
            sieve[1] = false;
        }
        let mut p = 2usize;
        while p * p <= n {
            if sieve[p] {
                let mut q = p * p;
                while q <= n {
                    sieve[q] = false;
                    q += p;
                }
            }
            p += 1;
        }
        let primes = sieve
            .iter()
            .enumerate()
            .filter_map(|(i, &is_p)| is_p.then_some(i as u64))
            .collect();
        PrimeTable { bound, primes }
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn is_prime(&self, n: u64) -> bool {
        assert!(n <= self.bound, "prime table too small");
        self.primes.binary_search(&n).is_ok()
    }
}

pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::ZERO;
    }
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

/// Exponent of the prime p in m! (Legendre's formula).
pub fn factorial_valuation(m: u64, p: u64) -> u64 {
    assert!(p >= 2);
    let mut total = 0;
    let mut q = p;
    loop {
        total += m / q;
        match q.checked_mul(p) {
            Some(next) if next <= m => q = next,
            _ => break,
        }
    }
    total
}

/// d_n, the least common multiple of 1..n, with d_0 = d_1 = 1.
pub fn lcm_upto(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    if n < 2 {
        return acc;
    }
    for &p in PrimeTable::new(n).primes() {
        let mut q = p;
        while let Some(next) = q.checked_mul(p) {
            if next > n {
                break;
            }
            q = next;
        }
        acc *= q;
    }
    acc
}

/// D_{m,n} = m! with every prime factor <= n removed; equivalently the
/// product of p^{v_p(m!)} over primes n < p <= m.
pub fn dmn(m: u64, n: u64) -> BigInt {
    let mut acc = BigInt::one();
    if m < 2 {
        return acc;
    }
    for &p in PrimeTable::new(m).primes() {
        if p <= n {
            continue;
        }
        acc *= BigInt::from(p).pow(factorial_valuation(m, p) as u32);
    }
    acc
}

thread_local! {
    static STIRLING_ROWS: RefCell<Vec<Vec<BigInt>>> =
        RefCell::new(vec![vec![BigInt::one()]]);
}

/// Row nu of the signed Stirling numbers of the first kind:
/// s(nu, j) for j = 0..=nu, from s(nu+1, j) = s(nu, j-1) - nu*s(nu, j).
pub fn stirling_first_row(nu: u32) -> Vec<BigInt> {
    STIRLING_ROWS.with(|cell| {
        let mut rows = cell.borrow_mut();
        while rows.len() <= nu as usize {
            let prev = rows.last().unwrap();
            let n = rows.len() - 1;
            let mut row = vec![BigInt::ZERO; n + 2];
            for (j, slot) in row.iter_mut().enumerate() {
                let carry = if j >= 1 { prev.get(j - 1).cloned().unwrap_or(BigInt::ZERO) } else { BigInt::ZERO };
                let drop = prev.get(j).cloned().unwrap_or(BigInt::ZERO);
                *slot = carry - BigInt::from(n as u64) * drop;
            }
            rows.push(row);
        }
        rows[nu as usize].clone()
    })
}

/// s(nu, j); zero when j > nu.
pub fn stirling_first(nu: u32, j: u32) -> BigInt {
    if j > nu {
        return BigInt::ZERO;
    }
    stirling_first_row(nu)[j as usize].clone()
}

/// psi(x) = sum of log p over prime powers p^k <= x, equal to log d_floor(x).
pub fn chebyshev_psi(x: f64, p: u32, dir: Rounding) -> RealDR {
    assert!(x.is_finite() && x >= 0.0, "psi needs a finite non-negative argument");
    let n = x.floor() as u64;
    if n < 2 {
        return RealDR::zero(p, dir);
    }
    RInt::from_bigint(&lcm_upto(n), p).ln(p).round_to(dir, p)
}

/// Outcome of the exhaustive binomial-estimate checks: for every 0 <= k <= n,
/// C(n,k) < 2^n sqrt(2/(pi(n+1/2))) (strict, n >= 0),
/// C(n,k) <= 2^n sqrt(1/(n+1)) (n >= 0), and
/// C(n,k) <= 2^n sqrt(3/(4(n+1))) (n >= 1).
#[derive(Clone, Debug)]
pub struct BinomialBoundsReport {
    pub n_max: u64,
    pub pairs_checked: u64,
    pub strict_pi_ok: bool,
    pub sqrt_inv_ok: bool,
    pub three_quarters_ok: bool,
}

impl BinomialBoundsReport {
    pub fn all_ok(&self) -> bool {
        self.strict_pi_ok && self.sqrt_inv_ok && self.three_quarters_ok
    }
}

pub fn check_binomial_bounds(n_max: u64, p: u32) -> BinomialBoundsReport {
    let pi = RInt::pi(p);
    let mut report = BinomialBoundsReport {
        n_max,
        pairs_checked: 0,
        strict_pi_ok: true,
        sqrt_inv_ok: true,
        three_quarters_ok: true,
    };
    for n in 0..=n_max {
        let four_n = BigInt::from(4u8).pow(n as u32);
        let four_n1 = &four_n * 4;
        for k in 0..=n {
            report.pairs_checked += 1;
            let c2 = binomial(n, k).pow(2);

            // C^2 * pi * (2n+1) < 4^{n+1}, using the upper end of pi
            let lhs = RInt::from_bigint(&(&c2 * (2 * n + 1)), p).mul(&pi, p);
            if !lhs.strictly_below(&RInt::from_bigint(&four_n1, p)) {
                report.strict_pi_ok = false;
            }

            // C^2 * (n+1) <= 4^n, exactly
            if &c2 * (n + 1) > four_n {
                report.sqrt_inv_ok = false;
            }

            // C^2 * 4(n+1) <= 3 * 4^n, exactly, for n >= 1
            if n >= 1 && &c2 * (4 * (n + 1)) > &four_n * 3 {
                report.three_quarters_ok = false;
            }
        }
    }
    report
}
