//! Batch re-verification of the combinatorial lemmas the bound engine
//! stands on, grouped into named suites with per-check pass counts.
//!
//! Every suite reruns a lemma over an exhaustive grid or a seeded random
//! sample and reports how many instances held. A failing count is reported,
//! never masked: the height-bound suite, for example, flags the one grid
//! cell where the stated bound is genuinely false.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactnum::FieldElem;
use crate::feldman::{derivative_at_integer, weighted_coeff_sum};
use crate::hermite_pade::{
    generalized_vandermonde, hp_coefficients, remainder_order, vandermonde_product_formula,
};
use crate::interp::{check_prop310, m0_orthogonal, BiPoly, InterpolationSystem};
use crate::linalg::det_bigint;
use crate::numtheory::{check_binomial_bounds, dmn, factorial, lcm_upto};
use crate::zerolemma::{check_zero_lemma, ZeroConfig};

/// One lemma rechecked over many instances.
#[derive(Debug, Clone)]
pub struct CheckLine {
    pub name: String,
    pub passed: u64,
    pub total: u64,
    /// Present when something failed: which instances and how.
    pub detail: Option<String>,
}

impl CheckLine {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: String,
    pub checks: Vec<CheckLine>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckLine::ok)
    }
}

pub const SUITE_NAMES: &[&str] = &[
    "feldman",
    "binomial",
    "vandermonde",
    "zerolemma",
    "heights",
    "hermite",
];

/// Knobs shared by the randomized suites.
#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub trials: u64,
    pub seed: u64,
    pub precision: u32,
}

impl Default for SuiteOptions {
    fn default() -> SuiteOptions {
        SuiteOptions {
            trials: 100,
            seed: 20240917,
            precision: 128,
        }
    }
}

pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<SuiteReport> {
    match name {
        "feldman" => Ok(feldman_suite()),
        "binomial" => Ok(binomial_suite(40, opts.precision)),
        "vandermonde" => Ok(vandermonde_suite(opts.trials.max(1), opts.seed)),
        "zerolemma" => zerolemma_suite(opts.trials.max(1), opts.seed),
        "heights" => heights_suite(5, 5, opts.precision),
        "hermite" => hermite_suite(12, opts.trials.max(1).min(50), opts.seed),
        other => Err(Error::Parameter(format!(
            "unknown suite '{other}'; available: {}",
            SUITE_NAMES.join(", ")
        ))),
    }
}

pub fn run_all(opts: &SuiteOptions) -> Result<Vec<SuiteReport>> {
    SUITE_NAMES.iter().map(|n| run_suite(n, opts)).collect()
}

fn record_failure(detail: &mut Vec<String>, entry: String) {
    if detail.len() < 8 {
        detail.push(entry);
    }
}

fn close_line(name: &str, passed: u64, total: u64, failures: Vec<String>) -> CheckLine {
    CheckLine {
        name: name.into(),
        passed,
        total,
        detail: if failures.is_empty() {
            None
        } else {
            Some(failures.join("; "))
        },
    }
}

/// Coefficient-size and integrality facts about the factorial-normalized
/// falling factorials: the weighted coefficient sum stays below 2^nu, and
/// d_nu^k times any u-th derivative at an integer is an integer for u <= k.
pub fn feldman_suite() -> SuiteReport {
    let mut sum_pass = 0u64;
    let mut sum_fail = Vec::new();
    for nu in 1..=40u32 {
        let two_nu = BigRational::from(BigInt::from(2).pow(nu));
        if weighted_coeff_sum(nu) < two_nu {
            sum_pass += 1;
        } else {
            record_failure(&mut sum_fail, format!("nu = {nu}"));
        }
    }

    let mut int_pass = 0u64;
    let mut int_total = 0u64;
    let mut int_fail = Vec::new();
    for nu in 1..=10u32 {
        let d_nu = lcm_upto(nu as u64);
        for k in 0..=10u32 {
            let d_pow = BigRational::from(d_nu.pow(k));
            for u in 0..=k {
                for ell in -12..=12i64 {
                    int_total += 1;
                    if (derivative_at_integer(nu, u, ell) * &d_pow).is_integer() {
                        int_pass += 1;
                    } else {
                        record_failure(
                            &mut int_fail,
                            format!("nu = {nu}, k = {k}, u = {u}, l = {ell}"),
                        );
                    }
                }
            }
        }
    }

    SuiteReport {
        name: "feldman".into(),
        checks: vec![
            close_line("weighted_coefficient_sum_below_2^nu", sum_pass, 40, sum_fail),
            close_line("derivative_integrality_d_nu^k", int_pass, int_total, int_fail),
        ],
    }
}

/// Central binomial estimates used by the analytic bounds, plus the
/// factorial-splitting fact behind the denominator control: m!/D_{m,n}
/// divides d_n^m.
pub fn binomial_suite(n_max: u64, precision: u32) -> SuiteReport {
    let r = check_binomial_bounds(n_max, precision);
    let flag_line = |name: &str, ok: bool| CheckLine {
        name: name.into(),
        passed: if ok { r.pairs_checked } else { 0 },
        total: r.pairs_checked,
        detail: if ok {
            None
        } else {
            Some(format!("violated somewhere in n <= {n_max}"))
        },
    };

    let mut split_pass = 0u64;
    let mut split_total = 0u64;
    let mut split_fail = Vec::new();
    for n in 2..=10u64 {
        let d_n = lcm_upto(n);
        for m in 2..=20u64 {
            split_total += 1;
            let smooth = factorial(m) / dmn(m, n);
            if (d_n.pow(m as u32) % &smooth).is_zero() {
                split_pass += 1;
            } else {
                record_failure(&mut split_fail, format!("m = {m}, n = {n}"));
            }
        }
    }

    SuiteReport {
        name: "binomial".into(),
        checks: vec![
            flag_line("strict_bound_with_pi", r.strict_pi_ok),
            flag_line("sqrt_inverse_bound", r.sqrt_inv_ok),
            flag_line("three_quarters_bound", r.three_quarters_ok),
            close_line(
                "factorial_split_divides_lcm_power",
                split_pass,
                split_total,
                split_fail,
            ),
        ],
    }
}

fn rand_ratio(rng: &mut ChaCha8Rng, num_abs: i64, den_max: i64) -> BigRational {
    BigRational::new(
        BigInt::from(rng.gen_range(-num_abs..=num_abs)),
        BigInt::from(rng.gen_range(1..=den_max)),
    )
}

fn distinct_ratios(rng: &mut ChaCha8Rng, count: usize, num_abs: i64, den_max: i64) -> Vec<BigRational> {
    let mut out: Vec<BigRational> = Vec::with_capacity(count);
    while out.len() < count {
        let q = rand_ratio(rng, num_abs, den_max);
        if !out.contains(&q) {
            out.push(q);
        }
    }
    out
}

/// Confluent Vandermonde determinants against the closed product formula,
/// exactly, on seeded random node systems.
pub fn vandermonde_suite(instances: u64, seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x76616e64);
    let mut pass = 0u64;
    let mut fail = Vec::new();
    for i in 0..instances {
        let t = rng.gen_range(2..=4usize);
        let mut params: Vec<u32>;
        loop {
            params = (0..t).map(|_| rng.gen_range(1..=4u32)).collect();
            if params.iter().map(|&n| n as u64).sum::<u64>() <= 12 {
                break;
            }
        }
        let nodes = distinct_ratios(&mut rng, t, 9, 4);
        let det = generalized_vandermonde(&nodes, &params);
        if det == vandermonde_product_formula(&nodes, &params) && !det.is_zero() {
            pass += 1;
        } else {
            record_failure(&mut fail, format!("instance {i}"));
        }
    }
    SuiteReport {
        name: "vandermonde".into(),
        checks: vec![close_line("product_formula", pass, instances, fail)],
    }
}

fn rand_field_elem(rng: &mut ChaCha8Rng, gaussian: bool, nonzero: bool) -> FieldElem {
    loop {
        let a = rand_ratio(rng, 6, 3);
        let e = if gaussian && rng.gen_bool(0.7) {
            let b = rand_ratio(rng, 6, 3);
            FieldElem::quad(a, b, BigInt::one())
        } else {
            FieldElem::from_rational(a)
        };
        if !(nonzero && e.is_zero()) {
            return e;
        }
    }
}

fn rand_bipoly(rng: &mut ChaCha8Rng, deg_x: u32, deg_y: u32) -> BiPoly {
    let mut p = BiPoly::zero();
    for i in 0..=deg_x {
        for j in 0..=deg_y {
            if rng.gen_bool(0.5) {
                p.set_coeff(i, j, rand_ratio(rng, 9, 3));
            }
        }
    }
    let mut top = BigRational::zero();
    while top.is_zero() {
        top = rand_ratio(rng, 9, 3);
    }
    p.set_coeff(deg_x, deg_y, top);
    p
}

/// Total vanishing order along delta = d/dX + Y d/dY never exceeds
/// (D0 + M)(D1 + 1) - M, checked on seeded random polynomials and points;
/// plus the family (Y-1)^{D1} at points with second coordinate 1, which
/// meets the threshold with equality.
pub fn zerolemma_suite(trials: u64, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7a65726f);
    let mut pass = 0u64;
    let mut fail = Vec::new();
    for i in 0..trials {
        let deg_x = rng.gen_range(0..=4u32);
        let deg_y = rng.gen_range(0..=3u32);
        let poly = rand_bipoly(&mut rng, deg_x, deg_y);
        let gaussian = rng.gen_bool(0.5);
        let m = rng.gen_range(1..=3usize);
        let mut zetas: Vec<FieldElem> = Vec::with_capacity(m);
        while zetas.len() < m {
            let z = rand_field_elem(&mut rng, gaussian, false);
            if !zetas.contains(&z) {
                zetas.push(z);
            }
        }
        let points: Vec<(FieldElem, FieldElem)> = zetas
            .into_iter()
            .map(|z| (z, rand_field_elem(&mut rng, gaussian, true)))
            .collect();
        let verdict = check_zero_lemma(&ZeroConfig {
            poly,
            points,
            deg_x,
            deg_y,
        })?;
        if verdict.within {
            pass += 1;
        } else {
            record_failure(
                &mut fail,
                format!(
                    "trial {i}: total order {} exceeds threshold {}",
                    verdict.total, verdict.threshold
                ),
            );
        }
    }

    let mut eq_pass = 0u64;
    let mut eq_total = 0u64;
    let mut eq_fail = Vec::new();
    let y_minus_1 = {
        let mut p = BiPoly::monomial(0, 1, BigRational::one());
        p.set_coeff(0, 0, -BigRational::one());
        p
    };
    for d1 in 1..=6u32 {
        let mut poly = BiPoly::constant(BigRational::one());
        for _ in 0..d1 {
            poly = poly.mul(&y_minus_1);
        }
        for m in 1..=6usize {
            eq_total += 1;
            let points: Vec<(FieldElem, FieldElem)> = (0..m)
                .map(|k| (FieldElem::from_i64(k as i64), FieldElem::one()))
                .collect();
            let verdict = check_zero_lemma(&ZeroConfig {
                poly: poly.clone(),
                points,
                deg_x: 0,
                deg_y: d1,
            })?;
            if verdict.within && verdict.total == verdict.threshold {
                eq_pass += 1;
            } else {
                record_failure(
                    &mut eq_fail,
                    format!(
                        "D1 = {d1}, M = {m}: total {} vs threshold {}",
                        verdict.total, verdict.threshold
                    ),
                );
            }
        }
    }

    Ok(SuiteReport {
        name: "zerolemma".into(),
        checks: vec![
            close_line("random_threshold", pass, trials, fail),
            close_line("saturating_family_meets_threshold", eq_pass, eq_total, eq_fail),
        ],
    })
}

/// Order-matrix facts on a (K, L) grid: the cofactor vector matches the
/// dual approximation vector, the Gram determinant equals the sum of
/// squared maximal minors, and the a priori height bound is compared cell
/// by cell. The height bound is genuinely false at (K, L) = (1, 2) and the
/// report says so rather than hiding the cell.
pub fn heights_suite(k_max: u32, l_max: u32, precision: u32) -> Result<SuiteReport> {
    let mut dual_pass = 0u64;
    let mut dual_total = 0u64;
    let mut dual_fail = Vec::new();
    let mut gram_pass = 0u64;
    let mut gram_total = 0u64;
    let mut gram_fail = Vec::new();
    let mut bound_pass = 0u64;
    let mut bound_total = 0u64;
    let mut bound_fail = Vec::new();

    for k in 1..=k_max {
        for l in 2..=l_max {
            let sys = InterpolationSystem::new(k, l)?;

            if k <= 4 {
                dual_total += 1;
                match m0_orthogonal(&sys) {
                    Ok(()) => dual_pass += 1,
                    Err(e) => record_failure(&mut dual_fail, format!("(K,L) = ({k},{l}): {e}")),
                }

                gram_total += 1;
                let m0 = sys.m0();
                let rows = m0.len();
                let gram: Vec<Vec<BigInt>> = (0..rows)
                    .map(|i| {
                        (0..rows)
                            .map(|j| {
                                m0[i].iter()
                                    .zip(&m0[j])
                                    .map(|(a, b)| a * b)
                                    .sum::<BigInt>()
                            })
                            .collect()
                    })
                    .collect();
                let minor_sq: BigInt = sys.cofactors().iter().map(|c| c * c).sum();
                if det_bigint(&gram) == minor_sq {
                    gram_pass += 1;
                } else {
                    record_failure(&mut gram_fail, format!("(K,L) = ({k},{l})"));
                }
            }

            bound_total += 1;
            match check_prop310(&sys, precision) {
                Ok(r) if r.holds => bound_pass += 1,
                Ok(r) => record_failure(
                    &mut bound_fail,
                    format!(
                        "(K,L) = ({k},{l}): height^2 = {} exceeds bound^2 <= {}",
                        r.height_sq, r.bound_sq_hi
                    ),
                ),
                Err(e) => record_failure(&mut bound_fail, format!("(K,L) = ({k},{l}): {e}")),
            }
        }
    }

    Ok(SuiteReport {
        name: "heights".into(),
        checks: vec![
            close_line("kernel_duality", dual_pass, dual_total, dual_fail),
            close_line("gram_equals_sum_of_minor_squares", gram_pass, gram_total, gram_fail),
            close_line("height_bound_grid", bound_pass, bound_total, bound_fail),
        ],
    })
}

fn compositions_positive(total: u32, slots: usize) -> Vec<Vec<u32>> {
    fn rec(cur: &mut Vec<u32>, pos: usize, left: u32, out: &mut Vec<Vec<u32>>) {
        let slots_after = cur.len() - pos - 1;
        if pos + 1 == cur.len() {
            cur[pos] = left;
            out.push(cur.clone());
            return;
        }
        for v in 1..=(left - slots_after as u32) {
            cur[pos] = v;
            rec(cur, pos + 1, left - v, out);
        }
    }
    if slots == 0 || (total as usize) < slots {
        return Vec::new();
    }
    let mut out = Vec::new();
    rec(&mut vec![0; slots], 0, total, &mut out);
    out
}

/// The remainder sum_l P_l(z) e^{x_l z} vanishes to order exactly sigma - 1
/// at the origin: exhaustively for integer nodes 0..t-1 with sigma up to the
/// cap, and on seeded random rational node systems.
pub fn hermite_suite(sigma_cap: u32, random_instances: u64, seed: u64) -> Result<SuiteReport> {
    let mut canon_pass = 0u64;
    let mut canon_total = 0u64;
    let mut canon_fail = Vec::new();
    for t in 2..=sigma_cap as usize {
        let nodes: Vec<BigRational> = (0..t as i64)
            .map(|i| BigRational::from(BigInt::from(i)))
            .collect();
        for sigma in t as u32..=sigma_cap {
            for params in compositions_positive(sigma, t) {
                canon_total += 1;
                let sys = hp_coefficients(&nodes, &params)?;
                match remainder_order(&sys, sigma as u64 - 1) {
                    Ok(ord) if ord == sigma as u64 - 1 => canon_pass += 1,
                    outcome => record_failure(
                        &mut canon_fail,
                        format!("nodes 0..{t}, params {params:?}: {outcome:?}"),
                    ),
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x68657270);
    let mut rand_pass = 0u64;
    let mut rand_fail = Vec::new();
    for i in 0..random_instances {
        let t = rng.gen_range(2..=4usize);
        let mut params: Vec<u32>;
        loop {
            params = (0..t).map(|_| rng.gen_range(1..=4u32)).collect();
            if params.iter().map(|&n| n as u64).sum::<u64>() <= 12 {
                break;
            }
        }
        let sigma: u64 = params.iter().map(|&n| n as u64).sum();
        let nodes = distinct_ratios(&mut rng, t, 6, 3);
        let sys = hp_coefficients(&nodes, &params)?;
        match remainder_order(&sys, sigma - 1) {
            Ok(ord) if ord == sigma - 1 => rand_pass += 1,
            outcome => record_failure(&mut rand_fail, format!("instance {i}: {outcome:?}")),
        }
    }

    Ok(SuiteReport {
        name: "hermite".into(),
        checks: vec![
            close_line("canonical_nodes_exact_order", canon_pass, canon_total, canon_fail),
            close_line("random_nodes_exact_order", rand_pass, random_instances, rand_fail),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_clean_suite_passes() {
        let opts = SuiteOptions {
            trials: 40,
            ..SuiteOptions::default()
        };
        for name in ["feldman", "binomial", "vandermonde", "zerolemma", "hermite"] {
            let report = run_suite(name, &opts).unwrap();
            assert!(
                report.all_passed(),
                "suite {name} failed: {:?}",
                report.checks
            );
            assert!(report.checks.iter().all(|c| c.total > 0));
        }
    }

    #[test]
    fn heights_suite_flags_the_known_bad_cell_only() {
        let report = heights_suite(5, 5, 128).unwrap();
        let by_name = |n: &str| report.checks.iter().find(|c| c.name == n).unwrap();
        assert!(by_name("kernel_duality").ok());
        assert!(by_name("gram_equals_sum_of_minor_squares").ok());
        let grid = by_name("height_bound_grid");
        assert_eq!(grid.total - grid.passed, 1);
        let detail = grid.detail.as_deref().unwrap();
        assert!(detail.contains("(1,2)"), "unexpected detail: {detail}");
        assert!(detail.contains("height^2 = 2"), "unexpected detail: {detail}");
        assert!(!report.all_passed());
    }

    #[test]
    fn suite_dispatch_covers_the_catalog_and_rejects_strays() {
        let opts = SuiteOptions {
            trials: 5,
            ..SuiteOptions::default()
        };
        for name in SUITE_NAMES {
            assert!(run_suite(name, &opts).is_ok(), "suite {name} errored");
        }
        assert!(matches!(
            run_suite("nonesuch", &opts),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn zero_lemma_saturation_is_tight_at_scale() {
        let report = zerolemma_suite(1, 7).unwrap();
        let line = report
            .checks
            .iter()
            .find(|c| c.name == "saturating_family_meets_threshold")
            .unwrap();
        assert_eq!(line.passed, 36);
        assert_eq!(line.total, 36);
    }
}
