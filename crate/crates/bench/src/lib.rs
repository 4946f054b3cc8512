//! Shared fixtures for the benchmark harness.

use expdist::bound_engine::parse_ratio;
use expdist::exactnum::AlgebraicNumber;
use num_rational::BigRational;

/// A small cell that certifies quickly: alpha = 3, beta = 1/1000,
/// K = 3, L = 2, E = 2000.
pub fn feasible_cell() -> (AlgebraicNumber, AlgebraicNumber, BigRational) {
    (
        AlgebraicNumber::parse("3").unwrap(),
        AlgebraicNumber::parse("1/1000").unwrap(),
        parse_ratio("2000").unwrap(),
    )
}

/// Integer nodes 0..count as rationals.
pub fn integer_nodes(count: usize) -> Vec<BigRational> {
    (0..count as i64)
        .map(|i| parse_ratio(&i.to_string()).unwrap())
        .collect()
}
