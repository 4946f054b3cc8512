//! Numeric foundations: directed-rounding reals and intervals, exact
//! quadratic-field arithmetic and algebraic-number utilities.

pub mod algebraic;
pub mod dr;
pub mod qfield;

pub use algebraic::{field_degree_ratio, AlgebraicNumber};
pub use dr::{CInt, RInt, RealDR, Rounding, DEFAULT_PRECISION};
pub use qfield::FieldElem;
