//! Certified lower bounds for |e^beta - alpha| where alpha and beta are
//! rational or imaginary quadratic numbers.

pub mod analytic;
pub mod asymptotics;
pub mod bound_engine;
pub mod error;
pub mod exactnum;
pub mod feldman;
pub mod hermite_pade;
pub mod interp;
pub mod linalg;
pub mod numtheory;
pub mod suites;
pub mod zerolemma;

pub use error::{Error, Result};
pub use exactnum::{
    field_degree_ratio, AlgebraicNumber, CInt, FieldElem, RInt, RealDR, Rounding,
    DEFAULT_PRECISION,
};
