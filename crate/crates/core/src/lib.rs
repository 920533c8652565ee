//! Exact arithmetic for the permutation and symmetric-difference chaos
//! models, their pairing limits, cumulants, orthogonal polynomials and the
//! path, Toeplitz and tableau models.
//!
//! Everything is generic over [`scalar::Scalar`]; the aliases below fix the
//! exact rational instance used by the harness.

pub mod algebra;
pub mod chaos;
pub mod composition;
pub mod cumulant;
pub mod error;
pub mod harness;
pub mod mirrors;
pub mod ortho;
pub mod pairing;
pub mod scalar;

pub use algebra::{alg_mul, cycle, star, trace, FinSet, GroupElement, Kind, Perm};
pub use chaos::{
    build_l, build_m, finite_trace_classical, finite_trace_free, residual_classical, residual_free,
    ScaledElement, TraceCounter,
};
pub use composition::Composition;
pub use cumulant::{
    classical_cumulant, free_cumulant, MomentFunctional, MomentTable, PairingMoments,
};
pub use error::{Error, Result};
pub use mirrors::{IntegerMatrix, LatticePath, Tableau};
pub use pairing::{Family, Pairing, SetPartition};
pub use scalar::Scalar;

/// Exact scalar.
pub type Rational = num_rational::BigRational;
pub type AlgebraElement = algebra::Element<Rational>;
pub type ModelElement = chaos::ScaledElement<Rational>;
pub type Polynomial = ortho::Poly<Rational>;

pub type AlgebraElementF64 = algebra::Element<f64>;
pub type ModelElementF64 = chaos::ScaledElement<f64>;
pub type PolynomialF64 = ortho::Poly<f64>;
