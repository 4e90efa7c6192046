//! Exact scalars, multivariate polynomials, rational functions and dense
//! linear algebra over any exact field.
//!
//! The generic types are parametrized by [`Field`]; the aliases below fix the
//! coefficient field used by the geometric layers.

mod error;
mod field;
mod gaussian;
mod matrix;
mod poly;
mod ratfn;

pub use error::{AlgebraError, Result};
pub use field::{Conjugate, Field};
pub use gaussian::GaussianRational;
pub use matrix::{Matrix, Rref};
pub use poly::{gcd, Monomial, MultiPoly, PolyDisplay};
pub use ratfn::{RatFn, RatFnDisplay};

pub use num_rational::BigRational;

/// Exact rationals.
pub type Rational = BigRational;
/// Gaussian rationals `Q(i)`; real inputs simply carry a zero imaginary part.
pub type Scalar = GaussianRational;
pub type Poly = MultiPoly<Scalar>;
/// Rational functions over `Q(i)`: the coefficient field of every symbolic object.
pub type Func = RatFn<Scalar>;
pub type FuncMatrix = Matrix<Func>;
