//! Exact scalars, dense matrices and sparse multivariate polynomials.

mod matrix;
mod poly;
mod scalar;

pub use matrix::{Matrix, Rref};
pub(crate) use poly::degree_of;
pub use poly::{Exponents, Poly};
pub use scalar::{AlgebraicNumber, MinimalPolynomial, Scalar};
