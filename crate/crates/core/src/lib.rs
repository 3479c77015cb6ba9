//! Exact differential-form complexes on loop spaces of linear group actions.
//!
//! The crate computes, degree by degree, quotient complexes of polynomial
//! differential forms on unions of linear subspaces, the basic relative
//! forms on the loop space of a finite group or circle action, and checks
//! that these complexes resolve the sheaf of conjugation-invariant locally
//! constant functions on the loop space.

pub mod action;
pub mod algebra;
pub mod brforms;
pub mod circle;
pub mod cli;
pub mod error;
pub mod exterior;
pub mod graded;
pub mod report;
pub mod variety;

pub use algebra::{Matrix, MinimalPolynomial, Poly, Scalar};
pub use error::{Error, Result};
