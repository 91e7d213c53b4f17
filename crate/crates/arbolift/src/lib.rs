//! Exact arborescence counting on weighted digraphs, permutation-voltage
//! covering graphs, and the voltage-Laplacian determinant identity that
//! connects the two.
//!
//! Everything is computed over arbitrary-precision rationals and sparse
//! multivariate polynomials, so results are exact and reproducible; there
//! is no floating point in the crate.

pub mod arborescence;
pub mod cover;
pub mod expectation;
pub mod graph;
pub mod matrix;
pub mod ring;
