//! Exact polynomial arithmetic: sparse multivariate polynomials over the
//! integers with divided differences, and dense univariate polynomials in `q`.

mod sparse;
mod univariate;

pub use sparse::{Exponents, SparsePolynomial};
pub use univariate::UnivariatePolynomial;
