//! Exact computations around Schubert polynomials and the weak and Bruhat
//! orders of the symmetric group: principal specializations `ν_w`, raising
//! operators and their level-to-level matrices, exact determinants, and Smith
//! normal forms over the integers.

pub mod error;
pub mod exactalg;
pub mod golden;
pub mod matrix;
pub mod operators;
pub mod perm;
pub mod poly;
pub mod schubert;
pub mod verify;

#[cfg(test)]
mod oracles;

pub use error::{Error, Result};
pub use perm::{LehmerCode, Permutation, RankLevel};
pub use poly::{SparsePolynomial, UnivariatePolynomial};
