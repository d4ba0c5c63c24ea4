//! Dense linear algebra used by the solver and as its ground-truth oracle.

mod jacobi;
mod lu;
mod matrix;
pub mod mmio;
mod orth;

pub use jacobi::{jacobi_eigensolve, EigenDecomposition};
pub use lu::shifted_lu_solve;
pub use matrix::{DenseSymMatrix, Vector};
pub use orth::gram_schmidt;

pub(crate) use matrix::dot;
