#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Block shift-inverse eigensolver for dense symmetric matrices, with a
//! Richardson inner iteration and tools that predict and measure how the
//! eigenvalue gap controls its convergence rate.

pub mod error;
pub mod harness;
pub mod linalg;
pub mod rate;
pub mod solver;

pub use error::{Error, Result};
pub use linalg::{DenseSymMatrix, EigenDecomposition, Vector};
pub use rate::{ComponentTrace, RatePrediction, SpectrumSummary};
pub use solver::{IterateBlock, InnerSolver, ShiftStrategy, SolveReport, SolverConfig};
