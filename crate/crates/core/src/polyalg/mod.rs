//! Dense polynomial and small dense linear-algebra kernels.

mod common;
mod matrix;
mod poly;
mod prony_kernels;
mod roots;

pub use common::{common_roots, common_roots_with, CommonRootOptions, CommonRoots};
pub use matrix::{lstsq, nullspace, numerical_rank, svd_report, DenseMatrix, LstsqSolution, SvdReport, RANK_TOL};
pub use poly::{Polynomial, TRIM_TOL};
pub use prony_kernels::{
    hankel_recurrence, vandermonde_solve, vandermonde_solve_with, VandermondeSolution,
    CONDITION_CAP, HANKEL_RCOND, NODE_SEPARATION,
};
pub use roots::{max_matching_error, roots, roots_with};

pub(crate) use prony_kernels::confluent_entry;
