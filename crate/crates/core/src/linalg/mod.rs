//! Exact linear algebra over the Gaussian rationals.

mod matrix;
mod scalar;
mod subspace;

pub use matrix::{
    add_vectors, axpy, is_zero_vector, scale_vector, sub_vectors, unit_vector, zero_vector, Matrix,
    NoSolution, Solution, Vector,
};
pub use scalar::Scalar;
pub use subspace::{subspace_calculus, Subspace, SubspaceOp, SubspaceOutcome};
