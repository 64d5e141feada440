//! Exact finite-dimensional models of DGMS algebras, quaternionic Dolbeault
//! complexes and Maurer-Cartan deformation theory over the Gaussian rationals.

pub mod deformation;
pub mod dgms;
pub mod error;
pub mod graded;
pub mod linalg;
pub mod modelfile;
pub mod models;
pub mod qdolbeault;
pub mod sl2;

pub use error::{Error, Result};
