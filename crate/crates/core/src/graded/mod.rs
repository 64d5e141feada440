//! Graded spaces, graded maps and DG (Lie) algebra structures.

mod algebra;
mod cohomology;
mod construct;
mod map;
mod space;
mod validate;

pub use algebra::{AlgebraKind, Sl2Names, SparseVec, StructuredAlgebra};
pub use cohomology::{block_image_into, block_kernel, CohomologyPresentation, DegreeCohomology};
pub use construct::{
    graded_component, graded_dims, ideal_witness, map_image, map_kernel, quotient_algebra,
    stability_witness, sub_algebra, GradedSubspace, Quotient,
};
pub use map::GradedMap;
pub use space::{GradedSpace, Witness};
pub use validate::{
    commutator_dgla, is_derivation, validate, validate_dg_algebra, validate_dgla, AxiomCheck,
    AxiomReport,
};
