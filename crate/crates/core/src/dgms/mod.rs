//! Bicomplex conditions, the strong d0d1-lemma and the formality zig-zag.

mod conditions;
mod formality;

pub use conditions::{
    ddbar_condition_check, induced_differential_triviality, strong_lemma_check, Bicomplex,
    ConditionWitness, DegreeConditions, DgmsVerdict, InducedDifferential, SubspaceDims,
};
pub use formality::{
    dgms_trick, formality_zigzag, homotopy_abelian_verdict, is_algebra_chain_map, is_graded_iso,
    label_vector, same_cohomology_check, FormalityZigzag, HomotopyAbelianVerdict,
    SameCohomologyReport, ZigzagCertificate,
};
