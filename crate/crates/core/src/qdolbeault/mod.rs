//! Quaternionic Dolbeault complexes of bundles with connections.

mod complex;
mod connection;
mod phi;
mod spectral;

pub use complex::{
    bidegree_label, extended_strong_lemma_check, flatness_check, hyperholomorphic_certificate,
    quaternionic_cohomology_check, BidegreeStrongLemma, ExtendedReport, FlatnessReport,
    QCohomologyReport, QuaternionicComplex, TOTAL_D, X_DEL_BAR_J, Y_DEL_BAR,
};
pub use connection::{
    autoduality_check, relation_check, AutodualityReport, ConnectionModel, RelationCheck, DEL,
    DEL_BAR, DEL_BAR_J,
};
pub use phi::{phi_isomorphism, PhiCertificate, PhiIsomorphism};
pub use spectral::{double_complex_spectral_sequence, PageEntry, SpectralPages};
