//! Deformation functors of DG Lie algebras over truncated polynomial rings.

mod obstruction;
mod qa;
mod series;

pub use obstruction::{
    dgms_lift, lift_second_order, obstruction_transport, quadraticity_probe, tangent_and_obstruction,
    ObstructionEntry, ObstructionTransport, QuadraticityReport, QuadraticitySample, TangentObstruction,
};
pub use qa::{
    matrix_polynomial, series_from_orders, torus_form, torus_function, ConnectionReport, EvaluationReport,
    FirstOrderReport, LiftYReport, McSplitReport, QaDeformation, TangentReport,
};
pub use series::{
    bracket, exp_adjoint, gauge_transform, mc_check, McMode, McVerdict, OrderTerm, Series, TruncatedRing,
};
