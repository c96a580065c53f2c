//! Constant-coefficient first-order PDEs, their logarithmic transform,
//! dispersion relations and residual evaluation.

pub mod action;
pub mod jet;
pub mod residual;
pub mod spec;
pub mod transform;

pub use action::{action_from_wavefunction, unwrapped_phase, wavefunction_from_action};
pub use jet::{sample, sample_stack, AffineField, AnalyticField, ExpField, FieldStack, Jet, SumField};
pub use residual::{
    decomposition_check, decomposition_field, residual_linear, residual_linear_field, residual_nonlinear,
    residual_nonlinear_field, DecompositionCheck, DecompositionSummary,
};
pub use spec::{Form, LinearPdeSpec, PdeSpec, PdeTerm};
pub use transform::{dispersion_quadratic, linearize, log_transform, quadratic_matrix, DispersionQuadratic};
