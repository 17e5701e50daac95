//! Hensel lifting of a coherent finite-field solution to `Z/p^N` with
//! quadratic precision growth.

mod hensel;
mod matrix;
mod normalize;
mod ops;
mod system;

pub use hensel::{hensel_step, lift_solution};
pub use matrix::ZpMatrix;
pub use normalize::normalize;
pub use ops::{coherence_residual, jacobian, residual_vector};
pub use system::{CoherentSystem, PointZpN, ResidueVector, SlotState, SplitRecord, WSlot};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LiftError {
    #[error("solution cannot be normalized: {0}")]
    NotNormalizable(String),
    #[error("system is not in normalized form")]
    NotNormalized,
    #[error("Jacobian is singular modulo p")]
    SingularJacobian,
    #[error("unknown count {unknowns} does not match equation count {equations}")]
    DimensionMismatch { unknowns: usize, equations: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("internal: {0}")]
    Internal(String),
}
