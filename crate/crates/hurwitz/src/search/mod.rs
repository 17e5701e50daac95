//! Exhaustive, filterable enumeration of all degree-d rational maps over
//! `F_p` with prescribed shapes above prescribed points.

mod engine;
mod enumerate;
mod lambda;
mod mobius;
mod problem;
mod solution;

pub use engine::{
    search_all, search_with, PinMode, SearchCheckpoint, SearchOptions, SearchStats,
};
pub use enumerate::{
    enumerate_factored, side_has_plan_shape, IrreduciblePool, MonicOdometer, Pin, PieceMask,
    SideEntry, SidePlan, SlotKind, SlotPlan,
};
pub use lambda::{lambda_set, scaled_set};
pub use mobius::{MobiusFp, P1Fp};
pub use problem::{NormalizedProblem, PointSpec, SearchProblem};
pub use solution::{FFSolution, FactorWire, FpPolyWire};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("prime {p} does not exceed the maximum multiplicity {max_mult}")]
    PrimeTooSmall { p: u64, max_mult: u32 },
    #[error("checkpoint belongs to a different problem")]
    CheckpointMismatch,
    #[error("an emitted solution failed re-verification: {0}")]
    SoundnessFailure(String),
    #[error("i/o: {0}")]
    Io(String),
}
