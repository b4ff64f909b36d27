//! Search on rays with affine travel costs.
//!
//! A searcher starts at the origin of `m` half-lines and looks for a target at
//! unknown distance `D >= lambda` on an unknown ray. Each step walks out to
//! distance `x_i` on ray `r_i` and back, paying `alpha1 x + beta1` outbound and
//! `alpha2 x + beta2` inbound. The crate builds the known strategy families,
//! evaluates worst-case competitive ratios of arbitrary strategies, applies
//! the normalizing transformations and numerically checks the supporting
//! analysis.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the `*F64` aliases
//! name the common instantiation.

// `!(x > 0)` style guards are intended: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod evaluator;
pub mod model;
pub mod scalar;
pub mod strategies;
pub mod transforms;
pub mod verify;

pub use error::{Result, SearchError};
pub use evaluator::{
    affine_envelope_check, breakpoint_distances, continuation_bound, cr_step, evaluate_sequence,
    is_feasible, prefix_ratio, prev_index, simulate, worst_case_cr, EnvelopeReport,
    EvaluationReport, StepRecord,
};
pub use model::{tolerances, CostModel, SearchProblem, Step, StepSequence, Target, Tolerances};
pub use scalar::Scalar;
pub use strategies::{Branch, ClaimedCost, Optimality, StepOracle, StrategyHandle, StrategySpec};
pub use transforms::{make_monotonic, make_periodic_fully_monotonic};

pub type CostModelF64 = CostModel<f64>;
pub type SearchProblemF64 = SearchProblem<f64>;
pub type StepSequenceF64 = StepSequence<f64>;
pub type StrategyHandleF64 = StrategyHandle<f64>;
pub type StrategySpecF64 = StrategySpec<f64>;
pub type EvaluationReportF64 = EvaluationReport<f64>;
pub type TargetF64 = Target<f64>;
