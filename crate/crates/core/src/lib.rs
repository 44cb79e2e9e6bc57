//! Signed-network appraisal dynamics: homophily- and influence-based update
//! maps, structural balance analysis, fixed-point classification, and the
//! randomized experiments that exercise them.

// Negated float comparisons below are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod balance;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod io;
pub mod matrix;

pub use balance::{
    classify_q_hbm, classify_q_ibm, faction_count, is_balanced_multi, is_socially_balanced,
    is_socially_balanced_with, isolated_components, sufficient_condition_nonvanishing, BalanceMethod,
    BalanceReport, BlockParams, Components, FactionCount, FactionPartition, FixedPointClass, Violation,
};
pub use dynamics::{
    column_spreads, contraction_rate_bound_hbm, contraction_rate_bound_ibm, hbm_memory_step, hbm_step, ibm_step,
    max_norm_monotone_check, simulate, ModelKind, SimConfig, StepOutcome, StepSummary, StopReason, Trajectory,
};
pub use error::{Error, Result};
pub use matrix::{AppraisalMatrix, GammaWitness, SignPattern, ToleranceConfig};
