//! Exact solvers for max-min risk quantification under per-requirement
//! criticality thresholds.
//!
//! Likelihood and severity are integer levels on `[1, 6]`, quantifications are
//! integers over a mode-dependent denominator (12, 36 or 216) and reference
//! criticalities are integers over 100. Every acceptability decision is made by
//! cross-multiplication, so nothing on the decision path rounds.
//!
//! The crate is `no_std` and only needs `alloc`. Wall-clock deadlines, file
//! formats and the command line live in the `misro` companion crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod achievable;
mod criticality;
mod error;
mod generate;
mod mitigation;
mod mode;
mod model;
pub mod oracle;
mod pairs;
mod side;
pub mod solvers;
mod validate;

pub use self::{
    achievable::{achievable_values, AchievableSet, AchievableValue},
    criticality::{calc_criticality, is_acceptable, CriticalityReport, Fraction, RowCriticality},
    error::Error,
    generate::{generate, GenSpec, SplitMix64},
    mitigation::{apply_mitigation, MitigationAction},
    mode::{quantify, LevelKind, Mode, MAX_LEVEL, MIN_LEVEL},
    model::{Assignment, Instance, MisDefinition},
    pairs::PairSet,
    side::{level_mask, SideConstraint},
    validate::{validate_instance, Violation},
};

pub type Result<T, E = Error> = core::result::Result<T, E>;
