//! Composition of dephased labelled event structures.
//!
//! A labelled event structure describes one behavioural model: a finite set
//! of events related by causality (a partial order) and conflict (symmetric,
//! irreflexive, propagating over causality). Events carry labels, a priority
//! and a duration. Several such models, possibly starting at different times,
//! are composed into a joint schedule that avoids cross-model label conflicts
//! and maximizes the summed priority of the selected events.
//!
//! The crate provides:
//! - [`model`]: the event structure representation and its derived relations;
//! - [`config`]: configurations, traces (maximal configurations) and the
//!   solver-friendly reformulation of maximality;
//! - [`schedule`]: rank functions (total orders per model) and clock
//!   assignment from durations and per-model offsets;
//! - [`scoring`]: the objective — event priorities plus overlap-gated label
//!   conflict penalties;
//! - [`solver`]: a brute-force oracle and a branch-and-bound optimizer;
//! - [`smt`]: SMT-LIB v2 emission and an external-solver backend;
//! - [`verify`]: executable equivalence checks between the two maximality
//!   formulations;
//! - [`parse`] / [`render`]: the model/scenario file formats and the table,
//!   machine and Gantt renderers.

pub mod config;
pub mod model;
pub mod parse;
pub mod problem;
pub mod render;
pub mod schedule;
pub mod scoring;
pub mod smt;
pub mod solver;
pub mod verify;

pub use config::{enumerate_traces, Trace};
pub use model::{EventId, LabelledEventStructure, ModelName, ValidationReport};
pub use problem::CompositionProblem;
pub use scoring::{LabelConflictSet, ObjectiveBreakdown};
pub use solver::{solve_native, solve_oracle, ScheduledTrace};

#[cfg(test)]
pub(crate) mod fixtures;
