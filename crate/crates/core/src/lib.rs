//! Solvers for the target approximation problem: choose exemplar sets so that
//! the covered blue features outnumber the covered red features by as much as
//! possible.
//!
//! The crate provides the instance model ([`model`]), margin-preserving
//! preprocessing ([`preprocess`]), exact solvers for the tractable classes
//! ([`exact`]), the greedy half-approximation for one-red instances
//! ([`greedy`]) and instance generators from classic source problems
//! ([`reductions`]).

pub mod error;
pub mod exact;
pub mod fixtures;
pub mod greedy;
pub mod model;
pub mod preprocess;
pub mod reductions;

pub use error::{Result, TapError};
pub use exact::SolverReport;
pub use greedy::{GreedyTrace, TieBreak};
pub use model::{Coverage, Instance, InstanceStats, Solution, Violation};
pub use preprocess::{Component, ReducedInstance, Regrouped};
