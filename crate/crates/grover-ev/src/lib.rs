//! State-vector simulator for Grover's search on an expectation-value
//! (ensemble) quantum computer.
//!
//! Four renditions of the algorithm are covered:
//!
//! - the standard PM version (projective measurement readout),
//! - the standard EV version (per-qubit sigma_z expectation values),
//! - the truncated EV version (early stopping at the minimum iteration
//!   count whose EV attenuation still permits sign discrimination),
//! - filtered EVs (correlation-operator runs that restrict readout to a
//!   conditioned portion of the marked set when several items are marked).
//!
//! The `analytic` module carries the closed-form rotation model and the
//! truncation planner; `state` the dense amplitude kernel; `measure` the
//! readout layer including finite-ensemble sampling; `filter` the
//! correlation cascade; `driver` end-to-end executions and sweeps; and
//! `cli` the command front end.

pub mod analytic;
pub mod cli;
pub mod driver;
pub mod error;
pub mod filter;
pub mod measure;
pub mod output;
pub mod state;
pub mod verify;

pub use analytic::{RotationState, TruncationPlan};
pub use driver::{SearchResult, Version};
pub use error::{Error, Result};
pub use filter::{ConditionList, CorrelationSpec, LocateOutcome, MeasureMode};
pub use measure::{EnsembleModel, EvMode, EvReport};
pub use state::{SearchInstance, StateVector};
