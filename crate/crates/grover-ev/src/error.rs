//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count {requested} outside supported range 1..={cap}")]
    QubitCountOutOfRange { requested: usize, cap: usize },

    #[error("qubit count mismatch: state has {state}, instance has {instance}")]
    DimensionMismatch { state: usize, instance: usize },

    #[error("marked location {location} outside database of size {size}")]
    MarkedOutOfRange { location: u64, size: u64 },

    #[error("degenerate instance: {marked} marked of {size} locations leaves no usable rotation")]
    DegenerateInstance { marked: u64, size: u64 },

    #[error("qubit index {index} outside 1..={num_qubits}")]
    QubitIndexOutOfRange { index: usize, num_qubits: usize },

    #[error("invalid correlation spec: {0}")]
    InvalidCorrelationSpec(String),

    #[error("ensemble size must be at least 1")]
    EmptyEnsemble,

    #[error("resolution {epsilon} not below the standard-EV requirement 1/M = {epsilon_stand}")]
    InfeasibleResolution { epsilon: f64, epsilon_stand: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
