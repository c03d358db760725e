use thiserror::Error;

use crate::topology::{NodeId, Violation};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not positive definite: pivot {index} is {pivot:e}")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("noise variance must be positive, got {value} at receiver {index}")]
    NonPositiveNoise { index: usize, value: f64 },

    #[error("transmit power must be non-negative, got {value} at transmitter {index}")]
    NegativePower { index: usize, value: f64 },

    #[error("nodes at identical positions have no defined path loss")]
    CoincidentNodes,

    #[error("relay power scale must be >= 1, got {0}")]
    InvalidScale(f64),

    #[error("invalid network:\n{}", format_violations(.0))]
    InvalidNetwork(Vec<Violation>),

    #[error("invalid cut: {0}")]
    InvalidCut(String),

    #[error("block {block:?} excludes every candidate receiver")]
    EmptyChoice { block: Vec<NodeId> },

    #[error(
        "network has {nodes} nodes; exhaustive enumeration is limited to {limit} without override"
    )]
    GuardExceeded { nodes: usize, limit: usize },

    #[error("alpha {alpha} outside feasible interval [-{limit}, {limit}]")]
    InvalidAlpha { alpha: f64, limit: f64 },

    #[error("receiver {receiver} is not a valid receiver for block {block:?}")]
    InvalidReceiver {
        receiver: NodeId,
        block: Vec<NodeId>,
    },

    #[error("quantization noise must be positive and finite, got {value} at relay {relay}")]
    NonPositiveQ { relay: NodeId, value: f64 },

    #[error("no feasible quantization found up to q = {limit:e}")]
    Infeasible { limit: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("achievable rate {rate} exceeds upper bound {bound} by more than tolerance")]
    BoundViolation { rate: f64, bound: f64 },
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| format!("  - {v}"))
        .collect::<Vec<_>>()
        .join("\n")
}
