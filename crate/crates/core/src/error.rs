// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: unsupported gate `{name}`")]
    UnsupportedGate { line: usize, name: String },

    #[error("line {line}: qubit index {index} out of range for register of size {size}")]
    QubitOutOfRange { line: usize, index: usize, size: usize },

    #[error("unknown benchmark `{0}`")]
    UnknownBenchmark(String),

    #[error("benchmark `{name}` needs size >= {min}, got {size}")]
    BenchmarkTooSmall { name: String, size: usize, min: usize },

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("gate {0} is not in the frontier")]
    NotInFrontier(usize),

    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    #[error("invalid weight parameters: {0}")]
    InvalidWeights(String),

    #[error("slots {0} and {1} are not joined by an edge")]
    NoSuchEdge(usize, usize),

    #[error("edge ({u}, {v}) cannot be used as a generic swap ({reason})")]
    InvalidSwap { u: usize, v: usize, reason: &'static str },

    #[error("qubits {0} and {1} are not in the same trap")]
    NotCoTrapped(usize, usize),

    #[error("logical qubit {0} has no slot")]
    Unplaced(usize),

    #[error("insufficient capacity: {needed} slots needed, {available} available")]
    InsufficientCapacity { needed: usize, available: usize },

    #[error("invalid mapping: {0}")]
    InvalidMapping(String),

    #[error("scheduler exceeded {cap} iterations without executing a gate; frontier {frontier:?}")]
    IterationCap { cap: usize, frontier: Vec<usize> },

    #[error("schedule event {event}: {message}")]
    ScheduleViolation { event: usize, message: String },

    #[error("fidelity model needs a chain of at least 2 ions, got {0}")]
    ChainTooShort(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("instance exceeds oracle limits: {0}")]
    OracleLimits(String),
}
