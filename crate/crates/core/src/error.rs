//! Crate-wide error type.

use std::fmt;

/// Errors surfaced by the compiler core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A grouping layout failed validation (zero dimension, too few
    /// levels, or a significance sum that does not fit in 64-bit
    /// signed arithmetic).
    InvalidConfig(String),
    /// A bitmap or fault map does not match the layout it was used with.
    ShapeMismatch { expected: usize, got: usize },
    /// A cell value is outside `0..=levels-1`, or a fault code byte is
    /// not one of the defined codes.
    InvalidCell { index: usize, value: i64 },
    /// A cell was marked both SA0 and SA1.
    FaultOverlap { index: usize },
    /// An exhaustive operation would exceed its enumeration budget.
    BudgetExceeded { required: u128, budget: u64 },
    /// An optimization model failed validation.
    MalformedModel(String),
    /// An optimization model has more variables than the solver cap.
    VariableCapExceeded { count: usize, cap: usize },
    /// Fault probabilities are negative or sum to more than one.
    InvalidRates { p_sa0: f64, p_sa1: f64 },
    /// Batch inputs that must be aligned 1:1 have different lengths.
    LengthMismatch { left: usize, right: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidConfig(msg) => write!(f, "invalid grouping config: {msg}"),
            Error::ShapeMismatch { expected, got } => {
                write!(f, "shape mismatch: expected {expected} cells, got {got}")
            }
            Error::InvalidCell { index, value } => {
                write!(f, "invalid cell value {value} at index {index}")
            }
            Error::FaultOverlap { index } => {
                write!(f, "cell {index} marked as both SA0 and SA1")
            }
            Error::BudgetExceeded { required, budget } => {
                write!(
                    f,
                    "enumeration requires {required} assignments, budget is {budget}"
                )
            }
            Error::MalformedModel(msg) => write!(f, "malformed model: {msg}"),
            Error::VariableCapExceeded { count, cap } => {
                write!(f, "{count} variables exceeds solver cap {cap}")
            }
            Error::InvalidRates { p_sa0, p_sa1 } => {
                write!(f, "invalid fault rates: p_sa0={p_sa0}, p_sa1={p_sa1}")
            }
            Error::LengthMismatch { left, right } => {
                write!(f, "aligned inputs have lengths {left} and {right}")
            }
        }
    }
}

impl std::error::Error for Error {}
