//! Polynomial algebras over ℚ (optionally with monomial nilpotency
//! relations) and the linear and bilinear differential operators acting on
//! them, together with the `δ(x)` order calculus.

mod bidiff;
mod diffop;
pub(crate) mod polynomial;
pub mod wire;

use std::fmt;

pub use bidiff::{remark4_op, Arg, BiDiffOp, BiOrder};
pub use diffop::DiffOp;
pub use polynomial::{Monomial, PolyAlgebra, Polynomial};

/// Result of an order measurement that gives up after `cap`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Order {
    Finite(u32),
    Unbounded { cap: u32 },
}

impl Order {
    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(n) => Some(n),
            Order::Unbounded { .. } => None,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Unbounded { cap } => write!(f, "Unbounded at cap {cap}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("a polynomial algebra needs at least one variable")]
    NoVariables,
    #[error("invalid variable name {0:?}")]
    InvalidVariable(String),
    #[error("duplicate variable {0:?}")]
    DuplicateVariable(String),
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("nilpotency order of {var} must be at least 2, got {order}")]
    NilpotencyOrder { var: String, order: u32 },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("algebra mismatch: expected {expected} variables, found {found}")]
    AlgebraMismatch { expected: usize, found: usize },
    #[error("argument index must be 1 or 2, got {0}")]
    BadArgumentIndex(usize),
    #[error("operator has order {0}, expected at most 1")]
    OrderTooHigh(u32),
    #[error("{0}")]
    Format(String),
}

pub(crate) fn check_nvars(expected: usize, found: usize) -> Result<(), PolyError> {
    if expected == found {
        Ok(())
    } else {
        Err(PolyError::AlgebraMismatch { expected, found })
    }
}
