use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violates a documented constraint. `constraint` names the
    /// violated inequality, e.g. `"c > 0"`.
    #[error("invalid parameter {name} = {value}: requires {constraint}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: String,
    },

    /// A precondition involving several quantities failed.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("quadrature did not reach tolerance {requested:e} within {budget} panels (achieved {achieved:e})")]
    QuadratureBudget {
        requested: f64,
        achieved: f64,
        budget: usize,
    },

    #[error("channel count {found} does not match spectrum size {expected}")]
    ChannelMismatch { expected: usize, found: usize },

    #[error("malformed input at line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("matrix is not symmetric: |a[{row}][{col}] - a[{col}][{row}]| = {gap:e}")]
    Asymmetric { row: usize, col: usize, gap: f64 },

    #[error("eigenvalue {value:e} is not positive; the operator must be coercive")]
    NonPositiveEigenvalue { value: f64 },

    #[error("ill-conditioned periodic system (condition number {condition:e})")]
    IllConditioned { condition: f64 },

    #[error("no trajectory samples at or after t = {burn_in}")]
    EmptyWindow { burn_in: f64 },

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub(crate) fn require(cond: bool, name: &'static str, value: f64, constraint: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            constraint: constraint.to_string(),
        })
    }
}
