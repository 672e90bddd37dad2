//! Crate-wide error type.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// `build_windows` needs at least four characters to decompose.
    InputTooShort { n: usize },
    /// The additive target must satisfy `1 ≤ Δ ≤ n`.
    InvalidDelta { delta: u64, n: usize },
    /// An estimate matrix does not match the window set it is used with.
    DimensionMismatch { expected: (usize, usize), got: (usize, usize) },
    /// A mapping violates monotonicity or maps two windows to one image.
    NonMonotone,
    /// The alignment trace-back table would exceed the configured cap.
    AlignmentTooLarge { n: usize, cap: usize },
    /// An exhaustive enumeration was asked to exceed its instance budget.
    BudgetExceeded { what: &'static str, limit: usize, got: usize },
    /// Clique sampling requires at least one live A-side window.
    EmptyLiveSide,
    /// Local density is undefined on an interval with no live windows.
    EmptyIntervalLive,
    /// Parameter validation failed.
    InvalidParams(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InputTooShort { n } => {
                write!(f, "input too short for window decomposition: n = {n} < 4")
            }
            Error::InvalidDelta { delta, n } => {
                write!(f, "additive target out of range: Δ = {delta} not in [1, {n}]")
            }
            Error::DimensionMismatch { expected, got } => write!(
                f,
                "estimate matrix is {}×{}, window set needs {}×{}",
                got.0, got.1, expected.0, expected.1
            ),
            Error::NonMonotone => write!(f, "mapping is not monotone"),
            Error::AlignmentTooLarge { n, cap } => {
                write!(f, "alignment table for n = {n} exceeds cap {cap}")
            }
            Error::BudgetExceeded { what, limit, got } => {
                write!(f, "{what} budget exceeded: {got} > {limit}")
            }
            Error::EmptyLiveSide => write!(f, "no live A-side window to sample"),
            Error::EmptyIntervalLive => {
                write!(f, "local density undefined: interval contains no live window")
            }
            Error::InvalidParams(msg) => write!(f, "invalid parameters: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
