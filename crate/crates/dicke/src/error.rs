//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by model construction, decomposition, evaluation and the
/// oracles.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Model parameters outside their domain (N < 1 or Γ ≤ 0).
    #[error("invalid model: N = {n}, gamma = {gamma} (need N >= 1, gamma > 0)")]
    InvalidModel { n: u32, gamma: f64 },

    /// A ladder index outside its admissible range.
    #[error("index m = {m} out of range [{lo}, {hi}]")]
    IndexOutOfRange { m: u32, lo: u32, hi: u32 },

    /// An empty or inverted index window.
    #[error("invalid window [{lo}, {hi}]")]
    InvalidWindow { lo: u32, hi: u32 },

    /// Target state above the initial excitation: unreachable under pure decay.
    #[error("state m = {m} unreachable from m0 = {m0} under pure decay")]
    Unreachable { m: u32, m0: u32 },

    /// A coefficient routine was called with a pole of the wrong multiplicity.
    #[error("pole h = {pole} has multiplicity {found} in window [{lo}, {hi}], expected {expected}")]
    WrongMultiplicity {
        pole: u64,
        lo: u32,
        hi: u32,
        found: usize,
        expected: usize,
    },

    /// Adaptive evaluation hit the precision ceiling without passing the
    /// acceptance checks.
    #[error(
        "evaluation failed at t = {t}: residual {residual:.3e} above tolerance \
         at the precision ceiling of {bits} bits"
    )]
    EvaluationFailure { t: f64, residual: f64, bits: u32 },

    /// Negative time or a non-increasing time grid.
    #[error("invalid time grid: {reason}")]
    InvalidGrid { reason: String },

    /// Malformed or non-normalized initial-state weights.
    #[error("invalid initial state: {reason}")]
    InvalidState { reason: String },

    /// The series oracle was asked to evaluate outside its validity window.
    #[error("series oracle: Gamma*t = {tau} outside validity window (0 <= Gamma*t <= {limit})")]
    SeriesWindow { tau: f64, limit: f64 },

    /// The ODE oracle could not reach the requested time.
    #[error("ODE integration stalled at t = {t_reached} (target {t_target})")]
    Integration { t_reached: f64, t_target: f64 },

    /// Parse failure in an external text format (weights file).
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
