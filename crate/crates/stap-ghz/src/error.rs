//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Operator/state dimensions do not match.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A spectral decomposition hit a (near-)degeneracy or an ambiguous
    /// branch crossing.
    #[error("degenerate spectrum at t = {t}: {detail}")]
    Degenerate { t: f64, detail: String },

    /// The requested integrator step cannot resolve the dynamics.
    #[error("step-size error: {0}")]
    StepSize(String),

    /// A numerical tolerance was violated during a run.
    #[error("tolerance violation: {0}")]
    Tolerance(String),

    /// Internal consistency check failed (a bug or broken precondition).
    #[error("internal consistency error: {0}")]
    Internal(String),

    /// Scenario / sweep configuration problem.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 for configuration problems,
    /// 3 for numerical-tolerance failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Domain(_) => 2,
            Error::StepSize(_) | Error::Tolerance(_) | Error::Degenerate { .. } => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
