//! Crate-wide error type.

use crate::wavefunction::WaveFunction;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Two fields live on different grids (or a 1D operation got a 3D field).
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// Operation requires a specific dimensionality.
    #[error("dimension error: expected {expected}D, got {got}D")]
    Dimension { expected: usize, got: usize },

    /// A physical or numerical parameter is out of range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A constructor's precondition on the state geometry failed.
    #[error("construction error: {0}")]
    Construction(String),

    /// A measurement assumed a symmetry the state does not have.
    #[error("diagnostic error: {what} (deviation {deviation:.3e} > {limit:.3e})")]
    Asymmetric {
        what: String,
        deviation: f64,
        limit: f64,
    },

    /// Imaginary-time relaxation ran out of iterations. Carries the best
    /// iterate so callers can inspect or resume.
    #[error("relaxation did not converge after {iterations} iterations (residual {residual:.3e}, energy {energy:.6e})")]
    NotConverged {
        iterations: usize,
        residual: f64,
        energy: f64,
        best: Box<WaveFunction>,
    },

    /// NaN/Inf detected during real-time propagation. Carries the last
    /// finite snapshot.
    #[error("numerical divergence at step {step} (t = {time:.6e})")]
    Diverged {
        step: usize,
        time: f64,
        last_good: Box<WaveFunction>,
    },

    /// Grid cannot resolve the requested structure.
    #[error("resolution error: {0}")]
    Resolution(String),

    /// Configuration file or flag problem; `location` names the file line
    /// or the flag.
    #[error("config error at {location}: {message}")]
    Config { location: String, message: String },

    #[error("snapshot format error: {0}")]
    Snapshot(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code contract: 0 pass, 1 fail, 2 usage, 3 divergence.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::Parameter(_) => 2,
            Error::Diverged { .. } | Error::NotConverged { .. } => 3,
            _ => 1,
        }
    }
}
