use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the solver, its diagnostics and the experiment driver.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid mismatch: {left} modes vs {right} modes")]
    GridMismatch { left: usize, right: usize },

    #[error("grid {coarse} is not compatible with reference grid {reference}")]
    GridIncompatible { coarse: usize, reference: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("vorticity has non-zero mean {mean:e} (norm {norm:e})")]
    NonZeroMean { mean: f64, norm: f64 },

    #[error("eddies overlap: center distance {distance} < 2R = {min}")]
    OverlappingEddies { distance: f64, min: f64 },

    #[error("invalid regime: {0}")]
    InvalidRegime(String),

    #[error("non-finite coefficient in the state")]
    NonFinite,

    #[error("velocity blow-up: max |u| = {max_speed:e} exceeds ceiling {ceiling:e}")]
    VelocityBlowup { max_speed: f64, ceiling: f64 },

    #[error("integration failed at t = {time}: {source}")]
    AtTime {
        time: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error("corrupt snapshot {path}: {reason}")]
    CorruptSnapshot { path: PathBuf, reason: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Strips `AtTime` wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtTime { source, .. } => source.root(),
            e => e,
        }
    }

    /// True for errors that signal a numerical blow-up of the flow.
    pub fn is_blowup(&self) -> bool {
        matches!(self.root(), Error::NonFinite | Error::VelocityBlowup { .. })
    }

    /// Process exit code used by the command line driver.
    pub fn exit_code(&self) -> i32 {
        match self.root() {
            Error::NonFinite | Error::VelocityBlowup { .. } => 3,
            Error::Io { .. } | Error::CorruptSnapshot { .. } => 4,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
