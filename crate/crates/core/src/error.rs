use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A configuration value violates an invariant. `field` names the
    /// offending parameter the way the CLI spells it.
    #[error("invalid `{field}`: {reason}")]
    Config { field: &'static str, reason: String },

    #[error("invalid lattice: {0}")]
    Lattice(String),

    #[error("cached energy {cached} of replica {replica} disagrees with recomputed energy {recomputed}")]
    EnergyAudit {
        replica: usize,
        cached: f64,
        recomputed: f64,
    },

    #[error("analysis error: {0}")]
    Analysis(String),

    #[error("worker {worker} failed: {message}")]
    WorkerFailed { worker: usize, message: String },

    #[error("baseline point {0} has no successful rows")]
    MissingBaseline(u32),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Config {
            field,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
