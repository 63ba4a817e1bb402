use std::path::PathBuf;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed config: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{field}: {reason}")]
    Unit { field: String, reason: String },

    #[error("{field}: {reason}")]
    Config { field: String, reason: String },

    #[error(transparent)]
    Physics(#[from] nvmag_core::Error),

    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

/// Machine-readable form written to stderr on failure.
#[derive(Debug, Serialize)]
pub struct ErrorRecord {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub message: String,
}

impl CliError {
    pub fn unit(field: &str, reason: impl Into<String>) -> Self {
        CliError::Unit {
            field: field.to_string(),
            reason: reason.into(),
        }
    }

    pub fn config(field: &str, reason: impl Into<String>) -> Self {
        CliError::Config {
            field: field.to_string(),
            reason: reason.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn record(&self) -> ErrorRecord {
        use nvmag_core::Error as E;
        let (kind, field) = match self {
            CliError::Io { .. } => ("io", None),
            CliError::Json(_) => ("parse", None),
            CliError::Unit { field, .. } => ("unit", Some(field.clone())),
            CliError::Config { field, .. } => ("config", Some(field.clone())),
            CliError::Csv(_) => ("io", None),
            CliError::Physics(e) => match e {
                E::InvalidParameter { field, .. } => ("invalid_parameter", Some(field.to_string())),
                E::PastBandEdge { .. } => ("past_band_edge", Some("electric".to_string())),
                E::NoBracket { .. } | E::NoConvergence { .. } => ("resonance", None),
                E::DegenerateKernel { .. } => ("degenerate_kernel", Some("initial_state".to_string())),
                _ => ("physics", None),
            },
        };
        ErrorRecord {
            kind,
            field,
            message: self.to_string(),
        }
    }

    /// 2 for problems with the input, 1 for failures during the run.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Json(_) | CliError::Unit { .. } | CliError::Config { .. } => 2,
            CliError::Physics(nvmag_core::Error::InvalidParameter { .. } | nvmag_core::Error::PastBandEdge { .. }) => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
