use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config line {line}, key `{key}`: {reason}")]
    Config {
        line: usize,
        key: String,
        reason: String,
    },

    #[error("invalid `{key}`: {reason}")]
    Invalid { key: String, reason: String },

    #[error("{0}")]
    Compute(#[from] fiv_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("table row has {got} cells, header has {want}")]
    RowWidth { got: usize, want: usize },
}
