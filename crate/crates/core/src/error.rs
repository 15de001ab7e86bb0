use std::path::PathBuf;

use thiserror::Error;

use crate::table::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid table: {}", join_violations(.0))]
    Invalid(Vec<Violation>),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("probability grid has no positive mass")]
    EmptyDistribution,

    #[error("internal error: {0}")]
    Internal(String),

    #[error("canvas mismatch: ground truth is {gt:?}, prediction is {pred:?}")]
    CanvasMismatch { gt: (u32, u32), pred: (u32, u32) },

    #[error("operation replay failed at step {step}: {reason}")]
    Replay { step: usize, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
