use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("genus must be at least {min}, got {genus}")]
    InvalidGenus { genus: u32, min: u32 },

    #[error("invalid bamboo: {0}")]
    InvalidBamboo(String),

    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("test class has codimension {found}, expected {expected}")]
    DegreeMismatch { expected: u32, found: u32 },

    #[error("degree bookkeeping violated: {0}")]
    Bookkeeping(String),

    #[error("corrupted cache {path}, line {line}: {reason}")]
    CorruptCache {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
