//! Failures that prevent a command from producing a verdict.

use std::path::PathBuf;

use mcmp_core::encodings::{EncodeError, UnknownEncoding};
use mcmp_core::lcmv::{CmvEncodeError, NotAProgram};
use mcmp_core::syntax::ParseError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("{0}: no `types` block declares a context")]
    NoContext(PathBuf),
    #[error(transparent)]
    UnknownEncoding(#[from] UnknownEncoding),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    CmvEncode(#[from] CmvEncodeError),
    #[error(transparent)]
    NotAProgram(#[from] NotAProgram),
    #[error("{0}")]
    Usage(String),
}
