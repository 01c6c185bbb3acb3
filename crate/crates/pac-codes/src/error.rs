//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by code construction, decoding, and the CLI front end.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied value violates a precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A requested configuration exceeds a resource budget (e.g. list memory).
    #[error("resource limit: {0}")]
    Resource(String),

    /// Malformed textual input (profiles, generators, config files).
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
