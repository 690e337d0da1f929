use thiserror::Error;

use crate::scalar::Mode;

/// Malformed input text (file formats, numeric literals).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}{message}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
pub struct ParseError {
    pub message: String,
    pub line: Option<usize>,
}

impl ParseError {
    pub fn new(message: impl Into<String>) -> Self {
        ParseError { message: message.into(), line: None }
    }

    pub fn at(line: usize, message: impl Into<String>) -> Self {
        ParseError { message: message.into(), line: Some(line) }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{what} exceeds the configured cap ({value} > {cap})")]
    CapExceeded { what: &'static str, value: u128, cap: u128 },
    #[error("invalid tournamenton: {0}")]
    InvalidTournamenton(String),
    #[error("invalid split: {0}")]
    InvalidSplit(String),
    #[error("tournamenton is not regular: row {row} deviates from 1/2 by {deviation}")]
    NotRegular { row: usize, deviation: String },
    #[error("arithmetic mode mismatch: expected {expected}, found {found}")]
    ModeMismatch { expected: Mode, found: Mode },
    #[error("not a twin class: {0}")]
    NotTwinClass(String),
    #[error("tournament is transitive or a T[a,b,c]; it has no zero-density witness")]
    NoWitness,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
