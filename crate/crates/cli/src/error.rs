use thiserror::Error;

use crate::syntax::Pos;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("invalid structure constants: {0}")]
    InvalidStructureConstants(String),
    #[error("{0}")]
    Structure(String),
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{origin}: {pos}: {kind}")]
    Parse { origin: String, pos: Pos, kind: ParseErrorKind },

    #[error(transparent)]
    Engine(#[from] lie_moduli::Error),

    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("{0}")]
    Usage(String),

    #[error("malformed report: {0}")]
    Report(String),
}

pub type Result<T> = std::result::Result<T, CliError>;
