use thiserror::Error;

use crate::ingest::ParseDiagnostic;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty label")]
    EmptyLabel,

    #[error("entity id {id} out of range (graph has {len} entities)")]
    EntityOutOfRange { id: u32, len: usize },

    #[error("unknown entity `{0}`")]
    UnknownEntity(String),

    #[error("context must contain at least one entity")]
    EmptyContext,

    #[error("candidate list is empty")]
    NoCandidates,

    #[error("relation label `{0}` contains the reserved delimiter `|`")]
    ReservedDelimiter(String),

    #[error("alpha must be a finite positive number, got {0}")]
    InvalidAlpha(f64),

    #[error("lambda must be a finite non-negative number, got {0}")]
    InvalidLambda(f64),

    #[error("corrupt LZ77 stream: match at output position {position} reaches back {offset} bytes")]
    CorruptStream { position: usize, offset: usize },

    #[error(transparent)]
    Parse(#[from] ParseDiagnostic),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
