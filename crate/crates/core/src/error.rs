use thiserror::Error;

use crate::scalar::Domain;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("cannot split a {0}x{0} operator into two equal blocks")]
    NotBipartite(usize),

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("gate {id}: matrix is not in the group (deviation {deviation:.3e})")]
    NotUnitary { id: u64, deviation: f64 },

    #[error("gate {id}: {reason}")]
    InvalidGate { id: u64, reason: String },

    #[error("wire {wire} out of range for width {width}")]
    WireOutOfRange { wire: usize, width: usize },

    #[error("precedence graph has a cycle")]
    Cyclic,

    #[error("invalid evaluation order: {0}")]
    InvalidOrder(String),

    #[error("number of topological sorts exceeds the cap of {0}")]
    CapExceeded(usize),

    #[error("width {width} exceeds the limit of {limit} for this operation")]
    WidthLimit { width: usize, limit: usize },

    #[error("random draw was numerically singular after {0} attempts")]
    SingularDraw(usize),

    #[error("embedding {embedding} needs {expected} input, got {found}")]
    DomainMismatch {
        embedding: &'static str,
        expected: Domain,
        found: Domain,
    },

    #[error("invalid embedding column {column} (tensor has {available})")]
    InvalidColumn { column: usize, available: usize },

    #[error("keep set must name at least one wire")]
    EmptyKeep,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
