use thiserror::Error;

use crate::incidence::ClassId;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    Field(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("axiom violation: {0}")]
    Axiom(String),

    #[error("invalid linear space: {0}")]
    InvalidSpace(String),

    #[error("point count mismatch: {0} vs {1}")]
    PointCountMismatch(usize, usize),

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{0} is a superfiguration; its weak realizations cannot be reduced to fewer points")]
    Superfiguration(String),

    #[error("substitution of {0} refers to itself")]
    SelfReference(ClassId),

    #[error("expressions use different bases")]
    BasisMismatch,

    #[error("coefficient of {0} is not divisible by its labeling count")]
    InexactConversion(ClassId),

    #[error("unknown class {0}")]
    UnknownClass(ClassId),

    #[error("unknown label {0}")]
    UnknownLabel(String),

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short machine-readable tag used in the CLI error report.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Field(_) => "field",
            Error::Parse { .. } => "parse",
            Error::Axiom(_) => "axiom",
            Error::InvalidSpace(_) => "invalid_space",
            Error::PointCountMismatch(..) => "point_count_mismatch",
            Error::OutOfRange(_) => "out_of_range",
            Error::Precondition(_) => "precondition",
            Error::Superfiguration(_) => "superfiguration",
            Error::SelfReference(_) => "self_reference",
            Error::BasisMismatch => "basis_mismatch",
            Error::InexactConversion(_) => "inexact_conversion",
            Error::UnknownClass(_) => "unknown_class",
            Error::UnknownLabel(_) => "unknown_label",
            Error::Checkpoint(_) => "checkpoint",
            Error::Internal(_) => "internal",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
