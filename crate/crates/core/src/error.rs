use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid signature ({p},{q}): dimension must be at least 1")]
    InvalidSignature { p: usize, q: usize },

    #[error("reflection supporting vector has null square")]
    NullSupportingVector,

    #[error("matrix is not in O(p,q): max |MᵀGM − G| = {deviation:e} exceeds tolerance {tolerance:e}")]
    NotOrthogonal { deviation: f64, tolerance: f64 },

    #[error("numerical breakdown in {context} (tolerance {tolerance:e})")]
    NumericalBreakdown { context: String, tolerance: f64 },

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("no square witness: element is indirect")]
    WitnessUnavailable,

    #[error("square root required by the witness is not representable exactly: {0}")]
    WitnessNotRepresentable(String),

    #[error("element cannot be classified from its factor classifications")]
    UnclassifiableElement,

    #[error("element list is not closed under composition")]
    NotClosed,

    #[error("elements belong to different spaces")]
    SpaceMismatch,

    #[error("candidate family is empty")]
    EmptyFamily,

    #[error("point set has {size} points; the limit is {max}")]
    TooLarge { size: usize, max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown generator: {0}")]
    UnknownGenerator(String),
}

impl Error {
    /// Stable machine-readable code used by the CLI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::InvalidSignature { .. } => "invalid_signature",
            Error::NullSupportingVector => "null_supporting_vector",
            Error::NotOrthogonal { .. } => "not_orthogonal",
            Error::NumericalBreakdown { .. } => "numerical_breakdown",
            Error::InternalInconsistency(_) => "internal_inconsistency",
            Error::WitnessUnavailable => "witness_unavailable",
            Error::WitnessNotRepresentable(_) => "witness_not_representable",
            Error::UnclassifiableElement => "unclassifiable_element",
            Error::NotClosed => "not_closed",
            Error::SpaceMismatch => "space_mismatch",
            Error::EmptyFamily => "empty_family",
            Error::TooLarge { .. } => "too_large",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::UnknownGenerator(_) => "unknown_generator",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
