use thiserror::Error;

use crate::metric::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library reports. The leading token of each message is a
/// stable machine-readable code (see [`Error::code`]).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("EXT_VALUE_IN_STRICT_MODE: infinite entry at ({row}, {col}) outside extended mode")]
    ExtValueInStrictMode { row: usize, col: usize },

    #[error("CARRIER_MISMATCH: expected {expected} points, found {found}")]
    CarrierMismatch { expected: usize, found: usize },

    #[error("NONPOSITIVE_SCALE: scale factor must be > 0")]
    NonpositiveScale,

    #[error("EPSILON_TOO_SMALL: radius {epsilon} does not exceed d(x, x) = {diagonal}")]
    EpsilonTooSmall { epsilon: String, diagonal: String },

    #[error("KIND_MISMATCH: {0}")]
    KindMismatch(String),

    #[error("SUBSET_EXPLOSION: 2^{k} subsets exceed the limit {limit}")]
    SubsetExplosion { k: usize, limit: u64 },

    #[error("EMPTY_FACTOR_LIST: a product needs at least one factor")]
    EmptyFactorList,

    #[error("IMPROPER_BASE: the envelope vanishes nowhere on the diagonal")]
    ImproperBase,

    #[error("NOT_DOMINATED: pullback is not dominated at pair ({0}, {1})")]
    NotDominated(usize, usize),

    #[error("ENUMERATION_LIMIT: enumeration supports at most {max} points, got {n}")]
    EnumerationLimit { n: usize, max: usize },

    #[error("GEN_EXHAUSTED: generator gave up after {0} attempts")]
    GenExhausted(usize),

    #[error("SHAPE_MISMATCH: {0}")]
    ShapeMismatch(String),

    #[error("PARSE_ERROR at {line}:{col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },

    #[error("VALIDATION_ERROR in '{object}': {clause}")]
    Validation { object: String, clause: String },

    #[error("INVALID_METRIC: {0}")]
    InvalidMetric(ValidationReport),

    #[error("INVALID_INPUT: {0}")]
    InvalidInput(String),

    #[error("TOO_LARGE: {0}")]
    TooLarge(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::ExtValueInStrictMode { .. } => "EXT_VALUE_IN_STRICT_MODE",
            Error::CarrierMismatch { .. } => "CARRIER_MISMATCH",
            Error::NonpositiveScale => "NONPOSITIVE_SCALE",
            Error::EpsilonTooSmall { .. } => "EPSILON_TOO_SMALL",
            Error::KindMismatch(_) => "KIND_MISMATCH",
            Error::SubsetExplosion { .. } => "SUBSET_EXPLOSION",
            Error::EmptyFactorList => "EMPTY_FACTOR_LIST",
            Error::ImproperBase => "IMPROPER_BASE",
            Error::NotDominated(..) => "NOT_DOMINATED",
            Error::EnumerationLimit { .. } => "ENUMERATION_LIMIT",
            Error::GenExhausted(_) => "GEN_EXHAUSTED",
            Error::ShapeMismatch(_) => "SHAPE_MISMATCH",
            Error::Parse { .. } => "PARSE_ERROR",
            Error::Validation { .. } => "VALIDATION_ERROR",
            Error::InvalidMetric(_) => "INVALID_METRIC",
            Error::InvalidInput(_) => "INVALID_INPUT",
            Error::TooLarge(_) => "TOO_LARGE",
        }
    }
}

pub(crate) fn same_carrier(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::CarrierMismatch { expected, found })
    }
}
