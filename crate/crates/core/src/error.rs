use thiserror::Error;

use crate::paradigm::Family;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("training set is empty")]
    EmptySet,
    #[error("cases {first} and {second} share the same feature vector")]
    DuplicateFeatureVector { first: usize, second: usize },
    #[error("case {index}: {detail}")]
    SchemaMismatch { index: usize, detail: String },
    #[error("hypothesis is undefined at {point}")]
    UndefinedAt { point: String },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("feature {position} is not numeric")]
    NonNumericFeature { position: usize },
    #[error("feature {position} is not ordinal")]
    NotOrdinal { position: usize },
    #[error("feature {position} is not nominal")]
    NotNominal { position: usize },
    #[error("solver diverged at iteration {iteration}")]
    SolverDiverged { iteration: usize },
    #[error("learner family {found:?} does not match problem family {expected:?}")]
    IncompatibleFamily { expected: Family, found: Family },
    #[error("parameter `{name}` is required by {family:?}")]
    MissingParameter { family: Family, name: &'static str },
    #[error("parameter `{name}` is not accepted by {family:?}")]
    UnknownParameter { family: Family, name: &'static str },
    #[error("parameter `{name}` given more than once")]
    DuplicateParameter { name: &'static str },
    #[error("parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("case {index}: feedback {value} outside {domain}")]
    FeedbackOutOfDomain { index: usize, value: String, domain: String },
    #[error("no training case within the neighborhood")]
    EmptyNeighborhood,
    #[error("k = {k} exceeds sample size {m}")]
    KExceedsSampleSize { k: usize, m: usize },
    #[error("symbol `{symbol}` is declared for features {first} and {second}")]
    NonDisjointValueSets { symbol: String, first: usize, second: usize },
    #[error("leaf {leaf} holds no training case")]
    EmptyLeaf { leaf: usize },
    #[error("slack {index} violates the margin constraints")]
    InfeasibleSlack { index: usize },
    #[error("grid has {points} points, above the limit of {limit}")]
    BoxTooLarge { points: u128, limit: u128 },
    #[error("could not draw distinct feature vectors after {attempts} attempts")]
    ExhaustedRetries { attempts: usize },
    #[error("row {row}, column {col}: {detail}")]
    Parse { row: usize, col: usize, detail: String },
    #[error("rows {first} and {second} share the same feature vector")]
    DuplicateRows { first: usize, second: usize },
    #[error("column `{column}`: unknown kind `{kind}`")]
    UnknownColumnKind { column: String, kind: String },
    #[error("no column named `{name}`")]
    UnknownColumn { name: String },
    #[error("{path}: {detail}")]
    Io { path: String, detail: String },
    #[error("malformed model file: {detail}")]
    ModelFormat { detail: String },
    #[error("model file version {found} is not supported (expected {supported})")]
    UnsupportedVersion { found: u32, supported: u32 },
    #[error("data does not match the model: {detail}")]
    DataMismatch { detail: String },
}

impl Error {
    /// Whether the error comes from how a learner was configured rather
    /// than from the data.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::MissingParameter { .. }
                | Error::UnknownParameter { .. }
                | Error::DuplicateParameter { .. }
                | Error::InvalidParameter { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
