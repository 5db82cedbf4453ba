use std::io;
use std::path::PathBuf;

use oric_core::OricError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("label column `{0}` not found in header")]
    MissingLabelColumn(String),
    #[error("malformed row {row}: {reason}")]
    MalformedRow { row: usize, reason: String },
    #[error("row {row}: label `{value}` is not 0 or 1")]
    NonBinaryLabel { row: usize, value: String },
    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),
    #[error("model file version {found} is not supported (expected {expected})")]
    VersionMismatch { found: String, expected: u32 },
    #[error("corrupt model file: {0}")]
    CorruptFile(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Core(#[from] OricError),
}

impl DataError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        DataError::Io {
            path: path.into(),
            source,
        }
    }

    /// Stable short name, used as the first field of CLI error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            DataError::Io { .. } => "io",
            DataError::MissingLabelColumn(_) => "missing-label-column",
            DataError::MalformedRow { .. } => "malformed-row",
            DataError::NonBinaryLabel { .. } => "non-binary-label",
            DataError::SchemaMismatch(_) => "schema-mismatch",
            DataError::VersionMismatch { .. } => "version-mismatch",
            DataError::CorruptFile(_) => "corrupt-file",
            DataError::Csv(_) => "csv",
            DataError::Core(e) => core_kind(e),
        }
    }
}

pub fn core_kind(e: &OricError) -> &'static str {
    match e {
        OricError::EmptyPattern => "empty-pattern",
        OricError::DuplicateFeature { .. } => "duplicate-feature",
        OricError::RankOutOfRange { .. } => "rank-out-of-range",
        OricError::InvalidChain(_) => "invalid-chain",
        OricError::InvalidConfig(_) => "invalid-config",
        OricError::InvalidBatch(_) => "invalid-batch",
        OricError::EmptyClass => "empty-class",
        OricError::EmptyBatch => "empty-batch",
        OricError::Indeterminate => "indeterminate",
        OricError::SchemaMismatch(_) => "schema-mismatch",
        OricError::EmptyModel => "empty-model",
        OricError::Overflow { .. } => "overflow",
        OricError::Infeasible { .. } => "infeasible",
        OricError::EmptyHistory => "empty-history",
        OricError::ScheduleTooShort { .. } => "schedule-too-short",
        OricError::PeriodOutOfRange { .. } => "period-out-of-range",
    }
}

pub type Result<T, E = DataError> = std::result::Result<T, E>;
