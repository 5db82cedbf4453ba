use alloc::string::String;
use core::fmt;

pub type Result<T, E = OricError> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum OricError {
    EmptyPattern,
    DuplicateFeature {
        feature: u32,
    },
    RankOutOfRange {
        rank: u32,
        length: u32,
    },
    InvalidChain(&'static str),
    InvalidConfig(&'static str),
    InvalidBatch(String),
    EmptyClass,
    EmptyBatch,
    /// 0/0 frequency or confidence: no evidence either way.
    Indeterminate,
    SchemaMismatch(String),
    EmptyModel,
    /// `p^L` underflowed to zero, so no finite chain count reaches the budget.
    Overflow {
        length: u32,
    },
    Infeasible {
        best_probability: f64,
        l_max: u32,
    },
    EmptyHistory,
    ScheduleTooShort {
        needed: usize,
        found: usize,
    },
    PeriodOutOfRange {
        period: usize,
        horizon: usize,
    },
}

impl fmt::Display for OricError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OricError::EmptyPattern => write!(f, "pattern has no items"),
            OricError::DuplicateFeature { feature } => {
                write!(f, "feature {feature} appears more than once in a pattern")
            }
            OricError::RankOutOfRange { rank, length } => {
                write!(f, "node rank {rank} outside 1..={length}")
            }
            OricError::InvalidChain(why) => write!(f, "invalid chain: {why}"),
            OricError::InvalidConfig(why) => write!(f, "invalid configuration: {why}"),
            OricError::InvalidBatch(why) => write!(f, "invalid batch: {why}"),
            OricError::EmptyClass => write!(f, "class view has no rows"),
            OricError::EmptyBatch => write!(f, "batch has no rows"),
            OricError::Indeterminate => write!(f, "indeterminate estimate (0/0)"),
            OricError::SchemaMismatch(why) => write!(f, "schema mismatch: {why}"),
            OricError::EmptyModel => write!(f, "model has not been updated yet"),
            OricError::Overflow { length } => {
                write!(f, "p^L underflows at chain length {length}")
            }
            OricError::Infeasible {
                best_probability,
                l_max,
            } => write!(
                f,
                "no chain length up to {l_max} meets the false-positive budget \
                 (best {best_probability:.6})"
            ),
            OricError::EmptyHistory => write!(f, "frequency history is empty"),
            OricError::ScheduleTooShort { needed, found } => {
                write!(f, "schedule has {found} periods, need {needed}")
            }
            OricError::PeriodOutOfRange { period, horizon } => {
                write!(f, "period {period} outside 1..={horizon}")
            }
        }
    }
}

impl core::error::Error for OricError {}
