//! Online random intersection chains.
//!
//! Streaming detection of frequent, confident categorical feature
//! interactions from labeled batches. Each period's batch is split by label,
//! random intersection chains are grown inside each class, and the tail nodes
//! of those chains propose candidate patterns. Per-pattern occurrence
//! statistics are kept as exponentially decayed counts, so a model update only
//! ever needs the newest batch.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, CSV ingestion,
//! parallel chain generation and the command line live in the `oric` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;
mod math;

pub mod chain;
pub mod estimator;
pub mod metrics;
pub mod oracle;
pub mod pattern;
pub mod planner;
pub mod rng;
pub mod synth;

pub use chain::{
    build_chain, generate_chain, run_chains, ChainBatchResult, ChainConfig, ChainEngine, ChainSet,
    ClassView, SequentialEngine,
};
pub use error::{OricError, Result};
pub use estimator::{
    confidence, map_frequency, ClassPriors, Label, ModelConfig, OricModel, PatternStats,
    RankedInteraction, Selection, UpdateReport,
};
pub use metrics::jaccard;
pub use pattern::{node_at, occurrence_count, Chain, Item, LabeledBatch, Pattern};
pub use planner::{
    detection_probability, false_positive_curve, plan, required_chains, PlannerResult, PlannerSpec,
    DEFAULT_L_MAX,
};
