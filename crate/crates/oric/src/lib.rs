//! File formats, CSV ingestion, parallel chain generation and reports around
//! [`oric_core`].

pub mod emit;
pub mod encoder;
pub mod error;
pub mod ingest;
pub mod model_file;
pub mod parallel;
pub mod report;

pub use emit::{emit_interaction_features, EmissionReport};
pub use encoder::EncoderState;
pub use error::{DataError, Result};
pub use ingest::{ingest_csv, ingest_reader, read_schema, write_batch_csv, CsvLayout, IngestState};
pub use model_file::{load_model, load_model_from, save_model, save_model_to};
pub use oric_core;
pub use parallel::ParallelEngine;
