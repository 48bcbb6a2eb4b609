//! Files in and out: data sets, model files and audit reports.

mod commands;
mod dataset;
mod model;

pub use commands::{audit, predict, train, AuditReport, AuditRow};
pub use dataset::{load_dataset, load_queries, parse_dataset, parse_queries, sha256_hex, ColumnKinds, Dataset};
pub use model::{DataRef, ModelFile, ModelParams, Payload, MODEL_FORMAT, MODEL_VERSION};
