//! Successive-cancellation list decoding with lazily copied path arrays.

mod decoder;
mod fork;
mod paths;

pub use decoder::{scl_decode, ListDecoder, ListMetadata, ListOutcome, PathSummary, Selection};
pub use fork::ForkTable;
pub use paths::PathManager;
