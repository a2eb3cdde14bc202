//! Dataset curation and analysis over the colexification core: input
//! parsing, on-disk artifacts, reports and the build/analyze pipeline.

pub mod artifacts;
pub mod config;
pub mod error;
pub mod ingest;
pub mod pipeline;
pub mod report;
pub mod synth;
