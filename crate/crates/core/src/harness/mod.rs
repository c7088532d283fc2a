//! Experiment configs, figure presets, batch execution with checksummed
//! manifests, and the command-line front end.

mod batch;
pub mod cli;
mod config;
mod presets;

pub use batch::{
    read_manifest, run_batch, run_experiment, sha256_hex, trace_file_name, verify_manifest, write_manifest,
    BatchReport, ManifestEntry, MANIFEST,
};
pub use config::{resolve_rule, Algorithm, ExperimentConfig, SEED_ENV};
pub use presets::{budget, figure_preset, local_rate_grid, PRESETS};
