//! Config-driven end-to-end runs.
//!
//! A run loads the inputs (files or an in-memory synthetic world), selects
//! covariates once with the partially penalized LASSO, then for every
//! analysis region builds the weights and lags and fits each requested model.
//! A failing model marks its region as failed without stopping the others.
//! Everything written is listed with its sha256 in `manifest.json`, which is
//! written last.

mod config;
mod data;
mod run;

pub use config::{
    parse_models, validate_config, DataSource, InputPaths, LassoConfig, ModelKind, RegionSelector, RegionSpec,
    RunConfig, WeightOptions, DEFAULT_SEED,
};
pub use data::{Columns, Dataset, InputDigest, SelectionData};
pub use run::{
    fit_model, prepare_region, run_pipeline, run_selection, write_lags, write_outputs, write_selection, write_weights, FileEntry,
    RegionData, RegionStatus, RunReport, SelectionReport, SelectionRow, StageError,
};

/// Child seed for a named stage: the first 8 bytes (little-endian) of
/// `sha256(seed_le || label)`.
pub fn derive_seed(seed: u64, label: &str) -> u64 {
    use sha2::{Digest, Sha256};
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(label.as_bytes());
    let d = h.finalize();
    u64::from_le_bytes(d[..8].try_into().expect("8 bytes"))
}
