//! Random frameworks, four-part dataset samples, derivation noise and
//! dataset files.

mod config;
mod corrupt;
mod dataset;
mod random;
mod sample;
mod text;

use thiserror::Error;

use crate::graphio::GraphIoError;

pub use config::{CorruptionConfig, GenerationConfig, TaskKind, DEFAULT_ATTACK_PROBABILITY_RANGE};
pub use corrupt::{corrupt_dataset, corrupt_sample, is_corruptible};
pub use dataset::{
    build_dataset, generate_dataset, read_samples, write_manifest, write_samples, Counts, Dataset, ExtensionStats,
    Manifest, SizeCounts, SplitStats, MANIFEST_FILE, SEED_RULE, TEST_FILE, TRAIN_FILE,
};
pub use random::{derive_seed, generate_random_af, generate_random_af_with, rng_from, splitmix64};
pub use sample::{build_sample, DatasetSample, SampleMeta};

#[derive(Debug, Error)]
pub enum DataGenError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("only {found} distinct frameworks with {n} arguments could be drawn, {wanted} needed")]
    InsufficientUniqueFrameworks { n: usize, wanted: usize, found: usize },
    #[error("sample {0} has no intermediate label set to corrupt")]
    NoIntermediateSet(String),
    #[error("sample cannot be corrupted: {0}")]
    NotCorruptible(String),
    #[error("{wanted} samples must be corrupted but only {available} are eligible")]
    InsufficientCorruptible { wanted: usize, available: usize },
    #[error("dataset line {line}: {message}")]
    Record { line: usize, message: String },
    #[error(transparent)]
    GraphIo(#[from] GraphIoError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
