//! Benchmark, tuning and accuracy tooling around `bigfft`.
//!
//! The `bigfft` binary is a thin wrapper over [`commands`]. Results go to a
//! caller-supplied writer as CSV with header [`metrics::CSV_HEADER`].

use std::io;
use std::path::PathBuf;

use bigfft::FftError;
use thiserror::Error;

pub mod commands;
pub mod memory;
pub mod metrics;
pub mod params;
pub mod signal_io;

pub use metrics::{efficiency, flops_model, RunMetrics, Status, CSV_HEADER};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("size must be positive")]
    NonPositiveSize,
    #[error("run time must be positive, got {0}")]
    NonPositiveTime(f64),
    #[error("efficiency needs a positive single-worker measurement")]
    MissingBaseline,
    #[error("invalid size {0:?}, expected an integer or 2^K")]
    InvalidSize(String),
    #[error("invalid range {0:?}, expected items like 4 or 1-3 separated by commas")]
    InvalidRange(String),
    #[error("invalid worker count {0:?}")]
    InvalidWorkers(String),
    #[error("repeats must be at least 1")]
    InvalidRepeats,
    #[error("{0} range is empty")]
    EmptyRange(&'static str),
    #[error("{}: expected {expected} values, found {actual}", path.display())]
    ShortRead {
        path: PathBuf,
        expected: usize,
        actual: usize,
    },
    #[error("{}: expected {expected} values, file is longer", path.display())]
    TrailingData { path: PathBuf, expected: usize },
    #[error("{}: {source}", path.display())]
    File { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Fft(#[from] FftError),
    #[error("writing results: {0}")]
    Output(#[from] io::Error),
}
