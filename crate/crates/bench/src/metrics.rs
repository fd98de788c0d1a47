//! Performance model, run metrics and the CSV row format.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::BenchError;

pub const CSV_HEADER: &str = "size,splits,workers,runtime_s,gflops,l2,mem_bytes,status";

/// Nominal floating-point operation count of a real transform of size `n`:
/// `2.5 n log2 n`.
pub fn flops_model(n: f64) -> Result<f64, BenchError> {
    if !(n > 0.0) {
        return Err(BenchError::NonPositiveSize);
    }
    Ok(2.5 * n * n.log2())
}

/// Parallel efficiency `P(T) / (T P(1))` for every entry of `perf`.
pub fn efficiency(perf: &BTreeMap<usize, f64>) -> Result<BTreeMap<usize, f64>, BenchError> {
    let base = match perf.get(&1) {
        Some(&p) if p > 0.0 => p,
        _ => return Err(BenchError::MissingBaseline),
    };
    Ok(perf
        .iter()
        .map(|(&t, &p)| (t, p / (t as f64 * base)))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Failed,
    Best,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Failed => "failed",
            Status::Best => "best",
        }
    }
}

/// Measurements for one timed transform.
#[derive(Debug, Clone, PartialEq)]
pub struct RunMetrics {
    pub n: usize,
    pub splits: u32,
    pub workers: usize,
    pub wall_seconds: f64,
    pub gflops: f64,
    pub l2: Option<f64>,
    pub peak_mem_bytes: Option<u64>,
}

impl RunMetrics {
    /// Derives `gflops` from the model; `wall_seconds` must be positive.
    pub fn new(n: usize, splits: u32, workers: usize, wall_seconds: f64) -> Result<Self, BenchError> {
        if !(wall_seconds > 0.0) {
            return Err(BenchError::NonPositiveTime(wall_seconds));
        }
        let gflops = flops_model(n as f64)? / wall_seconds / 1e9;
        Ok(Self {
            n,
            splits,
            workers,
            wall_seconds,
            gflops,
            l2: None,
            peak_mem_bytes: None,
        })
    }

    pub fn csv_row(&self, status: Status) -> String {
        let mut row = format!(
            "{},{},{},{},{},",
            self.n, self.splits, self.workers, self.wall_seconds, self.gflops
        );
        if let Some(l2) = self.l2 {
            write!(row, "{l2}").unwrap();
        }
        row.push(',');
        if let Some(mem) = self.peak_mem_bytes {
            write!(row, "{mem}").unwrap();
        }
        row.push(',');
        row.push_str(status.as_str());
        row
    }
}

/// Row for a configuration that could not be run; measurements are empty.
pub fn failed_row(n: usize, splits: u32, workers: usize) -> String {
    format!("{n},{splits},{workers},,,,,{}", Status::Failed.as_str())
}
