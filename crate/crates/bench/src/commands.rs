//! The four subcommands, writing their results to `out`.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use bigfft::oracle::{l2_norm, naive_dft, naive_dft_at, pack_perm};
use bigfft::{FftError, PermSpectrum, TransformHandle, TransformPlan};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::memory::peak_memory_probe;
use crate::metrics::{efficiency, failed_row, RunMetrics, Status, CSV_HEADER};
use crate::signal_io::{random_signal, read_signal, write_signal, SIGNAL_SEED};
use crate::BenchError;

/// Largest size compared against the full direct transform by `check`.
pub const FULL_CHECK_MAX: usize = 1 << 14;
pub const L2_TOLERANCE: f64 = 5e-6;
pub const SPOT_TOLERANCE: f64 = 1e-5;

/// Settings shared by every command that runs one configuration.
#[derive(Debug, Clone, Copy)]
pub struct RunConfig {
    pub n: usize,
    pub splits: u32,
    pub workers: usize,
    pub test_mode: bool,
    pub mem: bool,
}

impl RunConfig {
    pub fn plan(&self) -> Result<TransformPlan, FftError> {
        TransformPlan::create(self.n, self.splits, self.workers, self.test_mode)
    }
}

/// Largest `s <= 4` that gives a valid plan for `n`, or 0.
pub fn default_splits(n: usize, test_mode: bool) -> u32 {
    (0..=4)
        .rev()
        .find(|&s| TransformPlan::create(n, s, 1, test_mode).is_ok())
        .unwrap_or(0)
}

fn timed_run(handle: &mut TransformHandle) -> Result<f64, BenchError> {
    let start = Instant::now();
    handle.run_transform()?;
    Ok(start.elapsed().as_secs_f64().max(f64::MIN_POSITIVE))
}

/// Best-of-`repeats` timing of one configuration. Handle construction is
/// not timed.
pub fn measure(cfg: &RunConfig, input: &[f32], repeats: usize) -> Result<RunMetrics, BenchError> {
    if repeats == 0 {
        return Err(BenchError::InvalidRepeats);
    }
    let mut handle = TransformHandle::new(cfg.plan()?)?;
    handle.data_mut().copy_from_slice(input);
    let mut best = f64::INFINITY;
    for _ in 0..repeats {
        best = best.min(timed_run(&mut handle)?);
    }
    let mut metrics = RunMetrics::new(cfg.n, cfg.splits, cfg.workers, best)?;
    if cfg.mem {
        metrics.peak_mem_bytes = Some(report_memory());
    }
    Ok(metrics)
}

fn report_memory() -> u64 {
    let reading = peak_memory_probe();
    eprintln!("peak memory: {} bytes ({})", reading.bytes, reading.source.label());
    reading.bytes
}

/// Transforms the `n` values in `input` and writes the spectrum to `output`.
pub fn cmd_transform(
    cfg: &RunConfig,
    input: &Path,
    output: &Path,
    out: &mut impl Write,
) -> Result<RunMetrics, BenchError> {
    let plan = cfg.plan()?;
    let signal = read_signal(input, cfg.n)?;
    let mut handle = TransformHandle::new(plan)?;
    handle.data_mut().copy_from_slice(&signal);
    let wall = timed_run(&mut handle)?;
    write_signal(output, handle.result())?;

    let mut metrics = RunMetrics::new(cfg.n, cfg.splits, cfg.workers, wall)?;
    if cfg.mem {
        metrics.peak_mem_bytes = Some(report_memory());
    }
    writeln!(out, "{CSV_HEADER}")?;
    writeln!(out, "{}", metrics.csv_row(Status::Ok))?;
    Ok(metrics)
}

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub n: usize,
    pub splits: Vec<u32>,
    pub workers: Vec<usize>,
    pub repeats: usize,
    pub test_mode: bool,
    pub mem: bool,
}

/// One row per `(splits, workers)` cell, then the fastest cell again with
/// status `best`. Cells that cannot run become `failed` rows.
pub fn cmd_scan(cfg: &ScanConfig, out: &mut impl Write) -> Result<Option<RunMetrics>, BenchError> {
    if cfg.splits.is_empty() {
        return Err(BenchError::EmptyRange("splits"));
    }
    if cfg.workers.is_empty() {
        return Err(BenchError::EmptyRange("workers"));
    }
    if cfg.repeats == 0 {
        return Err(BenchError::InvalidRepeats);
    }
    let input = random_signal(cfg.n, SIGNAL_SEED);
    writeln!(out, "{CSV_HEADER}")?;
    let mut best: Option<RunMetrics> = None;
    for &splits in &cfg.splits {
        for &workers in &cfg.workers {
            let run = RunConfig {
                n: cfg.n,
                splits,
                workers,
                test_mode: cfg.test_mode,
                mem: cfg.mem,
            };
            match measure(&run, &input, cfg.repeats) {
                Ok(metrics) => {
                    writeln!(out, "{}", metrics.csv_row(Status::Ok))?;
                    if best.as_ref().is_none_or(|b| metrics.gflops > b.gflops) {
                        best = Some(metrics);
                    }
                }
                Err(e) => {
                    eprintln!("splits={splits} workers={workers}: {e}");
                    writeln!(out, "{}", failed_row(cfg.n, splits, workers))?;
                }
            }
        }
    }
    if let Some(b) = &best {
        writeln!(out, "{}", b.csv_row(Status::Best))?;
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMetric {
    /// Relative L2 deviation of the whole spectrum.
    L2,
    /// Largest `|F_k - F_exact_k|` over the sampled `k`, divided by the RMS
    /// coefficient magnitude `sqrt(sum x^2)`.
    Spot,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOutcome {
    pub metric: CheckMetric,
    pub value: f64,
    pub threshold: f64,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.value <= self.threshold
    }
}

#[derive(Debug, Clone)]
pub struct CheckConfig {
    pub run: RunConfig,
    pub spot_checks: usize,
    /// Signal to check; a fixed-seed random signal when absent.
    pub input: Option<Vec<f32>>,
    /// Perturbs the computed spectrum before comparison, to exercise the
    /// failure path.
    pub corrupt: bool,
}

/// Compares the transform against the direct sum and reports one line.
pub fn cmd_check(cfg: &CheckConfig, out: &mut impl Write) -> Result<CheckOutcome, BenchError> {
    let n = cfg.run.n;
    let mut handle = TransformHandle::new(cfg.run.plan()?)?;
    match &cfg.input {
        Some(x) if x.len() != n => {
            return Err(FftError::SizeMismatch {
                expected: n,
                actual: x.len(),
            }
            .into())
        }
        Some(x) => handle.data_mut().copy_from_slice(x),
        None => handle.data_mut().copy_from_slice(&random_signal(n, SIGNAL_SEED)),
    }
    handle.run_transform()?;
    if cfg.corrupt {
        handle.result_mut().iter_mut().for_each(|v| *v *= 1.001);
    }
    let x = handle.data();
    let outcome = if n <= FULL_CHECK_MAX {
        let exact = pack_perm(&naive_dft(x))?;
        CheckOutcome {
            metric: CheckMetric::L2,
            value: l2_norm(handle.result(), &exact)?,
            threshold: L2_TOLERANCE,
        }
    } else {
        CheckOutcome {
            metric: CheckMetric::Spot,
            value: spot_error(x, handle.result(), cfg.spot_checks)?,
            threshold: SPOT_TOLERANCE,
        }
    };
    let name = match outcome.metric {
        CheckMetric::L2 => "l2",
        CheckMetric::Spot => "spot_max",
    };
    writeln!(
        out,
        "size={n} splits={} workers={} {name}={:e} threshold={:e} {}",
        cfg.run.splits,
        cfg.run.workers,
        outcome.value,
        outcome.threshold,
        if outcome.passed() { "pass" } else { "fail" }
    )?;
    Ok(outcome)
}

/// Spot-check error at `k = 0` and `count` random indices.
pub fn spot_error(x: &[f32], spectrum: &[f32], count: usize) -> Result<f64, BenchError> {
    let n = x.len();
    let scale = x.iter().map(|&v| (v as f64).powi(2)).sum::<f64>().sqrt();
    if scale == 0.0 {
        return Err(FftError::ZeroReference.into());
    }
    let packed = PermSpectrum::new(spectrum)?;
    let mut rng = ChaCha8Rng::seed_from_u64(SIGNAL_SEED ^ 0x5eed);
    let indices = std::iter::once(0).chain((0..count).map(|_| rng.gen_range(0..n)));
    let mut worst = 0.0f64;
    for k in indices {
        let exact = if k <= n / 2 {
            naive_dft_at(x, k)?
        } else {
            naive_dft_at(x, n - k)?.conj()
        };
        worst = worst.max((packed.coefficient(k)? - exact).norm() / scale);
    }
    Ok(worst)
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub n: usize,
    pub splits: u32,
    pub workers: Vec<usize>,
    pub repeats: usize,
    pub test_mode: bool,
    pub mem: bool,
}

/// Times each worker count and reports parallel efficiency on stderr.
pub fn cmd_bench(cfg: &BenchConfig, out: &mut impl Write) -> Result<BTreeMap<usize, f64>, BenchError> {
    if !cfg.workers.contains(&1) {
        return Err(BenchError::MissingBaseline);
    }
    let input = random_signal(cfg.n, SIGNAL_SEED);
    writeln!(out, "{CSV_HEADER}")?;
    let mut perf = BTreeMap::new();
    for &workers in &cfg.workers {
        let run = RunConfig {
            n: cfg.n,
            splits: cfg.splits,
            workers,
            test_mode: cfg.test_mode,
            mem: cfg.mem,
        };
        let metrics = measure(&run, &input, cfg.repeats)?;
        writeln!(out, "{}", metrics.csv_row(Status::Ok))?;
        perf.insert(workers, metrics.gflops);
    }
    let eta = efficiency(&perf)?;
    for (t, e) in &eta {
        eprintln!("workers={t} gflops={:.3} efficiency={e:.3}", perf[t]);
    }
    Ok(eta)
}
