use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use bigfft_bench::commands::{
    cmd_bench, cmd_check, cmd_scan, cmd_transform, default_splits, BenchConfig, CheckConfig,
    RunConfig, ScanConfig,
};
use bigfft_bench::params::{parse_range, parse_size, workers_from_env, WORKERS_ENV};
use bigfft_bench::signal_io::read_signal;
use clap::{Args, Parser, Subcommand};

/// Parallel real-input FFT: run, tune, benchmark and verify.
#[derive(Parser)]
#[command(name = "bigfft", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SizeArgs {
    /// Transform size, as an integer or 2^K.
    #[arg(long, value_parser = size_arg)]
    size: usize,
    /// Allow sizes that are not a multiple of 2^(splits+8).
    #[arg(long)]
    test_mode: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Transform a raw little-endian f32 file.
    Transform {
        #[command(flatten)]
        size: SizeArgs,
        /// Radix-2 splits before the leaf transforms [default: largest valid up to 4].
        #[arg(long)]
        splits: Option<u32>,
        /// Worker threads [default: $EFFT_WORKERS, else hardware concurrency].
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Report peak memory in the mem_bytes column.
        #[arg(long)]
        mem: bool,
    },
    /// Time every (splits, workers) pair of a grid.
    Scan {
        #[command(flatten)]
        size: SizeArgs,
        /// Splits to try, e.g. 1-4 or 2,3.
        #[arg(long, default_value = "1-4")]
        splits: String,
        /// Worker counts to try [default: powers of two up to the resolved worker count].
        #[arg(long)]
        workers: Option<String>,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
        #[arg(long)]
        mem: bool,
    },
    /// Compare the transform of a signal against the direct sum.
    Check {
        #[command(flatten)]
        size: SizeArgs,
        #[arg(long)]
        splits: Option<u32>,
        #[arg(long)]
        workers: Option<usize>,
        /// Random coefficients compared for sizes above 2^14.
        #[arg(long, default_value_t = 64)]
        spot_checks: usize,
        /// Signal file [default: fixed-seed random values in [-0.5, 0.5]].
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, hide = true)]
        corrupt_output: bool,
    },
    /// Time a list of worker counts and report parallel efficiency.
    Bench {
        #[command(flatten)]
        size: SizeArgs,
        #[arg(long)]
        splits: Option<u32>,
        /// Worker counts, must include 1 [default: powers of two up to the resolved worker count].
        #[arg(long)]
        workers: Option<String>,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
        #[arg(long)]
        mem: bool,
    },
}

fn size_arg(text: &str) -> Result<usize, String> {
    parse_size(text).map_err(|e| e.to_string())
}

fn worker_list(flag: Option<&str>) -> anyhow::Result<Vec<usize>> {
    if let Some(text) = flag {
        return Ok(parse_range(text)?);
    }
    let top = workers_from_env(None).with_context(|| format!("reading {WORKERS_ENV}"))?;
    let mut list: Vec<usize> = std::iter::successors(Some(1), |&t| Some(t * 2))
        .take_while(|&t| t < top)
        .collect();
    list.push(top);
    Ok(list)
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let mut out = io::stdout().lock();
    match cli.command {
        Command::Transform { size, splits, workers, input, output, mem } => {
            let cfg = RunConfig {
                n: size.size,
                splits: splits.unwrap_or_else(|| default_splits(size.size, size.test_mode)),
                workers: workers_from_env(workers)?,
                test_mode: size.test_mode,
                mem,
            };
            cmd_transform(&cfg, &input, &output, &mut out)?;
        }
        Command::Scan { size, splits, workers, repeats, mem } => {
            let splits = parse_range(&splits)?
                .into_iter()
                .map(|s| u32::try_from(s).unwrap_or(u32::MAX))
                .collect();
            let cfg = ScanConfig {
                n: size.size,
                splits,
                workers: worker_list(workers.as_deref())?,
                repeats,
                test_mode: size.test_mode,
                mem,
            };
            if cmd_scan(&cfg, &mut out)?.is_none() {
                eprintln!("no configuration in the grid could run");
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Check { size, splits, workers, spot_checks, input, corrupt_output } => {
            let input = input.map(|path| read_signal(&path, size.size)).transpose()?;
            let cfg = CheckConfig {
                run: RunConfig {
                    n: size.size,
                    splits: splits.unwrap_or_else(|| default_splits(size.size, size.test_mode)),
                    workers: workers_from_env(workers)?,
                    test_mode: size.test_mode,
                    mem: false,
                },
                spot_checks,
                input,
                corrupt: corrupt_output,
            };
            let outcome = cmd_check(&cfg, &mut out)?;
            if !outcome.passed() {
                eprintln!(
                    "accuracy check failed: {:e} exceeds {:e}",
                    outcome.value, outcome.threshold
                );
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Bench { size, splits, workers, repeats, mem } => {
            let cfg = BenchConfig {
                n: size.size,
                splits: splits.unwrap_or_else(|| default_splits(size.size, size.test_mode)),
                workers: worker_list(workers.as_deref())?,
                repeats,
                test_mode: size.test_mode,
                mem,
            };
            cmd_bench(&cfg, &mut out)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
