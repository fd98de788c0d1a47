use thiserror::Error;

/// Errors produced while planning or running a transform.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FftError {
    #[error("transform size must be positive")]
    InvalidSize,
    #[error("worker count must be positive")]
    InvalidWorkers,
    #[error("tile length {name}={value} is invalid (must be a positive power of two)")]
    InvalidTile { name: &'static str, value: usize },
    #[error("size {n} is not a multiple of 2^{} (required for {splits} splits)", splits + 8)]
    SizeConstraintViolation { n: usize, splits: u32 },
    #[error("bin size {binsize} is not a power of two >= 4")]
    BinsizeNotPowerOfTwo { binsize: usize },
    #[error("2^{splits} bins exceed transform size {n}")]
    SplitsTooLarge { n: usize, splits: u32 },
    #[error("failed to allocate {bytes} bytes")]
    AllocationFailure { bytes: usize },
    #[error("length mismatch: expected {expected}, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },
    #[error("coefficient index {index} out of range (max {max})")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("spectrum is not the transform of real data (imaginary part {imag:e} at k={index})")]
    NotRealSpectrum { index: usize, imag: f64 },
    #[error("reference spectrum has zero norm")]
    ZeroReference,
    #[error("failed to start worker pool: {0}")]
    ThreadPool(String),
}

pub type Result<T> = std::result::Result<T, FftError>;
