//! Parallel real-input FFT for very large one-dimensional transforms.
//!
//! A transform of `n` reals is split `s` times with radix-2 Cooley-Tukey.
//! The input is first scattered into `2^s` contiguous bins, each bin is
//! transformed serially by a per-worker leaf kernel, and adjacent spectra
//! are merged pairwise in place until the full spectrum is assembled. Leaf
//! transforms and merges run in one fork-join recursion on a rayon pool.
//!
//! Output uses the packed permuted layout of [`PermSpectrum`].
//!
//! ```
//! use bigfft::{TransformHandle, TransformPlan};
//!
//! let plan = TransformPlan::create(1 << 12, 2, 2, false).unwrap();
//! let mut fft = TransformHandle::new(plan).unwrap();
//! fft.data_mut()[0] = 1.0;
//! fft.run_transform().unwrap();
//! assert!(fft.result().iter().step_by(2).all(|&re| (re - 1.0).abs() < 1e-6));
//! ```

pub mod buffer;
pub mod error;
pub mod handle;
pub mod leaf;
pub mod oracle;
pub mod plan;
pub mod recombine;
pub mod scatter;
pub mod spectrum;

pub use buffer::SignalBuffer;
pub use error::{FftError, Result};
pub use handle::TransformHandle;
pub use leaf::{LeafDft, RealLeafKernel};
pub use plan::TransformPlan;
pub use spectrum::PermSpectrum;
