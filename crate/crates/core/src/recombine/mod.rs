//! Stages two and three: leaf transforms on every bin and pairwise merging,
//! run as one fork-join recursion over the scratch array.

mod pair;
mod twiddle;

use std::sync::Mutex;

pub use pair::{reassemble_pair_basic, reassemble_pair_inplace};
pub use twiddle::{TwiddleGen, TwiddleTile};

use crate::error::{FftError, Result};
use crate::leaf::LeafDft;

/// Shared state of one recursion: bin size, tiling and the per-worker
/// leaf kernels.
pub struct Recombiner<'a> {
    binsize: usize,
    k_tile: usize,
    workers: usize,
    kernels: &'a [Mutex<Box<dyn LeafDft>>],
}

impl<'a> Recombiner<'a> {
    pub fn new(
        binsize: usize,
        k_tile: usize,
        workers: usize,
        kernels: &'a [Mutex<Box<dyn LeafDft>>],
    ) -> Self {
        assert!(!kernels.is_empty(), "at least one leaf kernel is required");
        Self {
            binsize,
            k_tile,
            workers,
            kernels,
        }
    }

    fn leaf(&self, segment: &mut [f32]) -> Result<()> {
        let worker = rayon::current_thread_index().unwrap_or(0) % self.kernels.len();
        let mut kernel = self.kernels[worker]
            .lock()
            .unwrap_or_else(|poisoned| poisoned.into_inner());
        kernel.transform(segment)
    }

    /// Transforms `segment`, whose length is `binsize * 2^d`, into the
    /// packed spectrum of the data it held before scattering.
    ///
    /// At `binsize` the current worker's leaf kernel runs. Above it the two
    /// halves recurse in parallel (`rayon::join`), then are merged in place.
    pub fn process_and_reassemble(&self, segment: &mut [f32]) -> Result<()> {
        let len = segment.len();
        if len == self.binsize {
            return self.leaf(segment);
        }
        if len < self.binsize || !len.is_multiple_of(2 * self.binsize) {
            return Err(FftError::SizeMismatch {
                expected: self.binsize,
                actual: len,
            });
        }
        let (evens, odds) = segment.split_at_mut(len / 2);
        let (a, b) = rayon::join(
            || self.process_and_reassemble(evens),
            || self.process_and_reassemble(odds),
        );
        a?;
        b?;
        reassemble_pair_inplace(segment, self.k_tile, self.workers)
    }
}
