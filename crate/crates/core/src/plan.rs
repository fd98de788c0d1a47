//! Transform configuration.

use crate::error::{FftError, Result};
use crate::scatter::build_scatter_index;

/// Default scatter tile length.
pub const DEFAULT_I_TILE: usize = 16;
/// Default reassembly tile length.
pub const DEFAULT_K_TILE: usize = 64;

/// Smallest leaf size the built-in kernel accepts.
pub const MIN_BINSIZE: usize = 4;

/// Extra factor of two beyond `2^splits` that production sizes must carry.
const TILING_MARGIN_BITS: u32 = 8;

/// Immutable description of one transform configuration.
///
/// A transform of `n` reals is split `splits` times into `bins = 2^splits`
/// contiguous bins of `binsize` elements each. Outside test mode `n` must be
/// a multiple of `2^(splits + 8)`, which keeps every bin at least 256 long.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformPlan {
    n: usize,
    splits: u32,
    bins: usize,
    binsize: usize,
    scatter_index: Vec<usize>,
    i_tile: usize,
    k_tile: usize,
    workers: usize,
    test_mode: bool,
}

impl TransformPlan {
    /// Validates the arguments and derives bins, bin size and scatter table.
    pub fn create(n: usize, splits: u32, workers: usize, test_mode: bool) -> Result<Self> {
        if n == 0 {
            return Err(FftError::InvalidSize);
        }
        if workers == 0 {
            return Err(FftError::InvalidWorkers);
        }
        let bins = match 1usize.checked_shl(splits) {
            Some(b) if b <= n => b,
            _ => return Err(FftError::SplitsTooLarge { n, splits }),
        };
        if !test_mode {
            let multiple = 1usize.checked_shl(splits + TILING_MARGIN_BITS);
            if multiple.is_none_or(|m| !n.is_multiple_of(m)) {
                return Err(FftError::SizeConstraintViolation { n, splits });
            }
        }
        if !n.is_multiple_of(bins) {
            return Err(FftError::BinsizeNotPowerOfTwo { binsize: n / bins });
        }
        let binsize = n / bins;
        if !binsize.is_power_of_two() || binsize < MIN_BINSIZE {
            return Err(FftError::BinsizeNotPowerOfTwo { binsize });
        }
        Ok(Self {
            n,
            splits,
            bins,
            binsize,
            scatter_index: build_scatter_index(splits),
            i_tile: DEFAULT_I_TILE,
            k_tile: DEFAULT_K_TILE,
            workers,
            test_mode,
        })
    }

    /// Overrides the scatter and reassembly tile lengths.
    ///
    /// `i_tile` may be any positive length; `k_tile` must be a power of two.
    pub fn with_tiles(mut self, i_tile: usize, k_tile: usize) -> Result<Self> {
        if i_tile == 0 {
            return Err(FftError::InvalidTile {
                name: "i_tile",
                value: i_tile,
            });
        }
        if !k_tile.is_power_of_two() {
            return Err(FftError::InvalidTile {
                name: "k_tile",
                value: k_tile,
            });
        }
        self.i_tile = i_tile;
        self.k_tile = k_tile;
        Ok(self)
    }

    /// Same plan with a different worker count.
    pub fn with_workers(mut self, workers: usize) -> Result<Self> {
        if workers == 0 {
            return Err(FftError::InvalidWorkers);
        }
        self.workers = workers;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn splits(&self) -> u32 {
        self.splits
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn binsize(&self) -> usize {
        self.binsize
    }

    /// Bin id for each residue class `j = index mod bins`.
    pub fn scatter_index(&self) -> &[usize] {
        &self.scatter_index
    }

    pub fn i_tile(&self) -> usize {
        self.i_tile
    }

    pub fn k_tile(&self) -> usize {
        self.k_tile
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    pub fn test_mode(&self) -> bool {
        self.test_mode
    }
}
