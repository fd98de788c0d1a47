//! Stage one: reorder the input into contiguous bins.
//!
//! Element `i * bins + j` of the input lands at offset `i` of bin
//! `bitrev(j)`. After `s` splits the bins hold exactly the subsequences a
//! depth-`s` even/odd recursion would produce, in recursion order.

use rayon::prelude::*;

use crate::error::{FftError, Result};
use crate::plan::TransformPlan;

/// Target number of scatter tasks per worker.
const TASKS_PER_WORKER: usize = 8;

/// Bit-reversal permutation on `splits` bits.
pub fn build_scatter_index(splits: u32) -> Vec<usize> {
    let bins = 1usize << splits;
    (0..bins)
        .map(|j| {
            if splits == 0 {
                0
            } else {
                j.reverse_bits() >> (usize::BITS - splits)
            }
        })
        .collect()
}

/// Tiled parallel scatter of `input` into `scratch`.
///
/// Work is split into contiguous runs of `i_tile`-long tiles, about eight
/// runs per worker. Within a run the loop order is tile, then residue `j`,
/// then offset `i`, so writes to each bin are unit stride.
pub fn scatter(input: &[f32], scratch: &mut [f32], plan: &TransformPlan) -> Result<()> {
    let n = plan.n();
    for len in [input.len(), scratch.len()] {
        if len != n {
            return Err(FftError::SizeMismatch {
                expected: n,
                actual: len,
            });
        }
    }
    let bins = plan.bins();
    let binsize = plan.binsize();
    let i_tile = plan.i_tile();
    let index = plan.scatter_index();

    let tiles = binsize.div_ceil(i_tile);
    let tasks = tiles.min(TASKS_PER_WORKER * plan.workers()).max(1);
    let run = tiles.div_ceil(tasks) * i_tile;
    let tasks = binsize.div_ceil(run);

    // Slice every bin into the per-task offset ranges so each task owns a
    // disjoint window of every bin.
    let mut windows: Vec<Vec<&mut [f32]>> = (0..tasks).map(|_| Vec::with_capacity(bins)).collect();
    for bin in scratch.chunks_mut(binsize) {
        for (task, part) in bin.chunks_mut(run).enumerate() {
            windows[task].push(part);
        }
    }

    windows
        .into_par_iter()
        .enumerate()
        .for_each(|(task, mut dest)| {
            let start = task * run;
            let end = (start + run).min(binsize);
            let mut ii = start;
            while ii < end {
                let tile_end = (ii + i_tile).min(end);
                for (j, &bin) in index.iter().enumerate() {
                    let out = &mut dest[bin][ii - start..tile_end - start];
                    for (o, i) in out.iter_mut().zip(ii..tile_end) {
                        *o = input[i * bins + j];
                    }
                }
                ii = tile_end;
            }
        });
    Ok(())
}
