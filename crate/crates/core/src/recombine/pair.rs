//! Merging two adjacent packed half-spectra into one.
//!
//! With `E` the spectrum of the even samples, `O` that of the odd samples and
//! `W_k = exp(-i pi k / m)`, the merged length-`2m` spectrum is
//! `F_k = E_k + W_k O_k` and `F_{m-k} = conj(E_k - W_k O_k)` for
//! `1 <= k < m/2`, plus the real slots `F_0`, `F_m` and the split `F_{m/2}`.

use rayon::prelude::*;

use super::twiddle::{TwiddleGen, TwiddleTile};
use crate::buffer::SignalBuffer;
use crate::error::{FftError, Result};

/// Merges above this many tile lengths spread their tile loop over workers.
const PARALLEL_MERGE_TILES: usize = 64;

/// One butterfly: returns `(Re F_k, Im F_k, Re F_{m-k}, Im F_{m-k})`.
#[inline(always)]
fn merge_one(er: f32, ei: f32, or: f32, oi: f32, c: f32, s: f32) -> (f32, f32, f32, f32) {
    let tr = or * c - oi * s;
    let ti = or * s + oi * c;
    (er + tr, ei + ti, er - tr, -(ei - ti))
}

fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(FftError::SizeMismatch { expected, actual });
    }
    Ok(())
}

/// Out-of-place merge of `evens` and `odds` (each length `m`, even) into
/// `target` (length `2m`).
pub fn reassemble_pair_basic(evens: &[f32], odds: &[f32], target: &mut [f32]) -> Result<()> {
    let m = evens.len();
    if m < 2 || !m.is_multiple_of(2) {
        return Err(FftError::SizeMismatch {
            expected: (m + m % 2).max(2),
            actual: m,
        });
    }
    check_len(m, odds.len())?;
    check_len(2 * m, target.len())?;
    let gen = TwiddleGen::new(m);

    target[0] = evens[0] + odds[0];
    target[1] = evens[0] - odds[0];
    target[m] = evens[1];
    target[m + 1] = -odds[1];

    for k in 1..m / 2 {
        let (c, s) = gen.at(k);
        let (fr, fi, mr, mi) = merge_one(
            evens[2 * k],
            evens[2 * k + 1],
            odds[2 * k],
            odds[2 * k + 1],
            c,
            s,
        );
        target[2 * k] = fr;
        target[2 * k + 1] = fi;
        target[2 * m - 2 * k] = mr;
        target[2 * m - 2 * k + 1] = mi;
    }
    Ok(())
}

/// Per-task scratch: one twiddle tile and eight gathered lanes.
struct TileScratch {
    twiddles: TwiddleTile,
    lanes: SignalBuffer,
}

impl TileScratch {
    fn new(k_tile: usize) -> Self {
        Self {
            twiddles: TwiddleTile::new(k_tile),
            lanes: SignalBuffer::zeroed(8 * k_tile).expect("tile allocation"),
        }
    }
}

/// The four regions one tile reads and writes.
///
/// `lo_*` hold slots `2k, 2k+1` for `k = kk .. kk+T` and `hi_*` hold the
/// mirrored slots of `k' = m/2 - k`, which run backwards.
struct TileSlots<'a> {
    lo_e: &'a mut [f32],
    lo_o: &'a mut [f32],
    hi_e: &'a mut [f32],
    hi_o: &'a mut [f32],
}

/// Pairs `k` with `k' = m/2 - k` so that the slots written are exactly the
/// slots read: `F_k` to `E_k`'s place, `F_{m-k}` to `O_{k'}`'s, `F_{k'}` to
/// `E_{k'}`'s and `F_{m-k'}` to `O_k`'s.
fn merge_tile(slots: TileSlots<'_>, kk: usize, gen: &TwiddleGen, scratch: &mut TileScratch) {
    let t = scratch.twiddles.len();
    gen.fill(&mut scratch.twiddles, kk);
    let (cos, sin) = (scratch.twiddles.cos(), scratch.twiddles.sin());
    let (er, rest) = scratch.lanes.split_at_mut(t);
    let (ei, rest) = rest.split_at_mut(t);
    let (or, rest) = rest.split_at_mut(t);
    let (oi, rest) = rest.split_at_mut(t);
    let (mer, rest) = rest.split_at_mut(t);
    let (mei, rest) = rest.split_at_mut(t);
    let (mor, moi) = rest.split_at_mut(t);

    let TileSlots {
        lo_e,
        lo_o,
        hi_e,
        hi_o,
    } = slots;

    // Gather stride-2 data, mirror lanes reversed so lane i is k = kk + i.
    for i in 0..t {
        er[i] = lo_e[2 * i];
        ei[i] = lo_e[2 * i + 1];
        or[i] = lo_o[2 * i];
        oi[i] = lo_o[2 * i + 1];
        let j = 2 * (t - 1 - i);
        mer[i] = hi_e[j];
        mei[i] = hi_e[j + 1];
        mor[i] = hi_o[j];
        moi[i] = hi_o[j + 1];
    }

    for i in 0..t {
        let (c, s) = (cos[i], sin[i]);
        let (fr, fi, gr, gi) = merge_one(er[i], ei[i], or[i], oi[i], c, s);
        let (hr, hi, pr, pi) = merge_one(mer[i], mei[i], mor[i], moi[i], -s, -c);
        er[i] = fr;
        ei[i] = fi;
        // F_{m-k} lands where O_{k'} was.
        mor[i] = gr;
        moi[i] = gi;
        mer[i] = hr;
        mei[i] = hi;
        // F_{m-k'} lands where O_k was.
        or[i] = pr;
        oi[i] = pi;
    }

    for i in 0..t {
        lo_e[2 * i] = er[i];
        lo_e[2 * i + 1] = ei[i];
        lo_o[2 * i] = or[i];
        lo_o[2 * i + 1] = oi[i];
        let j = 2 * (t - 1 - i);
        hi_e[j] = mer[i];
        hi_e[j + 1] = mei[i];
        hi_o[j] = mor[i];
        hi_o[j + 1] = moi[i];
    }
}

/// Scalar merge of `k = 1 .. t` and their mirrors, with the same slot
/// geometry as [`merge_tile`] for the first, partial tile.
fn merge_prologue(slots: TileSlots<'_>, t: usize, gen: &TwiddleGen) {
    let TileSlots {
        lo_e,
        lo_o,
        hi_e,
        hi_o,
    } = slots;
    for i in 1..t {
        let (c, s) = gen.at(i);
        let j = 2 * (t - 1 - i);
        let (fr, fi, gr, gi) = merge_one(lo_e[2 * i], lo_e[2 * i + 1], lo_o[2 * i], lo_o[2 * i + 1], c, s);
        let (hr, hi, pr, pi) = merge_one(hi_e[j], hi_e[j + 1], hi_o[j], hi_o[j + 1], -s, -c);
        lo_e[2 * i] = fr;
        lo_e[2 * i + 1] = fi;
        hi_o[j] = gr;
        hi_o[j + 1] = gi;
        hi_e[j] = hr;
        hi_e[j + 1] = hi;
        lo_o[2 * i] = pr;
        lo_o[2 * i + 1] = pi;
    }
}

/// In-place merge of `buffer = [evens | odds]` (each half length `m`).
///
/// Produces exactly what [`reassemble_pair_basic`] writes to a fresh target.
/// The tiled kernel needs `m` to be a multiple of `4 * k_tile`; smaller or
/// irregular merges go through the basic kernel and a copy. Merges longer
/// than `64 * k_tile` split their tile loop across the current pool when
/// `workers > 1`.
pub fn reassemble_pair_inplace(buffer: &mut [f32], k_tile: usize, workers: usize) -> Result<()> {
    if !k_tile.is_power_of_two() {
        return Err(FftError::InvalidTile {
            name: "k_tile",
            value: k_tile,
        });
    }
    let len = buffer.len();
    if len < 4 || !len.is_multiple_of(4) {
        return Err(FftError::SizeMismatch {
            expected: len.div_ceil(4) * 4,
            actual: len,
        });
    }
    let m = len / 2;
    if !m.is_multiple_of(4 * k_tile) {
        let (evens, odds) = buffer.split_at(m);
        let mut target = vec![0.0; len];
        reassemble_pair_basic(evens, odds, &mut target)?;
        buffer.copy_from_slice(&target);
        return Ok(());
    }

    let gen = TwiddleGen::new(m);
    let t = k_tile;
    let (evens, odds) = buffer.split_at_mut(m);

    // F_0, F_m and F_{m/2} occupy the slots of E_0, E_{m/2}, O_0, O_{m/2}.
    let (e0, en, o0, on) = (evens[0], evens[1], odds[0], odds[1]);
    evens[0] = e0 + o0;
    evens[1] = e0 - o0;
    odds[0] = en;
    odds[1] = -on;

    // k = m/4 is its own mirror.
    let q = m / 2;
    let (c, s) = gen.at(m / 4);
    let (fr, fi, gr, gi) = merge_one(evens[q], evens[q + 1], odds[q], odds[q + 1], c, s);
    evens[q] = fr;
    evens[q + 1] = fi;
    odds[q] = gr;
    odds[q + 1] = gi;

    let (e_lo, e_hi) = evens.split_at_mut(q);
    let (o_lo, o_hi) = odds.split_at_mut(q);
    let (e_hi, o_hi) = (&mut e_hi[2..], &mut o_hi[2..]);

    let mut lo_e = e_lo.chunks_mut(2 * t);
    let mut lo_o = o_lo.chunks_mut(2 * t);
    let mut hi_e = e_hi.chunks_mut(2 * t).rev();
    let mut hi_o = o_hi.chunks_mut(2 * t).rev();

    // The prologue's mirror region is 2t - 2 long, so it is absent for t = 1.
    let (first_hi_e, first_hi_o): (&mut [f32], &mut [f32]) = if t > 1 {
        (hi_e.next().expect("prologue"), hi_o.next().expect("prologue"))
    } else {
        (&mut [], &mut [])
    };
    let first = TileSlots {
        lo_e: lo_e.next().expect("prologue"),
        lo_o: lo_o.next().expect("prologue"),
        hi_e: first_hi_e,
        hi_o: first_hi_o,
    };
    merge_prologue(first, t, &gen);

    let tiles = lo_e.zip(lo_o).zip(hi_e.zip(hi_o)).enumerate();
    let merge = |scratch: &mut TileScratch, (idx, ((lo_e, lo_o), (hi_e, hi_o))): (usize, _)| {
        let slots = TileSlots {
            lo_e,
            lo_o,
            hi_e,
            hi_o,
        };
        merge_tile(slots, (idx + 1) * t, &gen, scratch);
    };

    if workers > 1 && 2 * m > PARALLEL_MERGE_TILES * t {
        tiles
            .collect::<Vec<_>>()
            .into_par_iter()
            .for_each_init(|| TileScratch::new(t), |scratch, item| merge(scratch, item));
    } else {
        let mut scratch = TileScratch::new(t);
        tiles.for_each(|item| merge(&mut scratch, item));
    }
    Ok(())
}
