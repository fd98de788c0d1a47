//! Twiddle factors for one merge.
//!
//! A merge of two length-`m` spectra needs `W_k = exp(-i pi k / m)` for
//! `0 <= k < m/2`. Values are built in double precision as a block base
//! angle times a small per-merge step table, then rounded to `f32`. Indices
//! above `m/4` are reflected through `W_{m/2-k} = -i conj(W_k)`, so every
//! caller that asks for the same `k` gets bit-identical factors.

use std::f64::consts::PI;

use crate::buffer::SignalBuffer;

/// Base angles are taken at multiples of this many indices.
const BLOCK: usize = 64;

#[derive(Debug, Clone)]
pub struct TwiddleGen {
    m: usize,
    trigconst: f64,
    step: Vec<(f64, f64)>,
}

impl TwiddleGen {
    /// Generator for merging two spectra of length `m`.
    pub fn new(m: usize) -> Self {
        let trigconst = -PI / m as f64;
        let steps = BLOCK.min(m / 4 + 1);
        let step = (0..steps)
            .map(|i| {
                let (s, c) = (i as f64 * trigconst).sin_cos();
                (c, s)
            })
            .collect();
        Self { m, trigconst, step }
    }

    pub fn trigconst(&self) -> f64 {
        self.trigconst
    }

    fn base(&self, block_start: usize) -> (f64, f64) {
        let (s, c) = (block_start as f64 * self.trigconst).sin_cos();
        (c, s)
    }

    fn compose(base: (f64, f64), step: (f64, f64)) -> (f32, f32) {
        let (bc, bs) = base;
        let (sc, ss) = step;
        ((bc * sc - bs * ss) as f32, (bc * ss + bs * sc) as f32)
    }

    /// `(cos, sin)` of `k * trigconst` for `k <= m/4`.
    fn direct(&self, k: usize) -> (f32, f32) {
        let start = k - k % BLOCK;
        Self::compose(self.base(start), self.step[k - start])
    }

    /// `(cos, sin)` of `k * trigconst` for any `0 <= k < m/2`.
    pub fn at(&self, k: usize) -> (f32, f32) {
        if 4 * k <= self.m {
            self.direct(k)
        } else {
            let (c, s) = self.direct(self.m / 2 - k);
            (-s, -c)
        }
    }

    /// Fills `tile` with the factors for `start .. start + tile.len()`,
    /// all of which must be `<= m/4`.
    pub fn fill(&self, tile: &mut TwiddleTile, start: usize) {
        debug_assert!(4 * (start + tile.len() - 1) <= self.m);
        let mut k = start;
        let mut i = 0;
        while i < tile.len() {
            let block = k - k % BLOCK;
            let base = self.base(block);
            let run = (block + BLOCK - k).min(tile.len() - i);
            let cos = &mut tile.cos[i..i + run];
            let sin = &mut tile.sin[i..i + run];
            let step = &self.step[k - block..k - block + run];
            for ((c, s), &st) in cos.iter_mut().zip(sin.iter_mut()).zip(step) {
                (*c, *s) = Self::compose(base, st);
            }
            k += run;
            i += run;
        }
    }
}

/// Cosines and sines for one tile of consecutive `k`, in two 64-byte
/// aligned arrays.
#[derive(Debug)]
pub struct TwiddleTile {
    cos: SignalBuffer,
    sin: SignalBuffer,
}

impl TwiddleTile {
    pub fn new(len: usize) -> Self {
        Self {
            cos: SignalBuffer::zeroed(len).expect("tile allocation"),
            sin: SignalBuffer::zeroed(len).expect("tile allocation"),
        }
    }

    pub fn len(&self) -> usize {
        self.cos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cos.is_empty()
    }

    pub fn cos(&self) -> &[f32] {
        &self.cos
    }

    pub fn sin(&self) -> &[f32] {
        &self.sin
    }
}
