//! Serial real-input DFT kernels used on each bin.

use std::f64::consts::PI;

use crate::error::{FftError, Result};

/// A serial real-input DFT of fixed size writing the packed permuted layout
/// in place.
///
/// Implementations must not spawn parallel work; the engine runs one kernel
/// per worker and calls them concurrently on disjoint bins.
pub trait LeafDft: Send {
    /// Transform size `m`.
    fn size(&self) -> usize;

    /// Replaces `buffer` (length `m`) by its packed spectrum.
    fn transform(&mut self, buffer: &mut [f32]) -> Result<()>;
}

/// Radix-2 real FFT for power-of-two sizes `m >= 4`.
///
/// The input is viewed as `m/2` complex pairs, transformed with an iterative
/// in-place complex FFT, then split into the real spectrum. All twiddles are
/// computed in double precision once and stored as `f32`.
#[derive(Debug, Clone)]
pub struct RealLeafKernel {
    m: usize,
    /// `(i, j)` index pairs with `i < j` swapped by the bit-reversal pass.
    swaps: Vec<(u32, u32)>,
    /// Per-stage complex twiddles, stage of half-length `len` at `len - 1`.
    stage_re: Vec<f32>,
    stage_im: Vec<f32>,
    /// `exp(-2 pi i k / m)` for `k = 0 ..= m/4`.
    split_re: Vec<f32>,
    split_im: Vec<f32>,
}

impl RealLeafKernel {
    pub fn new(m: usize) -> Result<Self> {
        if !m.is_power_of_two() || m < 4 {
            return Err(FftError::BinsizeNotPowerOfTwo { binsize: m });
        }
        let half = m / 2;
        let bits = half.trailing_zeros();

        let mut swaps = Vec::new();
        for i in 0..half {
            let j = if bits == 0 {
                0
            } else {
                i.reverse_bits() >> (usize::BITS - bits)
            };
            if i < j {
                swaps.push((i as u32, j as u32));
            }
        }

        let mut stage_re = Vec::with_capacity(half);
        let mut stage_im = Vec::with_capacity(half);
        let mut len = 1;
        while len < half {
            for j in 0..len {
                let (s, c) = (-PI * j as f64 / len as f64).sin_cos();
                stage_re.push(c as f32);
                stage_im.push(s as f32);
            }
            len *= 2;
        }

        let (split_re, split_im) = (0..=m / 4)
            .map(|k| {
                let (s, c) = (-2.0 * PI * k as f64 / m as f64).sin_cos();
                (c as f32, s as f32)
            })
            .unzip();

        Ok(Self {
            m,
            swaps,
            stage_re,
            stage_im,
            split_re,
            split_im,
        })
    }

    /// In-place complex FFT over `data` viewed as interleaved pairs.
    fn complex_fft(&self, data: &mut [f32]) {
        for &(i, j) in &self.swaps {
            let (i, j) = (2 * i as usize, 2 * j as usize);
            data.swap(i, j);
            data.swap(i + 1, j + 1);
        }
        let half = self.m / 2;
        let mut len = 1;
        while len < half {
            let wr = &self.stage_re[len - 1..2 * len - 1];
            let wi = &self.stage_im[len - 1..2 * len - 1];
            for block in data.chunks_exact_mut(4 * len) {
                let (lo, hi) = block.split_at_mut(2 * len);
                for (j, (a, b)) in lo
                    .chunks_exact_mut(2)
                    .zip(hi.chunks_exact_mut(2))
                    .enumerate()
                {
                    let tr = b[0] * wr[j] - b[1] * wi[j];
                    let ti = b[0] * wi[j] + b[1] * wr[j];
                    b[0] = a[0] - tr;
                    b[1] = a[1] - ti;
                    a[0] += tr;
                    a[1] += ti;
                }
            }
            len *= 2;
        }
    }

    /// Turns the half-size complex spectrum `Z` into the real spectrum.
    ///
    /// With `E_k = (Z_k + conj Z_{h-k}) / 2` and
    /// `O_k = -i (Z_k - conj Z_{h-k}) / 2`, `F_k = E_k + W_k O_k` and
    /// `F_{h-k} = conj(E_k - W_k O_k)`, so each pass over `k` rewrites the
    /// two slots it read.
    fn split_real(&self, data: &mut [f32]) {
        let half = self.m / 2;
        let (z0r, z0i) = (data[0], data[1]);
        data[0] = z0r + z0i;
        data[1] = z0r - z0i;
        for k in 1..=half / 2 {
            let j = half - k;
            let (ar, ai) = (data[2 * k], data[2 * k + 1]);
            let (br, bi) = (data[2 * j], -data[2 * j + 1]);
            let er = 0.5 * (ar + br);
            let ei = 0.5 * (ai + bi);
            // O = -i * (a - b) / 2
            let or = 0.5 * (ai - bi);
            let oi = -0.5 * (ar - br);
            let (wr, wi) = (self.split_re[k], self.split_im[k]);
            let tr = wr * or - wi * oi;
            let ti = wr * oi + wi * or;
            data[2 * k] = er + tr;
            data[2 * k + 1] = ei + ti;
            if j != k {
                data[2 * j] = er - tr;
                data[2 * j + 1] = -(ei - ti);
            }
        }
    }
}

impl LeafDft for RealLeafKernel {
    fn size(&self) -> usize {
        self.m
    }

    fn transform(&mut self, buffer: &mut [f32]) -> Result<()> {
        if buffer.len() != self.m {
            return Err(FftError::SizeMismatch {
                expected: self.m,
                actual: buffer.len(),
            });
        }
        self.complex_fft(buffer);
        self.split_real(buffer);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(x: &[f32]) -> Vec<f32> {
        let mut kernel = RealLeafKernel::new(x.len()).unwrap();
        let mut buf = x.to_vec();
        kernel.transform(&mut buf).unwrap();
        buf
    }

    fn assert_close(got: &[f32], want: &[f32], tol: f32) {
        assert_eq!(got.len(), want.len());
        for (i, (g, w)) in got.iter().zip(want).enumerate() {
            assert!((g - w).abs() <= tol, "slot {i}: {g} vs {w}");
        }
    }

    #[test]
    fn impulse() {
        let mut x = [0.0; 8];
        x[0] = 1.0;
        assert_close(&run(&x), &[1., 1., 1., 0., 1., 0., 1., 0.], 1e-6);
    }

    #[test]
    fn constant() {
        assert_close(&run(&[1.0; 8]), &[8., 0., 0., 0., 0., 0., 0., 0.], 1e-6);
    }

    #[test]
    fn ramp_of_eight() {
        let x: Vec<f32> = (1..=8).map(|v| v as f32).collect();
        assert_close(
            &run(&x),
            &[36., -4., -4., 9.6569, -4., 4., -4., 1.6569],
            1e-3,
        );
    }

    #[test]
    fn smallest_size() {
        assert_close(&run(&[1., 2., 3., 4.]), &[10., -2., -2., 2.], 1e-6);
    }

    #[test]
    fn pure_tones() {
        for m in [16usize, 64, 256] {
            for q in 1..m / 2 {
                let x: Vec<f32> = (0..m)
                    .map(|n| (2.0 * PI * (n * q) as f64 / m as f64).cos() as f32)
                    .collect();
                let out = run(&x);
                let tol = 1e-3 * m as f32;
                for (slot, &v) in out.iter().enumerate() {
                    let want = if slot == 2 * q { m as f32 / 2.0 } else { 0.0 };
                    assert!((v - want).abs() <= tol, "m={m} q={q} slot={slot}: {v}");
                }
            }
        }
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(RealLeafKernel::new(2).is_err());
        assert!(RealLeafKernel::new(12).is_err());
        let mut k = RealLeafKernel::new(8).unwrap();
        assert_eq!(
            k.transform(&mut [0.0; 4]),
            Err(FftError::SizeMismatch { expected: 8, actual: 4 })
        );
    }

    #[test]
    fn kernel_is_reusable() {
        let x: Vec<f32> = (0..64).map(|v| (v as f32 * 0.37).sin()).collect();
        let mut kernel = RealLeafKernel::new(64).unwrap();
        let mut a = x.clone();
        kernel.transform(&mut a).unwrap();
        let mut b = x.clone();
        kernel.transform(&mut b).unwrap();
        assert_eq!(a, b);
    }
}
