//! Double-precision reference transforms and accuracy metrics.
//!
//! Nothing here shares code with the fast path; these functions are the
//! ground truth the transform is checked against.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{FftError, Result};

/// `exp(-2 pi i r / m)` with `r` already reduced modulo `m`.
fn unit_root(r: usize, m: usize) -> Complex64 {
    let angle = -2.0 * PI * (r as f64) / (m as f64);
    let (s, c) = angle.sin_cos();
    Complex64::new(c, s)
}

/// Direct evaluation of `F_k = sum_n x_n exp(-2 pi i k n / M)` for
/// `k = 0 ..= M/2`, summed in ascending `n`.
pub fn naive_dft(x: &[f32]) -> Vec<Complex64> {
    let m = x.len();
    if m == 0 {
        return Vec::new();
    }
    let roots: Vec<Complex64> = (0..m).map(|r| unit_root(r, m)).collect();
    (0..=m / 2)
        .map(|k| {
            let mut re = 0.0;
            let mut im = 0.0;
            let mut r = 0usize;
            for &xn in x {
                let w = roots[r];
                re += xn as f64 * w.re;
                im += xn as f64 * w.im;
                r += k;
                if r >= m {
                    r -= m;
                }
            }
            Complex64::new(re, im)
        })
        .collect()
}

/// Single coefficient `F_k`, bit-identical to `naive_dft(x)[k]`, in `O(M)`
/// time and `O(1)` memory.
pub fn naive_dft_at(x: &[f32], k: usize) -> Result<Complex64> {
    let m = x.len();
    if m == 0 || k > m / 2 {
        return Err(FftError::IndexOutOfRange {
            index: k,
            max: m / 2,
        });
    }
    let mut re = 0.0;
    let mut im = 0.0;
    let mut r = 0usize;
    for &xn in x {
        let w = unit_root(r, m);
        re += xn as f64 * w.re;
        im += xn as f64 * w.im;
        r += k;
        if r >= m {
            r -= m;
        }
    }
    Ok(Complex64::new(re, im))
}

/// Packs `F_0 ..= F_{M/2}` into the permuted real layout of length `M`.
///
/// `F_0` and `F_{M/2}` must be real up to `1e-9` of the spectrum's L2 scale.
pub fn pack_perm(coeffs: &[Complex64]) -> Result<Vec<f64>> {
    if coeffs.len() < 2 {
        return Err(FftError::SizeMismatch {
            expected: 2,
            actual: coeffs.len(),
        });
    }
    let half = coeffs.len() - 1;
    let scale = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    for index in [0, half] {
        let imag = coeffs[index].im;
        if imag.abs() > 1e-9 * scale {
            return Err(FftError::NotRealSpectrum { index, imag });
        }
    }
    let mut packed = Vec::with_capacity(2 * half);
    packed.push(coeffs[0].re);
    packed.push(coeffs[half].re);
    for c in &coeffs[1..half] {
        packed.push(c.re);
        packed.push(c.im);
    }
    Ok(packed)
}

/// Relative L2 deviation `||F - F_exact|| / ||F_exact||`, in double precision.
pub fn l2_norm<A, B>(computed: &[A], exact: &[B]) -> Result<f64>
where
    A: Copy + Into<f64>,
    B: Copy + Into<f64>,
{
    if computed.len() != exact.len() {
        return Err(FftError::SizeMismatch {
            expected: exact.len(),
            actual: computed.len(),
        });
    }
    let mut diff = 0.0;
    let mut reference = 0.0;
    for (&a, &b) in computed.iter().zip(exact) {
        let (a, b) = (a.into(), b.into());
        diff += (a - b) * (a - b);
        reference += b * b;
    }
    if reference == 0.0 {
        return Err(FftError::ZeroReference);
    }
    Ok((diff / reference).sqrt())
}

/// Reference scatter: `splits` rounds of plain even/odd separation, each
/// round applied independently to every segment from the previous one.
pub fn even_odd_scatter(x: &[f32], splits: u32) -> Vec<f32> {
    let mut current = x.to_vec();
    let mut segment = x.len();
    for _ in 0..splits {
        let mut next = vec![0.0; x.len()];
        for (src, dst) in current.chunks(segment).zip(next.chunks_mut(segment)) {
            let half = segment / 2;
            for i in 0..half {
                dst[i] = src[2 * i];
                dst[i + half] = src[2 * i + 1];
            }
        }
        current = next;
        segment /= 2;
    }
    current
}

/// Distance in units in the last place between two `f32` values.
///
/// `+0.0` and `-0.0` are zero apart; any NaN is `u32::MAX` away.
pub fn ulp_distance(a: f32, b: f32) -> u32 {
    if a.is_nan() || b.is_nan() {
        return u32::MAX;
    }
    // Map the sign-magnitude bit patterns onto a monotone integer line.
    fn ordered(v: f32) -> i64 {
        let bits = v.to_bits() as i32;
        if bits < 0 {
            -((bits & i32::MAX) as i64)
        } else {
            bits as i64
        }
    }
    (ordered(a) - ordered(b)).unsigned_abs().min(u32::MAX as u64) as u32
}
