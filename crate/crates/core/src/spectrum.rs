//! The packed permuted layout of a real-input spectrum.
//!
//! A length-`M` real buffer holds the `M/2 + 1` non-redundant coefficients
//! `F_k = R_k + i I_k` of a real signal as
//! `[R_0, R_{M/2}, R_1, I_1, R_2, I_2, ..., R_{M/2-1}, I_{M/2-1}]`.
//! Coefficients above `M/2` follow from `F_{M-k} = conj(F_k)`.

use num_complex::Complex64;

use crate::error::{FftError, Result};

/// Read-only view of a buffer in packed permuted layout.
#[derive(Debug, Clone, Copy)]
pub struct PermSpectrum<'a> {
    data: &'a [f32],
}

impl<'a> PermSpectrum<'a> {
    /// Wraps `data`; its length must be even and at least 2.
    pub fn new(data: &'a [f32]) -> Result<Self> {
        if data.len() < 2 || !data.len().is_multiple_of(2) {
            return Err(FftError::SizeMismatch {
                expected: data.len().max(2) + data.len() % 2,
                actual: data.len(),
            });
        }
        Ok(Self { data })
    }

    /// Transform length `M`.
    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &'a [f32] {
        self.data
    }

    /// Coefficient `F_k` for any `0 <= k < M`, using conjugate symmetry for
    /// the upper half.
    pub fn coefficient(&self, k: usize) -> Result<Complex64> {
        let m = self.len();
        if k >= m {
            return Err(FftError::IndexOutOfRange {
                index: k,
                max: m - 1,
            });
        }
        let half = m / 2;
        let c = match k {
            0 => Complex64::new(self.data[0] as f64, 0.0),
            _ if k == half => Complex64::new(self.data[1] as f64, 0.0),
            _ if k < half => Complex64::new(self.data[2 * k] as f64, self.data[2 * k + 1] as f64),
            _ => {
                let j = m - k;
                Complex64::new(self.data[2 * j] as f64, -(self.data[2 * j + 1] as f64))
            }
        };
        Ok(c)
    }

    /// All `M` coefficients of the full complex spectrum.
    pub fn to_full_spectrum(&self) -> Vec<Complex64> {
        (0..self.len())
            .map(|k| self.coefficient(k).expect("index in range"))
            .collect()
    }
}
