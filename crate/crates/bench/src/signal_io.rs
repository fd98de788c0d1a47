//! Raw signal files: little-endian `f32`, no header.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::BenchError;

/// Seed for every generated benchmark and accuracy signal.
pub const SIGNAL_SEED: u64 = 0xeff7;

/// `n` uniform values in `[-0.5, 0.5]` from a fixed-seed generator.
pub fn random_signal(n: usize, seed: u64) -> Vec<f32> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen_range(-0.5f32..=0.5)).collect()
}

/// Reads exactly `n` values.
pub fn read_signal(path: &Path, n: usize) -> Result<Vec<f32>, BenchError> {
    let bytes = std::fs::read(path).map_err(|source| BenchError::File {
        path: path.to_path_buf(),
        source,
    })?;
    let expected_bytes = n.checked_mul(4).ok_or(BenchError::NonPositiveSize)?;
    if bytes.len() < expected_bytes {
        return Err(BenchError::ShortRead {
            path: path.to_path_buf(),
            expected: n,
            actual: bytes.len() / 4,
        });
    }
    if bytes.len() > expected_bytes {
        return Err(BenchError::TrailingData {
            path: path.to_path_buf(),
            expected: n,
        });
    }
    Ok(bytes
        .chunks_exact(4)
        .map(|b| f32::from_le_bytes([b[0], b[1], b[2], b[3]]))
        .collect())
}

pub fn write_signal(path: &Path, values: &[f32]) -> Result<(), BenchError> {
    let bytes: Vec<u8> = values.iter().flat_map(|v| v.to_le_bytes()).collect();
    std::fs::write(path, bytes).map_err(|source| BenchError::File {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_signal_is_reproducible_and_bounded() {
        let a = random_signal(1000, 3);
        assert_eq!(a, random_signal(1000, 3));
        assert_ne!(a, random_signal(1000, 4));
        assert!(a.iter().all(|v| (-0.5..=0.5).contains(v)));
    }
}
