//! Parsing of command-line values.

use crate::BenchError;

pub const WORKERS_ENV: &str = "EFFT_WORKERS";

/// Accepts a plain integer or `2^K`.
pub fn parse_size(text: &str) -> Result<usize, BenchError> {
    let bad = || BenchError::InvalidSize(text.to_string());
    let text = text.trim();
    let n = match text.split_once('^') {
        Some((base, exp)) => {
            if base.trim() != "2" {
                return Err(bad());
            }
            let k: u32 = exp.trim().parse().map_err(|_| bad())?;
            1usize.checked_shl(k).filter(|_| k < usize::BITS).ok_or_else(bad)?
        }
        None => text.parse().map_err(|_| bad())?,
    };
    if n == 0 {
        return Err(bad());
    }
    Ok(n)
}

/// Comma-separated list whose items are integers or inclusive `lo-hi`
/// ranges, e.g. `1,2,4` or `2-5` or `0-2,6`. Order is kept, duplicates are
/// dropped.
pub fn parse_range(text: &str) -> Result<Vec<usize>, BenchError> {
    let bad = || BenchError::InvalidRange(text.to_string());
    let mut values = Vec::new();
    for item in text.split(',') {
        let item = item.trim();
        let (lo, hi) = match item.split_once('-') {
            Some((lo, hi)) => (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?),
            None => {
                let v: usize = item.parse().map_err(|_| bad())?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(bad());
        }
        for v in lo..=hi {
            if !values.contains(&v) {
                values.push(v);
            }
        }
    }
    Ok(values)
}

/// Worker count from the flag, else the environment value, else the
/// hardware concurrency.
pub fn resolve_workers(flag: Option<usize>, env: Option<&str>) -> Result<usize, BenchError> {
    if let Some(w) = flag {
        return positive(w, &w.to_string());
    }
    if let Some(text) = env {
        let w = text
            .trim()
            .parse()
            .map_err(|_| BenchError::InvalidWorkers(text.to_string()))?;
        return positive(w, text);
    }
    Ok(std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn positive(w: usize, text: &str) -> Result<usize, BenchError> {
    if w == 0 {
        return Err(BenchError::InvalidWorkers(text.to_string()));
    }
    Ok(w)
}

/// Worker count with the environment variable read from the process.
pub fn workers_from_env(flag: Option<usize>) -> Result<usize, BenchError> {
    let env = std::env::var(WORKERS_ENV).ok();
    resolve_workers(flag, env.as_deref())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(parse_size("4096").unwrap(), 4096);
        assert_eq!(parse_size("2^12").unwrap(), 4096);
        assert_eq!(parse_size(" 2^0 ").unwrap(), 1);
        for bad in ["", "0", "3^4", "2^", "2^x", "2^64", "-8", "1e6"] {
            assert!(parse_size(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("1,2,4").unwrap(), vec![1, 2, 4]);
        assert_eq!(parse_range("2-5").unwrap(), vec![2, 3, 4, 5]);
        assert_eq!(parse_range("0-2,6,1").unwrap(), vec![0, 1, 2, 6]);
        assert_eq!(parse_range("3").unwrap(), vec![3]);
        for bad in ["", "a", "5-2", "1,,2", "1-"] {
            assert!(parse_range(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn worker_precedence() {
        assert_eq!(resolve_workers(Some(3), Some("8")).unwrap(), 3);
        assert_eq!(resolve_workers(None, Some("8")).unwrap(), 8);
        assert!(resolve_workers(None, None).unwrap() >= 1);
        assert!(resolve_workers(Some(0), None).is_err());
        assert!(resolve_workers(None, Some("0")).is_err());
        assert!(resolve_workers(None, Some("many")).is_err());
    }
}
