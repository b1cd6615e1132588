//! Rates with Wilson score intervals.

use serde::Serialize;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Rate {
    pub successes: usize,
    pub trials: usize,
    pub rate: f64,
    pub low: f64,
    pub high: f64,
}

impl Rate {
    pub fn new(successes: usize, trials: usize) -> Self {
        let (low, high) = wilson(successes, trials, Z95);
        Rate {
            successes,
            trials,
            rate: if trials == 0 { 0.0 } else { successes as f64 / trials as f64 },
            low,
            high,
        }
    }
}

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson(k: usize, n: usize, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let p = k as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let low = if k == 0 { 0.0 } else { (center - half).max(0.0) };
    let high = if k as f64 == n { 1.0 } else { (center + half).min(1.0) };
    (low, high)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        // 8 of 10 at z = 1.96: textbook (0.4902, 0.9433)
        let (lo, hi) = wilson(8, 10, 1.96);
        assert!((lo - 0.4902).abs() < 1e-4 && (hi - 0.9433).abs() < 1e-4);
        let (lo, hi) = wilson(0, 50, Z95);
        assert_eq!(lo, 0.0);
        assert!((hi - 0.0713).abs() < 1e-4);
        assert_eq!(wilson(0, 0, Z95), (0.0, 1.0));
    }

    proptest::proptest! {
        #[test]
        fn interval_contains_point(k in 0usize..200, extra in 0usize..200) {
            let n = k + extra;
            let r = Rate::new(k, n);
            proptest::prop_assert!(r.low <= r.rate + 1e-12 && r.rate <= r.high + 1e-12);
            proptest::prop_assert!(0.0 <= r.low && r.high <= 1.0);
        }
    }
}
