//! Small statistical helpers for the empirical claim checks.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Standard deviation of the empirical rate of `n` Bernoulli(`p`) draws.
pub fn rate_sigma(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

/// An observed rate compared against an expected one at a given number of σ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateCheck {
    pub observed: f64,
    pub expected: f64,
    pub sigma: f64,
    pub lower: f64,
    pub upper: f64,
    pub pass: bool,
}

impl RateCheck {
    pub fn new(observed: f64, expected: f64, sigma: f64, width: f64) -> Self {
        let (lower, upper) = (expected - width * sigma, expected + width * sigma);
        // a zero-variance expectation must be hit exactly
        let pass = if sigma == 0.0 {
            observed == expected
        } else {
            (lower..=upper).contains(&observed)
        };
        RateCheck {
            observed,
            expected,
            sigma,
            lower,
            upper,
            pass,
        }
    }

    /// `successes / trials` against Bernoulli(`expected`) at 3σ.
    pub fn binomial(successes: u64, trials: u64, expected: f64) -> Self {
        Self::new(
            successes as f64 / trials as f64,
            expected,
            rate_sigma(expected, trials),
            3.0,
        )
    }
}

/// Pearson statistic of `counts` against a uniform expectation.
pub fn chi_square_uniform(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / counts.len() as f64;
    counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum()
}

/// Critical value of χ²(df) at significance `alpha` (upper tail).
pub fn chi_square_critical(df: usize, alpha: f64) -> f64 {
    ChiSquared::new(df as f64)
        .expect("df > 0")
        .inverse_cdf(1.0 - alpha)
}

/// Whether `counts` look uniform at significance `alpha`.
pub fn passes_uniformity(counts: &[u64], alpha: f64) -> bool {
    chi_square_uniform(counts) <= chi_square_critical(counts.len() - 1, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn critical_value_df100() {
        // tabulated χ²₀.₉₉₉(100) = 149.449
        assert!((chi_square_critical(100, 0.001) - 149.449).abs() < 1e-2);
    }

    #[test]
    fn rate_check_bounds() {
        let c = RateCheck::binomial(375, 1000, 0.375);
        assert!(c.pass);
        assert!((c.sigma - (0.375f64 * 0.625 / 1000.0).sqrt()).abs() < 1e-15);
        assert!(!RateCheck::binomial(500, 1000, 0.375).pass);
        assert!(RateCheck::new(1.0, 1.0, 0.0, 3.0).pass);
        assert!(!RateCheck::new(0.9999, 1.0, 0.0, 3.0).pass);
    }

    #[test]
    fn uniformity() {
        assert!(passes_uniformity(&[100; 10], 0.001));
        assert!(!passes_uniformity(&[200, 0, 100, 100], 0.001));
    }
}
