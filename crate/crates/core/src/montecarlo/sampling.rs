//! Categorical sampling by cumulative sums and bisection.

use crate::error::{Error, Result};
use crate::qmath::Prng;

/// Smallest `k` with `u < cdf[k]`, by bisection.
///
/// `u` values at or beyond the total (possible after rounding) map to the
/// last outcome.
pub fn categorical_sample(cdf: &[f64], u: f64) -> Result<usize> {
    match cdf.last() {
        Some(&total) if total > 0.0 => {}
        _ => return Err(Error::EmptyDistribution),
    }
    let k = cdf.partition_point(|&c| c <= u);
    Ok(k.min(cdf.len() - 1))
}

/// Cumulative table for repeated draws from one distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct Cdf {
    cumulative: Vec<f64>,
}

impl Cdf {
    /// Negative weights (rounding residue of exact probabilities) count as 0.
    pub fn new(weights: &[f64]) -> Result<Self> {
        let mut acc = 0.0;
        let cumulative: Vec<f64> = weights
            .iter()
            .map(|&w| {
                acc += w.max(0.0);
                acc
            })
            .collect();
        if acc <= 0.0 || !acc.is_finite() {
            return Err(Error::EmptyDistribution);
        }
        Ok(Self { cumulative })
    }

    pub fn len(&self) -> usize {
        self.cumulative.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cumulative.is_empty()
    }

    pub fn total(&self) -> f64 {
        *self.cumulative.last().expect("nonempty by construction")
    }

    pub fn sample(&self, prng: &mut Prng) -> usize {
        let u = prng.uniform() * self.total();
        categorical_sample(&self.cumulative, u).expect("nonempty by construction")
    }

    /// Outcome counts of `draws` independent samples.
    pub fn counts(&self, draws: u64, prng: &mut Prng) -> Vec<u64> {
        let mut counts = vec![0; self.len()];
        for _ in 0..draws {
            counts[self.sample(prng)] += 1;
        }
        counts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(categorical_sample(&[0.5, 1.0], 0.25), Ok(0));
        assert_eq!(categorical_sample(&[0.5, 1.0], 0.75), Ok(1));
        assert_eq!(categorical_sample(&[0.5, 1.0], 0.5), Ok(1));
        assert_eq!(categorical_sample(&[0.5, 1.0], 1.0), Ok(1));
        assert_eq!(categorical_sample(&[0.0, 0.5, 0.5, 1.0], 0.0), Ok(1));
    }

    #[test]
    fn empty_distributions() {
        assert_eq!(categorical_sample(&[], 0.0), Err(Error::EmptyDistribution));
        assert_eq!(categorical_sample(&[0.0, 0.0], 0.0), Err(Error::EmptyDistribution));
        assert_eq!(Cdf::new(&[0.0, -1e-18]), Err(Error::EmptyDistribution));
    }

    #[test]
    fn matches_linear_scan() {
        let mut p = Prng::new(4);
        let cdf = [0.1, 0.1, 0.35, 0.9, 1.3];
        for _ in 0..10_000 {
            let u = p.uniform() * 1.3;
            let scan = cdf.iter().position(|&c| u < c).unwrap();
            assert_eq!(categorical_sample(&cdf, u).unwrap(), scan);
        }
    }

    #[test]
    fn chi_square_goodness_of_fit() {
        let probs = [0.1, 0.2, 0.3, 0.4];
        let n = 1_000_000u64;
        let counts = Cdf::new(&probs).unwrap().counts(n, &mut Prng::new(2024));
        let chi2: f64 = counts
            .iter()
            .zip(probs)
            .map(|(&c, p)| {
                let e = p * n as f64;
                (c as f64 - e).powi(2) / e
            })
            .sum();
        // 3 degrees of freedom, alpha = 0.001
        assert!(chi2 < 16.266, "chi2 = {chi2}");
        for (&c, p) in counts.iter().zip(probs) {
            let sigma = (n as f64 * p * (1.0 - p)).sqrt();
            assert!((c as f64 - n as f64 * p).abs() < 3.0 * sigma);
        }
    }
}
