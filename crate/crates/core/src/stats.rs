//! Summary statistics for trial outcomes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_RESAMPLES: usize = 2000;

pub fn mean(xs: &[f64]) -> Option<f64> {
    (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
}

/// Sample standard deviation; 0 for a single value.
pub fn std_dev(xs: &[f64]) -> Option<f64> {
    let m = mean(xs)?;
    if xs.len() == 1 {
        return Some(0.0);
    }
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    Some((ss / (xs.len() - 1) as f64).sqrt())
}

fn resampled_means(xs: &[f64], resamples: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = xs.len();
    let mut means: Vec<f64> = (0..resamples)
        .map(|_| (0..n).map(|_| xs[rng.gen_range(0..n)]).sum::<f64>() / n as f64)
        .collect();
    means.sort_by(f64::total_cmp);
    means
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let idx = ((sorted.len() - 1) as f64 * q).round() as usize;
    sorted[idx.min(sorted.len() - 1)]
}

/// Two-sided percentile bootstrap interval for the mean.
pub fn bootstrap_ci(xs: &[f64], level: f64, resamples: usize, seed: u64) -> Option<(f64, f64)> {
    if xs.is_empty() || resamples == 0 {
        return None;
    }
    let means = resampled_means(xs, resamples, seed);
    let tail = (1.0 - level) / 2.0;
    Some((quantile(&means, tail), quantile(&means, 1.0 - tail)))
}

/// One-sided percentile bootstrap upper bound for the mean.
pub fn bootstrap_upper(xs: &[f64], level: f64, resamples: usize, seed: u64) -> Option<f64> {
    if xs.is_empty() || resamples == 0 {
        return None;
    }
    Some(quantile(&resampled_means(xs, resamples, seed), level))
}

/// One-sided percentile bootstrap lower bound for the mean.
pub fn bootstrap_lower(xs: &[f64], level: f64, resamples: usize, seed: u64) -> Option<f64> {
    if xs.is_empty() || resamples == 0 {
        return None;
    }
    Some(quantile(&resampled_means(xs, resamples, seed), 1.0 - level))
}

fn ln_choose(n: u64, k: u64) -> f64 {
    (1..=k).map(|i| ((n - k + i) as f64 / i as f64).ln()).sum()
}

/// `P[X ≤ k]` for `X ~ Binomial(n, p)`, summed in log space.
pub fn binomial_cdf(n: u64, p: f64, k: u64) -> f64 {
    if k >= n {
        return 1.0;
    }
    let (lp, lq) = (p.ln(), (1.0 - p).ln());
    (0..=k)
        .map(|i| (ln_choose(n, i) + i as f64 * lp + (n - i) as f64 * lq).exp())
        .sum::<f64>()
        .min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_moments() {
        assert_eq!(mean(&[1.0, 2.0]), Some(1.5));
        assert_eq!(std_dev(&[3.0]), Some(0.0));
        assert_eq!(mean(&[]), None);
        assert!((std_dev(&[1.0, 2.0, 3.0]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bootstrap_brackets_mean() {
        let xs: Vec<f64> = (0..50).map(|i| i as f64).collect();
        let (lo, hi) = bootstrap_ci(&xs, 0.95, 1000, 3).unwrap();
        assert!(lo < 24.5 && 24.5 < hi);
        assert!(bootstrap_upper(&xs, 0.95, 1000, 3).unwrap() < hi);
        assert!(bootstrap_lower(&xs, 0.95, 1000, 3).unwrap() > lo);
        assert_eq!(bootstrap_ci(&[2.0], 0.95, 10, 0), Some((2.0, 2.0)));
    }

    #[test]
    fn binomial_cdf_small_cases() {
        assert!((binomial_cdf(2, 0.5, 0) - 0.25).abs() < 1e-12);
        assert!((binomial_cdf(3, 0.5, 1) - 0.5).abs() < 1e-12);
        assert_eq!(binomial_cdf(3, 0.3, 3), 1.0);
        let direct: f64 = (0..=4).map(|k| {
            let c = (1..=k).fold(1.0, |a, i| a * (10 - k + i) as f64 / i as f64);
            c * 0.6f64.powi(k as i32) * 0.4f64.powi(10 - k as i32)
        }).sum();
        assert!((binomial_cdf(10, 0.6, 4) - direct).abs() < 1e-12);
    }
}
