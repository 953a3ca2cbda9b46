use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact middle order statistic; mean of the two middles for even counts.
pub fn median(samples: &[f64]) -> Option<f64> {
    if samples.is_empty() {
        return None;
    }
    let mut s = samples.to_vec();
    s.sort_unstable_by(f64::total_cmp);
    let mid = s.len() / 2;
    Some(if s.len().is_multiple_of(2) {
        (s[mid - 1] + s[mid]) / 2.0
    } else {
        s[mid]
    })
}

/// Wall-clock samples of one (task, variant), in seconds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingStats {
    pub samples: Vec<f64>,
    pub median: f64,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    /// Sample standard deviation (`n − 1`); zero for a single sample.
    pub stddev: f64,
    pub repetitions: usize,
    pub warmups: usize,
}

impl TimingStats {
    pub fn from_samples(samples: Vec<f64>, warmups: usize) -> Result<Self> {
        let n = samples.len();
        let median = median(&samples).ok_or_else(|| Error::invalid("no timing samples"))?;
        if samples.iter().any(|s| !s.is_finite()) {
            return Err(Error::invalid("non-finite timing sample"));
        }
        let mean = samples.iter().sum::<f64>() / n as f64;
        let min = samples.iter().copied().fold(f64::INFINITY, f64::min);
        let max = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let stddev = if n > 1 {
            (samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        Ok(Self {
            samples,
            median,
            mean,
            min,
            max,
            stddev,
            repetitions: n,
            warmups,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_sample() {
        let s = TimingStats::from_samples(vec![0.25], 1).unwrap();
        assert_eq!(s.median, 0.25);
        assert_eq!(s.stddev, 0.0);
        assert_eq!((s.repetitions, s.warmups), (1, 1));
    }

    #[test]
    fn even_count_averages_middles() {
        assert_eq!(median(&[4.0, 1.0, 3.0, 2.0]), Some(2.5));
        assert_eq!(median(&[]), None);
        assert!(TimingStats::from_samples(vec![], 0).is_err());
    }

    #[test]
    fn stats_of_known_samples() {
        let s = TimingStats::from_samples(vec![1.0, 2.0, 3.0, 4.0, 10.0], 0).unwrap();
        assert_eq!((s.min, s.median, s.max, s.mean), (1.0, 3.0, 10.0, 4.0));
        assert!((s.stddev - 12.5f64.sqrt()).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn median_matches_sort_oracle(samples in prop::collection::vec(0.0f64..100.0, 1..40)) {
            let mut sorted = samples.clone();
            sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let n = sorted.len();
            let want = if n % 2 == 1 { sorted[n / 2] } else { (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0 };
            let stats = TimingStats::from_samples(samples, 0).unwrap();
            prop_assert_eq!(stats.median, want);
            prop_assert!(stats.min <= stats.median && stats.median <= stats.max);
            prop_assert_eq!(stats.samples.len(), stats.repetitions);
        }
    }
}
