//! Empirical feature expectations and their confidence intervals.

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::features::FeatureMap;
use crate::num::Scalar;

/// Point estimate `tau` with the interval `[a, b] = tau -/+ lambda / sqrt(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectationEstimates<T> {
    pub tau: Vec<T>,
    pub lambda: Vec<T>,
    pub a: Vec<T>,
    pub b: Vec<T>,
    pub n: usize,
    /// Per-feature range `max - min` over `X x Y`.
    pub d: Vec<T>,
}

impl<T: Scalar> ExpectationEstimates<T> {
    pub fn from_moments(tau: Vec<T>, lambda: Vec<T>, n: usize, d: Vec<T>) -> Result<Self> {
        if tau.len() != lambda.len() || tau.len() != d.len() {
            return Err(Error::InvalidInput(format!(
                "length mismatch: tau {}, lambda {}, d {}",
                tau.len(),
                lambda.len(),
                d.len()
            )));
        }
        if n == 0 {
            return Err(Error::InvalidInput("estimates need n >= 1".into()));
        }
        if lambda.iter().any(|&l| !(l >= T::zero())) {
            return Err(Error::InvalidInput("lambda must be nonnegative".into()));
        }
        let root_n = T::of(n as f64).sqrt();
        let a = tau.iter().zip(&lambda).map(|(&t, &l)| t - l / root_n).collect();
        let b = tau.iter().zip(&lambda).map(|(&t, &l)| t + l / root_n).collect();
        Ok(ExpectationEstimates {
            tau,
            lambda,
            a,
            b,
            n,
            d,
        })
    }

    /// Estimates with an explicit interval, for callers that supply their
    /// own endpoints. `tau` is set to the interval midpoint.
    pub fn from_interval(a: Vec<T>, b: Vec<T>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::InvalidInput("interval endpoints differ in length".into()));
        }
        if a.iter().zip(&b).any(|(l, u)| l > u) {
            return Err(Error::InvalidInput("interval with a > b".into()));
        }
        let two = T::of(2.0);
        let tau = a.iter().zip(&b).map(|(&l, &u)| (l + u) / two).collect();
        let lambda = a.iter().zip(&b).map(|(&l, &u)| (u - l) / two).collect();
        let d = vec![T::one(); a.len()];
        Ok(ExpectationEstimates {
            tau,
            lambda,
            a,
            b,
            n: 1,
            d,
        })
    }

    pub fn dim(&self) -> usize {
        self.tau.len()
    }

    pub fn is_point(&self) -> bool {
        self.a == self.b
    }
}

/// Empirical mean of `Phi(x_i, y_i)` with interval half-widths `lambda / sqrt(n)`.
pub fn estimate_expectations<T: Scalar>(
    fm: &FeatureMap,
    data: &Dataset,
    lambda: &[T],
) -> Result<ExpectationEstimates<T>> {
    let m = fm.dim();
    if lambda.len() != m {
        return Err(Error::InvalidInput(format!(
            "lambda has {} entries, feature map has {m}",
            lambda.len()
        )));
    }
    if data.is_empty() {
        return Err(Error::InvalidInput("no samples".into()));
    }
    if data.dim() < fm.min_instance_dim() {
        return Err(Error::InvalidInput(format!(
            "instances have {} dimensions, thresholds need {}",
            data.dim(),
            fm.min_instance_dim()
        )));
    }
    let mut counts = vec![0usize; m];
    let block = fm.block_len();
    for (x, &y) in data.instances().iter().zip(data.labels()) {
        let start = y * block;
        counts[start] += 1;
        for (j, t) in fm.thresholds().iter().enumerate() {
            if t.satisfied(x) {
                counts[start + j + 1] += 1;
            }
        }
    }
    let n = data.len();
    let nf = T::of(n as f64);
    let tau = counts.into_iter().map(|c| T::of(c as f64) / nf).collect();
    ExpectationEstimates::from_moments(tau, lambda.to_vec(), n, fm.feature_ranges())
}

/// Interval widths `d sqrt((ln m + ln(2 / delta)) / 2)` giving coverage of
/// the true expectations with probability at least `1 - delta`.
pub fn lambda_theorem3<T: Scalar>(d: &[T], m: usize, delta: f64) -> Result<Vec<T>> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidInput(format!("delta {delta} not in (0, 1)")));
    }
    if m == 0 {
        return Err(Error::InvalidInput("m must be positive".into()));
    }
    let scale = (((m as f64).ln() + (2.0 / delta).ln()) / 2.0).sqrt();
    Ok(d.iter().map(|&v| v * T::of(scale)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::ThresholdSpec;

    #[test]
    fn interval_endpoints_from_two_samples() {
        let est = ExpectationEstimates::<f64>::from_moments(
            vec![0.5, 0.5],
            vec![0.25, 0.25],
            2,
            vec![1.0, 1.0],
        )
        .unwrap();
        for (a, b) in est.a.iter().zip(&est.b) {
            assert!((a - 0.323223).abs() < 1e-6);
            assert!((b - 0.676777).abs() < 1e-6);
        }
    }

    #[test]
    fn zero_width_collapses_interval() {
        let fm = FeatureMap::new(2, vec![ThresholdSpec { dimension: 0, value: 0.5 }]);
        let data = Dataset::new(
            vec![vec![0.0], vec![1.0], vec![0.2]],
            vec![0, 1, 1],
            vec!["p".into(), "q".into()],
        )
        .unwrap();
        let est = estimate_expectations::<f64>(&fm, &data, &[0.0; 4]).unwrap();
        assert_eq!(est.a, est.tau);
        assert_eq!(est.b, est.tau);
        // Label block indicators are class frequencies.
        assert_eq!(est.tau[0], 1.0 / 3.0);
        assert_eq!(est.tau[2], 2.0 / 3.0);
        // Threshold met by x = 0.0 (label 0) and x = 0.2 (label 1).
        assert_eq!(est.tau[1], 1.0 / 3.0);
        assert_eq!(est.tau[3], 1.0 / 3.0);
        assert!(est.is_point());
    }

    #[test]
    fn lambda_formula_values() {
        let l = lambda_theorem3::<f64>(&[1.0, 1.0], 2, 0.05).unwrap();
        assert!(l.iter().all(|v| (v - 1.480207).abs() < 1e-6));
        assert_eq!(lambda_theorem3(&[0.0, 2.0], 2, 0.05).unwrap()[0], 0.0);
        let delta = 2.0 * (-2.0f64).exp();
        let one = lambda_theorem3::<f64>(&[1.0], 1, delta).unwrap();
        assert!((one[0] - 1.0).abs() < 1e-12);
        assert!(lambda_theorem3(&[1.0], 1, 1.5).is_err());
    }

    #[test]
    fn negative_lambda_is_rejected() {
        assert!(ExpectationEstimates::from_moments(vec![0.5], vec![-0.1], 4, vec![1.0]).is_err());
    }
}
