//! End-to-end learning from a dataset: thresholds, estimates, fit.

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::estimates::{estimate_expectations, lambda_theorem3};
use crate::features::FeatureMap;
use crate::learn::{fit, LearnConfig, Mode, MrcModel};
use crate::num::Scalar;
use crate::stumps::{default_k, select_thresholds};

/// Interval half-width specification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaSpec {
    /// The same `lambda` for every feature.
    Uniform(f64),
    /// Widths covering the expectations with probability `1 - delta`.
    Delta(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainOptions {
    pub lambda: LambdaSpec,
    pub learn: LearnConfig,
    /// Threshold budget; `None` means `default_k(|Y|)`.
    pub max_thresholds: Option<usize>,
}

impl Default for TrainOptions {
    fn default() -> Self {
        TrainOptions {
            lambda: LambdaSpec::Uniform(0.25),
            learn: LearnConfig::default(),
            max_thresholds: None,
        }
    }
}

impl TrainOptions {
    pub fn threshold_budget(&self, num_labels: usize) -> usize {
        self.max_thresholds
            .unwrap_or_else(|| default_k(num_labels.max(2)))
    }
}

pub fn build_feature_map(data: &Dataset, opts: &TrainOptions) -> Result<FeatureMap> {
    let thresholds = select_thresholds(data, opts.threshold_budget(data.num_labels()))?;
    Ok(FeatureMap::new(data.num_labels(), thresholds))
}

fn lambda_vector<T: Scalar>(fm: &FeatureMap, opts: &TrainOptions) -> Result<Vec<T>> {
    let m = fm.dim();
    if opts.learn.mode == Mode::Point {
        // Point estimates carry no width.
        return Ok(vec![T::zero(); m]);
    }
    match opts.lambda {
        LambdaSpec::Uniform(l) if l >= 0.0 && l.is_finite() => Ok(vec![T::of(l); m]),
        LambdaSpec::Uniform(l) => Err(Error::InvalidInput(format!("lambda {l} must be nonnegative"))),
        LambdaSpec::Delta(delta) => lambda_theorem3(&fm.feature_ranges::<T>(), m, delta),
    }
}

/// Selects thresholds, estimates expectations and solves the learning problem.
pub fn train<T: Scalar>(data: &Dataset, opts: &TrainOptions) -> Result<MrcModel<T>> {
    let fm = build_feature_map(data, opts)?;
    let lambda = lambda_vector::<T>(&fm, opts)?;
    let est = estimate_expectations(&fm, data, &lambda)?;
    let matrices = fm.unique_instance_matrices::<T, _>(data.instances().iter().map(Vec::as_slice));
    log::debug!(
        "fitting m = {} on {} distinct instance matrices from {} samples",
        fm.dim(),
        matrices.len(),
        data.len()
    );
    fit(&fm, &est, &opts.learn, &matrices)
}

/// Unique instance matrices of `data` under the model's feature map.
pub fn training_matrices<T: Scalar>(
    model: &MrcModel<T>,
    data: &Dataset,
) -> Vec<crate::features::InstanceMatrix<T>> {
    model
        .feature_map
        .unique_instance_matrices::<T, _>(data.instances().iter().map(Vec::as_slice))
}
