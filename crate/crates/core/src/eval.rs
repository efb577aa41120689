//! Cross-validated error estimates and bounds-versus-sample-size curves.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::learn::MrcModel;
use crate::predict::{predict_label, stream_value, PredictMode};
use crate::train::{train, TrainOptions};

/// How held-out labels are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EvalPrediction {
    /// Labels drawn from the randomized rule, seeded per fold.
    #[default]
    Sampled,
    Deterministic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvReport {
    pub per_fold_errors: Vec<f64>,
    pub mean_error: f64,
    /// Population standard deviation over folds.
    pub std_error: f64,
    /// Bounds from a single fit on every sample.
    pub lower_bound_full: f64,
    pub upper_bound_full: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveRow {
    pub n: usize,
    pub upper: f64,
    pub lower: f64,
    pub test_error: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BoundsCurve {
    pub rows: Vec<CurveRow>,
}

fn class_members(data: &Dataset) -> Vec<Vec<usize>> {
    let mut members = vec![Vec::new(); data.num_labels()];
    for (i, &y) in data.labels().iter().enumerate() {
        members[y].push(i);
    }
    members
}

/// Shuffles each class, then deals its members round-robin to the folds,
/// continuing the deal from one class to the next so fold sizes also stay
/// within one of each other. Fold members are returned in increasing order.
pub fn stratified_folds(data: &Dataset, k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 folds, got {k}")));
    }
    if data.len() < k {
        return Err(Error::TooFewSamples {
            samples: data.len(),
            folds: k,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = vec![Vec::new(); k];
    let mut next = 0;
    for mut members in class_members(data) {
        members.shuffle(&mut rng);
        for i in members {
            folds[next].push(i);
            next = (next + 1) % k;
        }
    }
    for f in &mut folds {
        f.sort_unstable();
    }
    Ok(folds)
}

/// Stratified sample of `size` indices with proportional allocation (largest
/// remainders, at least one per present class when the budget allows).
/// Returns `(sample, rest)`, both sorted.
pub fn stratified_subsample(data: &Dataset, size: usize, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    let n = data.len();
    if size == 0 || size >= n {
        return Err(Error::InvalidInput(format!(
            "subsample size {size} must be in 1..{n}"
        )));
    }
    let mut members = class_members(data);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for m in &mut members {
        m.shuffle(&mut rng);
    }
    let mut quota: Vec<usize> = members.iter().map(|m| m.len() * size / n).collect();
    let present = members.iter().filter(|m| !m.is_empty()).count();
    if size >= present {
        for (q, m) in quota.iter_mut().zip(&members) {
            if *q == 0 && !m.is_empty() {
                *q = 1;
            }
        }
    }
    let mut order: Vec<usize> = (0..members.len()).collect();
    // Largest fractional remainder first, lower class on ties.
    order.sort_by_key(|&c| std::cmp::Reverse((members[c].len() * size) % n));
    let mut assigned: usize = quota.iter().sum();
    while assigned > size {
        let c = (0..quota.len()).max_by_key(|&c| (quota[c], std::cmp::Reverse(c))).unwrap();
        quota[c] -= 1;
        assigned -= 1;
    }
    let mut cursor = 0;
    while assigned < size {
        let c = order[cursor % order.len()];
        if quota[c] < members[c].len() {
            quota[c] += 1;
            assigned += 1;
        }
        cursor += 1;
    }
    let mut sample = Vec::with_capacity(size);
    let mut rest = Vec::with_capacity(n - size);
    for (m, &q) in members.iter().zip(&quota) {
        sample.extend_from_slice(&m[..q]);
        rest.extend_from_slice(&m[q..]);
    }
    sample.sort_unstable();
    rest.sort_unstable();
    Ok((sample, rest))
}

/// Misclassification rate on `indices`; draws for sampled prediction use
/// the position within `indices`.
pub fn error_rate(model: &MrcModel<f64>, data: &Dataset, indices: &[usize], mode: PredictMode) -> f64 {
    if indices.is_empty() {
        return 0.0;
    }
    let wrong = indices
        .iter()
        .enumerate()
        .filter(|(j, &i)| predict_label(model, data.instance(i), mode, *j as u64) != data.labels()[i])
        .count();
    wrong as f64 / indices.len() as f64
}

fn predict_mode(kind: EvalPrediction, seed: u64, stream: u64) -> PredictMode {
    match kind {
        EvalPrediction::Deterministic => PredictMode::Deterministic,
        EvalPrediction::Sampled => PredictMode::Sampled {
            seed: stream_value(seed, stream),
        },
    }
}

fn full_fit(data: &Dataset, opts: &TrainOptions) -> Result<(f64, f64)> {
    let mut full = *opts;
    full.learn.compute_lower_bound = true;
    let model = train::<f64>(data, &full)?;
    Ok((model.lower_bound.unwrap_or(f64::NAN), model.upper_bound))
}

pub fn evaluate_cv(
    data: &Dataset,
    opts: &TrainOptions,
    k: usize,
    seed: u64,
    prediction: EvalPrediction,
) -> Result<CvReport> {
    let folds = stratified_folds(data, k, seed)?;
    let mut fold_opts = *opts;
    fold_opts.learn.compute_lower_bound = false;
    let per_fold_errors = folds
        .par_iter()
        .enumerate()
        .map(|(f, test)| {
            let train_idx: Vec<usize> = folds
                .iter()
                .enumerate()
                .filter(|(g, _)| *g != f)
                .flat_map(|(_, idx)| idx.iter().copied())
                .collect();
            let model = train::<f64>(&data.subset(&train_idx), &fold_opts)?;
            Ok(error_rate(&model, data, test, predict_mode(prediction, seed, f as u64)))
        })
        .collect::<Result<Vec<f64>>>()?;
    let kf = per_fold_errors.len() as f64;
    let mean_error = per_fold_errors.iter().sum::<f64>() / kf;
    let std_error = (per_fold_errors
        .iter()
        .map(|e| (e - mean_error).powi(2))
        .sum::<f64>()
        / kf)
        .sqrt();
    let (lower_bound_full, upper_bound_full) = full_fit(data, opts)?;
    Ok(CvReport {
        per_fold_errors,
        mean_error,
        std_error,
        lower_bound_full,
        upper_bound_full,
    })
}

/// Fits on a stratified subsample of each size and measures the error on
/// the remaining samples.
pub fn bounds_curve(
    data: &Dataset,
    sizes: &[usize],
    opts: &TrainOptions,
    seed: u64,
    prediction: EvalPrediction,
) -> Result<BoundsCurve> {
    let mut sizes = sizes.to_vec();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.is_empty() {
        return Err(Error::InvalidInput("no training sizes given".into()));
    }
    let mut curve_opts = *opts;
    curve_opts.learn.compute_lower_bound = true;
    let rows = sizes
        .par_iter()
        .map(|&size| {
            let (sample, rest) = stratified_subsample(data, size, stream_value(seed, size as u64))?;
            let model = train::<f64>(&data.subset(&sample), &curve_opts)?;
            let mode = predict_mode(prediction, seed, size as u64);
            Ok(CurveRow {
                n: size,
                upper: model.upper_bound,
                lower: model.lower_bound.unwrap_or(f64::NAN),
                test_error: error_rate(&model, data, &rest, mode),
            })
        })
        .collect::<Result<Vec<CurveRow>>>()?;
    Ok(BoundsCurve { rows })
}
