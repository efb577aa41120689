//! Classification with a learned model.
//!
//! The rule assigns `h(y | x) = (Phi(x, y).mu + nu + 1)_+ / c_x` where `c_x`
//! normalizes over labels, and falls back to the uniform rule when every
//! score is non-positive.

use crate::learn::MrcModel;
use crate::num::Scalar;

/// Identifier of the sampling generator; stable across releases.
pub const SAMPLER_ID: &str = "splitmix64-v1";

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction<T> {
    pub probabilities: Vec<T>,
    /// Most probable label, lowest index on ties.
    pub label: usize,
    pub c_x: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PredictMode {
    /// Most probable label.
    #[default]
    Deterministic,
    /// Label drawn from `h(. | x)`; the draw for call `i` depends only on
    /// `(seed, i)`.
    Sampled { seed: u64 },
}

/// Normalized positive parts of `scores` and their sum `c_x`.
pub fn probabilities_from_scores<T: Scalar>(scores: &[T]) -> (Vec<T>, T) {
    let pos: Vec<T> = scores.iter().map(|&s| s.pos()).collect();
    let c = pos.iter().copied().sum::<T>();
    if c > T::zero() {
        (pos.into_iter().map(|p| p / c).collect(), c)
    } else {
        let u = T::one() / T::of(scores.len() as f64);
        (vec![u; scores.len()], c)
    }
}

pub fn argmax<T: Scalar>(values: &[T]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

pub fn predict_proba<T: Scalar>(model: &MrcModel<T>, x: &[f64]) -> Prediction<T> {
    let (probabilities, c_x) = probabilities_from_scores(&model.scores(x));
    let label = argmax(&probabilities);
    Prediction {
        probabilities,
        label,
        c_x,
    }
}

/// `draw` indexes the call for sampled prediction and is ignored otherwise.
pub fn predict_label<T: Scalar>(model: &MrcModel<T>, x: &[f64], mode: PredictMode, draw: u64) -> usize {
    let p = predict_proba(model, x);
    match mode {
        PredictMode::Deterministic => p.label,
        PredictMode::Sampled { seed } => sample_index(&p.probabilities, uniform(seed, draw)),
    }
}

/// Labels for a batch; row `i` uses draw index `i`.
pub fn predict_batch<T: Scalar>(model: &MrcModel<T>, instances: &[Vec<f64>], mode: PredictMode) -> Vec<usize> {
    instances
        .iter()
        .enumerate()
        .map(|(i, x)| predict_label(model, x, mode, i as u64))
        .collect()
}

fn sample_index<T: Scalar>(probabilities: &[T], u: f64) -> usize {
    let mut acc = 0.0;
    let mut last = 0;
    for (i, p) in probabilities.iter().enumerate() {
        let p = p.as_f64();
        if p <= 0.0 {
            continue;
        }
        acc += p;
        last = i;
        if u < acc {
            return i;
        }
    }
    last
}

pub(crate) fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform in `[0, 1)` from output `index + 1` of a SplitMix64 stream
/// seeded with `seed`.
pub fn uniform(seed: u64, index: u64) -> f64 {
    (stream_value(seed, index) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Output `index + 1` of a SplitMix64 stream seeded with `seed`.
pub fn stream_value(seed: u64, index: u64) -> u64 {
    const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
    splitmix64(seed.wrapping_add(GAMMA.wrapping_mul(index.wrapping_add(1))))
}
