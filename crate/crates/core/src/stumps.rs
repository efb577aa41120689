//! Threshold selection by decision stumps.
//!
//! Every midpoint between consecutive distinct values of a dimension is a
//! candidate split, scored by the weighted Gini impurity of the two sides.
//! Candidates from all dimensions are ranked together and the best ones are
//! kept; ties go to the lower dimension, then the lower threshold.

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::features::ThresholdSpec;

/// Scored split candidate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StumpCandidate {
    pub spec: ThresholdSpec,
    /// Weighted Gini impurity; lower is better.
    pub impurity: f64,
}

/// `floor(200 / |Y|)`: the threshold budget that keeps `m` near 200.
pub fn default_k(num_labels: usize) -> usize {
    assert!(num_labels >= 2, "need at least two labels");
    200 / num_labels
}

fn gini(counts: &[usize], total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let n = total as f64;
    1.0 - counts
        .iter()
        .map(|&c| {
            let p = c as f64 / n;
            p * p
        })
        .sum::<f64>()
}

/// All candidates of one dimension, in increasing threshold order.
pub fn dimension_candidates(data: &Dataset, dimension: usize) -> Vec<StumpCandidate> {
    let k = data.num_labels();
    let n = data.len();
    let mut order: Vec<(f64, usize)> = data
        .instances()
        .iter()
        .zip(data.labels())
        .map(|(x, &y)| (x[dimension], y))
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let total = data.class_counts();
    let mut left = vec![0usize; k];
    let mut right_buf = vec![0usize; k];
    let mut out = Vec::new();
    for i in 0..n {
        left[order[i].1] += 1;
        if i + 1 == n || order[i + 1].0 == order[i].0 {
            continue;
        }
        let n_left = i + 1;
        for ((r, t), l) in right_buf.iter_mut().zip(&total).zip(&left) {
            *r = t - l;
        }
        let impurity = (n_left as f64 * gini(&left, n_left)
            + (n - n_left) as f64 * gini(&right_buf, n - n_left))
            / n as f64;
        out.push(StumpCandidate {
            spec: ThresholdSpec {
                dimension,
                value: order[i].0 + (order[i + 1].0 - order[i].0) / 2.0,
            },
            impurity,
        });
    }
    out
}

/// Ranked candidates across every dimension, best first.
pub fn ranked_candidates(data: &Dataset) -> Vec<StumpCandidate> {
    let mut all: Vec<StumpCandidate> = (0..data.dim())
        .flat_map(|d| dimension_candidates(data, d))
        .collect();
    all.sort_by(|a, b| {
        a.impurity
            .total_cmp(&b.impurity)
            .then(a.spec.dimension.cmp(&b.spec.dimension))
            .then(a.spec.value.total_cmp(&b.spec.value))
    });
    all
}

pub fn select_thresholds(data: &Dataset, max_thresholds: usize) -> Result<Vec<ThresholdSpec>> {
    if data.is_empty() || max_thresholds == 0 {
        return Err(Error::InvalidInput(
            "threshold selection needs data and a positive budget".into(),
        ));
    }
    let ranked = ranked_candidates(data);
    if ranked.is_empty() {
        return Err(Error::DegenerateData);
    }
    Ok(ranked
        .into_iter()
        .take(max_thresholds)
        .map(|c| c.spec)
        .collect())
}
