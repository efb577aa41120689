//! Label-indicator and instance-thresholding feature mapping.
//!
//! With `k` thresholds and `|Y|` labels the map has `m = |Y| (k + 1)`
//! binary components laid out in one block of `k + 1` per label. For label
//! `y` (0-based) the block starts at `y (k + 1)`: its first entry is the
//! label indicator and entry `j + 1` is `1{x[d_j] <= th_j}`. Components in
//! every other block are zero.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::num::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSpec {
    /// Index into the instance vector.
    pub dimension: usize,
    pub value: f64,
}

impl ThresholdSpec {
    pub fn satisfied(&self, x: &[f64]) -> bool {
        x[self.dimension] <= self.value
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMap {
    num_labels: usize,
    thresholds: Vec<ThresholdSpec>,
}

impl FeatureMap {
    pub fn new(num_labels: usize, thresholds: Vec<ThresholdSpec>) -> Self {
        assert!(num_labels >= 1, "a feature map needs at least one label");
        FeatureMap {
            num_labels,
            thresholds,
        }
    }

    /// Pure label indicators (`k = 0`).
    pub fn label_indicators(num_labels: usize) -> Self {
        Self::new(num_labels, Vec::new())
    }

    pub fn num_labels(&self) -> usize {
        self.num_labels
    }

    pub fn thresholds(&self) -> &[ThresholdSpec] {
        &self.thresholds
    }

    pub fn num_thresholds(&self) -> usize {
        self.thresholds.len()
    }

    pub fn block_len(&self) -> usize {
        self.thresholds.len() + 1
    }

    /// Feature count `m`.
    pub fn dim(&self) -> usize {
        self.num_labels * self.block_len()
    }

    /// Largest instance dimension referenced by a threshold, plus one.
    pub fn min_instance_dim(&self) -> usize {
        self.thresholds
            .iter()
            .map(|t| t.dimension + 1)
            .max()
            .unwrap_or(0)
    }

    /// Which thresholds `x` meets, in threshold order.
    pub fn pattern(&self, x: &[f64]) -> Vec<bool> {
        self.thresholds.iter().map(|t| t.satisfied(x)).collect()
    }

    fn fill_block<T: Scalar>(&self, pattern: &[bool], y: usize, out: &mut [T]) {
        let start = y * self.block_len();
        out[start] = T::one();
        for (j, &hit) in pattern.iter().enumerate() {
            if hit {
                out[start + j + 1] = T::one();
            }
        }
    }

    pub fn evaluate<T: Scalar>(&self, x: &[f64], y: usize) -> Vec<T> {
        assert!(y < self.num_labels, "label {y} out of range");
        let mut out = vec![T::zero(); self.dim()];
        self.fill_block(&self.pattern(x), y, &mut out);
        out
    }

    /// The `|Y| x m` matrix whose row `y` is `evaluate(x, y)`.
    pub fn instance_matrix<T: Scalar>(&self, x: &[f64]) -> InstanceMatrix<T> {
        self.matrix_from_pattern(&self.pattern(x))
    }

    fn matrix_from_pattern<T: Scalar>(&self, pattern: &[bool]) -> InstanceMatrix<T> {
        let m = self.dim();
        let mut data = vec![T::zero(); self.num_labels * m];
        for y in 0..self.num_labels {
            self.fill_block(pattern, y, &mut data[y * m..(y + 1) * m]);
        }
        InstanceMatrix::new(self.num_labels, m, data)
    }

    /// Distinct instance matrices in order of first occurrence.
    pub fn unique_instance_matrices<'a, T, I>(&self, instances: I) -> Vec<InstanceMatrix<T>>
    where
        T: Scalar,
        I: IntoIterator<Item = &'a [f64]>,
    {
        let mut seen: IndexMap<Vec<bool>, ()> = IndexMap::new();
        for x in instances {
            seen.entry(self.pattern(x)).or_insert(());
        }
        seen.keys().map(|p| self.matrix_from_pattern(p)).collect()
    }

    /// Per-feature range `max - min` over `X x Y`. Every indicator takes
    /// both values once there are two labels; with a single label its
    /// indicator is constant.
    pub fn feature_ranges<T: Scalar>(&self) -> Vec<T> {
        let mut d = vec![T::one(); self.dim()];
        if self.num_labels == 1 {
            d[0] = T::zero();
        }
        d
    }
}

/// Dense row-major `rows x cols` matrix; row `y` holds `Phi(x, y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> InstanceMatrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has the wrong length");
        InstanceMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let n = rows.len();
        InstanceMatrix::new(n, cols, rows.into_iter().flatten().collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, y: usize) -> &[T] {
        &self.data[y * self.cols..(y + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }

    /// `Phi mu + shift 1`.
    pub fn affine_scores(&self, mu: &[T], shift: T) -> Vec<T> {
        self.iter_rows()
            .map(|r| crate::num::dot(r, mu) + shift)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_threshold() -> FeatureMap {
        FeatureMap::new(
            2,
            vec![ThresholdSpec {
                dimension: 0,
                value: 2.5,
            }],
        )
    }

    #[test]
    fn evaluates_threshold_blocks() {
        let fm = one_threshold();
        assert_eq!(fm.dim(), 4);
        assert_eq!(fm.evaluate::<f64>(&[1.0], 0), vec![1.0, 1.0, 0.0, 0.0]);
        assert_eq!(fm.evaluate::<f64>(&[3.0], 1), vec![0.0, 0.0, 1.0, 0.0]);
        // Threshold is inclusive.
        assert_eq!(fm.evaluate::<f64>(&[2.5], 1), vec![0.0, 0.0, 1.0, 1.0]);
    }

    #[test]
    fn component_sum_counts_met_thresholds() {
        let fm = FeatureMap::new(
            3,
            vec![
                ThresholdSpec { dimension: 0, value: 0.0 },
                ThresholdSpec { dimension: 1, value: 5.0 },
                ThresholdSpec { dimension: 0, value: 2.0 },
            ],
        );
        for (x, met) in [([-1.0, 1.0], 3.0), ([1.0, 9.0], 1.0), ([3.0, 9.0], 0.0)] {
            for y in 0..3 {
                let s: f64 = fm.evaluate::<f64>(&x, y).iter().sum();
                assert_eq!(s, 1.0 + met);
            }
        }
    }

    #[test]
    fn label_indicator_matrix_is_identity() {
        let fm = FeatureMap::label_indicators(2);
        let phi = fm.instance_matrix::<f64>(&[42.0]);
        assert_eq!(phi, InstanceMatrix::from_rows(vec![vec![1.0, 0.0], vec![0.0, 1.0]]));
    }

    #[test]
    fn instance_matrix_stacks_evaluations() {
        let fm = one_threshold();
        let x = [0.3];
        let phi = fm.instance_matrix::<f64>(&x);
        for y in 0..2 {
            assert_eq!(phi.row(y), fm.evaluate::<f64>(&x, y).as_slice());
        }
        // Rows have disjoint supports.
        let overlap = phi.row(0).iter().zip(phi.row(1)).any(|(a, b)| *a != 0.0 && *b != 0.0);
        assert!(!overlap);
    }

    #[test]
    fn unique_matrices_deduplicate_by_binarization() {
        let fm = one_threshold();
        let same: Vec<&[f64]> = vec![&[1.0], &[2.0]];
        assert_eq!(fm.unique_instance_matrices::<f64, _>(same).len(), 1);
        let both: Vec<&[f64]> = vec![&[3.0], &[1.0], &[4.0]];
        let mats = fm.unique_instance_matrices::<f64, _>(both);
        assert_eq!(mats.len(), 2);
        // First occurrence order: x = 3.0 (threshold unmet) comes first.
        assert_eq!(mats[0], fm.instance_matrix(&[3.0]));
    }

    #[test]
    fn ranges_are_unit_for_multiclass_maps() {
        assert!(one_threshold().feature_ranges::<f64>().iter().all(|&d| d == 1.0));
        let single = FeatureMap::new(1, vec![ThresholdSpec { dimension: 0, value: 0.0 }]);
        assert_eq!(single.feature_ranges::<f64>(), vec![0.0, 1.0]);
    }
}
