use crate::error::{Error, Result};
use crate::features::InstanceMatrix;
use crate::lp::{Constraint, Relation};
use crate::num::Scalar;

/// Row `(1_C)^T (Phi (mu_a - mu_b) + nu 1) <= 1 - |C|` over `[mu_a, mu_b, nu]`
/// for the label subset encoded by the bits of `mask`.
pub fn subset_row<T: Scalar>(phi: &InstanceMatrix<T>, mask: u32) -> Constraint<T> {
    let m = phi.cols();
    let mut coeffs = vec![T::zero(); 2 * m + 1];
    let mut size = 0usize;
    for y in 0..phi.rows() {
        if mask & (1 << y) == 0 {
            continue;
        }
        size += 1;
        for (l, &v) in phi.row(y).iter().enumerate() {
            coeffs[l] = coeffs[l] + v;
        }
    }
    for l in 0..m {
        coeffs[m + l] = -coeffs[l];
    }
    coeffs[2 * m] = T::of(size as f64);
    Constraint {
        coeffs,
        relation: Relation::Le,
        rhs: T::one() - T::of(size as f64),
    }
}

/// All `r (2^|Y| - 1)` subset rows, matrix-major, subsets in increasing bit
/// order. Together they are equivalent to the positive-part norm
/// constraints because `||v_+||_1 = max_C 1_C^T v` over nonempty `C` whenever
/// the norm is positive.
pub fn enumerate_subset_constraints<T: Scalar>(
    matrices: &[InstanceMatrix<T>],
    max_labels: usize,
) -> Result<Vec<Constraint<T>>> {
    let labels = matrices.first().map_or(0, InstanceMatrix::rows);
    let cap = max_labels.min(31);
    if labels > cap {
        return Err(Error::TooManyLabels { labels, cap });
    }
    let subsets = (1u32 << labels) - 1;
    let mut rows = Vec::with_capacity(matrices.len() * subsets as usize);
    for phi in matrices {
        for mask in 1..=subsets {
            rows.push(subset_row(phi, mask));
        }
    }
    Ok(rows)
}
