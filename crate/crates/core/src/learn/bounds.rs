use crate::error::{Error, Result};
use crate::estimates::ExpectationEstimates;
use crate::features::InstanceMatrix;
use crate::lp::{solve_lp, LinearProgram, LpStatus};
use crate::num::Scalar;
use crate::predict::probabilities_from_scores;

use super::{check_inputs, MrcModel};

/// `h(y | x_i)` for every matrix under the rule defined by `(mu, nu)`.
pub fn rule_table<T: Scalar>(mu: &[T], nu: T, matrices: &[InstanceMatrix<T>]) -> Vec<Vec<T>> {
    matrices
        .iter()
        .map(|phi| probabilities_from_scores(&phi.affine_scores(mu, nu + T::one())).0)
        .collect()
}

/// `min b.mu_b - a.mu_a - nu` subject to `Phi_i (mu_a - mu_b) + nu 1 <= q_i`.
///
/// With `q_i = h_i - 1` this is the largest expected loss of the rule `h`
/// over the uncertainty set; with `q_i = 1 - h_i` it is minus the smallest.
pub fn kappa_bound_for_rule<T: Scalar>(
    est: &ExpectationEstimates<T>,
    matrices: &[InstanceMatrix<T>],
    q: &[Vec<T>],
) -> Result<T> {
    let m = check_inputs(est, matrices)?;
    if q.len() != matrices.len() || q.iter().zip(matrices).any(|(r, p)| r.len() != p.rows()) {
        return Err(Error::InvalidInput("right-hand side does not match matrices".into()));
    }
    let mut objective: Vec<T> = est.a.iter().map(|&v| -v).collect();
    objective.extend_from_slice(&est.b);
    objective.push(-T::one());
    let mut lp = LinearProgram::new(objective);
    lp.set_free(2 * m);
    for (phi, rhs) in matrices.iter().zip(q) {
        for (row, &r) in phi.iter_rows().zip(rhs) {
            let mut coeffs = Vec::with_capacity(2 * m + 1);
            coeffs.extend_from_slice(row);
            coeffs.extend(row.iter().map(|&v| -v));
            coeffs.push(T::one());
            lp.add_le(coeffs, r);
        }
    }
    let sol = solve_lp(&lp)?;
    match sol.status {
        LpStatus::Optimal => Ok(sol.objective_value.expect("optimal value present")),
        LpStatus::Unbounded => Err(Error::UncertaintySetEmpty),
        LpStatus::Infeasible => Err(Error::NumericalBreakdown(
            "bound problem reported infeasible although mu = 0 with small nu is feasible".into(),
        )),
    }
}

/// Lower risk bound of the classification rule defined by `(mu, nu)`.
pub fn lower_bound_for<T: Scalar>(
    est: &ExpectationEstimates<T>,
    mu: &[T],
    nu: T,
    matrices: &[InstanceMatrix<T>],
) -> Result<T> {
    let q: Vec<Vec<T>> = rule_table(mu, nu, matrices)
        .into_iter()
        .map(|h| h.into_iter().map(|e| T::one() - e).collect())
        .collect();
    Ok(-kappa_bound_for_rule(est, matrices, &q)?)
}

pub fn lower_bound<T: Scalar>(model: &MrcModel<T>, matrices: &[InstanceMatrix<T>]) -> Result<T> {
    let lb = lower_bound_for(&model.estimates, &model.mu, model.nu, matrices)?;
    debug_assert!(
        lb.as_f64() <= model.upper_bound.as_f64() + 1e-6,
        "lower bound {lb} above upper bound {}",
        model.upper_bound
    );
    Ok(lb)
}
