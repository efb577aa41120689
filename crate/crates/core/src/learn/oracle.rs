use crate::error::{Error, Result};
use crate::estimates::ExpectationEstimates;
use crate::features::InstanceMatrix;
use crate::lp::{solve_lp, LinearProgram, LpStatus};
use crate::num::Scalar;

use super::check_inputs;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Maximize,
    Minimize,
}

/// Cells above which the distribution LP is refused.
const MAX_CELLS: usize = 64;

/// Extreme expected 0-1 loss of the rule table `h` over distributions `p`
/// on `{x_i} x Y` with `a <= sum p Phi <= b`, solved in the distribution
/// variables directly. Meant for small supports.
pub fn worst_case_oracle<T: Scalar>(
    matrices: &[InstanceMatrix<T>],
    est: &ExpectationEstimates<T>,
    h: &[Vec<T>],
    direction: Direction,
) -> Result<T> {
    let m = check_inputs(est, matrices)?;
    let labels = matrices[0].rows();
    let cells = matrices.len() * labels;
    if cells > MAX_CELLS {
        return Err(Error::InvalidInput(format!(
            "{cells} cells exceed the oracle limit of {MAX_CELLS}"
        )));
    }
    if h.len() != matrices.len() || h.iter().any(|r| r.len() != labels) {
        return Err(Error::InvalidInput("rule table does not match matrices".into()));
    }
    let sign = match direction {
        Direction::Maximize => -T::one(),
        Direction::Minimize => T::one(),
    };
    let objective = h
        .iter()
        .flatten()
        .map(|&v| sign * (T::one() - v))
        .collect();
    let mut lp = LinearProgram::new(objective);
    lp.add_eq(vec![T::one(); cells], T::one());
    for l in 0..m {
        let coeffs: Vec<T> = matrices
            .iter()
            .flat_map(|phi| phi.iter_rows().map(move |row| row[l]))
            .collect();
        lp.add_le(coeffs.clone(), est.b[l]);
        lp.add_ge(coeffs, est.a[l]);
    }
    let sol = solve_lp(&lp)?;
    match sol.status {
        LpStatus::Optimal => Ok(sign * sol.objective_value.expect("optimal value present")),
        LpStatus::Infeasible => Err(Error::UncertaintySetEmpty),
        LpStatus::Unbounded => Err(Error::NumericalBreakdown(
            "distribution problem unbounded on a simplex".into(),
        )),
    }
}
