//! Solving a standard-form program through its Lagrangian dual.
//!
//! For `min c.x, A_I x <= u_I, A_E x = u_E, x >= 0` the dual written as a
//! minimization is
//!
//! ```text
//! min u_I.y + u_E.w   s.t.  -A_I^T y - A_E^T w <= c,  y >= 0,  w free
//! ```
//!
//! whose basis has one row per primal variable. The primal optimum is minus
//! the dual's row multipliers. This is the cheap route for the learning
//! problems, which carry thousands of rows over a few hundred variables.

use super::{simplex, LinearProgram, Outcome, Relation};
use crate::error::Result;
use crate::num::Scalar;

pub(super) fn solve_via_dual<T: Scalar>(
    primal: &LinearProgram<T>,
    max_iterations: Option<usize>,
) -> Result<Outcome<T>> {
    let dual = dual_program(primal);
    let standard = dual.to_standard_form();
    match simplex::solve_standard(&standard.program, max_iterations, false)? {
        simplex::EngineResult::Optimal { duals, .. } => {
            Ok(Outcome::Optimal(duals.into_iter().map(|p| (-p).pos()).collect()))
        }
        simplex::EngineResult::Unbounded => Ok(Outcome::Infeasible),
        // Dual infeasible: the primal is unbounded when it is feasible.
        simplex::EngineResult::Infeasible => {
            match simplex::solve_standard(primal, max_iterations, true)? {
                simplex::EngineResult::Infeasible => Ok(Outcome::Infeasible),
                _ => Ok(Outcome::Unbounded),
            }
        }
    }
}

fn dual_program<T: Scalar>(primal: &LinearProgram<T>) -> LinearProgram<T> {
    let rows = primal.constraints();
    let objective = rows.iter().map(|r| r.rhs).collect();
    let mut dual = LinearProgram::new(objective);
    for (i, row) in rows.iter().enumerate() {
        if row.relation == Relation::Eq {
            dual.set_free(i);
        }
    }
    for (k, &ck) in primal.objective().iter().enumerate() {
        let coeffs = rows.iter().map(|r| -r.coeffs[k]).collect();
        dual.add_le(coeffs, ck);
    }
    dual
}
