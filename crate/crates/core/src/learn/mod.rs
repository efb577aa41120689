//! Learning minimax risk classifiers.
//!
//! The learning problem minimizes `b.mu_b - a.mu_a - nu` over
//! `mu_a, mu_b >= 0` and free `nu`, subject to
//! `||(Phi_i (mu_a - mu_b) + (nu + 1) 1)_+||_1 <= 1` for every distinct
//! instance matrix `Phi_i`. Each norm constraint is linearized into one row
//! per nonempty label subset (see [`enumerate_subset_constraints`]). The
//! optimal value is the minimax expected 0-1 loss over the uncertainty set
//! `{p : a <= E_p[Phi] <= b}`, i.e. the upper risk bound at learning.

mod bounds;
mod oracle;
mod subsets;

pub use bounds::{kappa_bound_for_rule, lower_bound, lower_bound_for, rule_table};
pub use oracle::{worst_case_oracle, Direction};
pub use subsets::{enumerate_subset_constraints, subset_row};

use crate::error::{Error, Result};
use crate::estimates::ExpectationEstimates;
use crate::features::{FeatureMap, InstanceMatrix};
use crate::lp::{solve_lp, LinearProgram, LpStatus};
use crate::num::{dot, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Interval estimates `a <= E[Phi] <= b`.
    #[default]
    Interval,
    /// Point estimates `E[Phi] = a`; requires `a == b`.
    Point,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LearnConfig {
    pub mode: Mode,
    /// Largest label count for which subset rows are enumerated.
    pub max_labels_for_subsets: usize,
    pub compute_lower_bound: bool,
}

impl Default for LearnConfig {
    fn default() -> Self {
        LearnConfig {
            mode: Mode::Interval,
            max_labels_for_subsets: 10,
            compute_lower_bound: false,
        }
    }
}

/// `mu* = mu_a* - mu_b*`, `nu*` and the optimal value of the learning problem.
#[derive(Debug, Clone, PartialEq)]
pub struct LearnedParameters<T> {
    pub mu: Vec<T>,
    pub nu: T,
    pub upper_bound: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MrcModel<T> {
    pub feature_map: FeatureMap,
    pub mu: Vec<T>,
    pub nu: T,
    pub upper_bound: T,
    pub lower_bound: Option<T>,
    pub estimates: ExpectationEstimates<T>,
}

impl<T: Scalar> MrcModel<T> {
    /// `Phi(x, y).mu + nu + 1` for every label.
    pub fn scores(&self, x: &[f64]) -> Vec<T> {
        let fm = &self.feature_map;
        let block = fm.block_len();
        let pattern = fm.pattern(x);
        let shift = self.nu + T::one();
        (0..fm.num_labels())
            .map(|y| {
                let base = &self.mu[y * block..(y + 1) * block];
                let hits = pattern
                    .iter()
                    .zip(&base[1..])
                    .filter(|(hit, _)| **hit)
                    .fold(T::zero(), |acc, (_, &w)| acc + w);
                base[0] + hits + shift
            })
            .collect()
    }

    pub fn parameters(&self) -> LearnedParameters<T> {
        LearnedParameters {
            mu: self.mu.clone(),
            nu: self.nu,
            upper_bound: self.upper_bound,
        }
    }
}

pub(crate) fn check_inputs<T: Scalar>(
    est: &ExpectationEstimates<T>,
    matrices: &[InstanceMatrix<T>],
) -> Result<usize> {
    let first = matrices
        .first()
        .ok_or_else(|| Error::InvalidInput("no instance matrices".into()))?;
    let m = first.cols();
    if matrices
        .iter()
        .any(|p| p.cols() != m || p.rows() != first.rows())
    {
        return Err(Error::InvalidInput("instance matrices differ in shape".into()));
    }
    if est.dim() != m {
        return Err(Error::InvalidInput(format!(
            "estimates have dimension {}, matrices have {m} columns",
            est.dim()
        )));
    }
    Ok(m)
}

/// Builds the linearized learning problem. Interval mode lays variables out
/// as `[mu_a (m), mu_b (m), nu]`; point mode as `[mu (m, free), nu]`.
pub fn build_learning_lp<T: Scalar>(
    est: &ExpectationEstimates<T>,
    cfg: &LearnConfig,
    matrices: &[InstanceMatrix<T>],
) -> Result<LinearProgram<T>> {
    let m = check_inputs(est, matrices)?;
    let rows = enumerate_subset_constraints(matrices, cfg.max_labels_for_subsets)?;
    match cfg.mode {
        Mode::Interval => {
            let mut objective: Vec<T> = est.a.iter().map(|&v| -v).collect();
            objective.extend_from_slice(&est.b);
            objective.push(-T::one());
            let mut lp = LinearProgram::new(objective);
            lp.set_free(2 * m);
            for row in rows {
                lp.add_constraint(row);
            }
            Ok(lp)
        }
        Mode::Point => {
            if !est.is_point() {
                return Err(Error::InvalidInput(
                    "point mode needs coinciding interval endpoints".into(),
                ));
            }
            let mut objective: Vec<T> = est.a.iter().map(|&v| -v).collect();
            objective.push(-T::one());
            let mut lp = LinearProgram::new(objective);
            for j in 0..=m {
                lp.set_free(j);
            }
            for row in rows {
                let mut coeffs = row.coeffs[..m].to_vec();
                coeffs.push(row.coeffs[2 * m]);
                lp.add_le(coeffs, row.rhs);
            }
            Ok(lp)
        }
    }
}

/// Solves the learning problem on the supplied instance matrices.
pub fn fit_parameters<T: Scalar>(
    est: &ExpectationEstimates<T>,
    cfg: &LearnConfig,
    matrices: &[InstanceMatrix<T>],
) -> Result<LearnedParameters<T>> {
    let m = check_inputs(est, matrices)?;
    let lp = build_learning_lp(est, cfg, matrices)?;
    let sol = solve_lp(&lp)?;
    match sol.status {
        LpStatus::Optimal => {}
        LpStatus::Unbounded => return Err(Error::UncertaintySetEmpty),
        LpStatus::Infeasible => {
            return Err(Error::NumericalBreakdown(
                "learning problem reported infeasible although mu = 0, nu = -1 is feasible"
                    .into(),
            ))
        }
    }
    let z = sol.primal.expect("optimal solutions carry a primal point");
    let (mu, nu, upper_bound) = match cfg.mode {
        Mode::Interval => {
            let (mu_a, rest) = z.split_at(m);
            let (mu_b, nu) = rest.split_at(m);
            let nu = nu[0];
            let mu = mu_a.iter().zip(mu_b).map(|(&p, &q)| p - q).collect();
            let ub = dot(&est.b, mu_b) - dot(&est.a, mu_a) - nu;
            (mu, nu, ub)
        }
        Mode::Point => {
            let mu = z[..m].to_vec();
            let nu = z[m];
            let ub = -dot(&est.a, &mu) - nu;
            (mu, nu, ub)
        }
    };
    Ok(LearnedParameters {
        mu,
        nu,
        upper_bound,
    })
}

pub fn fit<T: Scalar>(
    fm: &FeatureMap,
    est: &ExpectationEstimates<T>,
    cfg: &LearnConfig,
    matrices: &[InstanceMatrix<T>],
) -> Result<MrcModel<T>> {
    if fm.dim() != est.dim() {
        return Err(Error::InvalidInput(format!(
            "feature map has {} components, estimates {}",
            fm.dim(),
            est.dim()
        )));
    }
    let params = fit_parameters(est, cfg, matrices)?;
    let mut model = MrcModel {
        feature_map: fm.clone(),
        mu: params.mu,
        nu: params.nu,
        upper_bound: params.upper_bound,
        lower_bound: None,
        estimates: est.clone(),
    };
    if cfg.compute_lower_bound {
        model.lower_bound = Some(lower_bound(&model, matrices)?);
    }
    Ok(model)
}

/// Largest `||(Phi_i mu + (nu + 1) 1)_+||_1` over the matrices; at most one
/// for any feasible point of the learning problem.
pub fn max_constraint_norm<T: Scalar>(mu: &[T], nu: T, matrices: &[InstanceMatrix<T>]) -> T {
    matrices
        .iter()
        .map(|phi| {
            phi.affine_scores(mu, nu + T::one())
                .into_iter()
                .map(Scalar::pos)
                .sum::<T>()
        })
        .fold(T::zero(), T::max)
}
