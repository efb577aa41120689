//! Dense linear programming.
//!
//! Every optimization in the toolkit (learning, the lower-bound problem and
//! the worst-case distribution oracle) is expressed as a [`LinearProgram`]
//! and handed to [`solve_lp`]. Problems are minimized subject to `<=` and `=`
//! rows; variables are either nonnegative or free.

mod dual;
mod simplex;
mod standard;

pub use standard::{ColumnMap, StandardForm};

use crate::error::{Error, Result};
use crate::num::{dot, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
}

/// Admissible range of a variable: `[0, +inf)` or `(-inf, +inf)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarDomain {
    NonNegative,
    Free,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint<T> {
    pub coeffs: Vec<T>,
    pub relation: Relation,
    pub rhs: T,
}

impl<T: Scalar> Constraint<T> {
    pub fn activity(&self, x: &[T]) -> T {
        dot(&self.coeffs, x)
    }

    /// Amount by which `x` violates this row (zero when satisfied).
    pub fn violation(&self, x: &[T]) -> T {
        let slack = self.rhs - self.activity(x);
        match self.relation {
            Relation::Le => (-slack).pos(),
            Relation::Eq => slack.abs(),
        }
    }
}

/// `minimize objective . z` subject to the constraint rows and variable domains.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram<T> {
    objective: Vec<T>,
    constraints: Vec<Constraint<T>>,
    domains: Vec<VarDomain>,
}

impl<T: Scalar> LinearProgram<T> {
    /// A program over `objective.len()` nonnegative variables with no rows.
    pub fn new(objective: Vec<T>) -> Self {
        let n = objective.len();
        LinearProgram {
            objective,
            constraints: Vec::new(),
            domains: vec![VarDomain::NonNegative; n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn objective(&self) -> &[T] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint<T>] {
        &self.constraints
    }

    pub fn domains(&self) -> &[VarDomain] {
        &self.domains
    }

    pub fn set_domain(&mut self, var: usize, domain: VarDomain) {
        self.domains[var] = domain;
    }

    pub fn set_free(&mut self, var: usize) {
        self.set_domain(var, VarDomain::Free);
    }

    pub fn add_constraint(&mut self, constraint: Constraint<T>) {
        self.constraints.push(constraint);
    }

    pub fn add_le(&mut self, coeffs: Vec<T>, rhs: T) {
        self.add_constraint(Constraint {
            coeffs,
            relation: Relation::Le,
            rhs,
        });
    }

    /// `coeffs . z >= rhs`, stored as `-coeffs . z <= -rhs`.
    pub fn add_ge(&mut self, coeffs: Vec<T>, rhs: T) {
        let coeffs = coeffs.into_iter().map(|c| -c).collect();
        self.add_le(coeffs, -rhs);
    }

    pub fn add_eq(&mut self, coeffs: Vec<T>, rhs: T) {
        self.add_constraint(Constraint {
            coeffs,
            relation: Relation::Eq,
            rhs,
        });
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.domains.len() != n {
            return Err(Error::MalformedProgram(format!(
                "{} domains for {} variables",
                self.domains.len(),
                n
            )));
        }
        for (i, row) in self.constraints.iter().enumerate() {
            if row.coeffs.len() != n {
                return Err(Error::MalformedProgram(format!(
                    "row {} has {} coefficients, expected {}",
                    i,
                    row.coeffs.len(),
                    n
                )));
            }
            if !row.rhs.is_finite() || row.coeffs.iter().any(|c| !c.is_finite()) {
                return Err(Error::MalformedProgram(format!(
                    "row {i} has non-finite data"
                )));
            }
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(Error::MalformedProgram("non-finite objective".into()));
        }
        Ok(())
    }

    pub fn objective_value(&self, z: &[T]) -> T {
        dot(&self.objective, z)
    }

    /// Largest row or domain violation of `z`.
    pub fn max_violation(&self, z: &[T]) -> T {
        let rows = self
            .constraints
            .iter()
            .map(|c| c.violation(z))
            .fold(T::zero(), T::max);
        self.domains
            .iter()
            .zip(z)
            .filter(|(d, _)| **d == VarDomain::NonNegative)
            .map(|(_, &v)| (-v).pos())
            .fold(rows, T::max)
    }

    pub fn to_standard_form(&self) -> StandardForm<T> {
        StandardForm::new(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution<T> {
    pub status: LpStatus,
    pub objective_value: Option<T>,
    pub primal: Option<Vec<T>>,
}

impl<T: Scalar> LpSolution<T> {
    fn optimal(lp: &LinearProgram<T>, primal: Vec<T>) -> Self {
        LpSolution {
            status: LpStatus::Optimal,
            objective_value: Some(lp.objective_value(&primal)),
            primal: Some(primal),
        }
    }

    fn infeasible() -> Self {
        LpSolution {
            status: LpStatus::Infeasible,
            objective_value: None,
            primal: None,
        }
    }

    fn unbounded() -> Self {
        LpSolution {
            status: LpStatus::Unbounded,
            objective_value: None,
            primal: None,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

/// Which problem the simplex engine pivots on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Pivot on whichever of primal and dual has the smaller basis.
    #[default]
    Auto,
    Primal,
    Dual,
}

#[derive(Debug, Clone, Default)]
pub struct SolverOptions {
    pub strategy: Strategy,
    /// Overrides the size-dependent default iteration cap.
    pub max_iterations: Option<usize>,
}

pub fn solve_lp<T: Scalar>(lp: &LinearProgram<T>) -> Result<LpSolution<T>> {
    solve_lp_with(lp, &SolverOptions::default())
}

pub fn solve_lp_with<T: Scalar>(
    lp: &LinearProgram<T>,
    options: &SolverOptions,
) -> Result<LpSolution<T>> {
    lp.validate()?;
    let standard = lp.to_standard_form();
    let rows = standard.program.constraints().len();
    let cols = standard.program.num_vars();
    let use_dual = match options.strategy {
        Strategy::Primal => false,
        Strategy::Dual => true,
        Strategy::Auto => rows > cols,
    };
    let outcome = if use_dual {
        dual::solve_via_dual(&standard.program, options.max_iterations)?
    } else {
        simplex::solve_standard(&standard.program, options.max_iterations, false)?.into()
    };
    Ok(match outcome {
        Outcome::Optimal(z) => LpSolution::optimal(lp, standard.recover(&z)),
        Outcome::Infeasible => LpSolution::infeasible(),
        Outcome::Unbounded => LpSolution::unbounded(),
    })
}

/// Status plus standard-form primal point.
enum Outcome<T> {
    Optimal(Vec<T>),
    Infeasible,
    Unbounded,
}

impl<T> From<simplex::EngineResult<T>> for Outcome<T> {
    fn from(r: simplex::EngineResult<T>) -> Self {
        match r {
            simplex::EngineResult::Optimal { primal, .. } => Outcome::Optimal(primal),
            simplex::EngineResult::Infeasible => Outcome::Infeasible,
            simplex::EngineResult::Unbounded => Outcome::Unbounded,
        }
    }
}
