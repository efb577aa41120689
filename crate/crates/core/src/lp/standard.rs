use super::{Constraint, LinearProgram, VarDomain};
use crate::num::Scalar;

/// Where an original variable lives in the standard-form program.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnMap {
    Single(usize),
    /// Free variable written as `pos - neg`.
    Split { pos: usize, neg: usize },
}

/// A program whose variables are all nonnegative, plus the column mapping
/// back to the program it was derived from.
#[derive(Debug, Clone)]
pub struct StandardForm<T> {
    pub program: LinearProgram<T>,
    pub columns: Vec<ColumnMap>,
}

impl<T: Scalar> StandardForm<T> {
    pub(super) fn new(lp: &LinearProgram<T>) -> Self {
        let mut columns = Vec::with_capacity(lp.num_vars());
        let mut next = 0;
        for domain in lp.domains() {
            columns.push(match domain {
                VarDomain::NonNegative => {
                    next += 1;
                    ColumnMap::Single(next - 1)
                }
                VarDomain::Free => {
                    next += 2;
                    ColumnMap::Split {
                        pos: next - 2,
                        neg: next - 1,
                    }
                }
            });
        }
        let widen = |src: &[T]| {
            let mut out = vec![T::zero(); next];
            for (&v, col) in src.iter().zip(&columns) {
                match *col {
                    ColumnMap::Single(j) => out[j] = v,
                    ColumnMap::Split { pos, neg } => {
                        out[pos] = v;
                        out[neg] = -v;
                    }
                }
            }
            out
        };
        let mut program = LinearProgram::new(widen(lp.objective()));
        for row in lp.constraints() {
            program.add_constraint(Constraint {
                coeffs: widen(&row.coeffs),
                relation: row.relation,
                rhs: row.rhs,
            });
        }
        StandardForm { program, columns }
    }

    /// Original-space point from a standard-form point.
    pub fn recover(&self, z: &[T]) -> Vec<T> {
        self.columns
            .iter()
            .map(|col| match *col {
                ColumnMap::Single(j) => z[j],
                ColumnMap::Split { pos, neg } => z[pos] - z[neg],
            })
            .collect()
    }

    /// Standard-form point for an original-space point (free values split
    /// into positive and negative parts).
    pub fn lift(&self, x: &[T]) -> Vec<T> {
        let mut z = vec![T::zero(); self.program.num_vars()];
        for (&v, col) in x.iter().zip(&self.columns) {
            match *col {
                ColumnMap::Single(j) => z[j] = v,
                ColumnMap::Split { pos, neg } => {
                    z[pos] = v.pos();
                    z[neg] = (-v).pos();
                }
            }
        }
        z
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_variable_splits_and_round_trips() {
        let mut lp = LinearProgram::new(vec![2.0, -1.0]);
        lp.set_free(1);
        lp.add_le(vec![1.0, 3.0], 5.0);
        let sf = lp.to_standard_form();
        assert_eq!(sf.program.num_vars(), 3);
        assert_eq!(sf.program.objective(), &[2.0, -1.0, 1.0]);
        assert_eq!(sf.program.constraints()[0].coeffs, vec![1.0, 3.0, -3.0]);
        assert!(sf
            .program
            .domains()
            .iter()
            .all(|d| *d == VarDomain::NonNegative));

        let x = [0.5, -2.25];
        let z = sf.lift(&x);
        assert_eq!(z, vec![0.5, 0.0, 2.25]);
        assert_eq!(sf.recover(&z), x.to_vec());
        assert_eq!(sf.program.objective_value(&z), lp.objective_value(&x));
    }

    #[test]
    fn ge_rows_are_negated() {
        let mut lp = LinearProgram::new(vec![1.0, 1.0]);
        lp.add_ge(vec![1.0, -2.0], 3.0);
        let sf = lp.to_standard_form();
        let row = &sf.program.constraints()[0];
        assert_eq!(row.coeffs, vec![-1.0, 2.0]);
        assert_eq!(row.rhs, -3.0);
        assert_eq!(row.relation, super::super::Relation::Le);
    }
}
