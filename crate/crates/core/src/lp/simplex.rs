//! Two-phase revised simplex on `min c.x, A x {<=,=} b, x >= 0`.
//!
//! The basis inverse is kept explicitly (dense, row-major) and updated with
//! product-form eliminations; it is rebuilt from scratch every
//! [`REFACTOR_PERIOD`] pivots and before the final solution is read off.
//!
//! Entering columns are priced with Dantzig's rule. After
//! [`DEGENERATE_STREAK`] consecutive degenerate pivots the phase switches to
//! Bland's rule for both the entering and leaving choice and stays there,
//! which guarantees termination.

use super::{LinearProgram, Relation};
use crate::error::{Error, Result};
use crate::num::{dot, Scalar};

const REFACTOR_PERIOD: usize = 100;
const DEGENERATE_STREAK: usize = 50;

pub(super) enum EngineResult<T> {
    Optimal {
        primal: Vec<T>,
        /// Row multipliers `c_B^T B^{-1}`, one per input row, in the input
        /// row orientation.
        duals: Vec<T>,
    },
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, Copy)]
enum Column {
    Structural(usize),
    Unit { row: usize, negative: bool },
}

enum PhaseEnd {
    Optimal,
    Unbounded,
}

struct Engine<T> {
    m: usize,
    structural: Vec<Vec<T>>,
    columns: Vec<Column>,
    first_artificial: usize,
    b: Vec<T>,
    row_sign: Vec<T>,
    basis: Vec<usize>,
    position: Vec<Option<usize>>,
    binv: Vec<T>,
    xb: Vec<T>,
    iterations: usize,
    max_iterations: usize,
    since_refactor: usize,
}

/// Solves a program whose variables are all nonnegative. With
/// `feasibility_only` the engine stops after phase 1 and reports any feasible
/// point as `Optimal` with empty duals.
pub(super) fn solve_standard<T: Scalar>(
    lp: &LinearProgram<T>,
    max_iterations: Option<usize>,
    feasibility_only: bool,
) -> Result<EngineResult<T>> {
    let mut engine = Engine::new(lp, max_iterations);
    let n = lp.num_vars();

    let mut phase1 = vec![T::zero(); engine.columns.len()];
    for c in &mut phase1[engine.first_artificial..] {
        *c = T::one();
    }
    if engine.first_artificial < engine.columns.len() {
        match engine.run(&phase1, true)? {
            PhaseEnd::Optimal => {}
            PhaseEnd::Unbounded => {
                return Err(Error::NumericalBreakdown(
                    "phase 1 reported an unbounded direction".into(),
                ))
            }
        }
        engine.refactor()?;
        let infeasibility: T = (0..engine.m)
            .filter(|&r| engine.basis[r] >= engine.first_artificial)
            .map(|r| engine.xb[r].pos())
            .sum();
        if infeasibility > T::FEASIBILITY_TOL {
            return Ok(EngineResult::Infeasible);
        }
        engine.drive_out_artificials()?;
    }
    if feasibility_only {
        return Ok(EngineResult::Optimal {
            primal: engine.structural_values(n),
            duals: Vec::new(),
        });
    }

    let mut phase2 = vec![T::zero(); engine.columns.len()];
    phase2[..n].copy_from_slice(lp.objective());
    match engine.run(&phase2, false)? {
        PhaseEnd::Unbounded => return Ok(EngineResult::Unbounded),
        PhaseEnd::Optimal => {}
    }
    engine.refactor()?;
    let pi = engine.multipliers(&phase2);
    let duals = pi
        .iter()
        .zip(&engine.row_sign)
        .map(|(&p, &s)| p * s)
        .collect();
    Ok(EngineResult::Optimal {
        primal: engine.structural_values(n),
        duals,
    })
}

impl<T: Scalar> Engine<T> {
    fn new(lp: &LinearProgram<T>, max_iterations: Option<usize>) -> Self {
        let rows = lp.constraints();
        let m = rows.len();
        let n = lp.num_vars();
        let row_sign: Vec<T> = rows
            .iter()
            .map(|r| if r.rhs < T::zero() { -T::one() } else { T::one() })
            .collect();
        let b: Vec<T> = rows.iter().zip(&row_sign).map(|(r, &s)| r.rhs * s).collect();
        let structural = (0..n)
            .map(|j| {
                rows.iter()
                    .zip(&row_sign)
                    .map(|(r, &s)| r.coeffs[j] * s)
                    .collect()
            })
            .collect();

        let mut columns: Vec<Column> = (0..n).map(Column::Structural).collect();
        let mut basis = vec![usize::MAX; m];
        for (i, row) in rows.iter().enumerate() {
            if row.relation == Relation::Le {
                let negative = row_sign[i] < T::zero();
                if !negative {
                    basis[i] = columns.len();
                }
                columns.push(Column::Unit { row: i, negative });
            }
        }
        let first_artificial = columns.len();
        for (i, slot) in basis.iter_mut().enumerate() {
            if *slot == usize::MAX {
                *slot = columns.len();
                columns.push(Column::Unit {
                    row: i,
                    negative: false,
                });
            }
        }
        let mut position = vec![None; columns.len()];
        for (r, &j) in basis.iter().enumerate() {
            position[j] = Some(r);
        }
        let mut binv = vec![T::zero(); m * m];
        for i in 0..m {
            binv[i * m + i] = T::one();
        }
        let max_iterations =
            max_iterations.unwrap_or(10_000 + 50 * (m + columns.len()));
        Engine {
            m,
            structural,
            columns,
            first_artificial,
            xb: b.clone(),
            b,
            row_sign,
            basis,
            position,
            binv,
            iterations: 0,
            max_iterations,
            since_refactor: 0,
        }
    }

    fn dense_column(&self, j: usize) -> Vec<T> {
        match self.columns[j] {
            Column::Structural(k) => self.structural[k].clone(),
            Column::Unit { row, negative } => {
                let mut col = vec![T::zero(); self.m];
                col[row] = if negative { -T::one() } else { T::one() };
                col
            }
        }
    }

    fn price(&self, pi: &[T], j: usize) -> T {
        match self.columns[j] {
            Column::Structural(k) => dot(pi, &self.structural[k]),
            Column::Unit { row, negative } => {
                if negative {
                    -pi[row]
                } else {
                    pi[row]
                }
            }
        }
    }

    /// `B^{-1} A_j`.
    fn ftran(&self, j: usize) -> Vec<T> {
        let m = self.m;
        match self.columns[j] {
            Column::Structural(k) => {
                let col = &self.structural[k];
                (0..m)
                    .map(|i| dot(&self.binv[i * m..(i + 1) * m], col))
                    .collect()
            }
            Column::Unit { row, negative } => (0..m)
                .map(|i| {
                    let v = self.binv[i * m + row];
                    if negative {
                        -v
                    } else {
                        v
                    }
                })
                .collect(),
        }
    }

    /// `c_B^T B^{-1}`.
    fn multipliers(&self, costs: &[T]) -> Vec<T> {
        let m = self.m;
        let mut pi = vec![T::zero(); m];
        for r in 0..m {
            let cb = costs[self.basis[r]];
            if cb == T::zero() {
                continue;
            }
            for (p, &v) in pi.iter_mut().zip(&self.binv[r * m..(r + 1) * m]) {
                *p = *p + cb * v;
            }
        }
        pi
    }

    fn run(&mut self, costs: &[T], allow_artificial: bool) -> Result<PhaseEnd> {
        let mut bland = false;
        let mut degenerate_streak = 0;
        let limit = if allow_artificial {
            self.columns.len()
        } else {
            self.first_artificial
        };
        loop {
            if self.iterations >= self.max_iterations {
                return Err(Error::IterationLimit(self.max_iterations));
            }
            if self.since_refactor >= REFACTOR_PERIOD {
                self.refactor()?;
            }
            let pi = self.multipliers(costs);
            let mut entering: Option<(usize, T)> = None;
            for j in 0..limit {
                if self.position[j].is_some() {
                    continue;
                }
                let d = costs[j] - self.price(&pi, j);
                if d < -T::OPTIMALITY_TOL {
                    if bland {
                        entering = Some((j, d));
                        break;
                    }
                    if entering.map_or(true, |(_, best)| d < best) {
                        entering = Some((j, d));
                    }
                }
            }
            let Some((q, _)) = entering else {
                return Ok(PhaseEnd::Optimal);
            };
            let w = self.ftran(q);
            let Some(r) = self.ratio_test(&w, bland) else {
                return Ok(PhaseEnd::Unbounded);
            };
            let step = self.xb[r].pos() / w[r];
            if step <= T::SINGULAR_TOL {
                degenerate_streak += 1;
                if degenerate_streak >= DEGENERATE_STREAK {
                    bland = true;
                }
            } else {
                degenerate_streak = 0;
            }
            self.pivot(q, r, &w);
            self.iterations += 1;
        }
    }

    fn ratio_test(&self, w: &[T], bland: bool) -> Option<usize> {
        let mut min_ratio: Option<T> = None;
        for i in 0..self.m {
            if w[i] > T::PIVOT_TOL {
                let ratio = self.xb[i].pos() / w[i];
                if min_ratio.map_or(true, |m| ratio < m) {
                    min_ratio = Some(ratio);
                }
            }
        }
        let theta = min_ratio?;
        let tie = T::SINGULAR_TOL * (T::one() + theta);
        let mut chosen: Option<usize> = None;
        for i in 0..self.m {
            if w[i] <= T::PIVOT_TOL || self.xb[i].pos() / w[i] > theta + tie {
                continue;
            }
            chosen = match chosen {
                None => Some(i),
                Some(c) => {
                    let better = if bland {
                        self.basis[i] < self.basis[c]
                    } else {
                        w[i] > w[c]
                    };
                    Some(if better { i } else { c })
                }
            };
        }
        chosen
    }

    fn pivot(&mut self, q: usize, r: usize, w: &[T]) {
        let m = self.m;
        let step = self.xb[r].pos() / w[r];
        for i in 0..m {
            if i != r {
                self.xb[i] = self.xb[i] - step * w[i];
            }
        }
        self.xb[r] = step;

        let inv_pivot = T::one() / w[r];
        for v in &mut self.binv[r * m..(r + 1) * m] {
            *v = *v * inv_pivot;
        }
        let (before, rest) = self.binv.split_at_mut(r * m);
        let (pivot_row, after) = rest.split_at_mut(m);
        let eliminate = |i: usize, row: &mut [T]| {
            let f = w[i];
            if f != T::zero() {
                for (v, &p) in row.iter_mut().zip(pivot_row.iter()) {
                    *v = *v - f * p;
                }
            }
        };
        for (i, row) in before.chunks_mut(m).enumerate() {
            eliminate(i, row);
        }
        for (off, row) in after.chunks_mut(m).enumerate() {
            eliminate(r + 1 + off, row);
        }

        let leaving = self.basis[r];
        self.position[leaving] = None;
        self.position[q] = Some(r);
        self.basis[r] = q;
        self.since_refactor += 1;
    }

    /// Rebuilds `B^{-1}` by Gauss-Jordan elimination with partial pivoting
    /// and recomputes the basic values.
    fn refactor(&mut self) -> Result<()> {
        let m = self.m;
        self.since_refactor = 0;
        if m == 0 {
            return Ok(());
        }
        let mut a = vec![T::zero(); m * m];
        for (c, &j) in self.basis.iter().enumerate() {
            for (i, v) in self.dense_column(j).into_iter().enumerate() {
                a[i * m + c] = v;
            }
        }
        let mut inv = vec![T::zero(); m * m];
        for i in 0..m {
            inv[i * m + i] = T::one();
        }
        for col in 0..m {
            let (p, mag) = (col..m)
                .map(|i| (i, a[i * m + col].abs()))
                .fold((col, -T::one()), |acc, x| if x.1 > acc.1 { x } else { acc });
            if mag < T::SINGULAR_TOL {
                return Err(Error::NumericalBreakdown(format!(
                    "singular basis (pivot {:e} in column {col})",
                    mag.as_f64()
                )));
            }
            if p != col {
                for k in 0..m {
                    a.swap(p * m + k, col * m + k);
                    inv.swap(p * m + k, col * m + k);
                }
            }
            let d = T::one() / a[col * m + col];
            for k in 0..m {
                a[col * m + k] = a[col * m + k] * d;
                inv[col * m + k] = inv[col * m + k] * d;
            }
            for i in 0..m {
                if i == col {
                    continue;
                }
                let f = a[i * m + col];
                if f == T::zero() {
                    continue;
                }
                for k in 0..m {
                    a[i * m + k] = a[i * m + k] - f * a[col * m + k];
                    inv[i * m + k] = inv[i * m + k] - f * inv[col * m + k];
                }
            }
        }
        self.binv = inv;
        self.xb = (0..m)
            .map(|i| dot(&self.binv[i * m..(i + 1) * m], &self.b))
            .collect();
        Ok(())
    }

    fn drive_out_artificials(&mut self) -> Result<()> {
        let m = self.m;
        for r in 0..m {
            if self.basis[r] < self.first_artificial {
                continue;
            }
            let row = self.binv[r * m..(r + 1) * m].to_vec();
            let mut best: Option<(usize, T)> = None;
            for j in 0..self.first_artificial {
                if self.position[j].is_some() {
                    continue;
                }
                let alpha = self.price(&row, j).abs();
                if alpha > T::PIVOT_TOL && best.map_or(true, |(_, b)| alpha > b) {
                    best = Some((j, alpha));
                }
            }
            // A row with no candidate is redundant; its artificial stays basic at zero.
            if let Some((q, _)) = best {
                let w = self.ftran(q);
                self.pivot(q, r, &w);
            }
        }
        self.refactor()
    }

    fn structural_values(&self, n: usize) -> Vec<T> {
        let mut x = vec![T::zero(); n];
        for (r, &j) in self.basis.iter().enumerate() {
            if let Column::Structural(k) = self.columns[j] {
                x[k] = self.xb[r].pos();
            }
        }
        x
    }
}
