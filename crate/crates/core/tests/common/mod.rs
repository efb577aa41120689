//! Reference routines shared by the integration tests. Nothing here calls
//! into the simplex engine.

#![allow(dead_code)]

use mrc::lp::{LinearProgram, LpStatus, Relation, VarDomain};

/// Solves the square system `a x = b` by Gaussian elimination with partial
/// pivoting. `None` when (numerically) singular.
pub fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let p = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[p][col].abs() < 1e-9 {
            return None;
        }
        a.swap(p, col);
        b.swap(p, col);
        for i in col + 1..n {
            let f = a[i][col] / a[col][col];
            for k in col..n {
                a[i][k] -= f * a[col][k];
            }
            b[i] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| a[i][k] * x[k]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    Some(x)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Best vertex of the program intersected with the box `|x_j| <= bound`,
/// found by enumerating every intersection of `n` hyperplanes.
pub fn boxed_vertex_optimum(lp: &LinearProgram<f64>, bound: f64) -> Option<(f64, Vec<f64>)> {
    let n = lp.num_vars();
    // (coeffs, rhs, is_equality)
    let mut planes: Vec<(Vec<f64>, f64, bool)> = lp
        .constraints()
        .iter()
        .map(|c| (c.coeffs.clone(), c.rhs, c.relation == Relation::Eq))
        .collect();
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        planes.push((e.clone(), bound, false));
        let neg: Vec<f64> = e.iter().map(|v| -v).collect();
        let lower = if lp.domains()[j] == VarDomain::NonNegative {
            0.0
        } else {
            bound
        };
        planes.push((neg, lower, false));
    }
    let feasible = |x: &[f64]| {
        planes.iter().all(|(a, rhs, eq)| {
            let v: f64 = a.iter().zip(x).map(|(p, q)| p * q).sum();
            if *eq {
                (v - rhs).abs() <= 1e-8
            } else {
                v <= rhs + 1e-8
            }
        })
    };
    let mut best: Option<(f64, Vec<f64>)> = None;
    for subset in combinations(planes.len(), n) {
        let a = subset.iter().map(|&i| planes[i].0.clone()).collect();
        let b = subset.iter().map(|&i| planes[i].1).collect();
        let Some(x) = solve_square(a, b) else { continue };
        if !feasible(&x) {
            continue;
        }
        let obj: f64 = lp.objective().iter().zip(&x).map(|(c, v)| c * v).sum();
        if best.as_ref().map_or(true, |(b, _)| obj < *b - 1e-12) {
            best = Some((obj, x));
        }
    }
    best
}

/// Status and optimum of a small program by vertex enumeration. Growth of the
/// boxed optimum between two box sizes certifies unboundedness.
pub fn brute_force_lp(lp: &LinearProgram<f64>) -> (LpStatus, Option<f64>) {
    const BOX: f64 = 1e5;
    match boxed_vertex_optimum(lp, BOX) {
        None => (LpStatus::Infeasible, None),
        Some((v1, _)) => {
            let (v2, _) = boxed_vertex_optimum(lp, 2.0 * BOX).expect("larger box stays feasible");
            if v2 < v1 - 1e-6 * (1.0 + v1.abs()) {
                (LpStatus::Unbounded, None)
            } else {
                (LpStatus::Optimal, Some(v1))
            }
        }
    }
}

/// Maximum expected loss `sum p(x,y) (1 - h(y|x))` (or minimum, with
/// `maximize = false`) over distributions on a tiny `X x Y` whose feature
/// expectations lie in `[a, b]`, by enumerating vertices of the distribution
/// polytope. `features[x][y]` is the feature vector of `(x, y)`.
pub fn brute_force_loss(
    features: &[Vec<Vec<f64>>],
    rule: &[Vec<f64>],
    a: &[f64],
    b: &[f64],
    maximize: bool,
) -> Option<f64> {
    let cells: Vec<(usize, usize)> = features
        .iter()
        .enumerate()
        .flat_map(|(x, rows)| (0..rows.len()).map(move |y| (x, y)))
        .collect();
    let n = cells.len();
    let m = a.len();
    // Hyperplanes in p-space: sum p = 1 (equality), Phi^T p <= b, -Phi^T p <= -a, -p <= 0.
    let mut planes: Vec<(Vec<f64>, f64, bool)> = vec![(vec![1.0; n], 1.0, true)];
    for l in 0..m {
        let col: Vec<f64> = cells.iter().map(|&(x, y)| features[x][y][l]).collect();
        planes.push((col.clone(), b[l], false));
        planes.push((col.iter().map(|v| -v).collect(), -a[l], false));
    }
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = -1.0;
        planes.push((e, 0.0, false));
    }
    let loss: Vec<f64> = cells.iter().map(|&(x, y)| 1.0 - rule[x][y]).collect();
    let feasible = |p: &[f64]| {
        planes.iter().all(|(a, rhs, eq)| {
            let v: f64 = a.iter().zip(p).map(|(s, t)| s * t).sum();
            if *eq {
                (v - rhs).abs() <= 1e-9
            } else {
                v <= rhs + 1e-9
            }
        })
    };
    let mut best: Option<f64> = None;
    // Every vertex has the normalization row active.
    for subset in combinations(planes.len() - 1, n - 1) {
        let mut rows = vec![planes[0].0.clone()];
        let mut rhs = vec![1.0];
        for &i in &subset {
            rows.push(planes[i + 1].0.clone());
            rhs.push(planes[i + 1].1);
        }
        let Some(p) = solve_square(rows, rhs) else { continue };
        if !feasible(&p) {
            continue;
        }
        let v: f64 = loss.iter().zip(&p).map(|(l, q)| l * q).sum();
        best = Some(match best {
            None => v,
            Some(b) if maximize => b.max(v),
            Some(b) => b.min(v),
        });
    }
    best
}

use mrc::estimates::ExpectationEstimates;
use mrc::features::{FeatureMap, InstanceMatrix, ThresholdSpec};
use rand::Rng;

/// A small learning problem whose uncertainty set is nonempty by
/// construction: `[a, b]` is centered on the moments of a random
/// distribution over the instance matrices.
pub struct TinyProblem {
    pub matrices: Vec<InstanceMatrix<f64>>,
    pub fm: Option<FeatureMap>,
    pub estimates: ExpectationEstimates<f64>,
}

impl TinyProblem {
    /// `features[x][y]` layout expected by [`brute_force_loss`].
    pub fn features(&self) -> Vec<Vec<Vec<f64>>> {
        self.matrices
            .iter()
            .map(|p| p.iter_rows().map(<[f64]>::to_vec).collect())
            .collect()
    }

    pub fn cells(&self) -> usize {
        self.matrices.len() * self.matrices[0].rows()
    }
}

fn dedup(matrices: Vec<InstanceMatrix<f64>>) -> Vec<InstanceMatrix<f64>> {
    let mut out: Vec<InstanceMatrix<f64>> = Vec::new();
    for m in matrices {
        if !out.contains(&m) {
            out.push(m);
        }
    }
    out
}

/// Random problem with `|X| <= max_x`, `|Y| <= 3` and `m <= 6`. Even draws
/// use thresholded 2-D points, odd draws unstructured 0/1 matrices.
pub fn random_tiny_problem<R: Rng>(rng: &mut R, draw: usize, max_x: usize) -> TinyProblem {
    let labels = rng.gen_range(2..=3);
    let count = rng.gen_range(1..=max_x);
    let (matrices, fm) = if draw % 2 == 0 {
        let k = rng.gen_range(0..=(6 / labels - 1));
        let thresholds = (0..k)
            .map(|_| ThresholdSpec {
                dimension: rng.gen_range(0..2),
                value: rng.gen_range(0..3) as f64 + 0.5,
            })
            .collect();
        let fm = FeatureMap::new(labels, thresholds);
        let points: Vec<Vec<f64>> = (0..count)
            .map(|_| vec![rng.gen_range(0..4) as f64, rng.gen_range(0..4) as f64])
            .collect();
        let mats = fm.unique_instance_matrices::<f64, _>(points.iter().map(Vec::as_slice));
        (mats, Some(fm))
    } else {
        let m = rng.gen_range(2..=6);
        let mats = (0..count)
            .map(|_| {
                InstanceMatrix::from_rows(
                    (0..labels)
                        .map(|_| (0..m).map(|_| f64::from(rng.gen_range(0..2u8))).collect())
                        .collect(),
                )
            })
            .collect();
        (dedup(mats), None)
    };
    let m = matrices[0].cols();
    let mut weights: Vec<f64> = (0..matrices.len() * labels)
        .map(|_| if rng.gen_bool(0.3) { 0.0 } else { rng.gen::<f64>() })
        .collect();
    if weights.iter().all(|&w| w == 0.0) {
        weights[0] = 1.0;
    }
    let total: f64 = weights.iter().sum();
    let mut tau = vec![0.0; m];
    for (i, phi) in matrices.iter().enumerate() {
        for (y, row) in phi.iter_rows().enumerate() {
            let p = weights[i * labels + y] / total;
            for (t, v) in tau.iter_mut().zip(row) {
                *t += p * v;
            }
        }
    }
    let lambda: Vec<f64> = (0..m)
        .map(|_| if rng.gen_bool(0.25) { 0.0 } else { rng.gen_range(0.0..0.3) })
        .collect();
    let a = tau.iter().zip(&lambda).map(|(t, l)| t - l).collect();
    let b = tau.iter().zip(&lambda).map(|(t, l)| t + l).collect();
    TinyProblem {
        matrices,
        fm,
        estimates: ExpectationEstimates::from_interval(a, b).unwrap(),
    }
}

/// Two-class data on a few dimensions with overlapping class-conditional
/// Gaussians; deterministic in `seed`.
pub fn synthetic_gaussian(n: usize, seed: u64) -> mrc::data::Dataset {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut normal = move || {
        let u: f64 = rng.gen_range(f64::EPSILON..1.0);
        let v: f64 = rng.gen();
        (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
    };
    let mut instances = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let y = usize::from(i % 5 < 2);
        let shift = if y == 1 { 1.0 } else { 0.0 };
        let x = vec![
            ((normal() + shift) * 100.0).round() / 100.0,
            ((normal() + 0.5 * shift) * 100.0).round() / 100.0,
            ((normal()) * 100.0).round() / 100.0,
        ];
        instances.push(x);
        labels.push(y);
    }
    mrc::data::Dataset::new(instances, labels, vec!["neg".into(), "pos".into()]).unwrap()
}
