use mrc::data::Dataset;
use mrc::features::{FeatureMap, ThresholdSpec};
use mrc::stumps::select_thresholds;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Weighted Gini of splitting at `value` on `dim`, computed from scratch.
fn split_impurity(data: &Dataset, dim: usize, value: f64) -> f64 {
    let k = data.num_labels();
    let (mut left, mut right) = (vec![0.0; k], vec![0.0; k]);
    for (x, &y) in data.instances().iter().zip(data.labels()) {
        if x[dim] <= value {
            left[y] += 1.0;
        } else {
            right[y] += 1.0;
        }
    }
    let gini = |c: &[f64]| {
        let n: f64 = c.iter().sum();
        if n == 0.0 {
            return (0.0, 0.0);
        }
        (n, 1.0 - c.iter().map(|v| (v / n) * (v / n)).sum::<f64>())
    };
    let (nl, gl) = gini(&left);
    let (nr, gr) = gini(&right);
    (nl * gl + nr * gr) / (nl + nr)
}

#[test]
fn separating_dimension_ranks_first() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..20 {
        let n = 40;
        let labels: Vec<usize> = (0..n).map(|i| i % 2).collect();
        let instances: Vec<Vec<f64>> = labels
            .iter()
            .map(|&y| vec![rng.gen_range(0.0..1.0), y as f64 * 2.0 + rng.gen_range(0.0..1.0)])
            .collect();
        let data = Dataset::new(instances, labels, vec!["a".into(), "b".into()]).unwrap();
        let top = select_thresholds(&data, 1).unwrap()[0];
        // Exhaustive oracle over every distinct value of every dimension.
        let mut best = (f64::INFINITY, 0usize);
        for dim in 0..2 {
            for x in data.instances() {
                let s = split_impurity(&data, dim, x[dim]);
                if s < best.0 - 1e-12 {
                    best = (s, dim);
                }
            }
        }
        assert_eq!(best.1, 1);
        assert_eq!(top.dimension, 1);
        assert!((split_impurity(&data, 1, top.value) - best.0).abs() < 1e-12);
    }
}

#[test]
fn ranked_thresholds_are_sorted_by_impurity() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let n = 60;
    let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..3)).collect();
    let instances: Vec<Vec<f64>> = labels
        .iter()
        .map(|&y| vec![(rng.gen_range(0..8) + y) as f64, rng.gen_range(0..5) as f64])
        .collect();
    let data = Dataset::new(instances, labels, vec!["a".into(), "b".into(), "c".into()]).unwrap();
    let specs = select_thresholds(&data, 66).unwrap();
    let scores: Vec<f64> = specs.iter().map(|s| split_impurity(&data, s.dimension, s.value)).collect();
    assert!(scores.windows(2).all(|w| w[0] <= w[1] + 1e-12));
    let mut seen = specs.clone();
    seen.dedup();
    assert_eq!(seen.len(), specs.len());
}

#[test]
fn feature_vectors_follow_block_layout() {
    let fm = FeatureMap::new(2, vec![ThresholdSpec { dimension: 0, value: 2.5 }]);
    assert_eq!(fm.evaluate::<f64>(&[1.0], 0), vec![1.0, 1.0, 0.0, 0.0]);
    assert_eq!(fm.evaluate::<f64>(&[3.0], 1), vec![0.0, 0.0, 1.0, 0.0]);

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let thresholds: Vec<ThresholdSpec> = (0..5)
        .map(|_| ThresholdSpec {
            dimension: rng.gen_range(0..3),
            value: rng.gen_range(-1.0..1.0),
        })
        .collect();
    let fm = FeatureMap::new(3, thresholds);
    for _ in 0..200 {
        let x: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.5..1.5)).collect();
        let phi = fm.instance_matrix::<f64>(&x);
        for y in 0..3 {
            let v = fm.evaluate::<f64>(&x, y);
            assert_eq!(phi.row(y), v.as_slice());
            let s: f64 = v.iter().sum();
            assert!((1.0..=6.0).contains(&s));
            for (l, &c) in v.iter().enumerate() {
                assert!(c == 0.0 || c == 1.0);
                if l / 6 != y {
                    assert_eq!(c, 0.0);
                }
            }
        }
    }
}

#[test]
fn unique_matrices_cover_training_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let k = 3;
    let fm = FeatureMap::new(
        2,
        (0..k)
            .map(|j| ThresholdSpec {
                dimension: j % 2,
                value: 0.0,
            })
            .collect(),
    );
    let xs: Vec<Vec<f64>> = (0..100)
        .map(|_| vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)])
        .collect();
    let uniq = fm.unique_instance_matrices::<f64, _>(xs.iter().map(Vec::as_slice));
    assert!(uniq.len() <= xs.len().min(1 << k));
    for x in &xs {
        assert!(uniq.contains(&fm.instance_matrix(x)));
    }
    // First-occurrence order.
    assert_eq!(uniq[0], fm.instance_matrix(&xs[0]));
}
