mod common;

use cefrscore::classifier::{train_logreg, SoftmaxObjective, TrainConfig};
use cefrscore::corpus::CefrLevel;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::oracles::{dense, gradient_error, to_sparse};

#[test]
fn gradient_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..50 {
        let n = rng.gen_range(2..10);
        let d = rng.gen_range(1..5);
        let k = rng.gen_range(2..5);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                (0..d)
                    .map(|_| {
                        if rng.gen_bool(0.3) {
                            0.0
                        } else {
                            rng.gen_range(-3.0..3.0)
                        }
                    })
                    .collect()
            })
            .collect();
        let targets: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
        let l2 = rng.gen_range(0.01..2.0);
        let x = if trial % 2 == 0 {
            dense(&rows)
        } else {
            to_sparse(&rows)
        };
        let obj = SoftmaxObjective::new(&x, targets, k, l2);
        let theta: Vec<f64> = (0..obj.n_params())
            .map(|_| rng.gen_range(-1.0..1.0))
            .collect();
        let err = gradient_error(&obj, &theta);
        assert!(err < 1e-4, "trial {trial}: relative gradient error {err}");
    }
}

#[test]
fn separable_toy_set_is_fit_exactly() {
    let rows = vec![
        vec![0.0, 0.0],
        vec![1.0, 0.0],
        vec![0.0, 3.0],
        vec![1.0, 3.0],
    ];
    let y = [CefrLevel::A2, CefrLevel::A2, CefrLevel::B1, CefrLevel::B1];

    // Independent check that the set is linearly separable: scan a grid of lines.
    let mut separable = false;
    'search: for wi in -4..=4 {
        for wj in -4..=4 {
            for bi in -12..=12 {
                let (w1, w2, b) = (wi as f64, wj as f64, bi as f64 * 0.5);
                let ok = rows.iter().zip(&y).all(|(r, l)| {
                    let s = w1 * r[0] + w2 * r[1] + b;
                    (s > 0.0) == (*l == CefrLevel::B1)
                });
                if ok {
                    separable = true;
                    break 'search;
                }
            }
        }
    }
    assert!(separable);

    let model = train_logreg(&dense(&rows), &y, &TrainConfig::default()).unwrap();
    let pred = model.predict_labels(&dense(&rows)).unwrap();
    assert_eq!(pred, y.to_vec());
}

#[test]
fn objective_never_increases() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let n = rng.gen_range(10..40);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..6).map(|_| rng.gen_range(0..5) as f64).collect())
            .collect();
        let y: Vec<CefrLevel> = (0..n)
            .map(|_| CefrLevel::ALL[rng.gen_range(0..4)])
            .collect();
        let cfg = TrainConfig {
            l2_strength: rng.gen_range(0.001..1.0),
            ..Default::default()
        };
        let model = train_logreg(&to_sparse(&rows), &y, &cfg).unwrap();
        if let Some(summary) = model.summary() {
            for w in summary.history.windows(2) {
                assert!(w[1] <= w[0], "objective rose from {} to {}", w[0], w[1]);
            }
        }
    }
}

#[test]
fn huge_penalty_shrinks_weights() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let rows: Vec<Vec<f64>> = (0..30)
        .map(|_| (0..5).map(|_| rng.gen_range(-10.0..10.0)).collect())
        .collect();
    let y: Vec<CefrLevel> = (0..30).map(|i| CefrLevel::ALL[i % 3]).collect();
    let cfg = TrainConfig {
        l2_strength: 1e6,
        ..Default::default()
    };
    let model = train_logreg(&dense(&rows), &y, &cfg).unwrap();
    assert!(model.weight_norm() <= 1e-3, "norm {}", model.weight_norm());
}

#[test]
fn training_is_bitwise_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let rows: Vec<Vec<f64>> = (0..50)
        .map(|_| (0..8).map(|_| rng.gen_range(0..3) as f64).collect())
        .collect();
    let y: Vec<CefrLevel> = (0..50)
        .map(|_| CefrLevel::ALL[rng.gen_range(1..4)])
        .collect();
    let x = to_sparse(&rows);
    let a = train_logreg(&x, &y, &TrainConfig::default()).unwrap();
    let b = train_logreg(
        &x,
        &y,
        &TrainConfig {
            seed: 999,
            ..Default::default()
        },
    )
    .unwrap();
    let bits = |m: &cefrscore::classifier::LinearModel| -> Vec<u64> {
        m.weights()
            .iter()
            .chain(m.biases())
            .map(|v| v.to_bits())
            .collect()
    };
    assert_eq!(bits(&a), bits(&b));
}

#[test]
fn predictions_stay_within_training_classes() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let rows: Vec<Vec<f64>> = (0..40)
        .map(|_| (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    let y: Vec<CefrLevel> = (0..40)
        .map(|i| {
            if i % 2 == 0 {
                CefrLevel::A2
            } else {
                CefrLevel::B2
            }
        })
        .collect();
    let model = train_logreg(&dense(&rows), &y, &TrainConfig::default()).unwrap();
    let probe: Vec<Vec<f64>> = (0..200)
        .map(|_| (0..3).map(|_| rng.gen_range(-100.0..100.0)).collect())
        .collect();
    for label in model.predict_labels(&dense(&probe)).unwrap() {
        assert!(label == CefrLevel::A2 || label == CefrLevel::B2);
    }
}
