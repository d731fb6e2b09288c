//! Reference implementations that the library is checked against.

use std::collections::HashSet;
use std::hash::Hash;

use cefrscore::classifier::SoftmaxObjective;
use cefrscore::corpus::Document;
use cefrscore::features::{
    token_sequence, FeatureData, FeatureMatrix, NGramUnit, SparseRows, NGRAM_JOINER,
};

pub fn dense(rows: &[Vec<f64>]) -> FeatureMatrix {
    FeatureMatrix::from_rows((0..rows.len()).map(|i| i.to_string()).collect(), rows).unwrap()
}

pub fn to_sparse(rows: &[Vec<f64>]) -> FeatureMatrix {
    let mut indptr = vec![0];
    let (mut indices, mut values) = (vec![], vec![]);
    for r in rows {
        for (j, &v) in r.iter().enumerate() {
            if v != 0.0 {
                indices.push(j as u32);
                values.push(v);
            }
        }
        indptr.push(indices.len());
    }
    FeatureMatrix {
        row_ids: (0..rows.len()).map(|i| i.to_string()).collect(),
        data: FeatureData::Sparse(SparseRows {
            width: rows[0].len(),
            indptr,
            indices,
            values,
        }),
    }
}

/// Relative error of the analytic gradient against central differences.
pub fn gradient_error(obj: &SoftmaxObjective<'_>, theta: &[f64]) -> f64 {
    let mut analytic = vec![0.0; theta.len()];
    obj.value_and_gradient(theta, &mut analytic);
    let h = 1e-6;
    let mut numeric = vec![0.0; theta.len()];
    let mut probe = theta.to_vec();
    for i in 0..theta.len() {
        probe[i] = theta[i] + h;
        let up = obj.value(&probe);
        probe[i] = theta[i] - h;
        let down = obj.value(&probe);
        probe[i] = theta[i];
        numeric[i] = (up - down) / (2.0 * h);
    }
    let diff: f64 = analytic
        .iter()
        .zip(&numeric)
        .map(|(a, n)| (a - n).powi(2))
        .sum::<f64>()
        .sqrt();
    let scale = numeric.iter().map(|n| n * n).sum::<f64>().sqrt().max(1e-8);
    diff / scale
}

/// Reference weighted F1 via F1 = 2TP / (2TP + FP + FN).
pub fn reference_weighted_f1<T: Copy + Eq + Hash>(y_true: &[T], y_pred: &[T]) -> f64 {
    let classes: HashSet<T> = y_true.iter().copied().collect();
    let n = y_true.len() as f64;
    let mut total = 0.0;
    for c in classes {
        let mut tp = 0.0;
        let mut fp = 0.0;
        let mut fn_ = 0.0;
        for (&t, &p) in y_true.iter().zip(y_pred) {
            match (t == c, p == c) {
                (true, true) => tp += 1.0,
                (false, true) => fp += 1.0,
                (true, false) => fn_ += 1.0,
                _ => {}
            }
        }
        let support = tp + fn_;
        let f1 = if tp == 0.0 {
            0.0
        } else {
            2.0 * tp / (2.0 * tp + fp + fn_)
        };
        total += support / n * f1;
    }
    total
}

/// Every within-sentence n-gram of orders 1 to 5.
pub fn ngram_windows(doc: &Document, unit: NGramUnit) -> HashSet<String> {
    let mut out = HashSet::new();
    for sentence in token_sequence(doc, unit) {
        for n in 1..=5 {
            for start in 0..sentence.len() {
                if start + n <= sentence.len() {
                    out.insert(sentence[start..start + n].join(&NGRAM_JOINER.to_string()));
                }
            }
        }
    }
    out
}
