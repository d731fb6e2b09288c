use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::corpus::CefrLevel;
use crate::error::{Error, Result};

fn check_lengths<T>(y_true: &[T], y_pred: &[T]) -> Result<()> {
    if y_true.len() != y_pred.len() {
        return Err(Error::Evaluation(format!(
            "{} gold labels but {} predictions",
            y_true.len(),
            y_pred.len()
        )));
    }
    Ok(())
}

/// Support-weighted mean of per-class F1 over the classes present in
/// `y_true`. Precision, recall and F1 are 0 when their denominators are.
pub fn weighted_f1<T: Ord>(y_true: &[T], y_pred: &[T]) -> Result<f64> {
    check_lengths(y_true, y_pred)?;
    if y_true.is_empty() {
        return Err(Error::Evaluation("weighted F1 of zero items".into()));
    }
    // per class: (true positives, support, predicted)
    let mut tally: BTreeMap<&T, (usize, usize, usize)> = BTreeMap::new();
    for (t, p) in y_true.iter().zip(y_pred) {
        tally.entry(t).or_default().1 += 1;
        tally.entry(p).or_default().2 += 1;
        if t == p {
            tally.entry(t).or_default().0 += 1;
        }
    }
    let n = y_true.len() as f64;
    let mut score = 0.0;
    for &(tp, support, predicted) in tally.values() {
        if support == 0 {
            continue;
        }
        let precision = if predicted == 0 {
            0.0
        } else {
            tp as f64 / predicted as f64
        };
        let recall = tp as f64 / support as f64;
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        score += support as f64 / n * f1;
    }
    Ok(score)
}

/// Counts of (true, predicted) pairs over an axis in CEFR order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
pub struct ConfusionMatrix {
    pub labels: Vec<CefrLevel>,
    /// `counts[true][pred]`, indexed like `labels`.
    pub counts: Vec<Vec<usize>>,
}

impl ConfusionMatrix {
    pub fn with_labels(labels: impl IntoIterator<Item = CefrLevel>) -> Self {
        let labels: Vec<CefrLevel> = labels
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let n = labels.len();
        ConfusionMatrix {
            labels,
            counts: vec![vec![0; n]; n],
        }
    }

    fn index(&self, level: CefrLevel) -> Option<usize> {
        self.labels.binary_search(&level).ok()
    }

    pub fn get(&self, truth: CefrLevel, predicted: CefrLevel) -> usize {
        match (self.index(truth), self.index(predicted)) {
            (Some(t), Some(p)) => self.counts[t][p],
            _ => 0,
        }
    }

    pub fn total(&self) -> usize {
        self.counts.iter().flatten().sum()
    }

    /// Widens the axis to include `other`'s labels and adds its counts.
    pub fn merge(&mut self, other: &ConfusionMatrix) {
        let mut merged =
            ConfusionMatrix::with_labels(self.labels.iter().chain(other.labels.iter()).copied());
        for m in [&*self, other] {
            for (ti, &t) in m.labels.iter().enumerate() {
                for (pi, &p) in m.labels.iter().enumerate() {
                    let (a, b) = (merged.index(t).unwrap(), merged.index(p).unwrap());
                    merged.counts[a][b] += m.counts[ti][pi];
                }
            }
        }
        *self = merged;
    }
}

pub fn confusion(y_true: &[CefrLevel], y_pred: &[CefrLevel]) -> Result<ConfusionMatrix> {
    check_lengths(y_true, y_pred)?;
    let mut m = ConfusionMatrix::with_labels(y_true.iter().chain(y_pred).copied());
    for (&t, &p) in y_true.iter().zip(y_pred) {
        let (a, b) = (m.index(t).unwrap(), m.index(p).unwrap());
        m.counts[a][b] += 1;
    }
    Ok(m)
}
