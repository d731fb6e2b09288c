//! Softmax-regression models and constant baselines.

mod io;
pub mod logreg;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use io::{load_model, save_model};
pub use logreg::{train_logreg, SoftmaxObjective};

use crate::corpus::CefrLevel;
use crate::error::{Error, Result};
use crate::features::FeatureMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub l2_strength: f64,
    pub max_iterations: usize,
    /// Relative objective change below which optimisation stops.
    pub convergence_tol: f64,
    /// Unused: the solve is convex and starts from zero.
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            l2_strength: 1.0,
            max_iterations: 1000,
            convergence_tol: 1e-6,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = self.l2_strength > 0.0
            && self.l2_strength.is_finite()
            && self.max_iterations > 0
            && self.convergence_tol > 0.0;
        if positive {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "training parameters must be positive: {self:?}"
            )))
        }
    }
}

/// Optimisation record of a trained model.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrainSummary {
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Objective after each accepted step, starting with the initial value.
    pub history: Vec<f64>,
}

/// Class scores `W x + b` followed by a softmax.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    classes: Vec<CefrLevel>,
    width: usize,
    /// Row-major `K × D`.
    weights: Vec<f64>,
    biases: Vec<f64>,
    summary: Option<TrainSummary>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub label: CefrLevel,
    /// Probabilities aligned with [`LinearModel::classes`].
    pub distribution: Vec<f64>,
}

impl LinearModel {
    pub fn new(
        classes: Vec<CefrLevel>,
        width: usize,
        weights: Vec<f64>,
        biases: Vec<f64>,
    ) -> Result<Self> {
        let k = classes.len();
        if k == 0 {
            return Err(Error::Training("a model needs at least one class".into()));
        }
        if classes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Training(
                "classes must be distinct and in CEFR order".into(),
            ));
        }
        if weights.len() != k * width || biases.len() != k {
            return Err(Error::DimensionMismatch {
                expected: k * width + k,
                found: weights.len() + biases.len(),
            });
        }
        if !weights.iter().chain(&biases).all(|v| v.is_finite()) {
            return Err(Error::Training("model parameters must be finite".into()));
        }
        Ok(LinearModel {
            classes,
            width,
            weights,
            biases,
            summary: None,
        })
    }

    pub fn zeros(classes: Vec<CefrLevel>, width: usize) -> Result<Self> {
        let k = classes.len();
        Self::new(classes, width, vec![0.0; k * width], vec![0.0; k])
    }

    pub(crate) fn with_summary(mut self, summary: TrainSummary) -> Self {
        self.summary = Some(summary);
        self
    }

    pub fn classes(&self) -> &[CefrLevel] {
        &self.classes
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn class_weights(&self, class: usize) -> &[f64] {
        &self.weights[class * self.width..(class + 1) * self.width]
    }

    pub fn biases(&self) -> &[f64] {
        &self.biases
    }

    pub fn summary(&self) -> Option<&TrainSummary> {
        self.summary.as_ref()
    }

    /// A single-class model never needed optimisation.
    pub fn is_constant(&self) -> bool {
        self.classes.len() == 1
    }

    pub fn weight_norm(&self) -> f64 {
        self.weights.iter().map(|w| w * w).sum::<f64>().sqrt()
    }

    /// Raw class scores for every row, row-major `n × K`.
    pub fn scores(&self, x: &FeatureMatrix) -> Result<Vec<f64>> {
        if x.width() != self.width {
            return Err(Error::DimensionMismatch {
                expected: self.width,
                found: x.width(),
            });
        }
        let k = self.n_classes();
        let mut out = Vec::with_capacity(x.n_rows() * k);
        for row in x.rows() {
            for c in 0..k {
                out.push(row.dot(self.class_weights(c)) + self.biases[c]);
            }
        }
        Ok(out)
    }

    pub fn predict(&self, x: &FeatureMatrix) -> Result<Vec<Prediction>> {
        let k = self.n_classes();
        let scores = self.scores(x)?;
        Ok(scores
            .chunks(k)
            .map(|s| {
                let distribution = softmax(s);
                Prediction {
                    label: self.classes[argmax(s)],
                    distribution,
                }
            })
            .collect())
    }

    pub fn predict_labels(&self, x: &FeatureMatrix) -> Result<Vec<CefrLevel>> {
        Ok(self.predict(x)?.into_iter().map(|p| p.label).collect())
    }
}

/// Numerically stable softmax.
pub fn softmax(scores: &[f64]) -> Vec<f64> {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
    let total: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / total).collect()
}

/// Index of the largest value; ties go to the lowest index.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Constant predictor of the most frequent label, ties toward the lower level.
pub fn majority_baseline(y: &[CefrLevel], width: usize) -> Result<LinearModel> {
    let mut counts: BTreeMap<CefrLevel, usize> = BTreeMap::new();
    for &label in y {
        *counts.entry(label).or_default() += 1;
    }
    let mut modal: Option<(CefrLevel, usize)> = None;
    for (&level, &n) in &counts {
        if modal.is_none_or(|(_, best)| n > best) {
            modal = Some((level, n));
        }
    }
    let (level, _) = modal
        .ok_or_else(|| Error::Training("majority baseline needs at least one label".into()))?;
    LinearModel::zeros(vec![level], width)
}
