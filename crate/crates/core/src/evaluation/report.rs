use std::collections::BTreeMap;

use serde::Serialize;

use super::metrics::{confusion, weighted_f1, ConfusionMatrix};
use crate::corpus::{CefrLevel, Dimension, Language};
use crate::error::Result;

/// Gold and predicted labels for the test side of one fold.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldResult {
    pub fold: usize,
    pub ids: Vec<String>,
    pub languages: Vec<Language>,
    pub gold: Vec<CefrLevel>,
    pub predicted: Vec<CefrLevel>,
    /// Trained on a single class.
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LanguageScores {
    pub fold_scores: Vec<f64>,
    pub mean: f64,
    pub documents: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationReport {
    pub scenario: String,
    pub languages: Vec<Language>,
    pub dimension: Dimension,
    pub feature_set: String,
    pub classifier: String,
    /// Fold numbers, aligned with `fold_scores`.
    pub folds: Vec<usize>,
    pub fold_scores: Vec<f64>,
    pub mean: f64,
    /// Population standard deviation of the fold scores.
    pub std: f64,
    /// Sum of the per-fold confusion matrices.
    pub confusion: ConfusionMatrix,
    /// Present when the test documents span more than one language.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub per_language: BTreeMap<Language, LanguageScores>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
}

pub(crate) fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

impl EvaluationReport {
    pub fn from_folds(
        dimension: Dimension,
        feature_set: impl Into<String>,
        classifier: impl Into<String>,
        folds: &[FoldResult],
    ) -> Result<Self> {
        let mut fold_scores = Vec::with_capacity(folds.len());
        let mut pooled = ConfusionMatrix::default();
        let mut flags = Vec::new();
        let mut languages: Vec<Language> = folds
            .iter()
            .flat_map(|f| f.languages.iter().copied())
            .collect();
        languages.sort();
        languages.dedup();

        let mut per_language_folds: BTreeMap<Language, (Vec<f64>, usize)> = BTreeMap::new();
        for fold in folds {
            fold_scores.push(weighted_f1(&fold.gold, &fold.predicted)?);
            pooled.merge(&confusion(&fold.gold, &fold.predicted)?);
            if fold.degenerate {
                flags.push(format!(
                    "fold {}: single-class training partition, constant model",
                    fold.fold
                ));
            }
            if languages.len() > 1 {
                for &lang in &languages {
                    let (gold, pred): (Vec<CefrLevel>, Vec<CefrLevel>) = fold
                        .languages
                        .iter()
                        .zip(fold.gold.iter().zip(&fold.predicted))
                        .filter(|(l, _)| **l == lang)
                        .map(|(_, (g, p))| (*g, *p))
                        .unzip();
                    if gold.is_empty() {
                        continue;
                    }
                    let entry = per_language_folds.entry(lang).or_default();
                    entry.0.push(weighted_f1(&gold, &pred)?);
                    entry.1 += gold.len();
                }
            }
        }
        let (mean, std) = mean_std(&fold_scores);
        let per_language = per_language_folds
            .into_iter()
            .map(|(lang, (scores, documents))| {
                let (mean, _) = mean_std(&scores);
                (
                    lang,
                    LanguageScores {
                        fold_scores: scores,
                        mean,
                        documents,
                    },
                )
            })
            .collect();
        Ok(EvaluationReport {
            scenario: String::new(),
            languages,
            dimension,
            feature_set: feature_set.into(),
            classifier: classifier.into(),
            folds: folds.iter().map(|f| f.fold).collect(),
            fold_scores,
            mean,
            std,
            confusion: pooled,
            per_language,
            flags,
        })
    }

    pub fn with_scenario(mut self, scenario: impl Into<String>) -> Self {
        self.scenario = scenario.into();
        self
    }
}
