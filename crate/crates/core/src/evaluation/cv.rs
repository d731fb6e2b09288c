use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use log::debug;
use serde::{Deserialize, Serialize};

use super::folds::{stratified_kfold, FoldPlan};
use super::report::{EvaluationReport, FoldResult};
use crate::classifier::{majority_baseline, train_logreg, LinearModel, TrainConfig};
use crate::corpus::{CefrLevel, Dimension, Document};
use crate::error::{Error, Result};
use crate::features::{document_ngrams, FeaturePipeline, Vocabulary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassifierKind {
    Logreg,
    Majority,
}

impl ClassifierKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ClassifierKind::Logreg => "logreg",
            ClassifierKind::Majority => "majority",
        }
    }
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// What one fold of an evaluation saw and produced.
#[derive(Debug, Clone)]
pub struct FoldArtifact {
    pub train_ids: Vec<String>,
    pub vocabulary: Option<Vocabulary>,
    pub result: FoldResult,
}

#[derive(Debug, Clone)]
pub struct CvOutcome {
    pub plan: FoldPlan,
    pub report: EvaluationReport,
    pub folds: Vec<FoldArtifact>,
}

fn pipeline_name(pipeline: &FeaturePipeline) -> String {
    match pipeline {
        FeaturePipeline::DocLength => "doclen".into(),
        FeaturePipeline::NGrams(spec) => format!("{}_ngrams", spec.unit),
        FeaturePipeline::Dense(table) => format!("dense{}", table.dim()),
    }
}

/// Gold labels of `docs` for `dimension`; every document must have one.
pub fn dimension_labels(
    docs: &[&Document],
    dimension: Dimension,
) -> Result<BTreeMap<String, CefrLevel>> {
    docs.iter()
        .map(|d| {
            d.label(dimension)
                .map(|l| (d.id.clone(), l))
                .ok_or_else(|| {
                    Error::Evaluation(format!("document `{}` has no {dimension} label", d.id))
                })
        })
        .collect()
}

/// Stratified k-fold cross-validation of one (dimension, features,
/// classifier) cell.
pub fn cross_validate(
    docs: &[&Document],
    dimension: Dimension,
    pipeline: &FeaturePipeline,
    classifier: ClassifierKind,
    cfg: &TrainConfig,
    k: usize,
    seed: u64,
) -> Result<CvOutcome> {
    let labels = dimension_labels(docs, dimension)?;
    let plan = stratified_kfold(&labels, k, seed)?;
    evaluate_plan(docs, dimension, pipeline, classifier, cfg, &plan)
}

/// Trains and scores every fold of `plan`. Features are fitted on each
/// fold's training documents only.
pub fn evaluate_plan(
    docs: &[&Document],
    dimension: Dimension,
    pipeline: &FeaturePipeline,
    classifier: ClassifierKind,
    cfg: &TrainConfig,
    plan: &FoldPlan,
) -> Result<CvOutcome> {
    let labels = dimension_labels(docs, dimension)?;
    let by_id: HashMap<&str, &Document> = docs.iter().map(|d| (d.id.as_str(), *d)).collect();
    let lookup = |ids: &[String]| -> Result<Vec<&Document>> {
        ids.iter()
            .map(|id| {
                by_id.get(id.as_str()).copied().ok_or_else(|| {
                    Error::Evaluation(format!("fold plan names unknown document `{id}`"))
                })
            })
            .collect()
    };

    let mut artifacts = Vec::with_capacity(plan.n_folds());
    for fold in 0..plan.n_folds() {
        let train_ids = plan.train_ids(fold);
        let train = lookup(&train_ids)?;
        let test = lookup(plan.test_ids(fold))?;
        let y_train: Vec<CefrLevel> = train.iter().map(|d| labels[&d.id]).collect();

        let fitted = pipeline.fit(&train)?;
        if cfg!(debug_assertions) {
            if let Some(vocab) = fitted.vocabulary() {
                debug_assert!(vocabulary_leaks(vocab, &train).is_empty());
            }
        }
        let x_train = fitted.transform(&train)?;
        let x_test = fitted.transform(&test)?;
        let model: LinearModel = match classifier {
            ClassifierKind::Logreg => train_logreg(&x_train, &y_train, cfg)?,
            ClassifierKind::Majority => majority_baseline(&y_train, x_train.width())?,
        };
        let predicted = model.predict_labels(&x_test)?;
        debug!(
            "{dimension} fold {fold}: {} train, {} test, width {}",
            train.len(),
            test.len(),
            x_train.width()
        );
        let degenerate = classifier == ClassifierKind::Logreg && model.is_constant();
        artifacts.push(FoldArtifact {
            train_ids,
            vocabulary: fitted.vocabulary().cloned(),
            result: FoldResult {
                fold,
                ids: test.iter().map(|d| d.id.clone()).collect(),
                languages: test.iter().map(|d| d.language).collect(),
                gold: test.iter().map(|d| labels[&d.id]).collect(),
                predicted,
                degenerate,
            },
        });
    }

    let results: Vec<FoldResult> = artifacts.iter().map(|a| a.result.clone()).collect();
    let mut report = EvaluationReport::from_folds(
        dimension,
        pipeline_name(pipeline),
        classifier.as_str(),
        &results,
    )?;
    if !plan.rare_classes.is_empty() {
        let names: Vec<&str> = plan.rare_classes.iter().map(|c| c.as_str()).collect();
        report.flags.push(format!(
            "classes with fewer than {} documents: {}",
            plan.k,
            names.join(", ")
        ));
    }
    Ok(CvOutcome {
        plan: plan.clone(),
        report,
        folds: artifacts,
    })
}

/// Vocabulary terms that occur in none of `train`.
pub fn vocabulary_leaks(vocab: &Vocabulary, train: &[&Document]) -> Vec<String> {
    let mut seen: HashSet<String> = HashSet::new();
    for doc in train {
        seen.extend(document_ngrams(doc, vocab.spec()).into_keys());
    }
    vocab
        .terms()
        .iter()
        .filter(|t| !seen.contains(*t))
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Language, Token};
    use CefrLevel::*;

    fn doc(id: &str, len: usize, level: CefrLevel) -> Document {
        Document {
            id: id.into(),
            language: Language::It,
            sentences: vec![vec![
                Token {
                    form: "w".into(),
                    upos: "NOUN".into(),
                    head: 0,
                    deprel: "root".into(),
                };
                len
            ]],
            labels: [(Dimension::Overall, level)].into_iter().collect(),
        }
    }

    #[test]
    fn unlabelled_document_is_rejected() {
        let mut d = doc("a", 3, A2);
        d.labels.clear();
        let e = doc("b", 3, A2);
        let r = cross_validate(
            &[&d, &e],
            Dimension::Overall,
            &FeaturePipeline::DocLength,
            ClassifierKind::Logreg,
            &TrainConfig::default(),
            2,
            0,
        );
        assert!(matches!(r, Err(Error::Evaluation(_))));
    }

    #[test]
    fn single_class_fold_is_flagged() {
        // B1 has one member, so the fold holding it trains on A2 only.
        let docs: Vec<Document> = (0..4)
            .map(|i| doc(&format!("a{i}"), 5 + i, A2))
            .chain(std::iter::once(doc("b0", 40, B1)))
            .collect();
        let refs: Vec<&Document> = docs.iter().collect();
        let out = cross_validate(
            &refs,
            Dimension::Overall,
            &FeaturePipeline::DocLength,
            ClassifierKind::Logreg,
            &TrainConfig::default(),
            5,
            3,
        )
        .unwrap();
        let degenerate = out.folds.iter().filter(|f| f.result.degenerate).count();
        assert_eq!(degenerate, 1);
        assert!(out.report.flags.iter().any(|f| f.contains("single-class")));
        assert!(out.report.flags.iter().any(|f| f.contains("B1")));
    }
}
