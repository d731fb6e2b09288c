use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::corpus::CefrLevel;
use crate::error::{Error, Result};

/// Test partitions over a fixed, sorted set of document ids. The training
/// side of each fold is the complement of its test set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FoldPlan {
    pub k: usize,
    pub seed: u64,
    pub ids: Vec<String>,
    /// Sorted test ids per fold.
    pub folds: Vec<Vec<String>>,
    /// Classes with fewer members than folds.
    pub rare_classes: Vec<CefrLevel>,
}

impl FoldPlan {
    /// A single train/test split, e.g. train on one language and test on
    /// another.
    pub fn holdout(
        train: impl IntoIterator<Item = String>,
        test: impl IntoIterator<Item = String>,
    ) -> Result<Self> {
        let train: BTreeSet<String> = train.into_iter().collect();
        let test: BTreeSet<String> = test.into_iter().collect();
        if let Some(id) = train.intersection(&test).next() {
            return Err(Error::Evaluation(format!(
                "`{id}` is in both train and test"
            )));
        }
        if train.is_empty() || test.is_empty() {
            return Err(Error::Evaluation(
                "holdout split needs train and test documents".into(),
            ));
        }
        let ids = train.union(&test).cloned().collect();
        Ok(FoldPlan {
            k: 1,
            seed: 0,
            ids,
            folds: vec![test.into_iter().collect()],
            rare_classes: Vec::new(),
        })
    }

    pub fn n_folds(&self) -> usize {
        self.folds.len()
    }

    pub fn test_ids(&self, fold: usize) -> &[String] {
        &self.folds[fold]
    }

    pub fn train_ids(&self, fold: usize) -> Vec<String> {
        let test: BTreeSet<&String> = self.folds[fold].iter().collect();
        self.ids
            .iter()
            .filter(|id| !test.contains(id))
            .cloned()
            .collect()
    }
}

/// Stratified k-fold assignment.
///
/// Within each class (visited in CEFR order) the member ids are shuffled
/// with a seeded ChaCha8 generator and dealt round-robin, continuing from the
/// fold where the previous class stopped. Per-class and total fold sizes
/// therefore differ by at most one.
pub fn stratified_kfold(
    labels: &BTreeMap<String, CefrLevel>,
    k: usize,
    seed: u64,
) -> Result<FoldPlan> {
    if k < 2 {
        return Err(Error::Evaluation(format!("k must be at least 2, got {k}")));
    }
    if k > labels.len() {
        return Err(Error::Evaluation(format!(
            "cannot split {} documents into {k} folds",
            labels.len()
        )));
    }
    let mut by_class: BTreeMap<CefrLevel, Vec<&String>> = BTreeMap::new();
    for (id, &level) in labels {
        by_class.entry(level).or_default().push(id);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds: Vec<Vec<String>> = vec![Vec::new(); k];
    let mut offset = 0;
    let mut rare_classes = Vec::new();
    for (level, mut members) in by_class {
        if members.len() < k {
            rare_classes.push(level);
        }
        members.shuffle(&mut rng);
        for (i, id) in members.iter().enumerate() {
            folds[(offset + i) % k].push((*id).clone());
        }
        offset = (offset + members.len()) % k;
    }
    for fold in &mut folds {
        fold.sort();
    }
    Ok(FoldPlan {
        k,
        seed,
        ids: labels.keys().cloned().collect(),
        folds,
        rare_classes,
    })
}
