use std::collections::{BTreeSet, HashMap};

use super::matrix::{FeatureData, FeatureMatrix, SparseRows};
use super::ngrams::{document_ngrams, NGramSpec};
use crate::corpus::Document;
use crate::error::{Error, Result};

/// N-gram column index, ordered lexicographically.
#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    spec: NGramSpec,
    terms: Vec<String>,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    pub fn from_terms(spec: NGramSpec, terms: impl IntoIterator<Item = String>) -> Self {
        let terms: Vec<String> = terms
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let index = terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        Vocabulary { spec, terms, index }
    }

    pub fn spec(&self) -> &NGramSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn contains(&self, term: &str) -> bool {
        self.index.contains_key(term)
    }

    /// Terms in column order.
    pub fn terms(&self) -> &[String] {
        &self.terms
    }
}

/// Collects every n-gram occurring in the training documents.
pub fn build_vocabulary(train: &[&Document], spec: &NGramSpec) -> Result<Vocabulary> {
    spec.validate()?;
    if train.is_empty() {
        return Err(Error::Features(
            "cannot build a vocabulary from no documents".into(),
        ));
    }
    let mut terms = BTreeSet::new();
    for doc in train {
        terms.extend(document_ngrams(doc, spec).into_keys());
    }
    if terms.is_empty() {
        return Err(Error::Features(
            "training documents contain no n-grams".into(),
        ));
    }
    Ok(Vocabulary::from_terms(*spec, terms))
}

/// Count matrix over `vocab`; n-grams outside the vocabulary are dropped.
pub fn vectorize(docs: &[&Document], vocab: &Vocabulary) -> FeatureMatrix {
    let mut indptr = Vec::with_capacity(docs.len() + 1);
    let mut indices = Vec::new();
    let mut values = Vec::new();
    indptr.push(0);
    for doc in docs {
        let mut row: Vec<(u32, f64)> = document_ngrams(doc, vocab.spec())
            .into_iter()
            .filter_map(|(term, c)| vocab.get(&term).map(|j| (j as u32, f64::from(c))))
            .collect();
        row.sort_unstable_by_key(|&(j, _)| j);
        for (j, v) in row {
            indices.push(j);
            values.push(v);
        }
        indptr.push(indices.len());
    }
    FeatureMatrix {
        row_ids: docs.iter().map(|d| d.id.clone()).collect(),
        data: FeatureData::Sparse(SparseRows {
            width: vocab.len(),
            indptr,
            indices,
            values,
        }),
    }
}
