//! Document featurisation.
//!
//! Each [`FeatureSet`] is an independent representation: the document
//! length baseline, n-grams of orders 1 to 5 over one unit type, or a dense
//! embedding read from a vectors file.

mod dense;
mod matrix;
mod ngrams;
mod vocab;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use dense::{load_dense_vectors, DenseVectorTable, LASER_DIM, MBERT_DIM};
pub use matrix::{FeatureData, FeatureMatrix, Row, SparseRows};
pub use ngrams::{
    doc_length, document_ngrams, extract_ngrams, token_sequence, NGramSpec, NGramUnit, MAX_ORDER,
    NGRAM_JOINER,
};
pub use vocab::{build_vocabulary, vectorize, Vocabulary};

use crate::corpus::Document;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureSet {
    #[serde(rename = "doclen")]
    DocLength,
    WordNgrams,
    UposNgrams,
    DepNgrams,
    Laser,
    Mbert,
    /// Predictions produced outside this crate (fine-tuned encoder).
    ExternalPredictions,
}

impl FeatureSet {
    pub fn as_str(self) -> &'static str {
        match self {
            FeatureSet::DocLength => "doclen",
            FeatureSet::WordNgrams => "word_ngrams",
            FeatureSet::UposNgrams => "upos_ngrams",
            FeatureSet::DepNgrams => "dep_ngrams",
            FeatureSet::Laser => "laser",
            FeatureSet::Mbert => "mbert",
            FeatureSet::ExternalPredictions => "external_predictions",
        }
    }

    pub fn ngram_unit(self) -> Option<NGramUnit> {
        match self {
            FeatureSet::WordNgrams => Some(NGramUnit::Word),
            FeatureSet::UposNgrams => Some(NGramUnit::Upos),
            FeatureSet::DepNgrams => Some(NGramUnit::DepTriplet),
            _ => None,
        }
    }

    pub fn dense_dim(self) -> Option<usize> {
        match self {
            FeatureSet::Laser => Some(LASER_DIM),
            FeatureSet::Mbert => Some(MBERT_DIM),
            _ => None,
        }
    }
}

impl fmt::Display for FeatureSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How to featurise documents; fitted on a training partition.
#[derive(Debug, Clone)]
pub enum FeaturePipeline {
    DocLength,
    NGrams(NGramSpec),
    Dense(Arc<DenseVectorTable>),
}

/// A pipeline after seeing its training documents.
#[derive(Debug, Clone)]
pub enum FittedPipeline {
    DocLength,
    NGrams(Vocabulary),
    Dense(Arc<DenseVectorTable>),
}

impl FeaturePipeline {
    pub fn fit(&self, train: &[&Document]) -> Result<FittedPipeline> {
        Ok(match self {
            FeaturePipeline::DocLength => FittedPipeline::DocLength,
            FeaturePipeline::NGrams(spec) => FittedPipeline::NGrams(build_vocabulary(train, spec)?),
            FeaturePipeline::Dense(table) => FittedPipeline::Dense(Arc::clone(table)),
        })
    }
}

impl FittedPipeline {
    pub fn transform(&self, docs: &[&Document]) -> Result<FeatureMatrix> {
        match self {
            FittedPipeline::DocLength => FeatureMatrix::dense(
                docs.iter().map(|d| d.id.clone()).collect(),
                1,
                docs.iter().map(|d| doc_length(d) as f64).collect(),
            ),
            FittedPipeline::NGrams(vocab) => Ok(vectorize(docs, vocab)),
            FittedPipeline::Dense(table) => table.matrix(docs),
        }
    }

    pub fn vocabulary(&self) -> Option<&Vocabulary> {
        match self {
            FittedPipeline::NGrams(v) => Some(v),
            _ => None,
        }
    }
}
