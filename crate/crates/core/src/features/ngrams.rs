//! Unit sequences and n-gram counting.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::corpus::{Document, ROOT_HEAD};
use crate::error::{Error, Result};

/// Joins the units of an n-gram. Absent from UD tags and relation labels.
pub const NGRAM_JOINER: char = '\u{241F}';
const JOINER_ESCAPE: &str = "\\u241F";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NGramUnit {
    Word,
    Upos,
    DepTriplet,
}

impl fmt::Display for NGramUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NGramUnit::Word => "word",
            NGramUnit::Upos => "upos",
            NGramUnit::DepTriplet => "dep_triplet",
        })
    }
}

pub const MAX_ORDER: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NGramSpec {
    pub unit: NGramUnit,
    pub n_min: usize,
    pub n_max: usize,
}

impl NGramSpec {
    pub fn new(unit: NGramUnit, n_min: usize, n_max: usize) -> Result<Self> {
        if n_min < 1 || n_min > n_max || n_max > MAX_ORDER {
            return Err(Error::Features(format!(
                "n-gram orders must satisfy 1 <= n_min <= n_max <= {MAX_ORDER}, got {n_min}..{n_max}"
            )));
        }
        Ok(NGramSpec { unit, n_min, n_max })
    }

    /// Orders 1 through 5.
    pub fn full(unit: NGramUnit) -> Self {
        NGramSpec {
            unit,
            n_min: 1,
            n_max: MAX_ORDER,
        }
    }

    pub fn validate(&self) -> Result<()> {
        Self::new(self.unit, self.n_min, self.n_max).map(|_| ())
    }
}

/// Number of syntactic words in the document.
pub fn doc_length(doc: &Document) -> usize {
    doc.sentences.iter().map(Vec::len).sum()
}

/// Per-sentence unit strings for `doc`.
///
/// Dependency triplets are rendered `headUPOS|depUPOS|deprel`, with `ROOT`
/// standing in for the head of the root token.
pub fn token_sequence(doc: &Document, unit: NGramUnit) -> Vec<Vec<String>> {
    doc.sentences
        .iter()
        .map(|sentence| {
            sentence
                .iter()
                .map(|tok| match unit {
                    NGramUnit::Word => tok.form.replace(NGRAM_JOINER, JOINER_ESCAPE),
                    NGramUnit::Upos => tok.upos.clone(),
                    NGramUnit::DepTriplet => {
                        let head = if tok.head == ROOT_HEAD {
                            "ROOT"
                        } else {
                            sentence[tok.head - 1].upos.as_str()
                        };
                        format!("{head}|{}|{}", tok.upos, tok.deprel)
                    }
                })
                .collect()
        })
        .collect()
}

/// Counts every contiguous window of each order in `spec`, per sentence.
pub fn extract_ngrams(sentences: &[Vec<String>], spec: &NGramSpec) -> HashMap<String, u32> {
    let mut counts = HashMap::new();
    let mut key = String::new();
    for units in sentences {
        for n in spec.n_min..=spec.n_max {
            if n > units.len() {
                break;
            }
            for window in units.windows(n) {
                key.clear();
                for (i, u) in window.iter().enumerate() {
                    if i > 0 {
                        key.push(NGRAM_JOINER);
                    }
                    key.push_str(u);
                }
                match counts.get_mut(key.as_str()) {
                    Some(c) => *c += 1,
                    None => {
                        counts.insert(key.clone(), 1);
                    }
                }
            }
        }
    }
    counts
}

/// N-gram counts of a whole document.
pub fn document_ngrams(doc: &Document, spec: &NGramSpec) -> HashMap<String, u32> {
    extract_ngrams(&token_sequence(doc, spec.unit), spec)
}
