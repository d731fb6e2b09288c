//! Learner-essay corpus: CEFR levels, proficiency dimensions, UD-parsed
//! documents and the on-disk corpus layout.
//!
//! A corpus directory holds a `labels.tsv` table and one CoNLL-U file per
//! essay, grouped by language:
//!
//! ```text
//! corpus/
//!   labels.tsv
//!   de/<docid>.conllu
//!   it/<docid>.conllu
//!   cz/<docid>.conllu
//! ```

mod conllu;
mod labels;
mod stats;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use log::{debug, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use conllu::{parse_conllu, write_conllu, Sentence, Token, ROOT_HEAD, UPOS_TAGS};
pub use labels::{
    clean_labels, load_labels, CleanedLabels, Exclusion, ExclusionReason, RawLabel, RawLabelRecord,
    LABEL_COLUMNS,
};
pub use stats::{corpus_stats, CorpusStats, DimensionStats};

/// CEFR proficiency level, ordered from beginner to advanced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CefrLevel {
    A1,
    A2,
    B1,
    B2,
    C1,
    C2,
}

impl CefrLevel {
    pub const ALL: [CefrLevel; 6] = [
        CefrLevel::A1,
        CefrLevel::A2,
        CefrLevel::B1,
        CefrLevel::B2,
        CefrLevel::C1,
        CefrLevel::C2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CefrLevel::A1 => "A1",
            CefrLevel::A2 => "A2",
            CefrLevel::B1 => "B1",
            CefrLevel::B2 => "B2",
            CefrLevel::C1 => "C1",
            CefrLevel::C2 => "C2",
        }
    }

    /// Position on the scale, A1 = 0.
    pub fn ordinal(self) -> usize {
        self as usize
    }
}

impl fmt::Display for CefrLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CefrLevel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        CefrLevel::ALL
            .iter()
            .copied()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| format!("`{s}` is not a CEFR level"))
    }
}

/// One of the seven rated facets of proficiency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Dimension {
    #[serde(rename = "overall")]
    Overall,
    #[serde(rename = "grammar", alias = "grammatical_accuracy")]
    GrammaticalAccuracy,
    #[serde(rename = "orthography", alias = "orthographic_control")]
    OrthographicControl,
    #[serde(rename = "vocab_range", alias = "vocabulary_range")]
    VocabularyRange,
    #[serde(rename = "vocab_control", alias = "vocabulary_control")]
    VocabularyControl,
    #[serde(rename = "coherence", alias = "coherence_cohesion")]
    CoherenceCohesion,
    #[serde(rename = "sociolinguistic", alias = "sociolinguistic_appropriateness")]
    SociolinguisticAppropriateness,
}

impl Dimension {
    pub const ALL: [Dimension; 7] = [
        Dimension::Overall,
        Dimension::GrammaticalAccuracy,
        Dimension::OrthographicControl,
        Dimension::VocabularyRange,
        Dimension::VocabularyControl,
        Dimension::CoherenceCohesion,
        Dimension::SociolinguisticAppropriateness,
    ];

    /// Short name, as used in the label table header and in reports.
    pub fn as_str(self) -> &'static str {
        match self {
            Dimension::Overall => "overall",
            Dimension::GrammaticalAccuracy => "grammar",
            Dimension::OrthographicControl => "orthography",
            Dimension::VocabularyRange => "vocab_range",
            Dimension::VocabularyControl => "vocab_control",
            Dimension::CoherenceCohesion => "coherence",
            Dimension::SociolinguisticAppropriateness => "sociolinguistic",
        }
    }

    pub fn long_name(self) -> &'static str {
        match self {
            Dimension::Overall => "overall",
            Dimension::GrammaticalAccuracy => "grammatical_accuracy",
            Dimension::OrthographicControl => "orthographic_control",
            Dimension::VocabularyRange => "vocabulary_range",
            Dimension::VocabularyControl => "vocabulary_control",
            Dimension::CoherenceCohesion => "coherence_cohesion",
            Dimension::SociolinguisticAppropriateness => "sociolinguistic_appropriateness",
        }
    }

    /// Whether the dimension is ever usable for documents in `language`.
    pub fn available_for(self, language: Language) -> bool {
        !(language == Language::Cz && self == Dimension::SociolinguisticAppropriateness)
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Dimension {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Dimension::ALL
            .iter()
            .copied()
            .find(|d| d.as_str() == s || d.long_name() == s)
            .ok_or_else(|| format!("unknown dimension `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    De,
    It,
    Cz,
}

impl Language {
    pub const ALL: [Language; 3] = [Language::De, Language::It, Language::Cz];

    pub fn code(self) -> &'static str {
        match self {
            Language::De => "de",
            Language::It => "it",
            Language::Cz => "cz",
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Language {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Language::ALL
            .iter()
            .copied()
            .find(|l| l.code() == s)
            .ok_or_else(|| format!("unknown language code `{s}`"))
    }
}

/// A single learner essay with its parse and cleaned labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub id: String,
    pub language: Language,
    pub sentences: Vec<Sentence>,
    pub labels: BTreeMap<Dimension, CefrLevel>,
}

impl Document {
    pub fn label(&self, dimension: Dimension) -> Option<CefrLevel> {
        self.labels.get(&dimension).copied()
    }

    pub fn tokens(&self) -> impl Iterator<Item = &Token> {
        self.sentences.iter().flatten()
    }
}

/// An ingested corpus. Documents are sorted by id and immutable after load.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub documents: Vec<Document>,
    pub exclusions: Vec<Exclusion>,
}

impl Corpus {
    /// Loads a corpus directory laid out as described in the module docs.
    ///
    /// A directory with neither a label table nor any CoNLL-U file yields an
    /// empty corpus. Any inconsistency between the label table and the
    /// CoNLL-U files aborts ingestion.
    pub fn load(root: impl AsRef<Path>) -> Result<Corpus> {
        let root = root.as_ref();
        let files = collect_conllu_files(root)?;
        let labels_path = root.join("labels.tsv");
        if !labels_path.exists() {
            if files.is_empty() {
                warn!("corpus directory {} is empty", root.display());
                return Ok(Corpus::default());
            }
            return Err(Error::Corpus(format!(
                "{} is missing while {} CoNLL-U files are present",
                labels_path.display(),
                files.len()
            )));
        }
        let text = fs::read_to_string(&labels_path).map_err(|e| Error::io(&labels_path, e))?;
        let records = load_labels(text.as_bytes())?;

        let parsed: Vec<(Language, String, Vec<Sentence>)> = files
            .par_iter()
            .map(|(lang, id, path)| {
                let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
                let sentences = parse_conllu(&bytes[..]).map_err(|e| match e {
                    Error::Conllu { line, message } => Error::Conllu {
                        line,
                        message: format!("{}: {message}", path.display()),
                    },
                    other => other,
                })?;
                if sentences.is_empty() {
                    return Err(Error::Corpus(format!(
                        "{} has no sentences",
                        path.display()
                    )));
                }
                Ok((*lang, id.clone(), sentences))
            })
            .collect::<Result<_>>()?;

        Corpus::assemble(records, parsed)
    }

    /// Joins label records with parsed documents and applies label cleaning.
    pub fn assemble(
        records: Vec<RawLabelRecord>,
        parsed: Vec<(Language, String, Vec<Sentence>)>,
    ) -> Result<Corpus> {
        let mut by_id: BTreeMap<String, (Language, Vec<Sentence>)> = BTreeMap::new();
        for (lang, id, sentences) in parsed {
            if by_id.insert(id.clone(), (lang, sentences)).is_some() {
                return Err(Error::Corpus(format!(
                    "document `{id}` appears more than once"
                )));
            }
        }
        let record_ids: BTreeSet<&str> = records.iter().map(|r| r.doc_id.as_str()).collect();
        if let Some(id) = by_id.keys().find(|id| !record_ids.contains(id.as_str())) {
            return Err(Error::Corpus(format!(
                "document `{id}` has no row in labels.tsv"
            )));
        }

        let cleaned = clean_labels(&records);
        let mut documents = Vec::with_capacity(records.len());
        for record in &records {
            let (lang, sentences) = by_id.remove(&record.doc_id).ok_or_else(|| {
                Error::Corpus(format!(
                    "labels.tsv row `{}` has no CoNLL-U file",
                    record.doc_id
                ))
            })?;
            if lang != record.language {
                return Err(Error::Corpus(format!(
                    "document `{}` is listed as {} but stored under {}/",
                    record.doc_id, record.language, lang
                )));
            }
            documents.push(Document {
                id: record.doc_id.clone(),
                language: lang,
                sentences,
                labels: cleaned
                    .labels
                    .get(&record.doc_id)
                    .cloned()
                    .unwrap_or_default(),
            });
        }
        documents.sort_by(|a, b| a.id.cmp(&b.id));
        debug!("assembled corpus of {} documents", documents.len());
        Ok(Corpus {
            documents,
            exclusions: cleaned.exclusions,
        })
    }

    pub fn by_language(&self, language: Language) -> impl Iterator<Item = &Document> {
        self.documents
            .iter()
            .filter(move |d| d.language == language)
    }

    pub fn stats(&self) -> CorpusStats {
        corpus_stats(&self.documents, &self.exclusions)
    }
}

fn collect_conllu_files(root: &Path) -> Result<Vec<(Language, String, PathBuf)>> {
    let mut files = Vec::new();
    for lang in Language::ALL {
        let dir = root.join(lang.code());
        if !dir.is_dir() {
            continue;
        }
        let entries = fs::read_dir(&dir).map_err(|e| Error::io(&dir, e))?;
        for entry in entries {
            let path = entry.map_err(|e| Error::io(&dir, e))?.path();
            if path.extension().and_then(|e| e.to_str()) != Some("conllu") {
                continue;
            }
            let id = path
                .file_stem()
                .and_then(|s| s.to_str())
                .ok_or_else(|| Error::Corpus(format!("bad file name {}", path.display())))?
                .to_string();
            files.push((lang, id, path));
        }
    }
    files.sort_by(|a, b| a.1.cmp(&b.1));
    Ok(files)
}
