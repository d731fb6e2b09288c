//! Label table ingestion and cleaning of raw per-dimension ratings.

use std::collections::{BTreeMap, HashSet};
use std::io::{BufRead, BufReader, Read};

use log::warn;
use serde::Serialize;

use super::{CefrLevel, Dimension, Language};
use crate::error::{Error, Result};

/// Header columns of `labels.tsv`, in canonical order.
pub const LABEL_COLUMNS: [&str; 9] = [
    "docid",
    "language",
    "overall",
    "grammar",
    "orthography",
    "vocab_range",
    "vocab_control",
    "coherence",
    "sociolinguistic",
];

/// A rating as written in the label table, before cleaning.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RawLabel {
    Level(CefrLevel),
    /// `0`: no rating given.
    Zero,
    /// `1`: an undocumented non-CEFR annotation.
    One,
    Absent,
}

impl RawLabel {
    fn parse(s: &str) -> Option<RawLabel> {
        match s.trim() {
            "" | "_" | "NA" => Some(RawLabel::Absent),
            "0" => Some(RawLabel::Zero),
            "1" => Some(RawLabel::One),
            other => other.parse().ok().map(RawLabel::Level),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawLabelRecord {
    pub doc_id: String,
    pub language: Language,
    pub raw: BTreeMap<Dimension, RawLabel>,
}

impl RawLabelRecord {
    pub fn get(&self, dimension: Dimension) -> RawLabel {
        self.raw
            .get(&dimension)
            .copied()
            .unwrap_or(RawLabel::Absent)
    }
}

/// Reads the tab-separated label table. Raw tokens are preserved verbatim.
pub fn load_labels<R: Read>(input: R) -> Result<Vec<RawLabelRecord>> {
    let reader = BufReader::new(input);
    let mut lines = reader.lines().enumerate();
    let err = |line: usize, message: String| Error::LabelTable { line, message };

    let header = match lines.next() {
        None => return Ok(Vec::new()),
        Some((_, h)) => h.map_err(|e| err(1, e.to_string()))?,
    };
    let header: Vec<String> = header
        .trim_end_matches('\r')
        .split('\t')
        .map(|s| s.trim().to_string())
        .collect();
    let position = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| err(1, format!("header is missing column `{name}`")))
    };
    let id_col = position("docid")?;
    let lang_col = position("language")?;
    let dim_cols: Vec<(Dimension, usize)> = Dimension::ALL
        .iter()
        .map(|&d| position(d.as_str()).map(|c| (d, c)))
        .collect::<Result<_>>()?;

    let mut seen = HashSet::new();
    let mut records = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line.map_err(|e| err(lineno, e.to_string()))?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        let cell = |c: usize| cols.get(c).copied().unwrap_or("");
        let doc_id = cell(id_col).trim().to_string();
        if doc_id.is_empty() {
            return Err(err(lineno, "empty docid".into()));
        }
        let language: Language = cell(lang_col).trim().parse().map_err(|m| err(lineno, m))?;
        if !seen.insert(doc_id.clone()) {
            return Err(err(lineno, format!("duplicate docid `{doc_id}`")));
        }
        let mut raw = BTreeMap::new();
        for &(dim, c) in &dim_cols {
            let value = RawLabel::parse(cell(c))
                .ok_or_else(|| err(lineno, format!("bad {dim} label `{}`", cell(c))))?;
            raw.insert(dim, value);
        }
        records.push(RawLabelRecord {
            doc_id,
            language,
            raw,
        });
    }
    Ok(records)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExclusionReason {
    /// No rating in the table.
    Absent,
    /// Rated `1`.
    AnnotatedOne,
    /// Rated `0` where no imputation rule applies.
    UnresolvableZero,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Exclusion {
    pub doc_id: String,
    pub language: Language,
    pub dimension: Dimension,
    pub reason: ExclusionReason,
}

#[derive(Debug, Clone, Default)]
pub struct CleanedLabels {
    /// Usable labels per document; a dimension missing here excludes the
    /// document from that dimension only.
    pub labels: BTreeMap<String, BTreeMap<Dimension, CefrLevel>>,
    pub exclusions: Vec<Exclusion>,
}

impl CleanedLabels {
    /// Documents usable for `dimension`.
    pub fn members(&self, dimension: Dimension) -> impl Iterator<Item = &str> {
        self.labels
            .iter()
            .filter(move |(_, l)| l.contains_key(&dimension))
            .map(|(id, _)| id.as_str())
    }
}

/// Maps raw ratings to CEFR levels.
///
/// * `1` excludes the document from that dimension.
/// * For German and Italian, `0` in a non-overall dimension becomes A1 when
///   the overall rating is A1.
/// * Sociolinguistic appropriateness is never kept for Czech.
/// * Any other `0` is excluded with a warning.
pub fn clean_labels(records: &[RawLabelRecord]) -> CleanedLabels {
    let mut out = CleanedLabels::default();
    for record in records {
        let overall = record.get(Dimension::Overall);
        let mut labels = BTreeMap::new();
        for dim in Dimension::ALL {
            if !dim.available_for(record.language) {
                continue;
            }
            let mut exclude = |reason| {
                out.exclusions.push(Exclusion {
                    doc_id: record.doc_id.clone(),
                    language: record.language,
                    dimension: dim,
                    reason,
                })
            };
            match record.get(dim) {
                RawLabel::Level(level) => {
                    labels.insert(dim, level);
                }
                RawLabel::One => exclude(ExclusionReason::AnnotatedOne),
                RawLabel::Absent => exclude(ExclusionReason::Absent),
                RawLabel::Zero => {
                    let imputable = matches!(record.language, Language::De | Language::It)
                        && dim != Dimension::Overall
                        && overall == RawLabel::Level(CefrLevel::A1);
                    if imputable {
                        labels.insert(dim, CefrLevel::A1);
                    } else {
                        warn!(
                            "document `{}` ({}) has unresolvable 0 for {dim}; excluded from it",
                            record.doc_id, record.language
                        );
                        exclude(ExclusionReason::UnresolvableZero);
                    }
                }
            }
        }
        out.labels.insert(record.doc_id.clone(), labels);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "docid\tlanguage\toverall\tgrammar\torthography\tvocab_range\tvocab_control\tcoherence\tsociolinguistic\n";

    fn table(rows: &[&str]) -> Vec<RawLabelRecord> {
        let mut text = HEADER.to_string();
        for r in rows {
            text.push_str(r);
            text.push('\n');
        }
        load_labels(text.as_bytes()).unwrap()
    }

    #[test]
    fn header_only() {
        assert!(table(&[]).is_empty());
        assert!(load_labels("".as_bytes()).unwrap().is_empty());
    }

    #[test]
    fn all_b1() {
        let recs = table(&["d1\tde\tB1\tB1\tB1\tB1\tB1\tB1\tB1"]);
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].raw.len(), 7);
        assert!(recs[0]
            .raw
            .values()
            .all(|&l| l == RawLabel::Level(CefrLevel::B1)));
    }

    #[test]
    fn raw_zero_is_preserved() {
        let recs = table(&["d1\tde\tA1\tA1\t0\tA1\tA1\tA1\tA1"]);
        assert_eq!(recs[0].get(Dimension::OrthographicControl), RawLabel::Zero);
    }

    #[test]
    fn columns_may_be_reordered_and_cells_blank() {
        let text = "language\tdocid\tsociolinguistic\tcoherence\tvocab_control\tvocab_range\torthography\tgrammar\toverall\nit\tx\t\tA2\tA2\tA2\tA2\tA2\tB1\n";
        let recs = load_labels(text.as_bytes()).unwrap();
        assert_eq!(
            recs[0].get(Dimension::Overall),
            RawLabel::Level(CefrLevel::B1)
        );
        assert_eq!(
            recs[0].get(Dimension::SociolinguisticAppropriateness),
            RawLabel::Absent
        );
    }

    #[test]
    fn unknown_language_and_duplicates_fail() {
        let bad_lang = format!("{HEADER}d1\ten\tB1\tB1\tB1\tB1\tB1\tB1\tB1\n");
        assert!(matches!(
            load_labels(bad_lang.as_bytes()),
            Err(Error::LabelTable { line: 2, .. })
        ));
        let dup = format!(
            "{HEADER}d1\tde\tB1\tB1\tB1\tB1\tB1\tB1\tB1\nd1\tit\tB1\tB1\tB1\tB1\tB1\tB1\tB1\n"
        );
        assert!(matches!(
            load_labels(dup.as_bytes()),
            Err(Error::LabelTable { line: 3, .. })
        ));
        let missing_col = "docid\tlanguage\toverall\n";
        assert!(load_labels(missing_col.as_bytes()).is_err());
        let bad_label = format!("{HEADER}d1\tde\tB3\tB1\tB1\tB1\tB1\tB1\tB1\n");
        assert!(load_labels(bad_label.as_bytes()).is_err());
    }

    #[test]
    fn german_zero_with_overall_a1_becomes_a1() {
        let cleaned = clean_labels(&table(&["d1\tde\tA1\t0\tA1\tA1\tA1\tA1\tA1"]));
        assert_eq!(
            cleaned.labels["d1"][&Dimension::GrammaticalAccuracy],
            CefrLevel::A1
        );
        assert!(cleaned.exclusions.is_empty());
    }

    #[test]
    fn italian_one_excludes_only_that_dimension() {
        let cleaned = clean_labels(&table(&["d1\tit\tB1\tB1\tB1\t1\tB1\tB1\tB1"]));
        let l = &cleaned.labels["d1"];
        assert!(!l.contains_key(&Dimension::VocabularyRange));
        assert_eq!(l.len(), 6);
        assert_eq!(cleaned.members(Dimension::VocabularyRange).count(), 0);
        assert_eq!(cleaned.members(Dimension::Overall).count(), 1);
        assert_eq!(cleaned.exclusions[0].reason, ExclusionReason::AnnotatedOne);
    }

    #[test]
    fn czech_sociolinguistic_is_dropped() {
        let cleaned = clean_labels(&table(&[
            "c1\tcz\tA2\tA2\tA2\tA2\tA2\tA2\t0",
            "c2\tcz\tB1\tB1\tB1\tB1\tB1\tB1\tB1",
        ]));
        for id in ["c1", "c2"] {
            assert!(!cleaned.labels[id].contains_key(&Dimension::SociolinguisticAppropriateness));
            assert_eq!(cleaned.labels[id].len(), 6);
        }
        assert!(cleaned.exclusions.is_empty());
    }

    #[test]
    fn zero_outside_imputation_rule_is_excluded() {
        let cleaned = clean_labels(&table(&[
            "d1\tde\tA2\t0\tA2\tA2\tA2\tA2\tA2",
            "d2\tde\t0\tA1\tA1\tA1\tA1\tA1\tA1",
            "c1\tcz\tA1\t0\tA1\tA1\tA1\tA1\tA1",
        ]));
        assert!(!cleaned.labels["d1"].contains_key(&Dimension::GrammaticalAccuracy));
        assert!(!cleaned.labels["d2"].contains_key(&Dimension::Overall));
        assert!(!cleaned.labels["c1"].contains_key(&Dimension::GrammaticalAccuracy));
        assert_eq!(cleaned.exclusions.len(), 3);
        assert!(cleaned
            .exclusions
            .iter()
            .all(|e| e.reason == ExclusionReason::UnresolvableZero));
    }

    #[test]
    fn absent_label_excludes_that_dimension() {
        let cleaned = clean_labels(&table(&["d1\tde\tB2\t\tB2\tB2\tB2\tB2\tB2"]));
        assert_eq!(cleaned.labels["d1"].len(), 6);
        assert_eq!(cleaned.exclusions[0].reason, ExclusionReason::Absent);
    }
}
