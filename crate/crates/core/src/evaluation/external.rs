//! Predictions produced outside this crate, as a TSV with header
//! `docid\tdimension\tfold\tpredicted`.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, BufReader, Read, Write};

use super::report::{EvaluationReport, FoldResult};
use crate::corpus::{CefrLevel, Dimension, Document, Language};
use crate::error::{Error, Result};

pub const PREDICTIONS_HEADER: [&str; 4] = ["docid", "dimension", "fold", "predicted"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredictionRecord {
    pub doc_id: String,
    pub dimension: Dimension,
    pub fold: usize,
    pub predicted: CefrLevel,
}

pub fn read_predictions<R: Read>(input: R) -> Result<Vec<PredictionRecord>> {
    let mut lines = BufReader::new(input).lines().enumerate();
    let bad = |line: usize, msg: String| Error::Predictions(format!("line {line}: {msg}"));
    let header = match lines.next() {
        Some((_, h)) => h.map_err(|e| bad(1, e.to_string()))?,
        None => return Err(bad(1, "missing header".into())),
    };
    let cols: Vec<&str> = header.trim_end_matches('\r').split('\t').collect();
    if cols != PREDICTIONS_HEADER {
        return Err(bad(
            1,
            format!("expected header `{}`", PREDICTIONS_HEADER.join("\\t")),
        ));
    }
    let mut out = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line.map_err(|e| bad(lineno, e.to_string()))?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 4 {
            return Err(bad(
                lineno,
                format!("expected 4 columns, found {}", cols.len()),
            ));
        }
        out.push(PredictionRecord {
            doc_id: cols[0].to_string(),
            dimension: cols[1].parse().map_err(|m| bad(lineno, m))?,
            fold: cols[2]
                .parse()
                .map_err(|_| bad(lineno, format!("bad fold `{}`", cols[2])))?,
            predicted: cols[3].parse().map_err(|m| bad(lineno, m))?,
        });
    }
    Ok(out)
}

pub fn write_predictions<W: Write>(
    records: &[PredictionRecord],
    mut out: W,
) -> std::io::Result<()> {
    writeln!(out, "{}", PREDICTIONS_HEADER.join("\t"))?;
    for r in records {
        writeln!(
            out,
            "{}\t{}\t{}\t{}",
            r.doc_id, r.dimension, r.fold, r.predicted
        )?;
    }
    Ok(())
}

/// Gold labels for one dimension, with each document's language.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GoldLabels {
    pub dimension: Option<Dimension>,
    pub labels: BTreeMap<String, (Language, CefrLevel)>,
}

impl GoldLabels {
    /// Documents lacking a label for `dimension` are skipped.
    pub fn from_documents<'a>(
        docs: impl IntoIterator<Item = &'a Document>,
        dimension: Dimension,
    ) -> Self {
        GoldLabels {
            dimension: Some(dimension),
            labels: docs
                .into_iter()
                .filter_map(|d| d.label(dimension).map(|l| (d.id.clone(), (d.language, l))))
                .collect(),
        }
    }
}

/// Scores the rows of `records` for `dimension` against `gold`, fold by
/// fold, aggregating exactly like cross-validation.
pub fn score_prediction_records(
    records: &[PredictionRecord],
    dimension: Dimension,
    gold: &GoldLabels,
) -> Result<EvaluationReport> {
    let mut by_fold: BTreeMap<usize, Vec<&PredictionRecord>> = BTreeMap::new();
    let mut seen = BTreeSet::new();
    for r in records.iter().filter(|r| r.dimension == dimension) {
        if !gold.labels.contains_key(&r.doc_id) {
            return Err(Error::Predictions(format!(
                "prediction for unknown document `{}` ({dimension})",
                r.doc_id
            )));
        }
        if !seen.insert(r.doc_id.as_str()) {
            return Err(Error::Predictions(format!(
                "document `{}` predicted more than once for {dimension}",
                r.doc_id
            )));
        }
        by_fold.entry(r.fold).or_default().push(r);
    }
    let missing: Vec<&str> = gold
        .labels
        .keys()
        .map(String::as_str)
        .filter(|id| !seen.contains(id))
        .collect();
    if !missing.is_empty() {
        return Err(Error::Predictions(format!(
            "no {dimension} prediction for {} document(s): {}",
            missing.len(),
            missing.join(", ")
        )));
    }

    let folds: Vec<FoldResult> = by_fold
        .into_iter()
        .map(|(fold, rows)| {
            let mut result = FoldResult {
                fold,
                ids: Vec::with_capacity(rows.len()),
                languages: Vec::with_capacity(rows.len()),
                gold: Vec::with_capacity(rows.len()),
                predicted: Vec::with_capacity(rows.len()),
                degenerate: false,
            };
            for r in rows {
                let (lang, level) = gold.labels[&r.doc_id];
                result.ids.push(r.doc_id.clone());
                result.languages.push(lang);
                result.gold.push(level);
                result.predicted.push(r.predicted);
            }
            result
        })
        .collect();
    EvaluationReport::from_folds(dimension, "external_predictions", "external", &folds)
}

/// Reads a predictions file and scores it.
pub fn score_external_predictions<R: Read>(
    input: R,
    dimension: Dimension,
    gold: &GoldLabels,
) -> Result<EvaluationReport> {
    score_prediction_records(&read_predictions(input)?, dimension, gold)
}
