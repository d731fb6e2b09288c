use std::fmt::Write as _;

use serde::Serialize;

use super::config::{ExperimentConfig, Scenario};
use crate::corpus::Dimension;
use crate::error::Result;
use crate::evaluation::{EvaluationReport, FoldPlan};

pub const CSV_HEADER: &str = "scenario,languages,dimension,feature_set,classifier,fold,weighted_f1";

/// One row per fold followed by a `mean` row, for every report.
pub fn csv_report(scenario: &Scenario, reports: &[EvaluationReport]) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    let languages = scenario.languages_label();
    for r in reports {
        let prefix = format!(
            "{},{languages},{},{},{}",
            r.scenario, r.dimension, r.feature_set, r.classifier
        );
        for (fold, score) in r.folds.iter().zip(&r.fold_scores) {
            let _ = writeln!(out, "{prefix},{fold},{score:.6}");
        }
        let _ = writeln!(out, "{prefix},mean,{:.6}", r.mean);
    }
    out
}

#[derive(Serialize)]
struct ScenarioReport<'a> {
    scenario: String,
    languages: String,
    k: usize,
    seed: u64,
    reports: &'a [EvaluationReport],
}

pub fn json_report(
    scenario: &Scenario,
    config: &ExperimentConfig,
    reports: &[EvaluationReport],
) -> Result<String> {
    let doc = ScenarioReport {
        scenario: scenario.id(),
        languages: scenario.languages_label(),
        k: if scenario.is_cross_validated() {
            config.k
        } else {
            1
        },
        seed: config.seed,
        reports,
    };
    let mut s = serde_json::to_string_pretty(&doc)?;
    s.push('\n');
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct ManifestFold {
    pub fold: usize,
    pub train: Vec<String>,
    pub test: Vec<String>,
}

/// Train/test ids per fold, for tools that train outside this crate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct FoldManifest {
    pub scenario: String,
    pub dimension: String,
    pub seed: u64,
    pub k: usize,
    pub folds: Vec<ManifestFold>,
}

impl FoldManifest {
    pub fn from_plan(scenario: &str, dimension: Dimension, plan: &FoldPlan) -> Self {
        FoldManifest {
            scenario: scenario.to_string(),
            dimension: dimension.as_str().to_string(),
            seed: plan.seed,
            k: plan.k,
            folds: (0..plan.n_folds())
                .map(|f| ManifestFold {
                    fold: f,
                    train: plan.train_ids(f),
                    test: plan.test_ids(f).to_vec(),
                })
                .collect(),
        }
    }

    pub fn file_name(&self) -> String {
        format!("{}.{}.json", self.scenario, self.dimension)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}
