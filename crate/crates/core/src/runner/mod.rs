//! Config-driven experiments: monolingual and multilingual cross-validation
//! and German-to-target cross-lingual transfer.

mod config;
mod output;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use log::info;
use rayon::prelude::*;

pub use config::{ExperimentConfig, Scenario, ScenarioKind};
pub use output::{csv_report, json_report, FoldManifest, ManifestFold, CSV_HEADER};

use crate::corpus::{Corpus, CorpusStats, Dimension, Document};
use crate::error::{Error, Result};
use crate::evaluation::{
    dimension_labels, evaluate_plan, read_predictions, score_prediction_records, stratified_kfold,
    ClassifierKind, EvaluationReport, FoldPlan, GoldLabels, PredictionRecord,
};
use crate::features::{load_dense_vectors, FeaturePipeline, FeatureSet, NGramSpec};

/// A validated config with its corpus loaded.
pub struct Experiment {
    pub config: ExperimentConfig,
    pub scenario: Scenario,
    pub corpus: Corpus,
    /// Requested dimensions the scenario supports, in request order.
    pub dimensions: Vec<Dimension>,
}

impl Experiment {
    pub fn prepare(config: ExperimentConfig) -> Result<Experiment> {
        let scenario = config.validate()?;
        let corpus = Corpus::load(&config.corpus)?;
        Self::with_corpus(config, scenario, corpus)
    }

    pub fn with_corpus(
        config: ExperimentConfig,
        scenario: Scenario,
        corpus: Corpus,
    ) -> Result<Experiment> {
        let mut dimensions = Vec::new();
        for &dim in &config.dimensions {
            if scenario.supports(dim) {
                dimensions.push(dim);
            } else {
                info!("{dim} is not rated for Czech; dropped from {scenario}");
            }
        }
        if dimensions.is_empty() {
            return Err(Error::Config(format!(
                "no requested dimension applies to {scenario}"
            )));
        }
        Ok(Experiment {
            config,
            scenario,
            corpus,
            dimensions,
        })
    }

    /// Documents of the scenario labelled for `dimension`.
    pub fn documents(&self, dimension: Dimension) -> Vec<&Document> {
        let langs = self.scenario.languages();
        self.corpus
            .documents
            .iter()
            .filter(|d| langs.contains(&d.language) && d.label(dimension).is_some())
            .collect()
    }

    /// The fold plan used for every cell of `dimension`.
    pub fn plan(&self, dimension: Dimension) -> Result<FoldPlan> {
        let docs = self.documents(dimension);
        match self.scenario {
            Scenario::Crosslingual { target } => {
                let (train, test): (Vec<&Document>, Vec<&Document>) = docs
                    .into_iter()
                    .partition(|d| d.language == Scenario::SOURCE_LANGUAGE);
                if test.iter().any(|d| d.language != target) {
                    return Err(Error::Corpus(
                        "unexpected language in crosslingual split".into(),
                    ));
                }
                let mut plan = FoldPlan::holdout(
                    train.into_iter().map(|d| d.id.clone()),
                    test.into_iter().map(|d| d.id.clone()),
                )?;
                plan.seed = self.config.seed;
                Ok(plan)
            }
            _ => stratified_kfold(
                &dimension_labels(&docs, dimension)?,
                self.config.k,
                self.config.seed,
            ),
        }
    }

    pub fn manifests(&self) -> Result<Vec<FoldManifest>> {
        self.dimensions
            .iter()
            .map(|&dim| {
                Ok(FoldManifest::from_plan(
                    &self.scenario.id(),
                    dim,
                    &self.plan(dim)?,
                ))
            })
            .collect()
    }
}

/// Files written by a run.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub reports: Vec<EvaluationReport>,
    pub manifests: Vec<FoldManifest>,
    pub csv_path: PathBuf,
    pub json_path: PathBuf,
    pub manifest_paths: Vec<PathBuf>,
}

enum Cell {
    Model {
        dimension: Dimension,
        feature_set: FeatureSet,
        classifier: ClassifierKind,
    },
    External {
        dimension: Dimension,
    },
}

fn pipeline_for(
    set: FeatureSet,
    dense: &BTreeMap<FeatureSet, Arc<crate::features::DenseVectorTable>>,
) -> FeaturePipeline {
    match set {
        FeatureSet::DocLength => FeaturePipeline::DocLength,
        FeatureSet::Laser | FeatureSet::Mbert => FeaturePipeline::Dense(Arc::clone(&dense[&set])),
        other => FeaturePipeline::NGrams(NGramSpec::full(
            other.ngram_unit().expect("n-gram feature set"),
        )),
    }
}

fn load_predictions(path: &Path) -> Result<Vec<PredictionRecord>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_predictions(file)
}

/// Evaluates every (dimension × feature set × classifier) cell.
pub fn evaluate(experiment: &Experiment) -> Result<(Vec<EvaluationReport>, Vec<FoldManifest>)> {
    let cfg = &experiment.config;
    let scenario_id = experiment.scenario.id();

    let mut dense = BTreeMap::new();
    for &set in &cfg.feature_sets {
        if let (Some(dim), Some(path)) = (set.dense_dim(), cfg.vectors_path(set)) {
            let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
            dense.insert(set, Arc::new(load_dense_vectors(file, dim)?));
        }
    }
    let predictions = match &cfg.predictions {
        Some(path) if cfg.feature_sets.contains(&FeatureSet::ExternalPredictions) => {
            Some(load_predictions(path)?)
        }
        _ => None,
    };

    let mut plans = BTreeMap::new();
    for &dim in &experiment.dimensions {
        plans.insert(dim, experiment.plan(dim)?);
    }

    let mut cells = Vec::new();
    for &dimension in &experiment.dimensions {
        for &feature_set in &cfg.feature_sets {
            if feature_set == FeatureSet::ExternalPredictions {
                cells.push(Cell::External { dimension });
                continue;
            }
            for &classifier in &cfg.classifiers {
                cells.push(Cell::Model {
                    dimension,
                    feature_set,
                    classifier,
                });
            }
        }
    }

    let train_cfg = cfg.train_config();
    let reports: Vec<EvaluationReport> = cells
        .par_iter()
        .map(|cell| match *cell {
            Cell::Model {
                dimension,
                feature_set,
                classifier,
            } => {
                let docs = experiment.documents(dimension);
                let pipeline = pipeline_for(feature_set, &dense);
                info!("{scenario_id}: {dimension} / {feature_set} / {classifier}");
                let outcome = evaluate_plan(
                    &docs,
                    dimension,
                    &pipeline,
                    classifier,
                    &train_cfg,
                    &plans[&dimension],
                )?;
                let mut report = outcome.report.with_scenario(scenario_id.clone());
                report.feature_set = feature_set.as_str().to_string();
                report.languages = experiment.scenario.languages();
                Ok(report)
            }
            Cell::External { dimension } => {
                let plan = &plans[&dimension];
                let scored: Vec<&Document> = experiment
                    .documents(dimension)
                    .into_iter()
                    .filter(|d| plan.folds.iter().any(|f| f.binary_search(&d.id).is_ok()))
                    .collect();
                let gold = GoldLabels::from_documents(scored, dimension);
                let records = predictions.as_deref().expect("predictions loaded");
                let mut report = score_prediction_records(records, dimension, &gold)?
                    .with_scenario(scenario_id.clone());
                report.languages = experiment.scenario.languages();
                Ok(report)
            }
        })
        .collect::<Result<_>>()?;

    let manifests = experiment
        .dimensions
        .iter()
        .map(|dim| FoldManifest::from_plan(&scenario_id, *dim, &plans[dim]))
        .collect();
    Ok((reports, manifests))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn write_manifests(out_dir: &Path, manifests: &[FoldManifest]) -> Result<Vec<PathBuf>> {
    manifests
        .iter()
        .map(|m| {
            let path = out_dir.join("folds").join(m.file_name());
            write_file(&path, &m.to_json()?)?;
            Ok(path)
        })
        .collect()
}

/// Runs the experiment and writes `<scenario>.csv`, `<scenario>.json` and
/// one fold manifest per dimension under `out_dir`.
pub fn run(config: ExperimentConfig, out_dir: &Path) -> Result<RunOutput> {
    let experiment = Experiment::prepare(config)?;
    run_experiment(&experiment, out_dir)
}

pub fn run_experiment(experiment: &Experiment, out_dir: &Path) -> Result<RunOutput> {
    let (reports, manifests) = evaluate(experiment)?;
    let id = experiment.scenario.id();
    let csv_path = out_dir.join(format!("{id}.csv"));
    let json_path = out_dir.join(format!("{id}.json"));
    write_file(&csv_path, &csv_report(&experiment.scenario, &reports))?;
    write_file(
        &json_path,
        &json_report(&experiment.scenario, &experiment.config, &reports)?,
    )?;
    let manifest_paths = write_manifests(out_dir, &manifests)?;
    Ok(RunOutput {
        reports,
        manifests,
        csv_path,
        json_path,
        manifest_paths,
    })
}

/// Writes fold manifests without training anything.
pub fn export_folds(config: ExperimentConfig, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let experiment = Experiment::prepare(config)?;
    write_manifests(out_dir, &experiment.manifests()?)
}

/// Scores an external predictions file for every configured dimension and
/// writes `<scenario>.external.csv` / `.json`.
pub fn score_predictions(
    mut config: ExperimentConfig,
    predictions: Option<PathBuf>,
    out_dir: &Path,
) -> Result<RunOutput> {
    if let Some(p) = predictions {
        config.predictions = Some(p);
    }
    config.feature_sets = vec![FeatureSet::ExternalPredictions];
    let experiment = Experiment::prepare(config)?;
    let (reports, manifests) = evaluate(&experiment)?;
    let id = experiment.scenario.id();
    let csv_path = out_dir.join(format!("{id}.external.csv"));
    let json_path = out_dir.join(format!("{id}.external.json"));
    write_file(&csv_path, &csv_report(&experiment.scenario, &reports))?;
    write_file(
        &json_path,
        &json_report(&experiment.scenario, &experiment.config, &reports)?,
    )?;
    Ok(RunOutput {
        reports,
        manifests,
        csv_path,
        json_path,
        manifest_paths: Vec::new(),
    })
}

/// Corpus summary for the config's corpus directory.
pub fn stats(config: &ExperimentConfig) -> Result<CorpusStats> {
    Ok(Corpus::load(&config.corpus)?.stats())
}
