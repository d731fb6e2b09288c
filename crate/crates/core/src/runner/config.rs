use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::classifier::TrainConfig;
use crate::corpus::{Dimension, Language};
use crate::error::{Error, Result};
use crate::evaluation::ClassifierKind;
use crate::features::FeatureSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    Monolingual,
    Multilingual,
    Crosslingual,
}

/// A resolved experimental scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Monolingual(Language),
    Multilingual,
    /// Train on all German documents, test on `target`.
    Crosslingual {
        target: Language,
    },
}

impl Scenario {
    pub const SOURCE_LANGUAGE: Language = Language::De;

    pub fn id(&self) -> String {
        match self {
            Scenario::Monolingual(l) => format!("mono-{l}"),
            Scenario::Multilingual => "multi".into(),
            Scenario::Crosslingual { target } => {
                format!("cross-{}-{target}", Self::SOURCE_LANGUAGE)
            }
        }
    }

    /// Languages whose documents are involved, training side first.
    pub fn languages(&self) -> Vec<Language> {
        match self {
            Scenario::Monolingual(l) => vec![*l],
            Scenario::Multilingual => Language::ALL.to_vec(),
            Scenario::Crosslingual { target } => vec![Self::SOURCE_LANGUAGE, *target],
        }
    }

    /// The value of the `languages` report column.
    pub fn languages_label(&self) -> String {
        match self {
            Scenario::Crosslingual { target } => format!("{}>{target}", Self::SOURCE_LANGUAGE),
            other => other
                .languages()
                .iter()
                .map(|l| l.code())
                .collect::<Vec<_>>()
                .join("+"),
        }
    }

    pub fn is_cross_validated(&self) -> bool {
        !matches!(self, Scenario::Crosslingual { .. })
    }

    /// Whether `dimension` can be evaluated: every evaluated language must
    /// carry it.
    pub fn supports(&self, dimension: Dimension) -> bool {
        match self {
            Scenario::Monolingual(l) => dimension.available_for(*l),
            Scenario::Multilingual => true,
            Scenario::Crosslingual { target } => dimension.available_for(*target),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

fn default_k() -> usize {
    5
}

fn default_dimensions() -> Vec<Dimension> {
    Dimension::ALL.to_vec()
}

fn default_classifiers() -> Vec<ClassifierKind> {
    vec![ClassifierKind::Logreg]
}

fn default_output() -> PathBuf {
    PathBuf::from("results")
}

/// One experiment, read from a flat JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: ScenarioKind,
    /// Monolingual language.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub language: Option<Language>,
    /// Cross-lingual test language.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Language>,
    #[serde(default = "default_dimensions")]
    pub dimensions: Vec<Dimension>,
    pub feature_sets: Vec<FeatureSet>,
    #[serde(default = "default_classifiers")]
    pub classifiers: Vec<ClassifierKind>,
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default)]
    pub seed: u64,
    pub corpus: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub laser_vectors: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mbert_vectors: Option<PathBuf>,
    /// Predictions TSV scored for the `external_predictions` feature set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predictions: Option<PathBuf>,
    #[serde(default = "default_output")]
    pub output: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l2_strength: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iterations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convergence_tol: Option<f64>,
}

impl ExperimentConfig {
    /// Reads a config file; relative paths are taken relative to its
    /// directory.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg: ExperimentConfig = serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        if let Some(base) = path.parent() {
            cfg.rebase(base);
        }
        Ok(cfg)
    }

    fn rebase(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.corpus);
        fix(&mut self.output);
        for p in [
            &mut self.laser_vectors,
            &mut self.mbert_vectors,
            &mut self.predictions,
        ]
        .into_iter()
        .flatten()
        {
            fix(p);
        }
    }

    pub fn scenario(&self) -> Result<Scenario> {
        match self.scenario {
            ScenarioKind::Monolingual => {
                if self.target.is_some() {
                    return Err(Error::Config(
                        "`target` only applies to crosslingual runs".into(),
                    ));
                }
                self.language
                    .map(Scenario::Monolingual)
                    .ok_or_else(|| Error::Config("monolingual scenario needs `language`".into()))
            }
            ScenarioKind::Multilingual => {
                if self.language.is_some() || self.target.is_some() {
                    return Err(Error::Config(
                        "multilingual scenario takes neither `language` nor `target`".into(),
                    ));
                }
                Ok(Scenario::Multilingual)
            }
            ScenarioKind::Crosslingual => {
                if self
                    .language
                    .is_some_and(|l| l != Scenario::SOURCE_LANGUAGE)
                {
                    return Err(Error::Config(format!(
                        "crosslingual training language is always {}",
                        Scenario::SOURCE_LANGUAGE
                    )));
                }
                match self.target {
                    Some(target @ (Language::It | Language::Cz)) => {
                        Ok(Scenario::Crosslingual { target })
                    }
                    Some(other) => Err(Error::Config(format!(
                        "crosslingual target must be it or cz, got {other}"
                    ))),
                    None => Err(Error::Config("crosslingual scenario needs `target`".into())),
                }
            }
        }
    }

    pub fn train_config(&self) -> TrainConfig {
        let defaults = TrainConfig::default();
        TrainConfig {
            l2_strength: self.l2_strength.unwrap_or(defaults.l2_strength),
            max_iterations: self.max_iterations.unwrap_or(defaults.max_iterations),
            convergence_tol: self.convergence_tol.unwrap_or(defaults.convergence_tol),
            seed: self.seed,
        }
    }

    pub fn vectors_path(&self, set: FeatureSet) -> Option<&Path> {
        match set {
            FeatureSet::Laser => self.laser_vectors.as_deref(),
            FeatureSet::Mbert => self.mbert_vectors.as_deref(),
            _ => None,
        }
    }

    /// Checks every combination rule and the presence of referenced files.
    pub fn validate(&self) -> Result<Scenario> {
        let scenario = self.scenario()?;
        if self.k < 2 {
            return Err(Error::Config(format!(
                "k must be at least 2, got {}",
                self.k
            )));
        }
        if self.dimensions.is_empty() {
            return Err(Error::Config("no dimensions selected".into()));
        }
        if self.feature_sets.is_empty() {
            return Err(Error::Config("no feature sets selected".into()));
        }
        if self.classifiers.is_empty() {
            return Err(Error::Config("no classifiers selected".into()));
        }
        for (what, has_dupes) in [
            ("dimensions", has_duplicates(&self.dimensions)),
            ("feature_sets", has_duplicates(&self.feature_sets)),
            ("classifiers", has_duplicates(&self.classifiers)),
        ] {
            if has_dupes {
                return Err(Error::Config(format!("duplicate entries in `{what}`")));
            }
        }
        if !scenario.is_cross_validated() && self.feature_sets.contains(&FeatureSet::WordNgrams) {
            return Err(Error::Config(
                "word_ngrams cannot be used in a crosslingual scenario".into(),
            ));
        }
        self.train_config().validate()?;
        for &set in &self.feature_sets {
            let path = match set {
                FeatureSet::Laser | FeatureSet::Mbert => {
                    self.vectors_path(set).ok_or_else(|| {
                        Error::Config(format!("feature set {set} needs `{set}_vectors`"))
                    })?
                }
                FeatureSet::ExternalPredictions => {
                    self.predictions.as_deref().ok_or_else(|| {
                        Error::Config("external_predictions needs `predictions`".into())
                    })?
                }
                _ => continue,
            };
            if !path.is_file() {
                return Err(Error::Config(format!(
                    "{set} file {} does not exist",
                    path.display()
                )));
            }
        }
        Ok(scenario)
    }
}

fn has_duplicates<T: PartialEq>(items: &[T]) -> bool {
    items
        .iter()
        .enumerate()
        .any(|(i, a)| items[..i].iter().any(|b| a == b))
}
