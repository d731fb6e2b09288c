//! Fold planning, metrics, cross-validation and scoring of external
//! predictions.

mod cv;
mod external;
mod folds;
mod metrics;
mod report;

pub use cv::{
    cross_validate, dimension_labels, evaluate_plan, vocabulary_leaks, ClassifierKind, CvOutcome,
    FoldArtifact,
};
pub use external::{
    read_predictions, score_external_predictions, score_prediction_records, write_predictions,
    GoldLabels, PredictionRecord, PREDICTIONS_HEADER,
};
pub use folds::{stratified_kfold, FoldPlan};
pub use metrics::{confusion, weighted_f1, ConfusionMatrix};
pub use report::{EvaluationReport, FoldResult, LanguageScores};
