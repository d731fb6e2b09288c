//! Multi-dimensional CEFR proficiency classification for learner essays.
//!
//! The crate is organised as a pipeline:
//!
//! * [`corpus`] reads UD-parsed essays (CoNLL-U) and a label table, and
//!   cleans the raw per-dimension ratings.
//! * [`features`] turns documents into feature matrices: document length,
//!   word / UPOS / dependency-triplet n-grams, and externally computed dense
//!   embeddings.
//! * [`classifier`] trains L2-regularised multinomial logistic regression
//!   and constant baselines.
//! * [`evaluation`] provides stratified k-fold plans, weighted F1, confusion
//!   matrices, cross-validation and scoring of external predictions.
//! * [`runner`] drives monolingual, multilingual and cross-lingual
//!   experiments from a JSON config and writes CSV/JSON reports and fold
//!   manifests.

pub mod classifier;
pub mod corpus;
pub mod error;
pub mod evaluation;
pub mod features;
pub mod runner;

pub use error::{Error, Result};
