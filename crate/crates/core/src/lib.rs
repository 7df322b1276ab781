//! Entropy-weighted SMOTE oversampling for imbalanced two-class data.
//!
//! Feature weights come from per-attribute information gain under a chosen
//! entropy. They drive the neighbor search during oversampling and the 1NN
//! classifier used for evaluation. Plain SMOTE uses unit weights.

pub mod cluster;
pub mod dataset;
pub mod entropy;
pub mod error;
pub mod exec;
pub mod experiment;
pub mod keel;
pub mod metrics;
pub mod neighbors;
pub mod rng;
pub mod smote;

pub use dataset::{Dataset, Label, Matrix};
pub use entropy::{EntropyKind, EntropySpec, FeatureWeights, WeightNormalization};
pub use error::{Error, Result};
pub use exec::Exec;
pub use experiment::{EvalMethod, EvaluationReport, ExperimentPlan, Protocol, ReportFormat, Settings};
pub use metrics::{ConfusionMatrix, MetricSet};
pub use smote::{oversample, Amount, SmoteConfig, Variant};
