//! Confidence scoring for location guesses: two bagged regression-tree
//! models, one for users with a guess (positive) and one for users without
//! (negative), regressing annotator labels in {0, 0.5, 1}.

mod forest;
mod metrics;
mod tree;

pub use forest::{train_forest, train_with_holdout, Forest, ForestParams, TrainEvalOutcome};
pub use metrics::{evaluate_auc, precision_recall_points, roc_points, PrPoint, RocPoint};
pub use tree::{Node, RegressionTree};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelVariant {
    Positive,
    Negative,
}

/// Features for one user, in the schema of one of the two models. The
/// negative schema omits exactly the guess-dependent features: cluster size
/// fraction, the US flag, and the guess population.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "lowercase")]
pub enum FeatureVector {
    Positive {
        cluster_size_fraction: f64,
        total_entities: u64,
        is_us: bool,
        total_posts: u64,
        history_duration_days: f64,
        guess_population: u64,
    },
    Negative {
        total_entities: u64,
        total_posts: u64,
        history_duration_days: f64,
    },
}

pub const POSITIVE_FEATURES: [&str; 6] = [
    "cluster_size_fraction",
    "total_entities",
    "is_us",
    "total_posts",
    "history_duration_days",
    "guess_population",
];

pub const NEGATIVE_FEATURES: [&str; 3] =
    ["total_entities", "total_posts", "history_duration_days"];

impl FeatureVector {
    pub fn variant(&self) -> ModelVariant {
        match self {
            FeatureVector::Positive { .. } => ModelVariant::Positive,
            FeatureVector::Negative { .. } => ModelVariant::Negative,
        }
    }

    pub fn to_dense(&self) -> Vec<f64> {
        match *self {
            FeatureVector::Positive {
                cluster_size_fraction,
                total_entities,
                is_us,
                total_posts,
                history_duration_days,
                guess_population,
            } => vec![
                cluster_size_fraction,
                total_entities as f64,
                if is_us { 1.0 } else { 0.0 },
                total_posts as f64,
                history_duration_days,
                guess_population as f64,
            ],
            FeatureVector::Negative {
                total_entities,
                total_posts,
                history_duration_days,
            } => vec![
                total_entities as f64,
                total_posts as f64,
                history_duration_days,
            ],
        }
    }
}

pub fn feature_names(variant: ModelVariant) -> &'static [&'static str] {
    match variant {
        ModelVariant::Positive => &POSITIVE_FEATURES,
        ModelVariant::Negative => &NEGATIVE_FEATURES,
    }
}

/// Annotator label: 0.0 miss, 0.5 partially correct, 1.0 fully correct.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct TrainingLabel(f64);

impl TrainingLabel {
    pub const MISS: TrainingLabel = TrainingLabel(0.0);
    pub const PARTIAL: TrainingLabel = TrainingLabel(0.5);
    pub const FULL: TrainingLabel = TrainingLabel(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if value == 0.0 || value == 0.5 || value == 1.0 {
            Ok(TrainingLabel(value))
        } else {
            Err(Error::InvalidLabel(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for TrainingLabel {
    type Error = Error;
    fn try_from(value: f64) -> Result<Self> {
        TrainingLabel::new(value)
    }
}

impl From<TrainingLabel> for f64 {
    fn from(label: TrainingLabel) -> f64 {
        label.0
    }
}

/// Collapse labels for binary evaluation: fully and partially correct both
/// count as 1, misses as 0.
pub fn binarize_labels(labels: &[TrainingLabel]) -> Vec<u8> {
    labels.iter().map(|l| u8::from(l.0 >= 0.5)).collect()
}
