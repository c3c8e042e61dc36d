//! Bagged regression forests over [`RegressionTree`]s.
//!
//! Each tree trains on a bootstrap sample drawn from its own RNG stream
//! (`seed` + tree index), so training is deterministic regardless of how
//! the trees are scheduled across threads.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::{evaluate_auc, precision_recall_points, PrPoint};
use super::tree::{GrowParams, RegressionTree};
use super::{binarize_labels, feature_names, FeatureVector, ModelVariant, TrainingLabel};
use crate::{Error, Result};

/// RNG stream reserved for the holdout shuffle; tree streams start at 0.
const HOLDOUT_STREAM: u64 = u64::MAX;

pub const MIN_TRAINING_ROWS: usize = 10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForestParams {
    pub n_trees: usize,
    pub max_depth: usize,
    pub min_leaf: usize,
    /// Features sampled per split; 0 means ceil(sqrt(d)).
    pub features_per_split: usize,
    pub seed: u64,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams {
            n_trees: 200,
            max_depth: 8,
            min_leaf: 3,
            features_per_split: 0,
            seed: 0,
        }
    }
}

impl ForestParams {
    fn resolved_features_per_split(&self, d: usize) -> usize {
        if self.features_per_split == 0 {
            (d as f64).sqrt().ceil() as usize
        } else {
            self.features_per_split.min(d)
        }
    }
}

/// A trained forest, serializable as a self-describing JSON document with
/// explicit node lists.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Forest {
    pub format: String,
    pub variant: ModelVariant,
    pub params: ForestParams,
    pub feature_names: Vec<String>,
    /// Per-feature share of total squared-error reduction, summing to 1.
    pub feature_importances: Vec<f64>,
    pub trees: Vec<RegressionTree>,
}

pub const FOREST_FORMAT: &str = "forest-v1";

impl Forest {
    /// Mean of the per-tree predictions, clamped to [0, 1].
    pub fn predict(&self, features: &FeatureVector) -> Result<f64> {
        if features.variant() != self.variant {
            return Err(Error::SchemaMismatch {
                expected: self.variant,
                found: features.variant(),
            });
        }
        let row = features.to_dense();
        let sum: f64 = self.trees.iter().map(|t| t.predict(&row)).sum();
        Ok((sum / self.trees.len() as f64).clamp(0.0, 1.0))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = std::fs::File::create(path)?;
        serde_json::to_writer(std::io::BufWriter::new(file), self)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Ok(serde_json::from_reader(std::io::BufReader::new(file))?)
    }
}

/// Train a bagged forest. Every row must match `variant`'s schema, and at
/// least [`MIN_TRAINING_ROWS`] rows are required.
pub fn train_forest(
    rows: &[(FeatureVector, TrainingLabel)],
    variant: ModelVariant,
    params: &ForestParams,
) -> Result<Forest> {
    if rows.len() < MIN_TRAINING_ROWS {
        return Err(Error::TooFewRows {
            got: rows.len(),
            min: MIN_TRAINING_ROWS,
        });
    }
    for (features, _) in rows {
        if features.variant() != variant {
            return Err(Error::SchemaMismatch {
                expected: variant,
                found: features.variant(),
            });
        }
    }

    let x: Vec<Vec<f64>> = rows.iter().map(|(f, _)| f.to_dense()).collect();
    let y: Vec<f64> = rows.iter().map(|(_, l)| l.value()).collect();
    let n = x.len();
    let d = x[0].len();
    let grow = GrowParams {
        max_depth: params.max_depth,
        min_leaf: params.min_leaf,
        features_per_split: params.resolved_features_per_split(d),
    };

    let built: Vec<(RegressionTree, Vec<f64>)> = (0..params.n_trees)
        .into_par_iter()
        .map(|tree_idx| {
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
            rng.set_stream(tree_idx as u64);
            let sample: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
            let mut importance = vec![0.0; d];
            let tree = RegressionTree::fit(&x, &y, sample, &grow, &mut rng, &mut importance);
            (tree, importance)
        })
        .collect();

    let mut totals = vec![0.0; d];
    let mut trees = Vec::with_capacity(built.len());
    for (tree, importance) in built {
        for (t, i) in totals.iter_mut().zip(&importance) {
            *t += i;
        }
        trees.push(tree);
    }
    let total: f64 = totals.iter().sum();
    let feature_importances = if total > 0.0 {
        totals.iter().map(|t| t / total).collect()
    } else {
        vec![1.0 / d as f64; d]
    };

    Ok(Forest {
        format: FOREST_FORMAT.to_string(),
        variant,
        params: params.clone(),
        feature_names: feature_names(variant).iter().map(|s| s.to_string()).collect(),
        feature_importances,
        trees,
    })
}

/// Result of the holdout protocol: metrics from the held-out split, plus a
/// final model retrained on all labeled rows.
#[derive(Clone, Debug)]
pub struct TrainEvalOutcome {
    pub forest: Forest,
    pub holdout_size: usize,
    /// AUC on the held-out rows with binarized labels; absent when the
    /// holdout ends up single-class or empty.
    pub holdout_auc: Option<f64>,
    pub holdout_pr: Vec<PrPoint>,
}

/// Hold out `holdout_fraction` of the rows, train on the rest, evaluate on
/// the holdout, then retrain on all rows before cohort-wide scoring.
pub fn train_with_holdout(
    rows: &[(FeatureVector, TrainingLabel)],
    variant: ModelVariant,
    params: &ForestParams,
    holdout_fraction: f64,
) -> Result<TrainEvalOutcome> {
    assert!(
        (0.0..1.0).contains(&holdout_fraction),
        "holdout fraction must be in [0, 1)"
    );
    let n = rows.len();
    let n_test = ((n as f64) * holdout_fraction).floor() as usize;

    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(HOLDOUT_STREAM);
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        order.swap(i, j);
    }
    let (test_idx, train_idx) = order.split_at(n_test);

    let train_rows: Vec<(FeatureVector, TrainingLabel)> =
        train_idx.iter().map(|&i| rows[i].clone()).collect();
    let eval_model = train_forest(&train_rows, variant, params)?;

    let mut holdout_auc = None;
    let mut holdout_pr = Vec::new();
    if !test_idx.is_empty() {
        let scores: Vec<f64> = test_idx
            .iter()
            .map(|&i| eval_model.predict(&rows[i].0))
            .collect::<Result<_>>()?;
        let labels: Vec<TrainingLabel> = test_idx.iter().map(|&i| rows[i].1).collect();
        let binary = binarize_labels(&labels);
        match evaluate_auc(&scores, &binary) {
            Ok(auc) => {
                holdout_auc = Some(auc);
                holdout_pr = precision_recall_points(&scores, &binary);
            }
            Err(Error::SingleClass) => {}
            Err(e) => return Err(e),
        }
    }

    let forest = train_forest(rows, variant, params)?;
    Ok(TrainEvalOutcome {
        forest,
        holdout_size: n_test,
        holdout_auc,
        holdout_pr,
    })
}
