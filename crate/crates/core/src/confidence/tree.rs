//! A CART regression tree with axis-aligned splits and mean-valued leaves,
//! grown greedily on the MSE criterion.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Node {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        value: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegressionTree {
    /// Nodes with the root at index 0. Rows with `x[feature] <= threshold`
    /// go left.
    pub nodes: Vec<Node>,
}

pub struct GrowParams {
    pub max_depth: usize,
    pub min_leaf: usize,
    pub features_per_split: usize,
}

impl RegressionTree {
    /// Grow a tree on the sample given by `rows` (indices into `x`/`y`,
    /// typically a bootstrap sample). Candidate features are re-sampled at
    /// every node. Squared-error reductions are accumulated per feature
    /// into `importance`.
    pub fn fit(
        x: &[Vec<f64>],
        y: &[f64],
        rows: Vec<usize>,
        params: &GrowParams,
        rng: &mut ChaCha8Rng,
        importance: &mut [f64],
    ) -> Self {
        let mut tree = RegressionTree { nodes: Vec::new() };
        tree.grow(x, y, rows, 0, params, rng, importance);
        tree
    }

    #[allow(clippy::too_many_arguments)]
    fn grow(
        &mut self,
        x: &[Vec<f64>],
        y: &[f64],
        rows: Vec<usize>,
        depth: usize,
        params: &GrowParams,
        rng: &mut ChaCha8Rng,
        importance: &mut [f64],
    ) -> usize {
        let n = rows.len();
        let sum: f64 = rows.iter().map(|&i| y[i]).sum();
        let mean = sum / n as f64;
        let sse: f64 = rows.iter().map(|&i| (y[i] - mean).powi(2)).sum();

        let id = self.nodes.len();
        self.nodes.push(Node::Leaf { value: mean });

        if depth >= params.max_depth || n < 2 * params.min_leaf || sse <= 1e-12 {
            return id;
        }

        let Some((feature, threshold, reduction)) =
            best_split(x, y, &rows, params, rng, sse)
        else {
            return id;
        };

        importance[feature] += reduction;

        let (left_rows, right_rows): (Vec<usize>, Vec<usize>) =
            rows.into_iter().partition(|&i| x[i][feature] <= threshold);
        let left = self.grow(x, y, left_rows, depth + 1, params, rng, importance);
        let right = self.grow(x, y, right_rows, depth + 1, params, rng, importance);
        self.nodes[id] = Node::Split {
            feature,
            threshold,
            left,
            right,
        };
        id
    }

    pub fn predict(&self, row: &[f64]) -> f64 {
        let mut at = 0;
        loop {
            match self.nodes[at] {
                Node::Leaf { value } => return value,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if row[feature] <= threshold { left } else { right };
                }
            }
        }
    }
}

/// Find the (feature, threshold) pair with the largest SSE reduction among
/// `features_per_split` sampled features. Ties keep the first candidate in
/// ascending feature order, which makes the search order-deterministic.
fn best_split(
    x: &[Vec<f64>],
    y: &[f64],
    rows: &[usize],
    params: &GrowParams,
    rng: &mut ChaCha8Rng,
    parent_sse: f64,
) -> Option<(usize, f64, f64)> {
    let d = x[0].len();
    let m = params.features_per_split.clamp(1, d);
    let mut features = sample_without_replacement(rng, d, m);
    features.sort_unstable();

    let n = rows.len();
    let mut best: Option<(usize, f64, f64)> = None;

    for &feature in &features {
        let mut vals: Vec<(f64, f64)> = rows.iter().map(|&i| (x[i][feature], y[i])).collect();
        vals.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

        let total_sum: f64 = vals.iter().map(|(_, yi)| yi).sum();
        let mut left_sum = 0.0;
        let mut left_sq = 0.0;
        let total_sq: f64 = vals.iter().map(|(_, yi)| yi * yi).sum();

        for k in 1..n {
            let (xv, yv) = vals[k - 1];
            left_sum += yv;
            left_sq += yv * yv;
            if xv == vals[k].0 {
                continue;
            }
            if k < params.min_leaf || n - k < params.min_leaf {
                continue;
            }
            let right_sum = total_sum - left_sum;
            let right_sq = total_sq - left_sq;
            let left_sse = left_sq - left_sum * left_sum / k as f64;
            let right_sse = right_sq - right_sum * right_sum / (n - k) as f64;
            let reduction = parent_sse - (left_sse + right_sse);
            if reduction > best.map_or(1e-12, |(_, _, r)| r) {
                best = Some((feature, (xv + vals[k].0) / 2.0, reduction));
            }
        }
    }
    best
}

fn sample_without_replacement(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = rng.gen_range(i..n);
        pool.swap(i, j);
    }
    pool.truncate(k);
    pool
}
