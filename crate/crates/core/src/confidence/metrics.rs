//! Ranking metrics: ROC AUC via the rank statistic (tied scores get their
//! average rank), plus ROC and precision-recall curve points.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// ROC AUC of `scores` against binary `labels` (0 or 1). Equals the
/// Mann-Whitney U statistic normalized by the number of (positive,
/// negative) pairs; ties count half.
pub fn evaluate_auc(scores: &[f64], labels: &[u8]) -> Result<f64> {
    assert_eq!(scores.len(), labels.len(), "scores/labels length mismatch");
    let n_pos = labels.iter().filter(|&&l| l == 1).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::SingleClass);
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).unwrap());

    // average ranks over runs of equal scores, 1-based
    let mut ranks = vec![0.0; scores.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let avg = (i + 1 + j + 1) as f64 / 2.0;
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        i = j + 1;
    }

    let rank_sum_pos: f64 = labels
        .iter()
        .zip(&ranks)
        .filter(|(&l, _)| l == 1)
        .map(|(_, &r)| r)
        .sum();
    let u = rank_sum_pos - (n_pos * (n_pos + 1)) as f64 / 2.0;
    Ok(u / (n_pos as f64 * n_neg as f64))
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrPoint {
    pub threshold: f64,
    pub precision: f64,
    pub recall: f64,
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RocPoint {
    pub threshold: f64,
    pub fpr: f64,
    pub tpr: f64,
}

fn sorted_desc(scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).unwrap());
    order
}

/// Precision/recall at every distinct score threshold, highest first.
pub fn precision_recall_points(scores: &[f64], labels: &[u8]) -> Vec<PrPoint> {
    assert_eq!(scores.len(), labels.len());
    let n_pos = labels.iter().filter(|&&l| l == 1).count();
    if n_pos == 0 {
        return Vec::new();
    }
    let order = sorted_desc(scores);
    let mut points = Vec::new();
    let mut tp = 0usize;
    let mut fp = 0usize;
    for (k, &idx) in order.iter().enumerate() {
        if labels[idx] == 1 {
            tp += 1;
        } else {
            fp += 1;
        }
        let next_differs = k + 1 == order.len() || scores[order[k + 1]] != scores[idx];
        if next_differs {
            points.push(PrPoint {
                threshold: scores[idx],
                precision: tp as f64 / (tp + fp) as f64,
                recall: tp as f64 / n_pos as f64,
            });
        }
    }
    points
}

/// ROC curve points at every distinct threshold, highest first, ending at
/// (1, 1).
pub fn roc_points(scores: &[f64], labels: &[u8]) -> Vec<RocPoint> {
    assert_eq!(scores.len(), labels.len());
    let n_pos = labels.iter().filter(|&&l| l == 1).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Vec::new();
    }
    let order = sorted_desc(scores);
    let mut points = Vec::new();
    let mut tp = 0usize;
    let mut fp = 0usize;
    for (k, &idx) in order.iter().enumerate() {
        if labels[idx] == 1 {
            tp += 1;
        } else {
            fp += 1;
        }
        let next_differs = k + 1 == order.len() || scores[order[k + 1]] != scores[idx];
        if next_differs {
            points.push(RocPoint {
                threshold: scores[idx],
                fpr: fp as f64 / n_neg as f64,
                tpr: tp as f64 / n_pos as f64,
            });
        }
    }
    points
}


#[cfg(test)]
mod tests {
    use super::oracle::pairwise_auc;
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn perfect_separation_is_one() {
        let scores = [0.9, 0.8, 0.2, 0.1];
        let labels = [1, 1, 0, 0];
        assert_eq!(evaluate_auc(&scores, &labels).unwrap(), 1.0);
    }

    #[test]
    fn all_equal_scores_is_half() {
        let scores = [0.5; 6];
        let labels = [1, 0, 1, 0, 1, 0];
        assert_eq!(evaluate_auc(&scores, &labels).unwrap(), 0.5);
    }

    #[test]
    fn single_class_is_an_error() {
        assert!(matches!(
            evaluate_auc(&[0.1, 0.2], &[1, 1]),
            Err(Error::SingleClass)
        ));
    }

    #[test]
    fn matches_pairwise_oracle_on_random_rows() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..40 {
            let n = rng.gen_range(5..50);
            // quantized scores so ties actually occur
            let scores: Vec<f64> = (0..n).map(|_| rng.gen_range(0..20) as f64 / 20.0).collect();
            let mut labels: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2) as u8).collect();
            labels[0] = 1;
            labels[1] = 0;
            let fast = evaluate_auc(&scores, &labels).unwrap();
            let slow = pairwise_auc(&scores, &labels);
            assert!((fast - slow).abs() <= 1e-12, "{fast} vs {slow}");
        }
    }

    proptest! {
        #[test]
        fn invariant_under_strictly_increasing_transform(
            raw in prop::collection::vec(0i32..1000, 4..60),
        ) {
            // well-separated scores so the transforms cannot merge values
            let scores: Vec<f64> = raw.iter().map(|&v| v as f64 / 10.0).collect();
            let labels: Vec<u8> = (0..scores.len()).map(|i| (i % 2) as u8).collect();
            let base = evaluate_auc(&scores, &labels).unwrap();
            let shifted: Vec<f64> = scores.iter().map(|s| 3.0 * s + 7.0).collect();
            let curved: Vec<f64> = scores.iter().map(|s| s.exp()).collect();
            prop_assert_eq!(evaluate_auc(&shifted, &labels).unwrap(), base);
            prop_assert_eq!(evaluate_auc(&curved, &labels).unwrap(), base);
        }
    }

    #[test]
    fn pr_curve_on_perfect_ranking() {
        let scores = [0.9, 0.8, 0.2, 0.1];
        let labels = [1, 1, 0, 0];
        let points = precision_recall_points(&scores, &labels);
        assert_eq!(points.len(), 4);
        assert_eq!(points[1].precision, 1.0);
        assert_eq!(points[1].recall, 1.0);
        let last = points.last().unwrap();
        assert_eq!(last.precision, 0.5);
        assert_eq!(last.recall, 1.0);
    }

    #[test]
    fn roc_curve_ends_at_one_one() {
        let scores = [0.9, 0.4, 0.35, 0.1];
        let labels = [1, 0, 1, 0];
        let points = roc_points(&scores, &labels);
        let last = points.last().unwrap();
        assert_eq!((last.fpr, last.tpr), (1.0, 1.0));
        for pair in points.windows(2) {
            assert!(pair[0].fpr <= pair[1].fpr);
            assert!(pair[0].tpr <= pair[1].tpr);
        }
    }
}
