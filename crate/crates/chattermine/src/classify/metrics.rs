//! Evaluation: confusion matrix, per-class precision/recall/F1, macro
//! averages, and one-vs-rest AUROC with midrank tie handling.

use super::linear::{Label, LabelDistribution};
use super::ClassifyError;

/// Metrics for one class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassMetrics {
    pub label: Label,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// `None` when the class has no positives or no negatives in gold.
    pub auroc: Option<f64>,
    pub support: usize,
}

/// Full evaluation against gold labels.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    /// Classes in canonical order; the union of gold and predicted labels.
    pub labels: Vec<Label>,
    /// `confusion[gold][predicted]`; row sums equal class support.
    pub confusion: Vec<Vec<usize>>,
    pub per_class: Vec<ClassMetrics>,
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f1: f64,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Rank-based (Mann-Whitney) AUROC with midranks for ties.
///
/// Returns `None` when either class is empty. Numerically identical to the
/// pairwise count with ties worth one half.
pub fn auroc(scores: &[f64], positive: &[bool]) -> Option<f64> {
    assert_eq!(scores.len(), positive.len());
    let n_pos = positive.iter().filter(|&&p| p).count();
    let n_neg = positive.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return None;
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).unwrap());
    let mut rank_sum_pos = 0.0f64;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        // 1-based midrank shared by the tie group [i, j].
        let midrank = (i + 1 + j + 1) as f64 / 2.0;
        for &idx in &order[i..=j] {
            if positive[idx] {
                rank_sum_pos += midrank;
            }
        }
        i = j + 1;
    }
    let n_pos_f = n_pos as f64;
    Some((rank_sum_pos - n_pos_f * (n_pos_f + 1.0) / 2.0) / (n_pos_f * n_neg as f64))
}

/// Evaluate predicted distributions against gold labels.
pub fn evaluate(
    predictions: &[LabelDistribution],
    gold: &[Label],
) -> Result<EvalReport, ClassifyError> {
    if predictions.len() != gold.len() {
        return Err(ClassifyError::LengthMismatch {
            predictions: predictions.len(),
            gold: gold.len(),
        });
    }
    if gold.is_empty() {
        return Err(ClassifyError::EmptyEvaluation);
    }
    let predicted_labels: Vec<Label> = predictions.iter().map(LabelDistribution::argmax).collect();
    let labels: Vec<Label> = Label::ALL
        .into_iter()
        .filter(|l| gold.contains(l) || predicted_labels.contains(l))
        .collect();
    let index = |l: Label| labels.iter().position(|&x| x == l).unwrap();

    let mut confusion = vec![vec![0usize; labels.len()]; labels.len()];
    for (g, p) in gold.iter().zip(&predicted_labels) {
        confusion[index(*g)][index(*p)] += 1;
    }

    let mut per_class = Vec::with_capacity(labels.len());
    for (c, &label) in labels.iter().enumerate() {
        let tp = confusion[c][c];
        let support: usize = confusion[c].iter().sum();
        let predicted: usize = confusion.iter().map(|row| row[c]).sum();
        let precision = ratio(tp, predicted);
        let recall = ratio(tp, support);
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        let scores: Vec<f64> = predictions.iter().map(|d| d.score(label)).collect();
        let positive: Vec<bool> = gold.iter().map(|&g| g == label).collect();
        per_class.push(ClassMetrics {
            label,
            precision,
            recall,
            f1,
            auroc: auroc(&scores, &positive),
            support,
        });
    }

    let n = labels.len() as f64;
    Ok(EvalReport {
        macro_precision: per_class.iter().map(|m| m.precision).sum::<f64>() / n,
        macro_recall: per_class.iter().map(|m| m.recall).sum::<f64>() / n,
        macro_f1: per_class.iter().map(|m| m.f1).sum::<f64>() / n,
        labels,
        confusion,
        per_class,
    })
}
