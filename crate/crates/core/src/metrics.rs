//! Confusion matrix and the derived evaluation measures.
//!
//! AUC here is the single-operating-point value `(1 + TPR - FPR) / 2`, not a
//! ranking AUC integrated over score thresholds. Metrics whose denominator is
//! zero are `None` rather than silently zero.

use serde::{Deserialize, Serialize};

use crate::dataset::Label;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub fp: usize,
    pub tn: usize,
}

impl ConfusionMatrix {
    pub fn new(tp: usize, fn_: usize, fp: usize, tn: usize) -> Self {
        Self { tp, fn_, fp, tn }
    }

    pub fn actual_positives(&self) -> usize {
        self.tp + self.fn_
    }

    pub fn actual_negatives(&self) -> usize {
        self.fp + self.tn
    }

    /// The matrix obtained by flipping every predicted label.
    pub fn with_predictions_flipped(&self) -> Self {
        Self { tp: self.fn_, fn_: self.tp, fp: self.tn, tn: self.fp }
    }

    pub fn tp_rate(&self) -> Option<f64> {
        ratio(self.tp, self.actual_positives())
    }

    pub fn fp_rate(&self) -> Option<f64> {
        ratio(self.fp, self.actual_negatives())
    }
}

impl std::ops::Add for ConfusionMatrix {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Self { tp: self.tp + o.tp, fn_: self.fn_ + o.fn_, fp: self.fp + o.fp, tn: self.tn + o.tn }
    }
}

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

pub fn confusion(actual: &[Label], predicted: &[Label]) -> Result<ConfusionMatrix> {
    if actual.len() != predicted.len() {
        return Err(Error::LengthMismatch { left: actual.len(), right: predicted.len() });
    }
    let mut m = ConfusionMatrix::default();
    for (a, p) in actual.iter().zip(predicted) {
        match (a, p) {
            (Label::Positive, Label::Positive) => m.tp += 1,
            (Label::Positive, Label::Negative) => m.fn_ += 1,
            (Label::Negative, Label::Positive) => m.fp += 1,
            (Label::Negative, Label::Negative) => m.tn += 1,
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSet {
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f_value: Option<f64>,
    pub auc: Option<f64>,
    pub beta: f64,
}

/// Precision, recall, F-value and single-point AUC.
///
/// The F-value is `(1 + b^2) R P / (b^2 R + P)`, with the `b^2` factor on
/// recall in the denominator; for `b = 1` it is the harmonic mean.
pub fn metric_set(m: &ConfusionMatrix, beta: f64) -> MetricSet {
    let precision = ratio(m.tp, m.tp + m.fp);
    let recall = ratio(m.tp, m.tp + m.fn_);
    let b2 = beta * beta;
    let f_value = match (precision, recall) {
        (Some(p), Some(r)) => {
            let den = b2 * r + p;
            Some(if den > 0.0 { (1.0 + b2) * r * p / den } else { 0.0 })
        }
        _ => None,
    };
    let auc = match (m.tp_rate(), m.fp_rate()) {
        (Some(tpr), Some(fpr)) => Some((1.0 + tpr - fpr) / 2.0),
        _ => None,
    };
    MetricSet { precision, recall, f_value, auc, beta }
}
