//! Entropy functionals, information gain and the per-attribute weight vector.
//!
//! All logarithms are base 2. Gains feed the weight
//! `lambda_i = g_i * exp(g_i) / sum_j g_j`, which drives every weighted
//! distance downstream.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::{BinMatrix, Label};
use crate::error::{Error, Result};

const SUM_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntropyKind {
    Shannon,
    Renyi,
    Tsallis,
    /// Shannon entropy of add-one smoothed (maximum-entropy) estimates.
    Maxent,
}

impl FromStr for EntropyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "shannon" => Ok(Self::Shannon),
            "renyi" => Ok(Self::Renyi),
            "tsallis" => Ok(Self::Tsallis),
            "maxent" => Ok(Self::Maxent),
            other => Err(Error::Config(format!(
                "unknown entropy '{other}', expected shannon, renyi, tsallis or maxent"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropySpec {
    pub kind: EntropyKind,
    /// Order for Rényi and Tsallis; ignored otherwise.
    pub alpha: f64,
}

impl EntropySpec {
    pub const DEFAULT_ALPHA: f64 = 2.0;

    pub fn new(kind: EntropyKind, alpha: f64) -> Result<Self> {
        let spec = Self { kind, alpha };
        spec.validate()?;
        Ok(spec)
    }

    pub fn shannon() -> Self {
        Self { kind: EntropyKind::Shannon, alpha: Self::DEFAULT_ALPHA }
    }

    pub fn maxent() -> Self {
        Self { kind: EntropyKind::Maxent, alpha: Self::DEFAULT_ALPHA }
    }

    pub fn renyi(alpha: f64) -> Result<Self> {
        Self::new(EntropyKind::Renyi, alpha)
    }

    pub fn tsallis(alpha: f64) -> Result<Self> {
        Self::new(EntropyKind::Tsallis, alpha)
    }

    pub fn validate(&self) -> Result<()> {
        if matches!(self.kind, EntropyKind::Renyi | EntropyKind::Tsallis)
            && !(self.alpha > 0.0 && self.alpha != 1.0 && self.alpha.is_finite())
        {
            return Err(Error::InvalidAlpha(self.alpha));
        }
        Ok(())
    }
}

fn check_distribution(p: &[f64]) -> Result<()> {
    if p.is_empty() {
        return Err(Error::InvalidDistribution("empty".into()));
    }
    if let Some(v) = p.iter().find(|v| !v.is_finite() || **v < 0.0) {
        return Err(Error::InvalidDistribution(format!("entry {v} is not a finite non-negative number")));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::InvalidDistribution(format!("entries sum to {sum}")));
    }
    Ok(())
}

fn shannon(p: &[f64]) -> f64 {
    -p.iter().filter(|&&x| x > 0.0).map(|&x| x * x.log2()).sum::<f64>()
}

fn power_sum(p: &[f64], alpha: f64) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| x.powf(alpha)).sum()
}

/// Entropy functional on already-normalized probabilities. No smoothing is
/// possible without counts, so `Maxent` evaluates Shannon on `p` as given.
fn functional(p: &[f64], spec: &EntropySpec) -> f64 {
    let h = match spec.kind {
        EntropyKind::Shannon | EntropyKind::Maxent => shannon(p),
        EntropyKind::Renyi => power_sum(p, spec.alpha).log2() / (1.0 - spec.alpha),
        EntropyKind::Tsallis => (1.0 - power_sum(p, spec.alpha)) / (spec.alpha - 1.0),
    };
    // Clears -0.0 and round-off below zero for near-deterministic inputs.
    h.max(0.0)
}

/// Entropy of a probability vector.
pub fn entropy(p: &[f64], spec: &EntropySpec) -> Result<f64> {
    spec.validate()?;
    check_distribution(p)?;
    Ok(functional(p, spec))
}

/// Entropy of an empirical distribution given by counts over `counts.len()`
/// outcomes. `Maxent` applies add-one smoothing over all outcomes first.
pub fn entropy_of_counts(counts: &[usize], spec: &EntropySpec) -> f64 {
    let total: usize = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let p: Vec<f64> = match spec.kind {
        EntropyKind::Maxent => {
            let denom = (total + counts.len()) as f64;
            counts.iter().map(|&c| (c + 1) as f64 / denom).collect()
        }
        _ => counts.iter().map(|&c| c as f64 / total as f64).collect(),
    };
    functional(&p, spec)
}

fn class_counts(labels: impl Iterator<Item = Label>) -> [usize; 2] {
    let mut c = [0usize; 2];
    for l in labels {
        c[(l == Label::Negative) as usize] += 1;
    }
    c
}

/// Per-bin class counts: `table[bin] = [positives, negatives]`.
fn contingency(labels: &[Label], bins: &[usize]) -> Vec<[usize; 2]> {
    let width = bins.iter().copied().max().map_or(0, |m| m + 1);
    let mut table = vec![[0usize; 2]; width];
    for (&l, &b) in labels.iter().zip(bins) {
        table[b][(l == Label::Negative) as usize] += 1;
    }
    table
}

fn check_lengths(labels: &[Label], bins: &[usize]) -> Result<()> {
    if labels.len() != bins.len() {
        return Err(Error::LengthMismatch { left: labels.len(), right: bins.len() });
    }
    if labels.is_empty() {
        return Err(Error::Config("conditional entropy of an empty sample".into()));
    }
    Ok(())
}

/// Class entropy after partitioning by attribute bin, weighted by partition size.
pub fn conditional_entropy(labels: &[Label], bins: &[usize], spec: &EntropySpec) -> Result<f64> {
    spec.validate()?;
    check_lengths(labels, bins)?;
    let n = labels.len() as f64;
    Ok(contingency(labels, bins)
        .iter()
        .filter(|cell| cell[0] + cell[1] > 0)
        .map(|cell| (cell[0] + cell[1]) as f64 / n * entropy_of_counts(cell, spec))
        .sum())
}

/// `E(S) - E(S|A)` without clamping.
pub fn raw_gain(labels: &[Label], bins: &[usize], spec: &EntropySpec) -> Result<f64> {
    let cond = conditional_entropy(labels, bins, spec)?;
    let total = entropy_of_counts(&class_counts(labels.iter().copied()), spec);
    Ok(total - cond)
}

/// Information gain, clamped at zero. For Shannon this is the mutual
/// information between class and attribute.
pub fn gain(labels: &[Label], bins: &[usize], spec: &EntropySpec) -> Result<f64> {
    Ok(raw_gain(labels, bins, spec)?.max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightNormalization {
    /// Denominator is the plain gain sum.
    #[default]
    Literal,
    /// Weights rescaled to sum to one.
    Normalized,
}

/// Per-attribute distance weights and the gains they came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureWeights {
    pub lambda: Vec<f64>,
    pub gains: Vec<f64>,
}

impl FeatureWeights {
    /// All-ones weights: plain Euclidean distance.
    pub fn unit(n_cols: usize) -> Self {
        Self { lambda: vec![1.0; n_cols], gains: vec![0.0; n_cols] }
    }

    pub fn from_lambda(lambda: Vec<f64>) -> Self {
        let n = lambda.len();
        Self { lambda, gains: vec![0.0; n] }
    }

    /// Applies the exponential gain weighting to precomputed gains.
    pub fn from_gains(gains: Vec<f64>, normalization: WeightNormalization) -> Self {
        let n = gains.len();
        let sum: f64 = gains.iter().sum();
        let lambda = if sum > 0.0 {
            let raw: Vec<f64> = gains.iter().map(|&g| g * g.exp() / sum).collect();
            match normalization {
                WeightNormalization::Literal => raw,
                WeightNormalization::Normalized => {
                    let total: f64 = raw.iter().sum();
                    raw.iter().map(|w| w / total).collect()
                }
            }
        } else {
            vec![1.0 / n as f64; n]
        };
        Self { lambda, gains }
    }

    pub fn len(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda.is_empty()
    }
}

/// Gains of every discretized column against the labels, turned into weights.
pub fn feature_weights(
    bins: &BinMatrix,
    labels: &[Label],
    spec: &EntropySpec,
    normalization: WeightNormalization,
) -> Result<FeatureWeights> {
    spec.validate()?;
    if bins.n_cols() == 0 {
        return Err(Error::Config("feature weights need at least one attribute".into()));
    }
    if bins.n_rows() != labels.len() {
        return Err(Error::LengthMismatch { left: bins.n_rows(), right: labels.len() });
    }
    let counts = class_counts(labels.iter().copied());
    if counts[0] == 0 {
        return Err(Error::NoMinorityClass);
    }
    if counts[1] == 0 {
        return Err(Error::NoMajorityClass);
    }
    let gains = (0..bins.n_cols())
        .map(|j| gain(labels, &bins.column(j), spec))
        .collect::<Result<Vec<_>>>()?;
    Ok(FeatureWeights::from_gains(gains, normalization))
}
