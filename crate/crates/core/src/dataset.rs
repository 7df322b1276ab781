//! Core data model: dense feature matrices, two-class labels, imbalance
//! statistics and equal-width discretization.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Two-class label. Positive is always the minority class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Positive,
    Negative,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Positive => "positive",
            Label::Negative => "negative",
        }
    }

    pub fn flipped(self) -> Label {
        match self {
            Label::Positive => Label::Negative,
            Label::Negative => Label::Positive,
        }
    }
}

/// Row-major dense matrix of finite reals.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    data: Vec<f64>,
    n_cols: usize,
}

impl Matrix {
    /// Builds a matrix from rows, rejecting ragged or non-finite input.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R], n_cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * n_cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n_cols {
                return Err(Error::RowArity {
                    row: i,
                    expected: n_cols,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_flat(data, n_cols)
    }

    pub fn from_flat(data: Vec<f64>, n_cols: usize) -> Result<Self> {
        if n_cols == 0 {
            if !data.is_empty() {
                return Err(Error::Config("zero columns with non-empty data".into()));
            }
        } else if !data.len().is_multiple_of(n_cols) {
            return Err(Error::RowArity {
                row: data.len() / n_cols,
                expected: n_cols,
                found: data.len() % n_cols,
            });
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / n_cols,
                column: pos % n_cols,
            });
        }
        Ok(Self { data, n_cols })
    }

    pub fn empty(n_cols: usize) -> Self {
        Self {
            data: Vec::new(),
            n_cols,
        }
    }

    #[inline]
    pub fn n_rows(&self) -> usize {
        self.data.len().checked_div(self.n_cols).unwrap_or(0)
    }

    #[inline]
    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.n_cols.max(1))
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        self.rows().map(move |r| r[j])
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    /// New matrix holding the given rows, in the given order.
    pub fn select(&self, indices: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(indices.len() * self.n_cols);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        Matrix {
            data,
            n_cols: self.n_cols,
        }
    }

    pub(crate) fn push_row(&mut self, row: &[f64]) {
        debug_assert_eq!(row.len(), self.n_cols);
        self.data.extend_from_slice(row);
    }
}

/// Feature matrix plus per-row labels and attribute names.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Matrix,
    labels: Vec<Label>,
    attribute_names: Vec<String>,
}

impl Dataset {
    pub fn new(features: Matrix, labels: Vec<Label>, attribute_names: Vec<String>) -> Result<Self> {
        if labels.len() != features.n_rows() {
            return Err(Error::LengthMismatch {
                left: labels.len(),
                right: features.n_rows(),
            });
        }
        if attribute_names.len() != features.n_cols() {
            return Err(Error::LengthMismatch {
                left: attribute_names.len(),
                right: features.n_cols(),
            });
        }
        Ok(Self {
            features,
            labels,
            attribute_names,
        })
    }

    /// Convenience constructor with generated attribute names `a0, a1, ...`.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R], labels: Vec<Label>) -> Result<Self> {
        let n_cols = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let features = Matrix::from_rows(rows, n_cols)?;
        let names = (0..n_cols).map(|j| format!("a{j}")).collect();
        Self::new(features, labels, names)
    }

    pub fn features(&self) -> &Matrix {
        &self.features
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn attribute_names(&self) -> &[String] {
        &self.attribute_names
    }

    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    pub fn n_cols(&self) -> usize {
        self.features.n_cols()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.features.row(i)
    }

    pub fn indices_of(&self, label: Label) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter_map(|(i, &l)| (l == label).then_some(i))
            .collect()
    }

    pub fn count(&self, label: Label) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }

    /// Subset of rows, in the given order.
    pub fn select(&self, indices: &[usize]) -> Dataset {
        Dataset {
            features: self.features.select(indices),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            attribute_names: self.attribute_names.clone(),
        }
    }

    /// Appends rows with a shared label.
    pub(crate) fn extend_rows(&mut self, rows: &Matrix, label: Label) {
        for r in rows.rows().take(rows.n_rows()) {
            self.features.push_row(r);
            self.labels.push(label);
        }
    }

    pub(crate) fn require_both_classes(&self) -> Result<()> {
        if self.count(Label::Positive) == 0 {
            return Err(Error::NoMinorityClass);
        }
        if self.count(Label::Negative) == 0 {
            return Err(Error::NoMajorityClass);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImbalanceStats {
    pub n_positive: usize,
    pub n_negative: usize,
    pub imbalance_ratio: f64,
}

/// Counts per class and the negative/positive ratio.
pub fn imbalance_stats(d: &Dataset) -> Result<ImbalanceStats> {
    let n_positive = d.count(Label::Positive);
    if n_positive == 0 {
        return Err(Error::NoMinorityClass);
    }
    let n_negative = d.n_rows() - n_positive;
    Ok(ImbalanceStats {
        n_positive,
        n_negative,
        imbalance_ratio: n_negative as f64 / n_positive as f64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscretizationPolicy {
    pub n_bins: usize,
}

impl Default for DiscretizationPolicy {
    fn default() -> Self {
        Self { n_bins: 10 }
    }
}

/// Integer bin matrix, row-major, same shape as the source features.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinMatrix {
    bins: Vec<usize>,
    n_cols: usize,
    n_bins: usize,
}

impl BinMatrix {
    pub fn n_rows(&self) -> usize {
        self.bins.len().checked_div(self.n_cols).unwrap_or(0)
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn n_bins(&self) -> usize {
        self.n_bins
    }

    pub fn get(&self, row: usize, col: usize) -> usize {
        self.bins[row * self.n_cols + col]
    }

    pub fn column(&self, j: usize) -> Vec<usize> {
        (0..self.n_rows()).map(|i| self.get(i, j)).collect()
    }
}

/// Per-column equal-width bin edges recorded from a fitting pass.
#[derive(Debug, Clone, PartialEq)]
pub struct Discretizer {
    mins: Vec<f64>,
    widths: Vec<f64>,
    n_bins: usize,
}

impl Discretizer {
    pub fn fit(features: &Matrix, policy: DiscretizationPolicy) -> Result<Self> {
        if policy.n_bins < 2 {
            return Err(Error::Config(format!(
                "n_bins must be >= 2, got {}",
                policy.n_bins
            )));
        }
        let n_cols = features.n_cols();
        let mut mins = vec![f64::INFINITY; n_cols];
        let mut maxs = vec![f64::NEG_INFINITY; n_cols];
        for (i, row) in features.rows().take(features.n_rows()).enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFinite { row: i, column: j });
                }
                mins[j] = mins[j].min(v);
                maxs[j] = maxs[j].max(v);
            }
        }
        let widths = mins
            .iter()
            .zip(&maxs)
            .map(|(&lo, &hi)| {
                if hi > lo {
                    (hi - lo) / policy.n_bins as f64
                } else {
                    0.0
                }
            })
            .collect();
        Ok(Self {
            mins,
            widths,
            n_bins: policy.n_bins,
        })
    }

    pub fn n_bins(&self) -> usize {
        self.n_bins
    }

    #[inline]
    pub fn bin(&self, col: usize, value: f64) -> usize {
        let w = self.widths[col];
        if w == 0.0 {
            return 0;
        }
        let b = ((value - self.mins[col]) / w).floor();
        if b <= 0.0 {
            0
        } else {
            (b as usize).min(self.n_bins - 1)
        }
    }

    /// Midpoint of a bin in the original units of `col`.
    pub fn bin_center(&self, col: usize, bin: usize) -> f64 {
        self.mins[col] + (bin as f64 + 0.5) * self.widths[col]
    }

    pub fn transform(&self, features: &Matrix) -> Result<BinMatrix> {
        if features.n_cols() != self.mins.len() {
            return Err(Error::LengthMismatch {
                left: features.n_cols(),
                right: self.mins.len(),
            });
        }
        let mut bins = Vec::with_capacity(features.as_flat().len());
        for (i, row) in features.rows().take(features.n_rows()).enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFinite { row: i, column: j });
                }
                bins.push(self.bin(j, v));
            }
        }
        Ok(BinMatrix {
            bins,
            n_cols: features.n_cols(),
            n_bins: self.n_bins,
        })
    }
}

/// Equal-width binning of every column over its own observed range.
pub fn discretize(d: &Dataset, policy: DiscretizationPolicy) -> Result<BinMatrix> {
    discretize_matrix(d.features(), policy)
}

pub fn discretize_matrix(features: &Matrix, policy: DiscretizationPolicy) -> Result<BinMatrix> {
    Discretizer::fit(features, policy)?.transform(features)
}
