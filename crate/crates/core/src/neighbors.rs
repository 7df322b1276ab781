//! Attribute-weighted nearest-neighbor machinery: the distance itself,
//! neighbor queries with optional cluster-mean pre-selection, leave-one-out
//! choice of k, and the 1NN classifier used for evaluation.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::cluster::ClusterModel;
use crate::dataset::{Dataset, Label, Matrix};
use crate::entropy::FeatureWeights;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::metrics::{confusion, metric_set};

/// Guard added to distances in inverse-distance voting.
pub const VOTE_EPSILON: f64 = 1e-12;
pub const DEFAULT_K_MAX: usize = 25;

/// `sqrt(sum_i w_i (x_i - y_i)^2)`; callers guarantee equal lengths.
#[inline]
pub fn weighted_distance_unchecked(x: &[f64], y: &[f64], w: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .zip(w)
        .map(|((a, b), wi)| wi * (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

pub fn weighted_distance(x: &[f64], y: &[f64], w: &FeatureWeights) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { left: x.len(), right: y.len() });
    }
    if w.len() != x.len() {
        return Err(Error::LengthMismatch { left: w.len(), right: x.len() });
    }
    Ok(weighted_distance_unchecked(x, y, &w.lambda))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KSelection {
    Fixed(usize),
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LoocvScoring {
    #[default]
    Accuracy,
    FValue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnConfig {
    pub k: KSelection,
    /// `None` means `min(25, n_minority - 1)`.
    pub k_max: Option<usize>,
    pub weights: FeatureWeights,
    pub use_cluster_preselect: bool,
    pub scoring: LoocvScoring,
}

impl KnnConfig {
    pub fn new(weights: FeatureWeights) -> Self {
        Self {
            k: KSelection::Auto,
            k_max: None,
            weights,
            use_cluster_preselect: true,
            scoring: LoocvScoring::Accuracy,
        }
    }

    pub fn resolved_k_max(&self, n_minority: usize) -> usize {
        self.k_max.unwrap_or_else(|| DEFAULT_K_MAX.min(n_minority.saturating_sub(1)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub index: usize,
    pub distance: f64,
}

/// Ascending by distance, ties by row index.
pub type NeighborList = Vec<Neighbor>;

fn by_distance_then_index(a: &Neighbor, b: &Neighbor) -> Ordering {
    a.distance
        .partial_cmp(&b.distance)
        .unwrap_or(Ordering::Equal)
        .then(a.index.cmp(&b.index))
}

/// Cluster means with member rows expressed as indices into the query matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Preselector {
    pub means: Vec<Vec<f64>>,
    pub members: Vec<Vec<usize>>,
}

impl Preselector {
    /// `row_ids[r]` is the matrix row of the clustered row `r`.
    pub fn from_model(model: &ClusterModel, row_ids: &[usize]) -> Self {
        let members = (0..model.n_clusters())
            .map(|c| {
                let mut m: Vec<usize> = model.members(c).into_iter().map(|r| row_ids[r]).collect();
                m.sort_unstable();
                m
            })
            .collect();
        Self { means: model.means.clone(), members }
    }

    fn nearest_cluster(&self, query: &[f64], w: &[f64]) -> usize {
        let mut best = (f64::INFINITY, 0);
        for (c, mean) in self.means.iter().enumerate() {
            let d = weighted_distance_unchecked(query, mean, w);
            if d < best.0 {
                best = (d, c);
            }
        }
        best.1
    }
}

fn rank(query: &[f64], exclude: Option<usize>, matrix: &Matrix, pool: &[usize], k: usize, w: &[f64]) -> NeighborList {
    let mut all: Vec<Neighbor> = pool
        .iter()
        .filter(|&&i| Some(i) != exclude)
        .map(|&i| Neighbor { index: i, distance: weighted_distance_unchecked(query, matrix.row(i), w) })
        .collect();
    if all.len() > k {
        all.select_nth_unstable_by(k - 1, by_distance_then_index);
        all.truncate(k);
    }
    all.sort_by(by_distance_then_index);
    all
}

/// Up to `k` nearest rows of `pool` (indices into `matrix`), excluding `exclude`.
///
/// With a pre-selector, the pool is first restricted to the cluster whose mean
/// is nearest the query; if that leaves fewer than `k` candidates the full
/// pool is used instead.
pub fn nearest_neighbors(
    query: &[f64],
    exclude: Option<usize>,
    matrix: &Matrix,
    pool: &[usize],
    k: usize,
    weights: &FeatureWeights,
    preselect: Option<&Preselector>,
) -> Result<NeighborList> {
    if k == 0 {
        return Err(Error::InvalidK("k must be >= 1".into()));
    }
    if query.len() != matrix.n_cols() || weights.len() != matrix.n_cols() {
        return Err(Error::LengthMismatch { left: query.len(), right: matrix.n_cols() });
    }
    if !pool.iter().any(|&i| Some(i) != exclude) {
        return Err(Error::EmptyPool);
    }
    let w = &weights.lambda;
    if let Some(pre) = preselect {
        let c = pre.nearest_cluster(query, w);
        let restricted: Vec<usize> = pool
            .iter()
            .copied()
            .filter(|&i| Some(i) != exclude && pre.members[c].binary_search(&i).is_ok())
            .collect();
        if restricted.len() >= k {
            return Ok(rank(query, exclude, matrix, &restricted, k, w));
        }
    }
    Ok(rank(query, exclude, matrix, pool, k, w))
}

/// Inverse-distance weighted vote over the first `k` neighbors; a tied vote
/// goes to the nearest neighbor's label.
pub fn weighted_vote(neighbors: &[Neighbor], labels: &[Label], k: usize) -> Label {
    let mut score = [0.0f64; 2];
    for n in neighbors.iter().take(k) {
        score[(labels[n.index] == Label::Negative) as usize] += 1.0 / (n.distance + VOTE_EPSILON);
    }
    match score[0].partial_cmp(&score[1]) {
        Some(Ordering::Greater) => Label::Positive,
        Some(Ordering::Less) => Label::Negative,
        _ => labels[neighbors[0].index],
    }
}

/// Leave-one-out accuracy (or F-value) for every `k` in `1..=k_max`.
pub fn loocv_scores(d: &Dataset, cfg: &KnnConfig, exec: Exec) -> Result<Vec<f64>> {
    if d.n_rows() < 3 {
        return Err(Error::Config(format!("leave-one-out needs >= 3 rows, got {}", d.n_rows())));
    }
    d.require_both_classes()?;
    let k_max = cfg.resolved_k_max(d.count(Label::Positive));
    if k_max < 1 {
        return Err(Error::InvalidK(format!("k_max must be >= 1, got {k_max}")));
    }
    let k_max = k_max.min(d.n_rows() - 1);
    let pool: Vec<usize> = (0..d.n_rows()).collect();
    let lists = exec.try_map_range(d.n_rows(), |i| {
        nearest_neighbors(d.row(i), Some(i), d.features(), &pool, k_max, &cfg.weights, None)
    })?;
    let labels = d.labels();
    let scores = (1..=k_max)
        .map(|k| {
            let predicted: Vec<Label> = lists.iter().map(|l| weighted_vote(l, labels, k)).collect();
            match cfg.scoring {
                LoocvScoring::Accuracy => {
                    predicted.iter().zip(labels).filter(|(p, a)| p == a).count() as f64 / labels.len() as f64
                }
                LoocvScoring::FValue => {
                    let m = confusion(labels, &predicted).expect("equal lengths");
                    metric_set(&m, 1.0).f_value.unwrap_or(0.0)
                }
            }
        })
        .collect();
    Ok(scores)
}

/// Best-scoring `k`, smallest on ties.
pub fn select_k_loocv(d: &Dataset, cfg: &KnnConfig, exec: Exec) -> Result<usize> {
    let scores = loocv_scores(d, cfg, exec)?;
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate() {
        if s > scores[best] {
            best = i;
        }
    }
    Ok(best + 1)
}

/// Label of the nearest training row for every test row.
pub fn classify_1nn(train: &Dataset, test: &Matrix, weights: &FeatureWeights, exec: Exec) -> Result<Vec<Label>> {
    if train.n_rows() == 0 {
        return Err(Error::EmptyPool);
    }
    if test.n_cols() != train.n_cols() || weights.len() != train.n_cols() {
        return Err(Error::LengthMismatch { left: test.n_cols(), right: train.n_cols() });
    }
    let w = &weights.lambda;
    let feats = train.features();
    Ok(exec.map_range(test.n_rows(), |t| {
        let q = test.row(t);
        let mut best = (f64::INFINITY, 0usize);
        for i in 0..feats.n_rows() {
            let d = weighted_distance_unchecked(q, feats.row(i), w);
            if d < best.0 {
                best = (d, i);
            }
        }
        train.labels()[best.1]
    }))
}
