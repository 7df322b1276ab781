//! Average-linkage agglomerative clustering under weighted Euclidean distance.
//!
//! Clusters occupy slots named by their smallest member row. Each step merges
//! the closest pair `(i, j)`, `i < j`, into slot `i`; ties go to the
//! lexicographically smallest `(i, j)`. Linkage distances are maintained with
//! the Lance–Williams update for UPGMA.

use crate::dataset::{Label, Matrix};
use crate::entropy::FeatureWeights;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::neighbors::weighted_distance_unchecked;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Merge {
    /// Surviving slot (smallest member row of the merged cluster).
    pub into: usize,
    pub absorbed: usize,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterModel {
    /// Cluster id per row, ids ordered by smallest member row.
    pub assignments: Vec<usize>,
    pub means: Vec<Vec<f64>>,
    pub merges: Vec<Merge>,
}

impl ClusterModel {
    pub fn n_clusters(&self) -> usize {
        self.means.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.n_clusters()];
        for &a in &self.assignments {
            sizes[a] += 1;
        }
        sizes
    }

    pub fn members(&self, cluster: usize) -> Vec<usize> {
        self.assignments
            .iter()
            .enumerate()
            .filter_map(|(i, &a)| (a == cluster).then_some(i))
            .collect()
    }
}

/// Bottom-up clustering cut when `k_clusters` clusters remain.
pub fn hac(features: &Matrix, k_clusters: usize, weights: &FeatureWeights, exec: Exec) -> Result<ClusterModel> {
    let n = features.n_rows();
    if k_clusters == 0 || k_clusters > n {
        return Err(Error::InvalidClusterCount { requested: k_clusters, rows: n });
    }
    if weights.len() != features.n_cols() {
        return Err(Error::LengthMismatch { left: weights.len(), right: features.n_cols() });
    }
    let w = &weights.lambda;

    // Full symmetric matrix, rows computed independently.
    let mut dist: Vec<f64> = exec
        .map_range(n, |i| {
            let xi = features.row(i);
            (0..n)
                .map(|j| weighted_distance_unchecked(xi, features.row(j), w))
                .collect::<Vec<_>>()
        })
        .into_iter()
        .flatten()
        .collect();

    let mut size = vec![1usize; n];
    let mut active: Vec<usize> = (0..n).collect();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut merges = Vec::with_capacity(n - k_clusters);

    while active.len() > k_clusters {
        let mut best = (f64::INFINITY, usize::MAX, usize::MAX);
        for (ai, &i) in active.iter().enumerate() {
            let row = &dist[i * n..(i + 1) * n];
            for &j in &active[ai + 1..] {
                let d = row[j];
                if d < best.0 {
                    best = (d, i, j);
                }
            }
        }
        let (d, i, j) = best;
        let (ni, nj) = (size[i] as f64, size[j] as f64);
        for &k in &active {
            if k == i || k == j {
                continue;
            }
            let updated = (ni * dist[i * n + k] + nj * dist[j * n + k]) / (ni + nj);
            dist[i * n + k] = updated;
            dist[k * n + i] = updated;
        }
        size[i] += size[j];
        parent[j] = i;
        active.retain(|&s| s != j);
        merges.push(Merge { into: i, absorbed: j, distance: d });
    }

    let find = |mut x: usize| {
        while parent[x] != x {
            x = parent[x];
        }
        x
    };
    let slot_to_id = |slot: usize| active.binary_search(&slot).expect("root slot is active");
    let assignments: Vec<usize> = (0..n).map(|r| slot_to_id(find(r))).collect();
    let means = cluster_means(features, &assignments, active.len());
    Ok(ClusterModel { assignments, means, merges })
}

pub fn cluster_means(features: &Matrix, assignments: &[usize], k: usize) -> Vec<Vec<f64>> {
    let mut sums = vec![vec![0.0; features.n_cols()]; k];
    let mut counts = vec![0usize; k];
    for (r, &c) in assignments.iter().enumerate() {
        counts[c] += 1;
        for (s, v) in sums[c].iter_mut().zip(features.row(r)) {
            *s += v;
        }
    }
    for (s, &c) in sums.iter_mut().zip(&counts) {
        for v in s.iter_mut() {
            *v /= c.max(1) as f64;
        }
    }
    sums
}

/// Smaller cluster positive; equal sizes make cluster 0 positive.
pub fn label_by_cluster(model: &ClusterModel) -> Result<Vec<Label>> {
    if model.n_clusters() != 2 {
        return Err(Error::InvalidClusterCount { requested: model.n_clusters(), rows: model.assignments.len() });
    }
    let sizes = model.sizes();
    let positive = if sizes[1] < sizes[0] { 1 } else { 0 };
    Ok(model
        .assignments
        .iter()
        .map(|&a| if a == positive { Label::Positive } else { Label::Negative })
        .collect())
}
