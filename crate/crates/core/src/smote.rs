//! Synthetic minority oversampling with entropy-derived attribute weights.
//!
//! The pipeline for one dataset:
//!
//! 1. attribute weights from the discretized data under the chosen entropy
//!    (unit weights for plain SMOTE);
//! 2. neighbor count `k`, fixed or chosen by leave-one-out;
//! 3. for each minority row, its `k` nearest minority rows under the weighted
//!    distance, optionally restricted to the nearest minority cluster;
//! 4. `N / 100` synthetic rows per minority row, each
//!    `seed + u * (neighbor - seed)` with `u ~ U[0, 1)`.
//!
//! Every minority row draws from its own ChaCha8 stream `(seed, row index)`,
//! so the output does not depend on how rows are scheduled.

use std::fmt;
use std::str::FromStr;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::cluster::{hac, label_by_cluster};
use crate::dataset::{discretize, Dataset, DiscretizationPolicy, Label, Matrix};
use crate::entropy::{feature_weights, EntropySpec, FeatureWeights, WeightNormalization};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::neighbors::{nearest_neighbors, select_k_loocv, KSelection, KnnConfig, LoocvScoring, Preselector};
use crate::rng::stream_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Amount {
    /// Percent, a positive multiple of 100.
    Percent(u32),
    /// `100 * floor((n_neg - n_pos) / n_pos)`, at least 100.
    Auto,
}

impl Amount {
    pub fn resolve(self, n_pos: usize, n_neg: usize) -> Result<u32> {
        match self {
            Amount::Percent(n) => {
                if n == 0 || n % 100 != 0 {
                    Err(Error::InvalidAmount(n))
                } else {
                    Ok(n)
                }
            }
            Amount::Auto => {
                let times = n_neg.saturating_sub(n_pos) / n_pos.max(1);
                Ok((times.max(1) * 100) as u32)
            }
        }
    }
}

impl FromStr for Amount {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Amount::Auto);
        }
        let n: u32 = s
            .trim_end_matches('%')
            .parse()
            .map_err(|_| Error::Config(format!("amount must be a multiple of 100 or 'auto', got '{s}'")))?;
        Amount::Percent(n).resolve(1, 1)?;
        Ok(Amount::Percent(n))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Smote,
    Mismote,
    Maesmote,
    Tesmote,
    Resmote,
}

impl Variant {
    pub const ALL: [Variant; 5] = [Variant::Smote, Variant::Mismote, Variant::Maesmote, Variant::Tesmote, Variant::Resmote];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Smote => "smote",
            Variant::Mismote => "mismote",
            Variant::Maesmote => "maesmote",
            Variant::Tesmote => "tesmote",
            Variant::Resmote => "resmote",
        }
    }

    pub fn entropy(self) -> Option<EntropySpec> {
        match self {
            Variant::Smote => None,
            Variant::Mismote => Some(EntropySpec::shannon()),
            Variant::Maesmote => Some(EntropySpec::maxent()),
            Variant::Tesmote => Some(EntropySpec::tsallis(EntropySpec::DEFAULT_ALPHA).expect("valid order")),
            Variant::Resmote => Some(EntropySpec::renyi(EntropySpec::DEFAULT_ALPHA).expect("valid order")),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == lower)
            .ok_or_else(|| Error::UnknownMethod { given: s.to_string(), valid: Variant::ALL.iter().map(|v| v.name()).collect() })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoteConfig {
    pub amount: Amount,
    pub k: KSelection,
    /// Upper bound for leave-one-out selection; `None` is `min(25, n_pos - 1)`.
    pub k_max: Option<usize>,
    /// `None` means unit weights (plain SMOTE).
    pub entropy: Option<EntropySpec>,
    pub seed: u64,
    pub discretization: DiscretizationPolicy,
    pub normalization: WeightNormalization,
    pub loocv_scoring: LoocvScoring,
    /// Restrict neighbor search to the nearest minority cluster.
    pub preselect: bool,
    pub preselect_clusters: usize,
    /// Draw an independent factor per coordinate instead of one per row.
    pub per_coordinate_u: bool,
}

impl SmoteConfig {
    pub fn for_variant(variant: Variant) -> Self {
        let entropy = variant.entropy();
        let enhanced = entropy.is_some();
        Self {
            amount: Amount::Auto,
            k: if enhanced { KSelection::Auto } else { KSelection::Fixed(5) },
            k_max: None,
            entropy,
            seed: 0,
            discretization: DiscretizationPolicy::default(),
            normalization: WeightNormalization::Literal,
            loocv_scoring: LoocvScoring::Accuracy,
            preselect: enhanced,
            preselect_clusters: 2,
            per_coordinate_u: false,
        }
    }
}

/// Configuration template for a named method.
pub fn make_variant(name: &str) -> Result<SmoteConfig> {
    Ok(SmoteConfig::for_variant(name.parse()?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed_row: usize,
    pub neighbor_row: usize,
    pub neighbor_rank: usize,
    pub u: f64,
    /// Per-coordinate factors when enabled; `u` is then the first of them.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coordinate_u: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticBatch {
    pub rows: Matrix,
    pub provenance: Vec<Provenance>,
}

impl SyntheticBatch {
    pub fn len(&self) -> usize {
        self.provenance.len()
    }

    pub fn is_empty(&self) -> bool {
        self.provenance.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Oversampled {
    /// Original rows in order, then the synthetic rows.
    pub balanced: Dataset,
    pub batch: SyntheticBatch,
    pub weights: FeatureWeights,
    pub amount: u32,
    pub k: usize,
}

/// Attribute weights for `d` under `entropy`, unit weights for `None`.
pub fn weights_for(d: &Dataset, entropy: Option<&EntropySpec>, policy: DiscretizationPolicy, normalization: WeightNormalization) -> Result<FeatureWeights> {
    match entropy {
        None => Ok(FeatureWeights::unit(d.n_cols())),
        Some(spec) => feature_weights(&discretize(d, policy)?, d.labels(), spec, normalization),
    }
}

pub fn oversample(d: &Dataset, cfg: &SmoteConfig, exec: Exec) -> Result<Oversampled> {
    d.require_both_classes()?;
    let minority = d.indices_of(Label::Positive);
    let n_pos = minority.len();
    if n_pos < 2 {
        return Err(Error::InsufficientMinority { needed: 2, found: n_pos });
    }
    let amount = cfg.amount.resolve(n_pos, d.n_rows() - n_pos)?;
    let per_row = (amount / 100) as usize;

    let weights = weights_for(d, cfg.entropy.as_ref(), cfg.discretization, cfg.normalization)?;

    let k = match cfg.k {
        KSelection::Fixed(0) => return Err(Error::InvalidK("k must be >= 1".into())),
        KSelection::Fixed(k) => k,
        KSelection::Auto => {
            let knn = KnnConfig { k: KSelection::Auto, k_max: cfg.k_max, weights: weights.clone(), use_cluster_preselect: false, scoring: cfg.loocv_scoring };
            select_k_loocv(d, &knn, exec)?
        }
    };
    let k_eff = k.min(n_pos - 1);

    let preselector = if cfg.preselect && cfg.preselect_clusters >= 2 && n_pos >= cfg.preselect_clusters {
        let sub = d.features().select(&minority);
        let model = hac(&sub, cfg.preselect_clusters, &FeatureWeights::unit(d.n_cols()), exec)?;
        Some(Preselector::from_model(&model, &minority))
    } else {
        None
    };

    let features = d.features();
    let per_seed = exec.try_map_range(n_pos, |m| -> Result<Vec<(Vec<f64>, Provenance)>> {
        let i = minority[m];
        let seed_row = features.row(i);
        let nbrs = nearest_neighbors(seed_row, Some(i), features, &minority, k_eff, &weights, preselector.as_ref())?;
        let mut rng = stream_rng(cfg.seed, i as u64);
        let mut out = Vec::with_capacity(per_row);
        for j in 0..per_row {
            let rank = if per_row <= nbrs.len() { j } else { rng.gen_range(0..nbrs.len()) };
            let nb = nbrs[rank].index;
            let nb_row = features.row(nb);
            let (row, u, coordinate_u) = if cfg.per_coordinate_u {
                let us: Vec<f64> = (0..seed_row.len()).map(|_| rng.gen::<f64>()).collect();
                let row = seed_row.iter().zip(nb_row).zip(&us).map(|((s, n), u)| s + u * (n - s)).collect();
                (row, us[0], Some(us))
            } else {
                let u: f64 = rng.gen();
                (seed_row.iter().zip(nb_row).map(|(s, n)| s + u * (n - s)).collect(), u, None)
            };
            out.push((row, Provenance { seed_row: i, neighbor_row: nb, neighbor_rank: rank, u, coordinate_u }));
        }
        Ok(out)
    })?;

    let mut rows = Matrix::empty(d.n_cols());
    let mut provenance = Vec::with_capacity(n_pos * per_row);
    for (row, p) in per_seed.into_iter().flatten() {
        rows.push_row(&row);
        provenance.push(p);
    }
    let mut balanced = d.clone();
    balanced.extend_rows(&rows, Label::Positive);
    Ok(Oversampled { balanced, batch: SyntheticBatch { rows, provenance }, weights, amount, k })
}

/// Labels rows by two-cluster agglomeration (smaller cluster positive), then oversamples.
pub fn oversample_unlabeled(features: Matrix, attribute_names: Vec<String>, cfg: &SmoteConfig, exec: Exec) -> Result<Oversampled> {
    let model = hac(&features, 2, &FeatureWeights::unit(features.n_cols()), exec)?;
    let labels = label_by_cluster(&model)?;
    let d = Dataset::new(features, labels, attribute_names)?;
    oversample(&d, cfg, exec)
}
