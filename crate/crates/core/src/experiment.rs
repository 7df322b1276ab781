//! Cross-validated comparison of oversampling methods with a weighted 1NN.
//!
//! Every `(dataset, method, repetition, fold)` cell is an independent job
//! seeded from `(base_seed, dataset, method, repetition, fold)`. Fold
//! assignment depends only on `(base_seed, dataset, repetition)`, so all
//! methods see identical splits.

use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::dataset::{imbalance_stats, Dataset, Label};
use crate::entropy::FeatureWeights;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::keel::{read_raw, reduce_two_class, DataFormat, TwoClassMapping};
use crate::metrics::{confusion, metric_set, ConfusionMatrix, MetricSet};
use crate::neighbors::{classify_1nn, KSelection};
use crate::rng::{derive_seed, stream_rng, SeedPart};
use crate::smote::{oversample, Amount, SmoteConfig, Variant};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum EvalMethod {
    /// No resampling.
    Imbalanced,
    Oversample(Variant),
}

impl EvalMethod {
    pub fn name(self) -> &'static str {
        match self {
            EvalMethod::Imbalanced => "imbalanced",
            EvalMethod::Oversample(v) => v.name(),
        }
    }

    pub fn valid_names() -> Vec<&'static str> {
        std::iter::once("imbalanced").chain(Variant::ALL.iter().map(|v| v.name())).collect()
    }
}

impl fmt::Display for EvalMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EvalMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("imbalanced") {
            return Ok(EvalMethod::Imbalanced);
        }
        s.parse::<Variant>()
            .map(EvalMethod::Oversample)
            .map_err(|_| Error::UnknownMethod { given: s.to_string(), valid: Self::valid_names() })
    }
}

impl From<EvalMethod> for String {
    fn from(m: EvalMethod) -> String {
        m.name().to_string()
    }
}

impl TryFrom<String> for EvalMethod {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Protocol {
    /// Resample the training split of each fold only.
    #[default]
    InFold,
    /// Resample the whole dataset, then split.
    ResampleFirst,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    pub folds: usize,
    pub repetitions: usize,
    pub base_seed: u64,
    pub protocol: Protocol,
    /// Overrides for every oversampling method.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amount: Option<Amount>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<KSelection>,
}

impl Default for Settings {
    fn default() -> Self {
        Self { folds: 5, repetitions: 1, base_seed: 0, protocol: Protocol::InFold, amount: None, k: None }
    }
}

impl Settings {
    fn validate(&self) -> Result<()> {
        if self.folds < 2 {
            return Err(Error::Config(format!("folds must be >= 2, got {}", self.folds)));
        }
        if self.repetitions < 1 {
            return Err(Error::Config("repetitions must be >= 1".into()));
        }
        Ok(())
    }

    pub fn smote_config(&self, variant: Variant, seed: u64) -> SmoteConfig {
        let mut cfg = SmoteConfig::for_variant(variant);
        cfg.seed = seed;
        if let Some(a) = self.amount {
            cfg.amount = a;
        }
        if let Some(k) = self.k {
            cfg.k = k;
        }
        cfg
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSource {
    pub name: String,
    pub path: PathBuf,
    pub format: DataFormat,
    /// `None` infers the mapping (binary files only).
    pub mapping: Option<TwoClassMapping>,
}

impl DatasetSource {
    pub fn load(&self) -> Result<Dataset> {
        load_labeled(&self.path, self.format, self.mapping.as_ref()).map_err(|e| Error::Dataset { name: self.name.clone(), source: Box::new(e) })
    }
}

/// Reads a file and applies (or infers) the two-class mapping.
pub fn load_labeled(path: &Path, format: DataFormat, mapping: Option<&TwoClassMapping>) -> Result<Dataset> {
    let raw = read_raw(path, format)?;
    let mapping = match mapping {
        Some(m) => m.clone(),
        None => TwoClassMapping::infer(&raw)?,
    };
    reduce_two_class(&raw, &mapping)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPlan {
    pub datasets: Vec<DatasetSource>,
    pub methods: Vec<EvalMethod>,
    pub settings: Settings,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedDataset {
    pub name: String,
    pub data: Dataset,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub dataset: String,
    pub method: EvalMethod,
    pub repetition: usize,
    pub fold: usize,
    pub seed: u64,
    pub n_train: usize,
    pub n_test: usize,
    pub n_test_positive: usize,
    pub n_synthetic: usize,
    pub resolved_amount: Option<u32>,
    pub resolved_k: Option<usize>,
    pub weights: Vec<f64>,
    pub confusion: ConfusionMatrix,
    pub metrics: MetricSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub mean: Option<f64>,
    pub std: Option<f64>,
    pub n: usize,
    /// Cells where the metric was undefined, excluded from `mean`.
    pub undefined: usize,
}

impl Stat {
    pub fn from_values(values: impl IntoIterator<Item = Option<f64>>) -> Self {
        let mut defined = Vec::new();
        let mut undefined = 0;
        for v in values {
            match v {
                Some(x) => defined.push(x),
                None => undefined += 1,
            }
        }
        let n = defined.len();
        let mean = (n > 0).then(|| defined.iter().sum::<f64>() / n as f64);
        let std = mean.map(|m| {
            if n < 2 {
                0.0
            } else {
                (defined.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1) as f64).sqrt()
            }
        });
        Self { mean, std, n, undefined }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub dataset: String,
    pub method: EvalMethod,
    pub precision: Stat,
    pub recall: Stat,
    pub f_value: Stat,
    pub auc: Stat,
    pub pooled: ConfusionMatrix,
}

/// MAX / MIN / AVE of mean AUC over methods, for one dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub dataset: String,
    pub n_rows: usize,
    pub imbalance_ratio: f64,
    pub max: Option<f64>,
    pub min: Option<f64>,
    pub ave: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub version: String,
    pub settings: Settings,
    pub datasets: Vec<String>,
    pub methods: Vec<EvalMethod>,
    pub cells: Vec<CellResult>,
    pub aggregates: Vec<Aggregate>,
    pub summary: Vec<DatasetSummary>,
}

impl EvaluationReport {
    pub fn aggregate(&self, dataset: &str, method: EvalMethod) -> Option<&Aggregate> {
        self.aggregates.iter().find(|a| a.dataset == dataset && a.method == method)
    }
}

/// Fold id per row. Each class is shuffled and dealt round-robin, so each
/// fold's class counts differ from the ideal by less than one.
pub fn stratified_folds(labels: &[Label], folds: usize, seed: u64) -> Result<Vec<usize>> {
    if folds < 2 {
        return Err(Error::Config(format!("folds must be >= 2, got {folds}")));
    }
    let mut assignment = vec![0usize; labels.len()];
    let mut offset = 0;
    for (stream, label) in [Label::Positive, Label::Negative].into_iter().enumerate() {
        let mut idx: Vec<usize> = labels.iter().enumerate().filter_map(|(i, &l)| (l == label).then_some(i)).collect();
        if label == Label::Positive && idx.len() < folds {
            return Err(Error::FoldWithoutPositives { fold: idx.len(), positives: idx.len() });
        }
        idx.shuffle(&mut stream_rng(seed, stream as u64));
        for (pos, &i) in idx.iter().enumerate() {
            assignment[i] = (offset + pos) % folds;
        }
        offset = (offset + idx.len()) % folds;
    }
    Ok(assignment)
}

fn fold_seed(settings: &Settings, dataset: &str, repetition: usize) -> u64 {
    derive_seed(settings.base_seed, &[SeedPart::Text("folds"), SeedPart::Text(dataset), SeedPart::Index(repetition as u64)])
}

fn cell_seed(settings: &Settings, dataset: &str, method: EvalMethod, repetition: usize, fold: usize) -> u64 {
    derive_seed(
        settings.base_seed,
        &[SeedPart::Text(dataset), SeedPart::Text(method.name()), SeedPart::Index(repetition as u64), SeedPart::Index(fold as u64)],
    )
}

struct Prepared {
    train: Dataset,
    weights: FeatureWeights,
    n_synthetic: usize,
    amount: Option<u32>,
    k: Option<usize>,
}

fn prepare_training(train: &Dataset, method: EvalMethod, settings: &Settings, seed: u64, exec: Exec) -> Result<(Prepared, Vec<(usize, usize)>)> {
    match method {
        EvalMethod::Imbalanced => Ok((
            Prepared { weights: FeatureWeights::unit(train.n_cols()), train: train.clone(), n_synthetic: 0, amount: None, k: None },
            Vec::new(),
        )),
        EvalMethod::Oversample(v) => {
            let out = oversample(train, &settings.smote_config(v, seed), exec)?;
            let sources = out.batch.provenance.iter().map(|p| (p.seed_row, p.neighbor_row)).collect();
            Ok((
                Prepared { n_synthetic: out.batch.len(), train: out.balanced, weights: out.weights, amount: Some(out.amount), k: Some(out.k) },
                sources,
            ))
        }
    }
}

/// One cell of the grid, computed in isolation.
pub fn run_cell(ds: &NamedDataset, method: EvalMethod, settings: &Settings, repetition: usize, fold: usize, exec: Exec) -> Result<CellResult> {
    settings.validate()?;
    let seed = cell_seed(settings, &ds.name, method, repetition, fold);

    // The data that gets split: the original, or its resampled form.
    let (split_source, resampled) = match settings.protocol {
        Protocol::InFold => (ds.data.clone(), None),
        Protocol::ResampleFirst => {
            let whole_seed = derive_seed(settings.base_seed, &[SeedPart::Text(&ds.name), SeedPart::Text(method.name()), SeedPart::Index(repetition as u64)]);
            let (prep, _) = prepare_training(&ds.data, method, settings, whole_seed, exec)?;
            (prep.train.clone(), Some(prep))
        }
    };

    let assignment = stratified_folds(split_source.labels(), settings.folds, fold_seed(settings, &ds.name, repetition))?;
    let (train_idx, test_idx): (Vec<usize>, Vec<usize>) = (0..split_source.n_rows()).partition(|&i| assignment[i] != fold);
    let train = split_source.select(&train_idx);
    let test = split_source.select(&test_idx);

    let prepared = match resampled {
        None => {
            let (prep, sources) = prepare_training(&train, method, settings, seed, exec)?;
            let mut in_test = vec![false; split_source.n_rows()];
            for &t in &test_idx {
                in_test[t] = true;
            }
            for (s, n) in sources {
                for r in [train_idx[s], train_idx[n]] {
                    if in_test[r] {
                        return Err(Error::Leakage(r));
                    }
                }
            }
            prep
        }
        Some(whole) => Prepared {
            train,
            weights: whole.weights,
            n_synthetic: whole.n_synthetic,
            amount: whole.amount,
            k: whole.k,
        },
    };

    let predicted = classify_1nn(&prepared.train, test.features(), &prepared.weights, exec)?;
    let cm = confusion(test.labels(), &predicted)?;
    Ok(CellResult {
        dataset: ds.name.clone(),
        method,
        repetition,
        fold,
        seed,
        n_train: prepared.train.n_rows(),
        n_test: test.n_rows(),
        n_test_positive: test.count(Label::Positive),
        n_synthetic: prepared.n_synthetic,
        resolved_amount: prepared.amount,
        resolved_k: prepared.k,
        weights: prepared.weights.lambda,
        confusion: cm,
        metrics: metric_set(&cm, 1.0),
    })
}

/// Runs the full grid over in-memory datasets.
pub fn run_datasets(datasets: &[NamedDataset], methods: &[EvalMethod], settings: &Settings, exec: Exec) -> Result<EvaluationReport> {
    settings.validate()?;
    if datasets.is_empty() {
        return Err(Error::Config("no datasets".into()));
    }
    if methods.is_empty() {
        return Err(Error::Config("no methods".into()));
    }
    let mut jobs = Vec::new();
    for (d, _) in datasets.iter().enumerate() {
        for &m in methods {
            for r in 0..settings.repetitions {
                for f in 0..settings.folds {
                    jobs.push((d, m, r, f));
                }
            }
        }
    }
    // Cells run in parallel; each cell runs sequentially inside.
    let cells = exec.try_map_range(jobs.len(), |j| {
        let (d, m, r, f) = jobs[j];
        let ds = &datasets[d];
        run_cell(ds, m, settings, r, f, Exec::Sequential).map_err(|e| Error::Dataset { name: ds.name.clone(), source: Box::new(e) })
    })?;

    let mut aggregates = Vec::new();
    let mut summary = Vec::new();
    for ds in datasets {
        let mut means = Vec::new();
        for &m in methods {
            let group: Vec<&CellResult> = cells.iter().filter(|c| c.dataset == ds.name && c.method == m).collect();
            let agg = Aggregate {
                dataset: ds.name.clone(),
                method: m,
                precision: Stat::from_values(group.iter().map(|c| c.metrics.precision)),
                recall: Stat::from_values(group.iter().map(|c| c.metrics.recall)),
                f_value: Stat::from_values(group.iter().map(|c| c.metrics.f_value)),
                auc: Stat::from_values(group.iter().map(|c| c.metrics.auc)),
                pooled: group.iter().fold(ConfusionMatrix::default(), |acc, c| acc + c.confusion),
            };
            if let Some(v) = agg.auc.mean {
                means.push(v);
            }
            aggregates.push(agg);
        }
        let stats = imbalance_stats(&ds.data).map_err(|e| Error::Dataset { name: ds.name.clone(), source: Box::new(e) })?;
        summary.push(DatasetSummary {
            dataset: ds.name.clone(),
            n_rows: ds.data.n_rows(),
            imbalance_ratio: stats.imbalance_ratio,
            max: means.iter().cloned().reduce(f64::max),
            min: means.iter().cloned().reduce(f64::min),
            ave: (!means.is_empty()).then(|| means.iter().sum::<f64>() / means.len() as f64),
        });
    }

    Ok(EvaluationReport {
        version: VERSION.to_string(),
        settings: settings.clone(),
        datasets: datasets.iter().map(|d| d.name.clone()).collect(),
        methods: methods.to_vec(),
        cells,
        aggregates,
        summary,
    })
}

/// Loads every source, then runs the grid.
pub fn run_plan(plan: &ExperimentPlan, exec: Exec) -> Result<EvaluationReport> {
    let datasets = plan
        .datasets
        .iter()
        .map(|s| Ok(NamedDataset { name: s.name.clone(), data: s.load()? }))
        .collect::<Result<Vec<_>>>()?;
    run_datasets(&datasets, &plan.methods, &plan.settings, exec)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
    Markdown,
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:?}")).unwrap_or_default()
}

fn cell3(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.3}")).unwrap_or_else(|| "n/a".into())
}

pub fn emit_report(r: &EvaluationReport, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(r)?;
            s.push('\n');
            Ok(s)
        }
        ReportFormat::Csv => {
            let mut wtr = csv::Writer::from_writer(Vec::new());
            wtr.write_record([
                "dataset", "method", "repetition", "fold", "seed", "tp", "fn", "fp", "tn", "precision", "recall", "f_value", "auc", "n_train", "n_test",
                "n_synthetic", "amount", "k",
            ])?;
            for c in &r.cells {
                wtr.write_record([
                    c.dataset.clone(),
                    c.method.name().to_string(),
                    c.repetition.to_string(),
                    c.fold.to_string(),
                    c.seed.to_string(),
                    c.confusion.tp.to_string(),
                    c.confusion.fn_.to_string(),
                    c.confusion.fp.to_string(),
                    c.confusion.tn.to_string(),
                    opt(c.metrics.precision),
                    opt(c.metrics.recall),
                    opt(c.metrics.f_value),
                    opt(c.metrics.auc),
                    c.n_train.to_string(),
                    c.n_test.to_string(),
                    c.n_synthetic.to_string(),
                    c.resolved_amount.map(|a| a.to_string()).unwrap_or_default(),
                    c.resolved_k.map(|k| k.to_string()).unwrap_or_default(),
                ])?;
            }
            let bytes = wtr.into_inner().map_err(|e| Error::Io(e.into_error()))?;
            Ok(String::from_utf8(bytes).expect("csv writer emits UTF-8"))
        }
        ReportFormat::Markdown => {
            let mut s = String::new();
            let _ = writeln!(s, "| method | {} |", r.datasets.join(" | "));
            let _ = writeln!(s, "|---|{}", "---:|".repeat(r.datasets.len()));
            for &m in &r.methods {
                let cells: Vec<String> = r.datasets.iter().map(|d| cell3(r.aggregate(d, m).and_then(|a| a.auc.mean))).collect();
                let _ = writeln!(s, "| {} | {} |", m.name(), cells.join(" | "));
            }
            for (label, pick) in [("MAX", 0usize), ("MIN", 1), ("AVE", 2)] {
                let cells: Vec<String> = r
                    .summary
                    .iter()
                    .map(|d| cell3([d.max, d.min, d.ave][pick]))
                    .collect();
                let _ = writeln!(s, "| {label} | {} |", cells.join(" | "));
            }
            Ok(s)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_names_round_trip() {
        for name in EvalMethod::valid_names() {
            assert_eq!(name.parse::<EvalMethod>().unwrap().name(), name);
        }
        assert!(matches!("rose".parse::<EvalMethod>(), Err(Error::UnknownMethod { .. })));
    }

    #[test]
    fn stat_excludes_undefined() {
        let s = Stat::from_values([Some(1.0), None, Some(0.5)]);
        assert_eq!(s.mean, Some(0.75));
        assert_eq!((s.n, s.undefined), (2, 1));
        assert_eq!(Stat::from_values([None]).mean, None);
    }

    #[test]
    fn folds_need_positives() {
        let labels = [vec![Label::Positive; 3], vec![Label::Negative; 30]].concat();
        assert!(matches!(stratified_folds(&labels, 20, 1), Err(Error::FoldWithoutPositives { .. })));
        assert!(stratified_folds(&labels, 1, 1).is_err());
    }

    #[test]
    fn stratified_counts_are_balanced() {
        let labels = [vec![Label::Positive; 13], vec![Label::Negative; 41]].concat();
        let a = stratified_folds(&labels, 5, 9).unwrap();
        for f in 0..5 {
            let pos = (0..13).filter(|&i| a[i] == f).count() as f64;
            let all = a.iter().filter(|&&x| x == f).count() as f64;
            assert!((pos - 13.0 / 5.0).abs() < 1.0);
            assert!((all - 54.0 / 5.0).abs() < 1.0);
        }
    }
}
