//! TOML plan files for `compare`.
//!
//! ```toml
//! methods = ["imbalanced", "smote", "mismote"]
//! folds = 5              # optional, default 5
//! repetitions = 1        # optional, default 1
//! seed = 7               # optional, falls back to the CLI default seed
//! protocol = "in_fold"   # or "resample_first"
//! amount = "auto"        # optional override: "auto" or a multiple of 100
//! k = "auto"             # optional override: "auto" or an integer
//!
//! [[datasets]]
//! name = "Iris"
//! path = "../keel/iris0.dat"   # relative to the plan file
//! format = "keel"              # optional, guessed from the extension
//! positive = ["positive"]      # optional; omitted means infer
//! negative = ["negative"]      # optional; omitted means all other values
//! ```

use std::path::{Path, PathBuf};

use entsmote::experiment::{DatasetSource, EvalMethod, ExperimentPlan, Protocol, Settings};
use entsmote::keel::{read_raw, DataFormat, TwoClassMapping};
use entsmote::neighbors::KSelection;
use entsmote::smote::Amount;
use entsmote::{Error, Result};
use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanFile {
    methods: Vec<String>,
    folds: Option<usize>,
    repetitions: Option<usize>,
    seed: Option<u64>,
    protocol: Option<Protocol>,
    amount: Option<Scalar>,
    k: Option<Scalar>,
    #[serde(default)]
    datasets: Vec<DatasetEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Scalar {
    Int(u64),
    Text(String),
}

impl Scalar {
    fn text(&self) -> String {
        match self {
            Scalar::Int(n) => n.to_string(),
            Scalar::Text(s) => s.clone(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DatasetEntry {
    name: String,
    path: PathBuf,
    format: Option<String>,
    positive: Option<Vec<String>>,
    negative: Option<Vec<String>>,
}

pub fn parse_k(s: &str) -> Result<KSelection> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(KSelection::Auto);
    }
    match s.parse::<usize>() {
        Ok(k) if k >= 1 => Ok(KSelection::Fixed(k)),
        _ => Err(Error::InvalidK(format!("expected a positive integer or 'auto', got '{s}'"))),
    }
}

pub fn parse_methods<S: AsRef<str>>(names: &[S]) -> Result<Vec<EvalMethod>> {
    if names.is_empty() {
        return Err(Error::Config("method list is empty".into()));
    }
    names.iter().map(|n| n.as_ref().trim().parse()).collect()
}

/// Mapping from optional positive / negative value lists.
pub fn mapping_for(path: &Path, format: DataFormat, positive: Option<&[String]>, negative: Option<&[String]>) -> Result<Option<TwoClassMapping>> {
    match (positive, negative) {
        (None, None) => Ok(None),
        (Some(p), Some(n)) => TwoClassMapping::new(p, n).map(Some),
        (Some(p), None) => TwoClassMapping::one_vs_rest(&read_raw(path, format)?, p).map(Some),
        (None, Some(_)) => Err(Error::Config("negative class values given without positive ones".into())),
    }
}

/// Reads a plan; `default_seed` applies when the file has no `seed`.
pub fn load_plan(path: &Path, default_seed: u64) -> Result<ExperimentPlan> {
    let text = std::fs::read_to_string(path)?;
    parse_plan(&text, path.parent().unwrap_or(Path::new(".")), default_seed)
}

pub fn parse_plan(text: &str, base_dir: &Path, default_seed: u64) -> Result<ExperimentPlan> {
    let file: PlanFile = toml::from_str(text).map_err(|e| Error::Config(format!("plan: {}", e.message())))?;
    let methods = parse_methods(&file.methods)?;
    if file.datasets.is_empty() {
        return Err(Error::Config("plan lists no datasets".into()));
    }
    let defaults = Settings::default();
    let settings = Settings {
        folds: file.folds.unwrap_or(defaults.folds),
        repetitions: file.repetitions.unwrap_or(defaults.repetitions),
        base_seed: file.seed.unwrap_or(default_seed),
        protocol: file.protocol.unwrap_or_default(),
        amount: file.amount.map(|a| a.text().parse::<Amount>()).transpose()?,
        k: file.k.map(|k| parse_k(&k.text())).transpose()?,
    };
    let mut datasets = Vec::new();
    for entry in file.datasets {
        let path = base_dir.join(&entry.path);
        let format = match &entry.format {
            Some(f) => f.parse()?,
            None => DataFormat::from_path(&path),
        };
        let mapping = mapping_for(&path, format, entry.positive.as_deref(), entry.negative.as_deref())
            .map_err(|e| Error::Dataset { name: entry.name.clone(), source: Box::new(e) })?;
        datasets.push(DatasetSource { name: entry.name, path, format, mapping });
    }
    Ok(ExperimentPlan { datasets, methods, settings })
}
