//! Subcommand bodies. Each returns the text printed on stdout.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use entsmote::dataset::{discretize, imbalance_stats, DiscretizationPolicy, ImbalanceStats, Label};
use entsmote::entropy::{feature_weights, EntropyKind, EntropySpec, WeightNormalization};
use entsmote::experiment::{emit_report, load_labeled, run_datasets, run_plan, EvalMethod, NamedDataset, Protocol, ReportFormat, Settings};
use entsmote::keel::{read_raw, write_dataset, DataFormat};
use entsmote::neighbors::KSelection;
use entsmote::smote::{make_variant, oversample, oversample_unlabeled, Amount, Oversampled, SmoteConfig};
use entsmote::{Dataset, Error, Exec, Result};
use serde::Serialize;

use crate::plan::{load_plan, mapping_for, parse_k, parse_methods};
use crate::{BalanceArgs, Command, CompareArgs, EvaluateArgs, InputArgs, InspectArgs, SmoteArgs};

pub const MANIFEST_SCHEMA: u32 = 1;

pub fn dispatch(cmd: &Command, args: &[String], exec: Exec) -> Result<String> {
    match cmd {
        Command::Balance(a) => balance(a, args, exec),
        Command::Evaluate(a) => evaluate(a, args, exec),
        Command::Compare(a) => compare(a, args, exec),
        Command::Inspect(a) => inspect(a, args),
    }
}

fn input_format(i: &InputArgs) -> Result<DataFormat> {
    match &i.format {
        Some(f) => f.parse(),
        None => Ok(DataFormat::from_path(&i.input)),
    }
}

fn load_input(i: &InputArgs) -> Result<(Dataset, DataFormat)> {
    let format = input_format(i)?;
    let mapping = mapping_for(&i.input, format, i.positive.as_deref(), i.negative.as_deref())?;
    Ok((load_labeled(&i.input, format, mapping.as_ref())?, format))
}

/// Manifests are written beside their primary output as `<file>.manifest.json`.
pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    output.with_file_name(name)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct Resolved<T: Serialize, U: Serialize> {
    requested: T,
    resolved: U,
}

#[derive(Debug, Serialize)]
struct ClassCounts {
    positive: usize,
    negative: usize,
    imbalance_ratio: f64,
}

impl From<ImbalanceStats> for ClassCounts {
    fn from(s: ImbalanceStats) -> Self {
        Self { positive: s.n_positive, negative: s.n_negative, imbalance_ratio: s.imbalance_ratio }
    }
}

#[derive(Debug, Serialize)]
struct BalanceManifest<'a> {
    schema: u32,
    version: &'static str,
    command: &'static str,
    args: &'a [String],
    input: &'a Path,
    format: DataFormat,
    output: &'a Path,
    output_format: DataFormat,
    method: &'a str,
    labels: &'static str,
    seed: u64,
    amount: Resolved<String, u32>,
    k: Resolved<String, usize>,
    entropy: Option<EntropySpec>,
    attributes: &'a [String],
    lambda: &'a [f64],
    gains: &'a [f64],
    before: ClassCounts,
    after: ClassCounts,
    synthetic_rows: usize,
}

fn smote_config(method: &str, s: &SmoteArgs, seed: u64) -> Result<SmoteConfig> {
    let mut cfg = make_variant(method)?;
    cfg.amount = s.amount.parse::<Amount>()?;
    if let Some(k) = &s.k {
        cfg.k = parse_k(k)?;
    }
    cfg.k_max = s.k_max;
    if s.no_preselect {
        cfg.preselect = false;
    }
    cfg.seed = seed;
    Ok(cfg)
}

fn default_output(input: &Path) -> PathBuf {
    let stem = input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "dataset".into());
    let name = match input.extension() {
        Some(ext) => format!("{stem}.balanced.{}", ext.to_string_lossy()),
        None => format!("{stem}.balanced"),
    };
    input.with_file_name(name)
}

fn ir_line(label: &str, s: &ImbalanceStats) -> String {
    format!("{label}: {} positive, {} negative, IR {:.2}\n", s.n_positive, s.n_negative, s.imbalance_ratio)
}

fn balance(a: &BalanceArgs, args: &[String], exec: Exec) -> Result<String> {
    let cfg = smote_config(&a.method, &a.smote, a.seed)?;
    let format = input_format(&a.input)?;
    let (original, out): (Dataset, Oversampled) = if a.unlabeled {
        if a.input.positive.is_some() || a.input.negative.is_some() {
            return Err(Error::Config("--unlabeled cannot be combined with --positive/--negative".into()));
        }
        let raw = read_raw(&a.input.input, format)?;
        let out = oversample_unlabeled(raw.features, raw.header.inputs, &cfg, exec)?;
        let n = out.balanced.n_rows() - out.batch.len();
        (out.balanced.select(&(0..n).collect::<Vec<_>>()), out)
    } else {
        let (d, _) = load_input(&a.input)?;
        let out = oversample(&d, &cfg, exec)?;
        (d, out)
    };
    let before = imbalance_stats(&original)?;
    let after = imbalance_stats(&out.balanced)?;

    let output = a.output.clone().unwrap_or_else(|| default_output(&a.input.input));
    let output_format = DataFormat::from_path(&output);
    let mut buf = Vec::new();
    write_dataset(&out.balanced, output_format, &mut buf)?;
    fs::write(&output, buf)?;

    let manifest = BalanceManifest {
        schema: MANIFEST_SCHEMA,
        version: entsmote::experiment::VERSION,
        command: "balance",
        args,
        input: &a.input.input,
        format,
        output: &output,
        output_format,
        method: cfg_name(&a.method),
        labels: if a.unlabeled { "clustered" } else { "mapped" },
        seed: a.seed,
        amount: Resolved { requested: a.smote.amount.clone(), resolved: out.amount },
        k: Resolved { requested: k_text(cfg.k), resolved: out.k },
        entropy: cfg.entropy,
        attributes: out.balanced.attribute_names(),
        lambda: &out.weights.lambda,
        gains: &out.weights.gains,
        before: before.into(),
        after: after.into(),
        synthetic_rows: out.batch.len(),
    };
    let mpath = manifest_path(&output);
    write_json(&mpath, &manifest)?;

    let mut text = String::new();
    text += &ir_line("before", &before);
    text += &ir_line("after", &after);
    let _ = writeln!(text, "synthetic rows: {} (N = {}%, k = {})", out.batch.len(), out.amount, out.k);
    let _ = writeln!(text, "wrote {}", output.display());
    let _ = writeln!(text, "manifest {}", mpath.display());
    Ok(text)
}

fn k_text(k: KSelection) -> String {
    match k {
        KSelection::Auto => "auto".into(),
        KSelection::Fixed(k) => k.to_string(),
    }
}

fn cfg_name(method: &str) -> &'static str {
    method.parse::<EvalMethod>().map(|m| m.name()).unwrap_or("")
}

#[derive(Debug, Serialize)]
struct CellManifest {
    dataset: String,
    method: EvalMethod,
    repetition: usize,
    fold: usize,
    seed: u64,
    amount: Option<u32>,
    k: Option<usize>,
    lambda: Vec<f64>,
}

#[derive(Debug, Serialize)]
struct RunManifest<'a> {
    schema: u32,
    version: &'static str,
    command: &'static str,
    args: &'a [String],
    settings: &'a Settings,
    outputs: Vec<PathBuf>,
    cells: Vec<CellManifest>,
}

fn run_manifest<'a>(command: &'static str, args: &'a [String], report: &'a entsmote::EvaluationReport, outputs: Vec<PathBuf>) -> RunManifest<'a> {
    RunManifest {
        schema: MANIFEST_SCHEMA,
        version: entsmote::experiment::VERSION,
        command,
        args,
        settings: &report.settings,
        outputs,
        cells: report
            .cells
            .iter()
            .map(|c| CellManifest {
                dataset: c.dataset.clone(),
                method: c.method,
                repetition: c.repetition,
                fold: c.fold,
                seed: c.seed,
                amount: c.resolved_amount,
                k: c.resolved_k,
                lambda: c.weights.clone(),
            })
            .collect(),
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.4}")).unwrap_or_else(|| "n/a".into())
}

fn evaluate(a: &EvaluateArgs, args: &[String], exec: Exec) -> Result<String> {
    let methods = parse_methods(&a.method)?;
    let amount = a.amount.parse::<Amount>()?;
    let k = a.k.as_deref().map(parse_k).transpose()?;
    let settings = Settings {
        folds: a.folds,
        repetitions: a.repetitions,
        base_seed: a.seed,
        protocol: if a.resample_first { Protocol::ResampleFirst } else { Protocol::InFold },
        amount: (amount != Amount::Auto).then_some(amount),
        k,
    };
    let (data, _) = load_input(&a.input)?;
    let name = a.name.clone().unwrap_or_else(|| a.input.input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "dataset".into()));
    let report = run_datasets(&[NamedDataset { name: name.clone(), data }], &methods, &settings, exec)?;

    fs::write(&a.report, emit_report(&report, ReportFormat::Json)?)?;
    let mpath = manifest_path(&a.report);
    write_json(&mpath, &run_manifest("evaluate", args, &report, vec![a.report.clone()]))?;

    let mut text = String::new();
    let _ = writeln!(text, "{name}: {} folds x {} repetition(s), seed {}", settings.folds, settings.repetitions, settings.base_seed);
    for agg in &report.aggregates {
        let folds: Vec<String> = report.cells.iter().filter(|c| c.method == agg.method).map(|c| fmt_opt(c.metrics.auc)).collect();
        let _ = writeln!(
            text,
            "{:<10} auc {} +- {}  f {}  [{}]",
            agg.method.name(),
            fmt_opt(agg.auc.mean),
            fmt_opt(agg.auc.std),
            fmt_opt(agg.f_value.mean),
            folds.join(" ")
        );
    }
    let _ = writeln!(text, "wrote {}", a.report.display());
    let _ = writeln!(text, "manifest {}", mpath.display());
    Ok(text)
}

fn compare(a: &CompareArgs, args: &[String], exec: Exec) -> Result<String> {
    let plan = load_plan(&a.plan, a.seed)?;
    let report = run_plan(&plan, exec)?;
    fs::create_dir_all(&a.out)?;
    let mut outputs = Vec::new();
    for (file, format) in [("report.json", ReportFormat::Json), ("report.csv", ReportFormat::Csv), ("report.md", ReportFormat::Markdown)] {
        let path = a.out.join(file);
        fs::write(&path, emit_report(&report, format)?)?;
        outputs.push(path);
    }
    let mpath = a.out.join("manifest.json");
    write_json(&mpath, &run_manifest("compare", args, &report, outputs))?;
    let mut text = emit_report(&report, ReportFormat::Markdown)?;
    let _ = writeln!(text, "\nwrote {}", a.out.display());
    Ok(text)
}

#[derive(Debug, Serialize)]
struct InspectManifest<'a> {
    schema: u32,
    version: &'static str,
    command: &'static str,
    args: &'a [String],
    entropy: EntropySpec,
    bins: usize,
    normalization: WeightNormalization,
    attributes: &'a [String],
    gains: &'a [f64],
    lambda: &'a [f64],
}

fn inspect(a: &InspectArgs, args: &[String]) -> Result<String> {
    let kind: EntropyKind = a.entropy.parse()?;
    let spec = EntropySpec::new(kind, a.alpha)?;
    if a.bins == 0 {
        return Err(Error::Config("--bins must be >= 1".into()));
    }
    let (d, _) = load_input(&a.input)?;
    let policy = DiscretizationPolicy { n_bins: a.bins };
    let normalization = if a.normalize { WeightNormalization::Normalized } else { WeightNormalization::Literal };
    let w = feature_weights(&discretize(&d, policy)?, d.labels(), &spec, normalization)?;

    let width = d.attribute_names().iter().map(|n| n.len()).max().unwrap_or(0).max("attribute".len());
    let mut text = String::new();
    let _ = writeln!(
        text,
        "{} rows ({} positive), entropy {}{}",
        d.n_rows(),
        d.count(Label::Positive),
        a.entropy.to_ascii_lowercase(),
        if matches!(kind, EntropyKind::Renyi | EntropyKind::Tsallis) { format!(" alpha {}", a.alpha) } else { String::new() }
    );
    let _ = writeln!(text, "{:<width$}  {:>10}  {:>10}", "attribute", "gain", "lambda");
    for ((name, g), l) in d.attribute_names().iter().zip(&w.gains).zip(&w.lambda) {
        let _ = writeln!(text, "{name:<width$}  {g:>10.6}  {l:>10.6}");
    }
    if let Some(path) = &a.manifest {
        let m = InspectManifest {
            schema: MANIFEST_SCHEMA,
            version: entsmote::experiment::VERSION,
            command: "inspect",
            args,
            entropy: spec,
            bins: a.bins,
            normalization,
            attributes: d.attribute_names(),
            gains: &w.gains,
            lambda: &w.lambda,
        };
        write_json(path, &m)?;
    }
    Ok(text)
}
