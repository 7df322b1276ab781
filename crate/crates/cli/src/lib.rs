//! Batch front end: `balance`, `evaluate`, `compare`, `inspect`.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error. Human-readable text
//! goes to stdout; datasets, reports and manifests are only written to files.

pub mod commands;
pub mod plan;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use entsmote::{Error, Exec};

pub const SEED_ENV: &str = "ENTSMOTE_SEED";

#[derive(Debug, Parser)]
#[command(name = "entsmote", version, about = "Entropy-weighted SMOTE oversampling for two-class data")]
pub struct Cli {
    /// Worker threads (default: all cores; 1 runs sequentially).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub jobs: Option<u32>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Oversample the minority class and write the balanced dataset.
    Balance(BalanceArgs),
    /// Cross-validate one dataset with a weighted 1NN classifier.
    Evaluate(EvaluateArgs),
    /// Run a plan of datasets x methods and write json, csv and markdown.
    Compare(CompareArgs),
    /// Print per-attribute gains and distance weights.
    Inspect(InspectArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// keel or csv (default: from the file extension).
    #[arg(long)]
    pub format: Option<String>,
    /// Class values mapped to the positive class (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub positive: Option<Vec<String>>,
    /// Class values mapped to the negative class (default: all others).
    #[arg(long, value_delimiter = ',')]
    pub negative: Option<Vec<String>>,
}

#[derive(Debug, Args)]
pub struct SmoteArgs {
    /// Oversampling amount in percent (multiple of 100) or "auto".
    #[arg(long, default_value = "auto")]
    pub amount: String,
    /// Neighbor count or "auto" (default depends on the method).
    #[arg(long)]
    pub k: Option<String>,
    /// Upper bound for automatic k.
    #[arg(long)]
    pub k_max: Option<usize>,
    /// Disable the nearest-cluster restriction of the neighbor search.
    #[arg(long)]
    pub no_preselect: bool,
}

#[derive(Debug, Args)]
pub struct BalanceArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub method: String,
    #[command(flatten)]
    pub smote: SmoteArgs,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    /// Output path (default: `<input stem>.balanced.<ext>` next to the input).
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Ignore the class column and label rows by two-cluster agglomeration.
    #[arg(long)]
    pub unlabeled: bool,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Method or comma-separated methods, including "imbalanced".
    #[arg(long, value_delimiter = ',', required = true)]
    pub method: Vec<String>,
    #[arg(long, default_value = "auto")]
    pub amount: String,
    #[arg(long)]
    pub k: Option<String>,
    #[arg(long, default_value_t = 5)]
    pub folds: usize,
    #[arg(long, default_value_t = 1)]
    pub repetitions: usize,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    /// JSON report path.
    #[arg(long)]
    pub report: PathBuf,
    /// Resample the whole dataset before splitting into folds.
    #[arg(long, alias = "paper-protocol")]
    pub resample_first: bool,
    /// Dataset name used in the report (default: file stem).
    #[arg(long)]
    pub name: Option<String>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub plan: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Seed used when the plan has none.
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct InspectArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value = "shannon")]
    pub entropy: String,
    /// Order for renyi and tsallis.
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 10)]
    pub bins: usize,
    /// Rescale weights to sum to one.
    #[arg(long)]
    pub normalize: bool,
    /// Also write the weights as JSON.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_usage() {
        1
    } else {
        2
    }
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    1
                }
            };
        }
    };
    let recorded: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match with_jobs(cli.jobs, |exec| commands::dispatch(&cli.command, &recorded, exec)) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(feature = "parallel")]
fn with_jobs<T: Send>(jobs: Option<u32>, f: impl FnOnce(Exec) -> entsmote::Result<T> + Send) -> entsmote::Result<T> {
    match jobs {
        Some(1) => f(Exec::Sequential),
        _ => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.unwrap_or(0) as usize)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            pool.install(|| f(Exec::Parallel))
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn with_jobs<T: Send>(_jobs: Option<u32>, f: impl FnOnce(Exec) -> entsmote::Result<T> + Send) -> entsmote::Result<T> {
    f(Exec::Sequential)
}
