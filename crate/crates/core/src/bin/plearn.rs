use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use plearn::dataio::{self, ColumnKinds, Dataset, ModelFile, ModelParams};
use plearn::linear::SolverConfig;
use plearn::local::Metric;
use plearn::oracle::{verify_equivalence, TrialBudget};
use plearn::paradigm::Family;
use plearn::Error;

#[derive(Parser)]
#[command(name = "plearn", version, about = "Learners as inconsistency minimisers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a learner and write a model file.
    Train(TrainArgs),
    /// Predict one value per query row.
    Predict(PredictArgs),
    /// Per-case inconsistencies of a model on a data file, largest first.
    Audit(AuditArgs),
    /// Randomized checks of the SVM equivalence results.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct DataArgs {
    /// Feedback column; defaults to the last column.
    #[arg(long)]
    target: Option<String>,
    /// JSON file declaring ordinal and nominal columns.
    #[arg(long)]
    schema: Option<PathBuf>,
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long, value_parser = ["smoothing", "knn", "dtree", "nb", "svm", "svr"])]
    learner: String,
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    data_args: DataArgs,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    metric: Option<Metric>,
    #[arg(long)]
    w: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    max_depth: Option<usize>,
    #[arg(long)]
    min_leaf: Option<usize>,
    #[arg(long)]
    purity: Option<f64>,
}

#[derive(Args)]
struct PredictArgs {
    #[arg(long)]
    model: PathBuf,
    /// Query rows with the model's feature columns.
    #[arg(long)]
    query: PathBuf,
    /// Training data; required by query-time learners.
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long)]
    target: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AuditArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    target: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Trials per check; the built-in budget when absent.
    #[arg(long)]
    trials: Option<usize>,
}

fn kinds_of(model: &ModelFile) -> ColumnKinds {
    ColumnKinds { columns: model.data.features.iter().map(|f| (f.name.clone(), f.kind.clone())).collect() }
}

fn model_data(model: &ModelFile, path: &Path, target: Option<&str>) -> plearn::Result<Dataset> {
    dataio::load_dataset(path, Some(target.unwrap_or(&model.data.target)), &kinds_of(model))
}

fn emit(out: Option<&Path>, text: &str) -> plearn::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Io { path: path.display().to_string(), detail: e.to_string() }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn train(args: &TrainArgs) -> plearn::Result<()> {
    let family: Family = args.learner.parse().expect("restricted by clap");
    let params = ModelParams {
        k: args.k,
        radius: args.radius,
        metric: args.metric,
        w: args.w,
        epsilon: args.epsilon,
        lambda: args.lambda,
        max_depth: args.max_depth,
        min_leaf: args.min_leaf,
        purity: args.purity,
    };
    let kinds = match &args.data_args.schema {
        Some(path) => ColumnKinds::load(path)?,
        None => ColumnKinds::default(),
    };
    let data = dataio::load_dataset(&args.data, args.data_args.target.as_deref(), &kinds)?;
    let model = dataio::train(family, params, &data, &SolverConfig::default())?;
    model.save(&args.out)?;
    println!("learner {}", model.family);
    let echo = serde_json::to_value(&model.params).unwrap_or_default();
    if let Some(map) = echo.as_object() {
        for (name, value) in map {
            println!("{name} {}", value.as_str().map_or_else(|| value.to_string(), str::to_string));
        }
    }
    if let Some(f) = model.payload.as_linear() {
        println!("hypothesis {f}");
    }
    println!("total_inconsistency {}", model.total_inconsistency);
    Ok(())
}

fn predict(args: &PredictArgs) -> plearn::Result<()> {
    let model = ModelFile::load(&args.model)?;
    let schema = plearn::paradigm::Schema::new(model.data.features.clone());
    let queries = dataio::load_queries(&args.query, &schema)?;
    let data = match &args.data {
        Some(path) => Some(model_data(&model, path, args.target.as_deref())?),
        None => None,
    };
    let values = dataio::predict(&model, data.as_ref(), &queries, &SolverConfig::default())?;
    let text: String = values.iter().map(|v| format!("{v}\n")).collect();
    emit(args.out.as_deref(), &text)
}

fn audit(args: &AuditArgs) -> plearn::Result<()> {
    let model = ModelFile::load(&args.model)?;
    let data = model_data(&model, &args.data, args.target.as_deref())?;
    let report = dataio::audit(&model, &data, &SolverConfig::default())?;
    emit(args.out.as_deref(), &(report.to_json()? + "\n"))
}

fn verify(args: &VerifyArgs) -> ExitCode {
    let budget = args.trials.map_or_else(TrialBudget::default, TrialBudget::uniform);
    let summary = verify_equivalence(args.seed, &budget);
    for outcome in &summary.outcomes {
        println!("{outcome}");
    }
    match summary.first_failing_seed() {
        None => ExitCode::SUCCESS,
        Some(seed) => {
            eprintln!("verification failed; first failing seed {seed}");
            ExitCode::FAILURE
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Train(a) => train(a),
        Command::Predict(a) => predict(a),
        Command::Audit(a) => audit(a),
        Command::Verify(a) => return verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_usage() { 2 } else { 1 })
        }
    }
}
