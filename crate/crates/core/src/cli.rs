//! Command-line front end.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::data::{load_csv, read_instances, CsvOptions, Dataset};
use crate::error::{Error, Result};
use crate::eval::{bounds_curve, evaluate_cv, BoundsCurve, CvReport, EvalPrediction};
use crate::learn::{LearnConfig, Mode};
use crate::model_file::{load_model, save_model, SavedModel};
use crate::predict::{predict_batch, PredictMode};
use crate::train::{train, LambdaSpec, TrainOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "mrc", version, about = "Minimax risk classifiers with risk bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Learn a classifier and report its risk bounds.
    Train(TrainArgs),
    /// Label instances with a saved classifier.
    Predict(PredictArgs),
    /// Stratified cross-validation error plus full-data bounds.
    EvalCv(EvalArgs),
    /// Bounds and held-out error for several training sizes.
    BoundsCurve(CurveArgs),
}

#[derive(Debug, Args)]
struct DataArgs {
    /// Input CSV with a header row.
    #[arg(long)]
    data: PathBuf,
    /// Label column, by header name or 0-based index (default: last column).
    #[arg(long = "label-col", default_value = "")]
    label_col: String,
    /// Field delimiter: a single character or `tab`.
    #[arg(long, default_value = ",")]
    delimiter: String,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Interval,
    Point,
}

#[derive(Debug, Args)]
struct LearnArgs {
    /// Uniform interval width for every feature.
    #[arg(long, conflicts_with = "delta")]
    lambda: Option<f64>,
    /// Confidence level for data-driven interval widths.
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, value_enum, default_value = "interval")]
    mode: ModeArg,
    /// Threshold budget (default: 200 / number of labels).
    #[arg(long = "max-thresholds")]
    max_thresholds: Option<usize>,
    /// Label count above which learning is refused.
    #[arg(long = "max-labels", default_value_t = 10, value_parser = clap::value_parser!(u64).range(2..=31))]
    max_labels: u64,
}

#[derive(Debug, Args)]
struct TrainArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    learn: LearnArgs,
    /// Also compute the lower risk bound.
    #[arg(long = "lower-bound")]
    lower_bound: bool,
    /// Where to write the model.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PredictArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    data: PathBuf,
    #[arg(long, default_value = ",")]
    delimiter: String,
    /// Most probable label instead of a draw from the randomized rule.
    #[arg(long)]
    deterministic: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    learn: LearnArgs,
    #[arg(long, default_value_t = 10)]
    folds: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    deterministic: bool,
    /// Also write the report as CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CurveArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    learn: LearnArgs,
    /// Comma-separated training sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    deterministic: bool,
    /// CSV destination (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Exit code for a library error.
pub fn exit_code(err: &Error) -> i32 {
    if err.is_solver_error() {
        EXIT_SOLVER
    } else {
        EXIT_DATA
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code. Normal output goes to `out`, diagnostics to `err`.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Train(a) => cmd_train(a, out),
        Command::Predict(a) => cmd_predict(a, out),
        Command::EvalCv(a) => cmd_eval(a, out),
        Command::BoundsCurve(a) => cmd_curve(a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Run(e)) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

enum Failure {
    Usage(String),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Run(e.into())
    }
}

fn parse_delimiter(s: &str) -> std::result::Result<u8, Failure> {
    match s {
        "tab" | "\\t" | "\t" => Ok(b'\t'),
        _ if s.len() == 1 && s.is_ascii() => Ok(s.as_bytes()[0]),
        _ => Err(Failure::Usage(format!(
            "delimiter must be a single ASCII character or `tab`, got {s:?}"
        ))),
    }
}

fn load_data(a: &DataArgs) -> std::result::Result<Dataset, Failure> {
    let opts = CsvOptions {
        label_column: a.label_col.parse().expect("infallible"),
        delimiter: parse_delimiter(&a.delimiter)?,
    };
    Ok(load_csv(&a.data, &opts)?)
}

fn train_options(a: &LearnArgs, lower_bound: bool) -> TrainOptions {
    let lambda = match (a.lambda, a.delta) {
        (_, Some(d)) => LambdaSpec::Delta(d),
        (Some(l), None) => LambdaSpec::Uniform(l),
        (None, None) => LambdaSpec::Uniform(0.25),
    };
    TrainOptions {
        lambda,
        learn: LearnConfig {
            mode: match a.mode {
                ModeArg::Interval => Mode::Interval,
                ModeArg::Point => Mode::Point,
            },
            max_labels_for_subsets: a.max_labels as usize,
            compute_lower_bound: lower_bound,
        },
        max_thresholds: a.max_thresholds,
    }
}

fn eval_prediction(deterministic: bool) -> EvalPrediction {
    if deterministic {
        EvalPrediction::Deterministic
    } else {
        EvalPrediction::Sampled
    }
}

fn cmd_train(a: TrainArgs, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    let data = load_data(&a.data)?;
    if a.learn.max_thresholds == Some(0) {
        return Err(Failure::Usage("--max-thresholds must be positive".into()));
    }
    let model = train::<f64>(&data, &train_options(&a.learn, a.lower_bound))?;
    writeln!(out, "upper_bound: {}", model.upper_bound)?;
    if let Some(lb) = model.lower_bound {
        writeln!(out, "lower_bound: {lb}")?;
    }
    if let Some(path) = a.out {
        let saved = SavedModel {
            model,
            label_names: data.label_names().to_vec(),
            feature_names: data.feature_names().to_vec(),
        };
        save_model(&saved, path)?;
    }
    Ok(())
}

fn cmd_predict(a: PredictArgs, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    let saved: SavedModel<f64> = load_model(&a.model)?;
    let delimiter = parse_delimiter(&a.delimiter)?;
    let instances = read_instances(File::open(&a.data)?, delimiter, &saved.feature_names)?;
    let needed = saved.model.feature_map.min_instance_dim();
    if let Some(x) = instances.iter().find(|x| x.len() < needed) {
        return Err(Error::InvalidInput(format!(
            "instances have {} columns, the model reads {needed}",
            x.len()
        ))
        .into());
    }
    let mode = if a.deterministic {
        PredictMode::Deterministic
    } else {
        PredictMode::Sampled { seed: a.seed }
    };
    let labels = predict_batch(&saved.model, &instances, mode);
    let mut text = String::new();
    for y in labels {
        text.push_str(&saved.label_names[y]);
        text.push('\n');
    }
    match a.out {
        Some(path) => std::fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Human-readable report; stable for fixed inputs.
pub fn format_report(r: &CvReport) -> String {
    let folds: Vec<String> = r.per_fold_errors.iter().map(|e| format!("{e:.6}")).collect();
    format!(
        "folds: {}\nfold_errors: {}\nerror: {:.6} ± {:.6}\nlower_bound: {:.6}\nupper_bound: {:.6}\n",
        r.per_fold_errors.len(),
        folds.join(","),
        r.mean_error,
        r.std_error,
        r.lower_bound_full,
        r.upper_bound_full
    )
}

pub fn write_report_csv<W: Write>(r: &CvReport, w: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(w);
    w.write_record(["statistic", "value"])?;
    for (i, e) in r.per_fold_errors.iter().enumerate() {
        w.write_record([format!("fold_{}", i + 1), e.to_string()])?;
    }
    w.write_record(["mean_error".to_string(), r.mean_error.to_string()])?;
    w.write_record(["std_error".to_string(), r.std_error.to_string()])?;
    w.write_record(["lower_bound".to_string(), r.lower_bound_full.to_string()])?;
    w.write_record(["upper_bound".to_string(), r.upper_bound_full.to_string()])?;
    w.flush()?;
    Ok(())
}

pub fn write_curve_csv<W: Write>(c: &BoundsCurve, w: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(w);
    w.write_record(["n", "lower", "upper", "test_error"])?;
    for row in &c.rows {
        w.write_record([
            row.n.to_string(),
            row.lower.to_string(),
            row.upper.to_string(),
            row.test_error.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_eval(a: EvalArgs, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    let data = load_data(&a.data)?;
    if a.folds < 2 {
        return Err(Failure::Usage("--folds must be at least 2".into()));
    }
    let report = evaluate_cv(
        &data,
        &train_options(&a.learn, true),
        a.folds,
        a.seed,
        eval_prediction(a.deterministic),
    )?;
    out.write_all(format_report(&report).as_bytes())?;
    if let Some(path) = a.out {
        write_report_csv(&report, BufWriter::new(File::create(path)?))?;
    }
    Ok(())
}

fn cmd_curve(a: CurveArgs, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    let data = load_data(&a.data)?;
    let curve = bounds_curve(
        &data,
        &a.sizes,
        &train_options(&a.learn, true),
        a.seed,
        eval_prediction(a.deterministic),
    )?;
    match a.out {
        Some(path) => write_curve_csv(&curve, BufWriter::new(File::create(path)?))?,
        None => write_curve_csv(&curve, &mut *out)?,
    }
    Ok(())
}
