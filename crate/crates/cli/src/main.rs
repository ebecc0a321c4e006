//! `isotree`: cluster CSV data by minimum isoperimetry on spanning trees.

mod io;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use isotree::affinity::{KernelForm, LocalScale};
use isotree::pipeline::{cluster, profile, PipelineConfig, Potentials, ProfileConfig, Scaling};
use isotree::quantity::{parse_rational, MAX_QUANT_BITS};
use isotree::{misclassification, ProfileDocument, Rational};
use serde::Serialize;

use io::LabelColumn;

#[derive(Parser)]
#[command(name = "isotree", version, about = "Exact isoperimetric clustering on minimum spanning trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cluster the points of a CSV file.
    Cluster(ClusterArgs),
    /// Residue number as a function of the potential scale, with outliers.
    Profile(ProfileArgs),
    /// Misclassification rate of a label file against ground truth.
    Eval(EvalArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ScalingArg {
    Global,
    Local,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExponentArg {
    /// exp(-d / 2σ²)
    #[value(name = "eq1", alias = "half-square-width")]
    HalfSquareWidth,
    /// exp(-d / σ)
    #[value(name = "eq5", alias = "exponential")]
    Exponential,
    /// exp(-d² / 2σ²)
    #[value(name = "squared", alias = "gaussian")]
    Gaussian,
}

#[derive(Clone, Copy, ValueEnum)]
enum LocalScaleArg {
    Shared,
    SelfTuning,
}

#[derive(Args)]
struct InputArgs {
    /// CSV file, one point per row (`-` for stdin).
    input: PathBuf,
    /// The first row is a header.
    #[arg(long)]
    header: bool,
    /// Column holding class labels, by index or header name; excluded from the features.
    #[arg(long)]
    label_column: Option<LabelColumn>,
}

#[derive(Args)]
struct GraphArgs {
    /// Number of clusters.
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum, default_value_t = ScalingArg::Global)]
    scaling: ScalingArg,
    /// Kernel width.
    #[arg(long, default_value_t = 0.09)]
    sigma: f64,
    /// Neighbours per point for local scaling.
    #[arg(long, default_value_t = 10)]
    nu: usize,
    #[arg(long, value_enum, default_value_t = LocalScaleArg::Shared)]
    local_scale: LocalScaleArg,
    /// Kernel form.
    #[arg(long, value_enum, default_value_t = ExponentArg::Exponential)]
    exponent: ExponentArg,
    /// Min-max normalize every feature first.
    #[arg(long)]
    normalize: bool,
    /// Fractional bits of the weight grid.
    #[arg(long, default_value_t = 32)]
    quant_bits: u32,
    /// Root of the spanning tree (default: heaviest vertex).
    #[arg(long)]
    root: Option<usize>,
    /// Accepted for reproducibility records; every step is deterministic.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct ClusterArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    graph: GraphArgs,
    /// Potential scale; potentials are mean distances.
    #[arg(long, default_value = "0")]
    alpha: String,
    #[arg(long)]
    no_postprocess: bool,
    /// Give residue points the label of the nearest cluster along the tree.
    #[arg(long)]
    complete_labels: bool,
    /// Labels file (`index,cluster`); stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Summary JSON file; printed to stdout when `--output` is given.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args)]
struct ProfileArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    graph: GraphArgs,
    /// Scale of the interval measure.
    #[arg(long, default_value_t = 0.5)]
    sigma_s: f64,
    /// Upper end of the α range (default: doubling until the residue count settles).
    #[arg(long)]
    alpha_max: Option<String>,
    /// Breakpoint precision.
    #[arg(long, default_value = "0.01")]
    epsilon: String,
    /// Profile JSON file; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    /// Predicted labels (`index,cluster`).
    predicted: PathBuf,
    /// Ground-truth CSV.
    truth: PathBuf,
    /// The truth file has a header row.
    #[arg(long)]
    header: bool,
    /// Truth column, by index or header name (default: last column).
    #[arg(long)]
    label_column: Option<LabelColumn>,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn rational(flag: &str, text: &str) -> Result<Rational> {
    parse_rational(text).with_context(|| format!("--{flag}: cannot parse {text:?}"))
}

fn pipeline_config(g: &GraphArgs, alpha: Rational) -> Result<PipelineConfig> {
    if g.quant_bits > MAX_QUANT_BITS {
        bail!("--quant-bits must be at most {MAX_QUANT_BITS}");
    }
    let mut c = PipelineConfig::new(g.k, g.sigma);
    c.scaling = match g.scaling {
        ScalingArg::Global => Scaling::Global,
        ScalingArg::Local => Scaling::Local {
            nu: g.nu,
            scale: match g.local_scale {
                LocalScaleArg::Shared => LocalScale::Shared,
                LocalScaleArg::SelfTuning => LocalScale::SelfTuning,
            },
        },
    };
    c.kernel = match g.exponent {
        ExponentArg::HalfSquareWidth => KernelForm::HalfSquareWidth,
        ExponentArg::Exponential => KernelForm::Exponential,
        ExponentArg::Gaussian => KernelForm::Gaussian,
    };
    c.normalize = g.normalize;
    c.quant_bits = g.quant_bits;
    c.root = g.root;
    c.alpha = alpha;
    Ok(c)
}

#[derive(Serialize)]
struct Summary {
    #[serde(flatten)]
    cluster: isotree::ClusterSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    misclassification: Option<f64>,
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn run_cluster(a: ClusterArgs) -> Result<()> {
    let data = io::read_dataset(&a.input.input, a.input.header, a.input.label_column.as_ref())?;
    let alpha = rational("alpha", &a.alpha)?;
    let mut config = pipeline_config(&a.graph, alpha)?;
    config.postprocess = !a.no_postprocess;
    config.complete_labels = a.complete_labels;
    config.potentials = Potentials::MeanDistance;
    let out = cluster(&data, &config)?;
    io::write_labels(io::sink(a.output.as_deref())?, &out.labels)?;
    let summary = Summary {
        cluster: out.summary(),
        misclassification: data.labels().map(|t| misclassification(&out.labels, t)).transpose()?.map(|r| r.rate),
    };
    match (&a.summary, &a.output) {
        (Some(path), _) => write_json(&mut io::sink(Some(path))?, &summary)?,
        (None, Some(_)) => write_json(&mut io::sink(None)?, &summary)?,
        (None, None) => {}
    }
    Ok(())
}

fn run_profile(a: ProfileArgs) -> Result<()> {
    if !(a.sigma_s > 0.0 && a.sigma_s.is_finite()) {
        bail!("--sigma-s must be positive");
    }
    let epsilon = rational("epsilon", &a.epsilon)?;
    if epsilon <= Rational::default() {
        bail!("--epsilon must be positive");
    }
    let alpha_max = a.alpha_max.as_deref().map(|t| rational("alpha-max", t)).transpose()?;
    if alpha_max.as_ref().is_some_and(|m| *m <= Rational::default()) {
        bail!("--alpha-max must be positive");
    }
    let data = io::read_dataset(&a.input.input, a.input.header, a.input.label_column.as_ref())?;
    let config = pipeline_config(&a.graph, Rational::default())?;
    let pc = ProfileConfig { sigma_s: a.sigma_s, epsilon, alpha_max };
    let (_, prof) = profile(&data, &config, &pc)?;
    write_json(&mut io::sink(a.output.as_deref())?, &ProfileDocument::new(&prof))
}

fn run_eval(a: EvalArgs) -> Result<()> {
    let predicted = io::read_labels(&a.predicted)?;
    let column = match a.label_column {
        Some(c) => c,
        None => {
            let mut reader = csv::ReaderBuilder::new().has_headers(false).from_path(&a.truth)?;
            let width = reader.records().next().transpose()?.map_or(1, |r| r.len());
            LabelColumn::Index(width - 1)
        }
    };
    let truth = io::read_column(&a.truth, a.header, &column)?;
    let report = misclassification(&predicted, &truth)?;
    write_json(&mut io::sink(a.output.as_deref())?, &report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Cluster(a) => run_cluster(a),
        Command::Profile(a) => run_profile(a),
        Command::Eval(a) => run_eval(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
