use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod heatmap;
mod manifest;

/// Gap-radius bounds, partition certificates, oracle checks and sampling
/// experiments for Laguerre wavelet and Hermite STFT transforms.
///
/// Exit status: 0 when every requested check or experiment passes, 1 when
/// one fails, 2 on usage, configuration or I/O errors. Set PHASEGAP_THREADS
/// to cap the worker threads.
#[derive(Parser)]
#[command(name = "phasegap", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BoundRegime {
    Wavelet,
    Bergman,
    Stft,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ChainRegime {
    Wavelet,
    Stft,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Kernels,
    Lemmas,
    Geometry,
    Moyal,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the maximal hole radius for given sampling constants.
    Bound(BoundArgs),
    /// Run a verification suite and print its checks as CSV.
    Verify(VerifyArgs),
    /// Replay the partition chain for one hole radius and write a certificate.
    Certify(CertifyArgs),
    /// Run gap experiments from a JSON config.
    Experiment(ExperimentArgs),
}

#[derive(clap::Args, Debug)]
pub struct BoundArgs {
    #[arg(long, value_enum)]
    pub regime: BoundRegime,
    /// Atom index: Laguerre degree or Hermite order.
    #[arg(long, default_value_t = 0)]
    pub n: usize,
    /// Laguerre parameter; required for the wavelet and Bergman regimes.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Lower sampling constant.
    #[arg(long = "A")]
    pub lower: f64,
    /// Upper sampling constant.
    #[arg(long = "B")]
    pub upper: f64,
    /// Print the bound as JSON only.
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: SuiteArg,
    /// Seed for the randomized checks.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
pub struct CertifyArgs {
    #[arg(long, value_enum)]
    pub regime: ChainRegime,
    #[arg(long, default_value_t = 0)]
    pub n: usize,
    /// Laguerre parameter; required for the wavelet regime.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Hole radius: pseudohyperbolic for wavelets, Euclidean for the STFT.
    #[arg(long = "R")]
    pub radius: f64,
    /// Exponent with reference-point modulus r = R^kappa (wavelet only).
    #[arg(long, default_value_t = 2.0)]
    pub kappa: f64,
    #[arg(long = "A")]
    pub lower: f64,
    #[arg(long = "B")]
    pub upper: f64,
    /// Samples per direction in each sector.
    #[arg(long, default_value_t = 32)]
    pub grid: usize,
    /// Write the certificate here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
pub struct ExperimentArgs {
    /// JSON file with one experiment or {"experiments": [...]}.
    #[arg(long)]
    pub config: PathBuf,
    /// Directory for reports.json, reports.csv and manifest.json.
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Also write one SVG heatmap per report.
    #[arg(long)]
    pub heatmap: bool,
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("PHASEGAP_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| format!("PHASEGAP_THREADS must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    let outcome = match cli.command {
        Command::Bound(args) => commands::bound(&args),
        Command::Verify(args) => commands::verify(&args),
        Command::Certify(args) => commands::certify(&args),
        Command::Experiment(args) => commands::experiment(&args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
