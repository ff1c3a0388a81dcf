//! Command-line front end: `run`, `spectrum`, `symbol` and `version`.

pub mod config;
pub mod error;
pub mod experiment;
pub mod images;
pub mod psf;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use deblur_core::operators::sample_symbol;
use deblur_core::spectral::{cluster_report, preconditioned_spectrum, ClusterReport};

pub use config::ExperimentConfig;
pub use error::{CliError, Result};
pub use experiment::run_experiment;
pub use psf::PsfSpec;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "deblur", about = "Flip-and-precondition Krylov deblurring experiments", disable_version_flag = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the methods listed in an experiment config.
    Run {
        /// Experiment config file
        #[arg(long)]
        config: PathBuf,
    },
    /// Eigenvalues of the threshold-preconditioned flipped Toeplitz matrix.
    Spectrum {
        /// gaussian[:SUPPORT[:STD]], motion[:LEN[:ANGLE]], motion2[:LEN[:A1[:A2]]], delta or file:PATH
        #[arg(long)]
        psf: String,
        /// Grid size; the matrix is n^2 x n^2
        #[arg(long)]
        n: usize,
        /// Symbol threshold; eigenvalues with |l| <= eps count as the noise band
        #[arg(long)]
        eps: f64,
        /// Half-width of the clusters around +1 and -1
        #[arg(long)]
        delta: f64,
        /// Eigenvalue CSV destination; the cluster report goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Magnitudes of the symbol sampled on the n x n Fourier grid.
    Symbol {
        /// Same forms as for `spectrum`
        #[arg(long)]
        psf: String,
        #[arg(long)]
        n: usize,
        /// CSV destination, stdout if omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the version.
    Version,
}

pub fn format_report(r: &ClusterReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "n_eigenvalues = {}", r.total());
    let _ = writeln!(s, "eps = {}", r.eps);
    let _ = writeln!(s, "delta = {}", r.delta);
    let _ = writeln!(s, "near_plus_one = {}", r.near_plus_one);
    let _ = writeln!(s, "near_minus_one = {}", r.near_minus_one);
    let _ = writeln!(s, "in_noise_band = {}", r.in_noise_band);
    let _ = writeln!(s, "outliers = {}", r.outliers);
    let _ = writeln!(s, "outlier_fraction = {}", r.outlier_fraction());
    s
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(CliError::io(path)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Runtime(e.to_string())),
    }
}

pub fn execute(command: &Command) -> Result<()> {
    match command {
        Command::Version => println!("deblur {VERSION}"),
        Command::Run { config } => {
            let cfg = ExperimentConfig::from_file(config)?;
            for o in run_experiment(&cfg)? {
                let r = &o.record;
                println!(
                    "{}: stop {} after {} iterations, best RRE {} at {}, DP iteration {}",
                    o.method,
                    r.stop_reason,
                    r.iterations(),
                    r.best_rre().map(|v| format!("{v:.4}")).unwrap_or_else(|| "-".into()),
                    r.best_iteration.map(|k| k.to_string()).unwrap_or_else(|| "-".into()),
                    r.discrepancy_iteration.map(|k| k.to_string()).unwrap_or_else(|| "none".into()),
                );
            }
        }
        Command::Spectrum { psf, n, eps, delta, out } => {
            let psf = psf.parse::<PsfSpec>()?.build()?;
            let eigs = preconditioned_spectrum(&psf, *n, *eps)?;
            let report = cluster_report(&eigs, *eps, *delta)?;
            let mut csv = String::from("eigenvalue\n");
            for l in &eigs {
                let _ = writeln!(csv, "{l}");
            }
            match out {
                Some(_) => {
                    emit(out.as_ref(), &csv)?;
                    print!("{}", format_report(&report));
                }
                None => print!("{csv}\n{}", format_report(&report)),
            }
        }
        Command::Symbol { psf, n, out } => {
            let psf = psf.parse::<PsfSpec>()?.build()?;
            let symbol = sample_symbol(&psf, *n)?;
            let mut csv = String::from("i,j,abs\n");
            for i in 0..*n {
                for j in 0..*n {
                    let _ = writeln!(csv, "{i},{j},{}", symbol.get(i, j).norm());
                }
            }
            emit(out.as_ref(), &csv)?;
        }
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs the command; returns
/// the process exit code.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
