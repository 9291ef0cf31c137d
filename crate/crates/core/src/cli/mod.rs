//! The `eigenid` command line: `check`, `gen` and `lemma1`.
//!
//! Exit codes: 0 success, 1 residual or numerical failure, 2 I/O, parse or
//! usage error, 3 input not Hermitian (check) or not unitary (lemma1),
//! 4 eigensolver did not converge.

mod commands;
mod format;
mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub use commands::{
    check, gen, lemma1, parse_subsets, run_check, run_gen, run_lemma1, CheckOptions, CliError,
    ClusterSelection, Lemma1Outcome, OutputFormat, SubsetSelection, SUBSET_GUARD,
};
pub use format::MatrixFile;
pub use report::{EigensolverSummary, Record, Report, SpectrumSummary, SubsetSum, Summary};

use crate::identity::Tolerances;

#[derive(Debug, Parser)]
#[command(
    name = "eigenid",
    version,
    about = "Eigenvector row-block determinants from eigenvalues"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare both sides of the identity over clusters and row subsets.
    Check {
        #[arg(long)]
        matrix: PathBuf,
        /// 1-based cluster index, or `all`.
        #[arg(long, default_value = "all")]
        cluster: String,
        /// `all`, or 1-based subsets like `1,2;1,3`.
        #[arg(long, default_value = "all")]
        subsets: String,
        #[arg(long, default_value_t = 1e-8)]
        cluster_tol: f64,
        #[arg(long, default_value_t = 1e-12)]
        eig_tol: f64,
        #[arg(long, default_value_t = 30)]
        max_sweeps: usize,
        #[arg(long, default_value_t = 1e-10)]
        hermitian_tol: f64,
        #[arg(long, default_value_t = 1e-6, allow_negative_numbers = true)]
        fail_above: f64,
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Allow sweeps over more than a million subsets.
        #[arg(long)]
        force: bool,
    },
    /// Write a Hermitian matrix with a prescribed spectrum.
    Gen {
        /// `value:multiplicity,…` with strictly increasing values.
        #[arg(long, allow_hyphen_values = true)]
        spectrum: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare |det P11|^2 and |det P22|^2 of a unitary matrix.
    Lemma1 {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        split: usize,
        #[arg(long, default_value_t = 1e-10)]
        unitary_tol: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code. Diagnostics go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("eigenid: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Check {
            matrix,
            cluster,
            subsets,
            cluster_tol,
            eig_tol,
            max_sweeps,
            hermitian_tol,
            fail_above,
            format,
            out,
            force,
        } => {
            let opts = CheckOptions {
                cluster: cluster.parse()?,
                subsets: subsets.parse()?,
                tolerances: Tolerances {
                    hermitian_tol,
                    eig_tol,
                    max_sweeps,
                    cluster_tol,
                    ..Tolerances::default()
                },
                fail_above,
                force,
            };
            let format = match format {
                FormatArg::Json => OutputFormat::Json,
                FormatArg::Csv => OutputFormat::Csv,
            };
            let report = run_check(&matrix, &opts, format, out.as_deref())?;
            for w in &report.warnings {
                eprintln!("eigenid: warning: {w}");
            }
            Ok(if report.summary.passed { 0 } else { 1 })
        }
        Command::Gen {
            spectrum,
            seed,
            out,
        } => {
            run_gen(&spectrum, seed, out.as_deref())?;
            Ok(0)
        }
        Command::Lemma1 {
            matrix,
            split,
            unitary_tol,
        } => {
            let outcome = run_lemma1(&matrix, split, unitary_tol)?;
            print!("{outcome}");
            Ok(if outcome.passed { 0 } else { 1 })
        }
    }
}
