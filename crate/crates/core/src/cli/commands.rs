use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::format::MatrixFile;
use super::report::{EigensolverSummary, Record, Report, SpectrumSummary, SubsetSum, Summary};
use crate::error::Error;
use crate::generate::{hermitian_with_spectrum, SpectrumSpec};
use crate::identity::{binomial, enumerate_minors, verify_lemma1, SpectralAnalysis, Tolerances};
use crate::linalg::{HermitianMatrix, IndexSet};

/// Full sweeps larger than this need `--force`.
pub const SUBSET_GUARD: u64 = 1_000_000;

/// `lemma1` passes when the two block determinants differ by at most this.
const LEMMA1_PASS: f64 = 1e-8;

/// Gap margins below this trigger a clustering warning.
const GAP_MARGIN_WARN: f64 = 10.0;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Numeric(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Io { .. } | Self::Parse(_) | Self::Usage(_) => 2,
            Self::Numeric(e) => match e {
                Error::NotHermitian { .. } | Error::NotUnitary { .. } => 3,
                Error::NoConvergence { .. } => 4,
                Error::NotSquare { .. }
                | Error::SizeMismatch { .. }
                | Error::NonFinite
                | Error::IndexOutOfRange { .. }
                | Error::InvalidIndexSet(_)
                | Error::SubsetSizeMismatch { .. }
                | Error::ClusterOutOfRange { .. }
                | Error::InvalidSplit { .. }
                | Error::InvalidSpectrum(_)
                | Error::InvalidTolerance(_) => 2,
                Error::RankDeficient { .. }
                | Error::Overflow { .. }
                | Error::DegenerateDenominator { .. }
                | Error::NegativeRhs { .. }
                | Error::MultiplicityNotOne { .. } => 1,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClusterSelection {
    All,
    /// 1-based.
    One(usize),
}

impl FromStr for ClusterSelection {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.trim() {
            "all" => Ok(Self::All),
            other => other
                .parse::<usize>()
                .ok()
                .filter(|&i| i >= 1)
                .map(Self::One)
                .ok_or_else(|| {
                    CliError::Usage(format!(
                        "--cluster expects `all` or an index >= 1, got {s:?}"
                    ))
                }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubsetSelection {
    All,
    List(Vec<IndexSet>),
}

impl FromStr for SubsetSelection {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        if s.trim() == "all" {
            Ok(Self::All)
        } else {
            parse_subsets(s).map(Self::List)
        }
    }
}

/// `"1,2;1,3"` → `[{1,2}, {1,3}]`.
pub fn parse_subsets(s: &str) -> Result<Vec<IndexSet>, CliError> {
    s.split(';')
        .map(|part| part.parse::<IndexSet>().map_err(CliError::from))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOptions {
    pub cluster: ClusterSelection,
    pub subsets: SubsetSelection,
    pub tolerances: Tolerances,
    pub fail_above: f64,
    pub force: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            cluster: ClusterSelection::All,
            subsets: SubsetSelection::All,
            tolerances: Tolerances::default(),
            fail_above: 1e-6,
            force: false,
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn write(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(path) => fs::write(path, bytes).map_err(|source| CliError::Io {
            path: path.to_owned(),
            source,
        }),
        None => {
            use io::Write;
            io::stdout()
                .write_all(bytes)
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

fn parse_matrix_file(bytes: &[u8]) -> Result<MatrixFile, CliError> {
    let text = std::str::from_utf8(bytes).map_err(|e| CliError::Parse(e.to_string()))?;
    MatrixFile::parse(text).map_err(CliError::Parse)
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var("EIGENID_THREADS") {
        let threads: usize = raw.trim().parse().ok().filter(|&t| t >= 1).ok_or_else(|| {
            CliError::Usage(format!(
                "EIGENID_THREADS must be a positive integer, got {raw:?}"
            ))
        })?;
        builder = builder.num_threads(threads);
    }
    builder
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker threads: {e}")))
}

/// Runs the identity sweep on the bytes of a matrix file.
pub fn check(bytes: &[u8], opts: &CheckOptions) -> Result<Report, CliError> {
    let file = parse_matrix_file(bytes)?;
    let dense = file.to_matrix().map_err(CliError::Parse)?;
    let a = HermitianMatrix::new(dense, opts.tolerances.hermitian_tol)?;
    let analysis = SpectralAnalysis::new(&a, &opts.tolerances)?;
    let spectrum = analysis.spectrum();
    let n = a.n();

    let selected: Vec<usize> = match opts.cluster {
        ClusterSelection::All => (1..=spectrum.len()).collect(),
        ClusterSelection::One(i) => {
            spectrum.cluster(i)?;
            vec![i]
        }
    };
    if let SubsetSelection::List(list) = &opts.subsets {
        for s in list {
            s.check_within(n)?;
        }
    }

    let mut jobs: Vec<(usize, IndexSet)> = Vec::new();
    for &i in &selected {
        let mult = spectrum.cluster(i)?.multiplicity;
        match &opts.subsets {
            SubsetSelection::All => {
                let count = binomial(n, mult);
                if count > SUBSET_GUARD && !opts.force {
                    return Err(CliError::Usage(format!(
                        "cluster {i} needs C({n},{mult}) = {count} subsets; pass --force to run anyway"
                    )));
                }
                jobs.extend(enumerate_minors(n, mult).into_iter().map(|s| (i, s)));
            }
            SubsetSelection::List(list) => {
                for s in list {
                    if s.len() == mult {
                        jobs.push((i, s.clone()));
                    } else if opts.cluster != ClusterSelection::All {
                        return Err(Error::SubsetSizeMismatch {
                            subset: s.len(),
                            multiplicity: mult,
                        }
                        .into());
                    }
                }
            }
        }
    }
    if jobs.is_empty() {
        return Err(CliError::Usage(
            "no subset matches the multiplicity of a selected cluster".into(),
        ));
    }

    let pool = thread_pool()?;
    let evaluations = pool.install(|| {
        jobs.par_iter()
            .map(|(i, s)| analysis.evaluate(*i, s))
            .collect::<Result<Vec<_>, Error>>()
    })?;
    let records: Vec<Record> = evaluations
        .iter()
        .map(|ev| {
            let cluster = spectrum
                .cluster(ev.cluster_index)
                .expect("selected cluster exists");
            Record::new(cluster, ev)
        })
        .collect();

    let mut subset_sums = Vec::new();
    for &i in &selected {
        let mult = spectrum.cluster(i)?.multiplicity;
        if binomial(n, mult) <= SUBSET_GUARD || opts.force {
            let sum = analysis.sum_over_subsets(i)?;
            subset_sums.push(SubsetSum {
                cluster: i,
                sum,
                deviation: (sum - 1.0).abs(),
            });
        }
    }

    let max_rel_err = records.iter().map(|r| r.rel_err).fold(0.0, f64::max);
    let max_abs_err = records.iter().map(|r| r.abs_err).fold(0.0, f64::max);

    let mut warnings = Vec::new();
    if spectrum.gap_margin() < GAP_MARGIN_WARN {
        warnings.push(format!(
            "cluster gap margin {:.3} is below {GAP_MARGIN_WARN}; multiplicities may be misdetected",
            spectrum.gap_margin()
        ));
    }

    let decomp = analysis.decomposition();
    Ok(Report {
        input_digest: format!("sha256:{}", hex::encode(Sha256::digest(bytes))),
        n,
        tolerances: opts.tolerances,
        fail_above: opts.fail_above,
        spectrum: SpectrumSummary::from(spectrum),
        eigensolver: EigensolverSummary {
            residual: decomp.residual,
            unitarity_defect: decomp.unitarity_defect,
            sweeps: decomp.sweeps,
        },
        summary: Summary {
            record_count: records.len(),
            max_abs_err,
            max_rel_err,
            subset_sums,
            passed: max_rel_err <= opts.fail_above,
        },
        records,
        warnings,
    })
}

/// `check` on a file, writing the report to `out` (stdout when `None`).
pub fn run_check(
    matrix: &Path,
    opts: &CheckOptions,
    format: OutputFormat,
    out: Option<&Path>,
) -> Result<Report, CliError> {
    let report = check(&read(matrix)?, opts)?;
    let bytes = match format {
        OutputFormat::Json => report.to_json().into_bytes(),
        OutputFormat::Csv => {
            let mut buf = Vec::new();
            report
                .write_csv(&mut buf)
                .map_err(|e| CliError::Usage(format!("csv output failed: {e}")))?;
            buf
        }
    };
    write(out, &bytes)?;
    Ok(report)
}

pub fn gen(spectrum: &str, seed: u64) -> Result<MatrixFile, CliError> {
    let spec: SpectrumSpec = spectrum.parse()?;
    let a = hermitian_with_spectrum(&spec, seed);
    Ok(MatrixFile::from_matrix(a.as_matrix()))
}

pub fn run_gen(spectrum: &str, seed: u64, out: Option<&Path>) -> Result<MatrixFile, CliError> {
    let file = gen(spectrum, seed)?;
    write(out, file.to_json().as_bytes())?;
    Ok(file)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma1Outcome {
    pub split: usize,
    pub top_left: f64,
    pub bottom_right: f64,
    pub difference: f64,
    pub passed: bool,
}

impl fmt::Display for Lemma1Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "|det P11|^2 = {:.17e}", self.top_left)?;
        writeln!(f, "|det P22|^2 = {:.17e}", self.bottom_right)?;
        writeln!(f, "difference  = {:.3e}", self.difference)?;
        writeln!(
            f,
            "verdict     = {}",
            if self.passed { "equal" } else { "differ" }
        )
    }
}

pub fn lemma1(bytes: &[u8], split: usize, unitary_tol: f64) -> Result<Lemma1Outcome, CliError> {
    let p = parse_matrix_file(bytes)?
        .to_matrix()
        .map_err(CliError::Parse)?;
    let (top_left, bottom_right) = verify_lemma1(&p, split, unitary_tol)?;
    let difference = (top_left - bottom_right).abs();
    Ok(Lemma1Outcome {
        split,
        top_left,
        bottom_right,
        difference,
        passed: difference <= LEMMA1_PASS,
    })
}

pub fn run_lemma1(
    matrix: &Path,
    split: usize,
    unitary_tol: f64,
) -> Result<Lemma1Outcome, CliError> {
    lemma1(&read(matrix)?, split, unitary_tol)
}
