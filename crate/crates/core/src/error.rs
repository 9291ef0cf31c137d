use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("entry buffer has length {found}, expected {expected}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (defect {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("index {index} outside 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_diag_norm:e})")]
    NoConvergence { off_diag_norm: f64, sweeps: usize },

    #[error("column {column} is linearly dependent on earlier columns")]
    RankDeficient { column: usize },

    #[error("spectral product overflows f64 (log-magnitude {log_mag})")]
    Overflow { log_mag: f64 },

    #[error("eigenvalue gap {gap:e} is below the cluster tolerance")]
    DegenerateDenominator { gap: f64 },

    #[error("subset has {subset} indices but cluster multiplicity is {multiplicity}")]
    SubsetSizeMismatch { subset: usize, multiplicity: usize },

    #[error("cluster index {index} outside 1..={count}")]
    ClusterOutOfRange { index: usize, count: usize },

    #[error("right-hand side is materially negative ({value:e}); clustering or eigensolve failed")]
    NegativeRhs { value: f64 },

    #[error("matrix is not unitary (defect {defect:e})")]
    NotUnitary { defect: f64 },

    #[error("block split {r} exceeds matrix order {n}")]
    InvalidSplit { r: usize, n: usize },

    #[error("cluster {cluster} has multiplicity {multiplicity}, expected 1")]
    MultiplicityNotOne { cluster: usize, multiplicity: usize },

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
}
