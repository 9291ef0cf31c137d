//! Squared determinants of eigenvector row-blocks of Hermitian matrices,
//! computed from eigenvalues alone and cross-checked against an explicit
//! eigendecomposition.
//!
//! The pieces, bottom up:
//!
//! - [`linalg`]: dense complex matrices, Hermitian validation, principal
//!   minors, LU determinants.
//! - [`eigen`]: cyclic Jacobi eigensolver and block re-orthonormalization.
//! - [`spectrum`]: eigenvalue clustering into distinct values with
//!   multiplicities; sign/log-magnitude products.
//! - [`identity`]: both sides of the eigenvector–eigenvalue identity for
//!   repeated eigenvalues, the unitary block-determinant property, and the
//!   simple-eigenvalue special case.
//! - [`generate`]: seeded Haar unitaries and Hermitian matrices with
//!   prescribed spectra.
//! - [`cli`]: matrix files, reports and the `eigenid` subcommands.
//!
//! Indices that cross the public API (row sets, cluster numbers) are 1-based.

pub mod cli;
pub mod eigen;
pub mod error;
pub mod generate;
pub mod identity;
pub mod linalg;
pub mod spectrum;

pub use eigen::{eigh, orthonormalize_block, unitarity_defect, EigenDecomposition};
pub use error::{Error, Result};
pub use generate::{haar_unitary, hermitian_with_spectrum, random_hermitian, Prng, SpectrumSpec};
pub use identity::{
    corollary_component, enumerate_minors, evaluate_identity, lhs_eq1, rhs_eq1, sum_over_subsets,
    verify_lemma1, BlockPartition, IdentityEvaluation, SpectralAnalysis, Tolerances,
};
pub use linalg::{DenseMatrix, HermitianMatrix, IndexSet, C64};
pub use spectrum::{cluster_eigenvalues, ClusteredSpectrum, EigenvalueCluster, SignedLogReal};
