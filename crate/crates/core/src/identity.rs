//! Eigenvector row-block determinants from eigenvalues.
//!
//! For a Hermitian `A` with distinct eigenvalues `λ_1 < … < λ_d` of
//! multiplicities `μ_1, …, μ_d`, an orthonormal eigenbasis `V_i` (n×μ_i) of
//! the i-th eigenspace, and any row set `S` with `|S| = μ_i`:
//!
//! ```text
//! |det V_i[S, :]|^2 = ∏_{j=1}^{n-μ_i} (λ_i - λ_j(M_S)) / ∏_{j≠i} (λ_i - λ_j)^{μ_j}
//! ```
//!
//! where `M_S` is `A` with rows and columns `S` deleted. The left side needs
//! eigenvectors; the right side only eigenvalues. [`SpectralAnalysis`]
//! evaluates both so they can be compared.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::eigen::{
    eigh, unitarity_defect, EigenDecomposition, DEFAULT_EIG_TOL, DEFAULT_MAX_SWEEPS,
};
use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, HermitianMatrix, IndexSet};
use crate::spectrum::{cluster_eigenvalues, ClusteredSpectrum, SignedLogReal, DEFAULT_CLUSTER_TOL};

/// Numerical knobs shared by every evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Largest accepted `|A_jk - conj(A_kj)|` when reading a matrix.
    pub hermitian_tol: f64,
    pub eig_tol: f64,
    pub max_sweeps: usize,
    pub cluster_tol: f64,
    /// Right-hand sides in `[-rhs_negativity_tol * max(1, |rhs|), 0)` are
    /// rounded up to zero; anything more negative is an error.
    pub rhs_negativity_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian_tol: 1e-10,
            eig_tol: DEFAULT_EIG_TOL,
            max_sweeps: DEFAULT_MAX_SWEEPS,
            cluster_tol: DEFAULT_CLUSTER_TOL,
            rhs_negativity_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhsDiagnostics {
    pub numerator_sign: i8,
    pub denominator_sign: i8,
    /// Smallest `|λ_i - λ_j(M_S)|`; infinite when `M_S` is empty.
    pub min_factor: f64,
    /// Value before clamping.
    pub raw: f64,
    pub clamped: bool,
}

/// Both sides of the identity for one `(cluster, S)` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityEvaluation {
    pub cluster_index: usize,
    pub subset: IndexSet,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub numerator_sign: i8,
    pub gap_margin: f64,
}

fn check_subset(spec: &ClusteredSpectrum, index: usize, subset: &IndexSet) -> Result<usize> {
    let mult = spec.cluster(index)?.multiplicity;
    if subset.len() != mult {
        return Err(Error::SubsetSizeMismatch {
            subset: subset.len(),
            multiplicity: mult,
        });
    }
    subset.check_within(spec.n())?;
    Ok(mult)
}

/// Right-hand side from eigenvalues alone: the spectrum of `A` (already
/// clustered) and a fresh eigensolve of the minor `M_S`.
pub fn rhs_eq1(
    a: &HermitianMatrix,
    spec: &ClusteredSpectrum,
    index: usize,
    subset: &IndexSet,
    tols: &Tolerances,
) -> Result<(f64, RhsDiagnostics)> {
    check_subset(spec, index, subset)?;
    let lambda = spec.cluster(index)?.value;
    let minor = a.principal_minor(subset)?;
    let minor_values = eigh(&minor, tols.eig_tol, tols.max_sweeps)?.values;

    let mut min_factor = f64::INFINITY;
    let numerator: SignedLogReal = minor_values
        .iter()
        .map(|&mu| {
            let factor = lambda - mu;
            min_factor = min_factor.min(factor.abs());
            SignedLogReal::from_f64(factor)
        })
        .product();
    let denominator = spec.denominator_eq1(index)?;
    let ratio = numerator
        .checked_div(denominator)
        .ok_or(Error::DegenerateDenominator { gap: 0.0 })?;
    let raw = ratio.to_f64()?;

    let mut value = raw;
    let mut clamped = false;
    if raw < 0.0 {
        if raw >= -tols.rhs_negativity_tol * raw.abs().max(1.0) {
            value = 0.0;
            clamped = true;
        } else {
            return Err(Error::NegativeRhs { value: raw });
        }
    }
    Ok((
        value,
        RhsDiagnostics {
            numerator_sign: numerator.sign,
            denominator_sign: denominator.sign,
            min_factor,
            raw,
            clamped,
        },
    ))
}

/// The n×μ_i eigenvector block of cluster `index` (1-based).
pub fn cluster_block(
    decomp: &EigenDecomposition,
    spec: &ClusteredSpectrum,
    index: usize,
) -> Result<DenseMatrix> {
    let cols: Vec<usize> = spec.cluster(index)?.members.iter().map(|m| m - 1).collect();
    Ok(decomp.vectors.select_columns(&cols))
}

/// `|det block[S, :]|^2` for any n×|S| block.
pub fn lhs_from_block(block: &DenseMatrix, subset: &IndexSet) -> Result<f64> {
    if subset.len() != block.cols() {
        return Err(Error::SubsetSizeMismatch {
            subset: subset.len(),
            multiplicity: block.cols(),
        });
    }
    block.submatrix_rows(subset)?.abs_det_squared()
}

/// Left-hand side from the eigenvectors. The cluster's columns are expected
/// to be orthonormal already (see [`SpectralAnalysis::new`]).
pub fn lhs_eq1(
    decomp: &EigenDecomposition,
    spec: &ClusteredSpectrum,
    index: usize,
    subset: &IndexSet,
) -> Result<f64> {
    check_subset(spec, index, subset)?;
    lhs_from_block(&cluster_block(decomp, spec, index)?, subset)
}

/// All `C(n, mu)` subsets of `{1..n}` of size `mu`, lexicographic.
pub fn enumerate_minors(n: usize, mu: usize) -> Vec<IndexSet> {
    (1..=n)
        .combinations(mu)
        .map(|members| IndexSet::new(members).expect("combinations are increasing"))
        .collect()
}

/// `C(n, k)`, saturating at `u64::MAX`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = acc * u128::from(n - j) / u128::from(j + 1);
        if acc > u128::from(u64::MAX) {
            return u64::MAX;
        }
    }
    acc as u64
}

/// One eigensolve of `A` plus its clustered spectrum, reused across many
/// `(cluster, S)` evaluations.
#[derive(Debug, Clone)]
pub struct SpectralAnalysis {
    matrix: HermitianMatrix,
    decomposition: EigenDecomposition,
    spectrum: ClusteredSpectrum,
    tols: Tolerances,
}

impl SpectralAnalysis {
    /// Diagonalizes `a`, clusters the eigenvalues and re-orthonormalizes the
    /// eigenvector block of every repeated eigenvalue.
    pub fn new(a: &HermitianMatrix, tols: &Tolerances) -> Result<Self> {
        let mut decomposition = eigh(a, tols.eig_tol, tols.max_sweeps)?;
        let spectrum = cluster_eigenvalues(&decomposition.values, tols.cluster_tol);
        for cluster in spectrum.clusters().iter().filter(|c| c.multiplicity > 1) {
            decomposition.orthonormalize_columns(a, &cluster.member_set())?;
        }
        Ok(Self {
            matrix: a.clone(),
            decomposition,
            spectrum,
            tols: *tols,
        })
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn decomposition(&self) -> &EigenDecomposition {
        &self.decomposition
    }

    pub fn spectrum(&self) -> &ClusteredSpectrum {
        &self.spectrum
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tols
    }

    pub fn eigenvector_block(&self, index: usize) -> Result<DenseMatrix> {
        cluster_block(&self.decomposition, &self.spectrum, index)
    }

    pub fn lhs(&self, index: usize, subset: &IndexSet) -> Result<f64> {
        lhs_eq1(&self.decomposition, &self.spectrum, index, subset)
    }

    pub fn rhs(&self, index: usize, subset: &IndexSet) -> Result<(f64, RhsDiagnostics)> {
        rhs_eq1(&self.matrix, &self.spectrum, index, subset, &self.tols)
    }

    pub fn evaluate(&self, index: usize, subset: &IndexSet) -> Result<IdentityEvaluation> {
        let lhs = self.lhs(index, subset)?;
        let (rhs, diag) = self.rhs(index, subset)?;
        let abs_err = (lhs - rhs).abs();
        Ok(IdentityEvaluation {
            cluster_index: index,
            subset: subset.clone(),
            lhs,
            rhs,
            abs_err,
            rel_err: abs_err / lhs.max(rhs).max(1e-300),
            numerator_sign: diag.numerator_sign,
            gap_margin: self.spectrum.gap_margin(),
        })
    }

    /// Sum of the left-hand side over every `S` of the right size. For an
    /// orthonormal block this is `det(V* V) = 1` by Cauchy–Binet.
    pub fn sum_over_subsets(&self, index: usize) -> Result<f64> {
        let block = self.eigenvector_block(index)?;
        enumerate_minors(self.spectrum.n(), block.cols())
            .iter()
            .map(|s| lhs_from_block(&block, s))
            .sum()
    }

    /// `|v_i(k)|^2` from eigenvalues, for a simple eigenvalue.
    pub fn corollary_component(&self, index: usize, k: usize) -> Result<f64> {
        let mult = self.spectrum.cluster(index)?.multiplicity;
        if mult != 1 {
            return Err(Error::MultiplicityNotOne {
                cluster: index,
                multiplicity: mult,
            });
        }
        let subset = IndexSet::new(vec![k])?;
        Ok(self.rhs(index, &subset)?.0)
    }
}

pub fn evaluate_identity(
    a: &HermitianMatrix,
    index: usize,
    subset: &IndexSet,
    tols: &Tolerances,
) -> Result<IdentityEvaluation> {
    SpectralAnalysis::new(a, tols)?.evaluate(index, subset)
}

pub fn corollary_component(
    a: &HermitianMatrix,
    index: usize,
    k: usize,
    tols: &Tolerances,
) -> Result<f64> {
    SpectralAnalysis::new(a, tols)?.corollary_component(index, k)
}

pub fn sum_over_subsets(a: &HermitianMatrix, index: usize, tols: &Tolerances) -> Result<f64> {
    SpectralAnalysis::new(a, tols)?.sum_over_subsets(index)
}

/// A square matrix split into a leading r×r block and trailing (n-r)×(n-r)
/// block.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockPartition {
    matrix: DenseMatrix,
    r: usize,
}

impl BlockPartition {
    pub fn new(matrix: DenseMatrix, r: usize) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        if r > matrix.rows() {
            return Err(Error::InvalidSplit {
                r,
                n: matrix.rows(),
            });
        }
        Ok(Self { matrix, r })
    }

    pub fn split(&self) -> usize {
        self.r
    }

    fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> DenseMatrix {
        let rows: Vec<usize> = rows.collect();
        let cols: Vec<usize> = cols.collect();
        self.matrix.select(&rows, &cols)
    }

    pub fn p11(&self) -> DenseMatrix {
        self.block(0..self.r, 0..self.r)
    }

    pub fn p12(&self) -> DenseMatrix {
        let n = self.matrix.rows();
        self.block(0..self.r, self.r..n)
    }

    pub fn p21(&self) -> DenseMatrix {
        let n = self.matrix.rows();
        self.block(self.r..n, 0..self.r)
    }

    pub fn p22(&self) -> DenseMatrix {
        let n = self.matrix.rows();
        self.block(self.r..n, self.r..n)
    }
}

/// `(|det P11|^2, |det P22|^2)` for a unitary `P`; the two agree.
pub fn verify_lemma1(p: &DenseMatrix, r: usize, unitary_tol: f64) -> Result<(f64, f64)> {
    let defect = unitarity_defect(p)?;
    if defect > unitary_tol {
        return Err(Error::NotUnitary { defect });
    }
    let blocks = BlockPartition::new(p.clone(), r)?;
    Ok((
        blocks.p11().abs_det_squared()?,
        blocks.p22().abs_det_squared()?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::orthonormalize_block;
    use crate::generate::{haar_unitary, hermitian_with_spectrum};

    fn swap() -> HermitianMatrix {
        HermitianMatrix::new(
            DenseMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]),
            0.0,
        )
        .unwrap()
    }

    fn projector() -> HermitianMatrix {
        let t = 1.0 / 3.0;
        HermitianMatrix::new(
            DenseMatrix::from_real_rows(&[
                &[1.0 - t, -t, -t],
                &[-t, 1.0 - t, -t],
                &[-t, -t, 1.0 - t],
            ]),
            0.0,
        )
        .unwrap()
    }

    fn set(s: &str) -> IndexSet {
        s.parse().unwrap()
    }

    #[test]
    fn rhs_closed_forms() {
        let tols = Tolerances::default();

        let an = SpectralAnalysis::new(&swap(), &tols).unwrap();
        let top = an.spectrum().find_value(1.0).unwrap();
        let (rhs, diag) = an.rhs(top, &set("1")).unwrap();
        assert!((rhs - 0.5).abs() <= 1e-12);
        assert_eq!(diag.numerator_sign, 1);

        let d = SpectralAnalysis::new(&HermitianMatrix::diagonal(&[1.0, 1.0, 2.0]), &tols).unwrap();
        let (rhs, _) = d.rhs(1, &set("1,2")).unwrap();
        assert!((rhs - 1.0).abs() <= 1e-12);

        let p = SpectralAnalysis::new(&projector(), &tols).unwrap();
        let plane = p.spectrum().find_value(1.0).unwrap();
        assert_eq!(p.spectrum().cluster(plane).unwrap().multiplicity, 2);
        let (rhs, _) = p.rhs(plane, &set("1,2")).unwrap();
        assert!((rhs - 1.0 / 3.0).abs() <= 1e-12);
    }

    #[test]
    fn lhs_closed_forms() {
        let tols = Tolerances::default();
        let d = SpectralAnalysis::new(&HermitianMatrix::diagonal(&[1.0, 1.0, 2.0]), &tols).unwrap();
        assert_eq!(d.lhs(1, &set("1,2")).unwrap(), 1.0);

        let an = SpectralAnalysis::new(&swap(), &tols).unwrap();
        assert!((an.lhs(2, &set("1")).unwrap() - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn projector_lhs_is_basis_independent() {
        // Two unrelated orthonormal bases of the plane x + y + z = 0.
        let raw = DenseMatrix::from_real_rows(&[&[1.0, 1.0], &[-1.0, 0.0], &[0.0, -1.0]]);
        let first = orthonormalize_block(&raw, &IndexSet::full(2)).unwrap();
        let raw2 = DenseMatrix::from_real_rows(&[&[0.0, 2.0], &[1.0, -1.0], &[-1.0, -1.0]]);
        let second = orthonormalize_block(&raw2, &IndexSet::full(2)).unwrap();
        for s in enumerate_minors(3, 2) {
            let a = lhs_from_block(&first, &s).unwrap();
            let b = lhs_from_block(&second, &s).unwrap();
            assert!((a - 1.0 / 3.0).abs() <= 1e-12);
            assert!((b - 1.0 / 3.0).abs() <= 1e-12);
        }
        let p = SpectralAnalysis::new(&projector(), &Tolerances::default()).unwrap();
        let plane = p.spectrum().find_value(1.0).unwrap();
        assert!((p.lhs(plane, &set("1,3")).unwrap() - 1.0 / 3.0).abs() <= 1e-12);
    }

    #[test]
    fn evaluate_identity_cases() {
        let tols = Tolerances::default();
        let ev = evaluate_identity(&swap(), 2, &set("1"), &tols).unwrap();
        assert!((ev.lhs - 0.5).abs() <= 1e-12 && (ev.rhs - 0.5).abs() <= 1e-12);
        assert!(ev.rel_err <= 1e-10);

        let spec = "0:3,5:1".parse().unwrap();
        let a = hermitian_with_spectrum(&spec, 3);
        let an = SpectralAnalysis::new(&a, &tols).unwrap();
        assert_eq!(an.spectrum().cluster(1).unwrap().multiplicity, 3);
        for s in enumerate_minors(4, 3) {
            assert!(an.evaluate(1, &s).unwrap().rel_err <= 1e-8, "S = {s}");
        }

        let d = HermitianMatrix::diagonal(&[1.0, 1.0, 2.0]);
        let ev = evaluate_identity(&d, 2, &set("3"), &tols).unwrap();
        assert_eq!((ev.lhs, ev.rhs), (1.0, 1.0));
    }

    #[test]
    fn zero_on_both_sides_has_zero_relative_error() {
        let d = HermitianMatrix::diagonal(&[1.0, 1.0, 2.0]);
        let ev = evaluate_identity(&d, 1, &set("1,3"), &Tolerances::default()).unwrap();
        assert_eq!(ev.lhs, 0.0);
        assert_eq!(ev.rhs, 0.0);
        assert_eq!(ev.rel_err, 0.0);
    }

    #[test]
    fn subset_size_is_checked() {
        let d = HermitianMatrix::diagonal(&[1.0, 1.0, 2.0]);
        let err = evaluate_identity(&d, 1, &set("1"), &Tolerances::default()).unwrap_err();
        assert_eq!(
            err,
            Error::SubsetSizeMismatch {
                subset: 1,
                multiplicity: 2
            }
        );
        let err = evaluate_identity(&d, 2, &set("4"), &Tolerances::default()).unwrap_err();
        assert_eq!(err, Error::IndexOutOfRange { index: 4, n: 3 });
        assert!(matches!(
            evaluate_identity(&d, 3, &set("1"), &Tolerances::default()),
            Err(Error::ClusterOutOfRange { .. })
        ));
    }

    #[test]
    fn materially_negative_rhs_is_an_error() {
        // Pretend the spectrum of diag(0, 2) is {0, 1}: the minor eigenvalue 2
        // then lies above the "cluster" at 1, which interlacing forbids.
        let a = HermitianMatrix::diagonal(&[0.0, 2.0]);
        let fake = cluster_eigenvalues(&[0.0, 1.0], 1e-8);
        let err = rhs_eq1(&a, &fake, 2, &set("1"), &Tolerances::default()).unwrap_err();
        assert!(matches!(err, Error::NegativeRhs { .. }));
    }

    #[test]
    fn tiny_negative_rhs_is_clamped() {
        let a = HermitianMatrix::diagonal(&[0.0, 1.0]);
        let fake = cluster_eigenvalues(&[0.0, 1.0 - 1e-12], 1e-8);
        let (rhs, diag) = rhs_eq1(&a, &fake, 2, &set("1"), &Tolerances::default()).unwrap();
        assert_eq!(rhs, 0.0);
        assert!(diag.clamped);
        assert_eq!(diag.numerator_sign, -1);
    }

    #[test]
    fn lemma1_fixtures() {
        assert_eq!(
            verify_lemma1(&DenseMatrix::identity(4), 2, 1e-10).unwrap(),
            (1.0, 1.0)
        );

        let (c, s) = (0.7f64.cos(), 0.7f64.sin());
        let rot = DenseMatrix::from_real_rows(&[&[c, -s], &[s, c]]);
        let (a, b) = verify_lemma1(&rot, 1, 1e-10).unwrap();
        assert!((a - c * c).abs() <= 1e-15 && (b - c * c).abs() <= 1e-15);

        let u = haar_unitary(6, 11);
        for r in 0..=6 {
            let (a, b) = verify_lemma1(&u, r, 1e-10).unwrap();
            assert!((a - b).abs() <= 1e-10, "r = {r}");
        }
    }

    #[test]
    fn lemma1_guards() {
        let ones = DenseMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]);
        assert!(matches!(
            verify_lemma1(&ones, 1, 1e-10),
            Err(Error::NotUnitary { .. })
        ));
        assert_eq!(
            verify_lemma1(&DenseMatrix::identity(2), 3, 1e-10),
            Err(Error::InvalidSplit { r: 3, n: 2 })
        );
    }

    #[test]
    fn block_partition_shapes() {
        let p = BlockPartition::new(DenseMatrix::identity(5), 2).unwrap();
        assert_eq!((p.p11().rows(), p.p11().cols()), (2, 2));
        assert_eq!((p.p12().rows(), p.p12().cols()), (2, 3));
        assert_eq!((p.p21().rows(), p.p21().cols()), (3, 2));
        assert_eq!(p.p22(), DenseMatrix::identity(3));
        assert_eq!(p.split(), 2);
    }

    #[test]
    fn corollary_cases() {
        let tols = Tolerances::default();
        assert!((corollary_component(&swap(), 2, 1, &tols).unwrap() - 0.5).abs() <= 1e-12);

        let d = HermitianMatrix::diagonal(&[4.0, 7.0]);
        assert_eq!(corollary_component(&d, 2, 1, &tols).unwrap(), 0.0);

        let deg = HermitianMatrix::diagonal(&[1.0, 1.0, 2.0]);
        assert_eq!(
            corollary_component(&deg, 1, 1, &tols),
            Err(Error::MultiplicityNotOne {
                cluster: 1,
                multiplicity: 2
            })
        );
    }

    #[test]
    fn enumerate_minors_cases() {
        let names = |n, mu| -> Vec<String> {
            enumerate_minors(n, mu)
                .iter()
                .map(|s| s.to_string())
                .collect()
        };
        assert_eq!(names(3, 1), ["{1}", "{2}", "{3}"]);
        assert_eq!(names(3, 2), ["{1,2}", "{1,3}", "{2,3}"]);
        assert_eq!(enumerate_minors(5, 2).len() as u64, binomial(5, 2));
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(enumerate_minors(3, 0), vec![IndexSet::empty()]);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(40, 20), 137_846_528_820);
    }

    #[test]
    fn subset_sums() {
        let tols = Tolerances::default();
        let d = HermitianMatrix::diagonal(&[1.0, 1.0, 2.0]);
        assert_eq!(sum_over_subsets(&d, 1, &tols).unwrap(), 1.0);
        assert!((sum_over_subsets(&swap(), 2, &tols).unwrap() - 1.0).abs() <= 1e-12);

        let spec = "2:3,9:2".parse().unwrap();
        let a = hermitian_with_spectrum(&spec, 5);
        let sum = sum_over_subsets(&a, 1, &tols).unwrap();
        assert!((sum - 1.0).abs() <= 1e-8);
    }

    #[test]
    fn scalar_matrix_uses_empty_minor() {
        let a = HermitianMatrix::diagonal(&[3.0, 3.0]);
        let ev = evaluate_identity(&a, 1, &IndexSet::full(2), &Tolerances::default()).unwrap();
        assert_eq!((ev.lhs, ev.rhs), (1.0, 1.0));
    }
}
