//! Cyclic complex Jacobi eigensolver for Hermitian matrices.
//!
//! Each rotation is `J = D R D*` where `D = diag(1, e^{-iφ})` makes the pivot
//! `a_pq = |a_pq| e^{iφ}` real and `R` is the classical real Jacobi rotation.
//! The iteration stops once the off-diagonal Frobenius norm falls below
//! `eig_tol * ‖A‖_F`.

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, HermitianMatrix, IndexSet, C64};

pub const DEFAULT_EIG_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_SWEEPS: usize = 30;

/// Columns whose residual norm after elimination falls below this fraction of
/// their original norm are treated as linearly dependent.
const RANK_COLLAPSE: f64 = 1e-13;

/// `A = P diag(values) P*` with ascending `values`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    /// Eigenvectors as columns, in the order of `values`.
    pub vectors: DenseMatrix,
    /// `max |A - P D P*|` entrywise.
    pub residual: f64,
    /// `max |P* P - I|` entrywise.
    pub unitarity_defect: f64,
    pub sweeps: usize,
}

impl EigenDecomposition {
    /// `max(1, max |λ|)`, the scale the residual is measured against.
    pub fn spectral_scale(&self) -> f64 {
        self.values.iter().fold(1.0f64, |m, v| m.max(v.abs()))
    }

    /// `P diag(values) P*`.
    pub fn reconstruct(&self) -> DenseMatrix {
        let n = self.values.len();
        let p = &self.vectors;
        DenseMatrix::from_fn(n, n, |r, c| {
            (0..n)
                .map(|k| p[(r, k)] * self.values[k] * p[(c, k)].conj())
                .sum()
        })
    }

    fn refresh_diagnostics(&mut self, a: &HermitianMatrix) {
        self.residual = (a.as_matrix() - &self.reconstruct()).max_abs();
        self.unitarity_defect =
            unitarity_defect(&self.vectors).expect("eigenvector matrix is square");
    }

    /// Re-orthonormalizes the eigenvector columns listed in `cols` (1-based
    /// positions in the ascending order) and refreshes the diagnostics.
    pub fn orthonormalize_columns(&mut self, a: &HermitianMatrix, cols: &IndexSet) -> Result<()> {
        self.vectors = orthonormalize_block(&self.vectors, cols)?;
        self.refresh_diagnostics(a);
        Ok(())
    }
}

fn off_diagonal_norm(a: &DenseMatrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                sum += a[(r, c)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.
pub fn eigh(a: &HermitianMatrix, eig_tol: f64, max_sweeps: usize) -> Result<EigenDecomposition> {
    if !(eig_tol > 0.0 && eig_tol.is_finite()) {
        return Err(Error::InvalidTolerance(eig_tol));
    }
    let n = a.n();
    let mut work = a.as_matrix().clone();
    let mut vectors = DenseMatrix::identity(n);
    let threshold = eig_tol * a.as_matrix().frobenius_norm();

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&work);
        if off <= threshold {
            break;
        }
        if sweeps == max_sweeps {
            return Err(Error::NoConvergence {
                off_diag_norm: off,
                sweeps,
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut work, &mut vectors, p, q);
            }
        }
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| work[(i, i)].re.total_cmp(&work[(j, j)].re));
    let values: Vec<f64> = order.iter().map(|&i| work[(i, i)].re).collect();
    let vectors = vectors.select_columns(&order);

    let mut decomp = EigenDecomposition {
        values,
        vectors,
        residual: 0.0,
        unitarity_defect: 0.0,
        sweeps,
    };
    decomp.refresh_diagnostics(a);
    Ok(decomp)
}

/// Annihilates `work[p][q]` with `work <- J* work J`, `vectors <- vectors J`.
fn rotate(work: &mut DenseMatrix, vectors: &mut DenseMatrix, p: usize, q: usize) {
    let pivot = work[(p, q)];
    let magnitude = pivot.norm();
    if magnitude == 0.0 {
        return;
    }
    let phase = pivot / magnitude;
    let app = work[(p, p)].re;
    let aqq = work[(q, q)].re;

    let theta = (aqq - app) / (2.0 * magnitude);
    let t = if theta >= 0.0 {
        1.0 / (theta + theta.hypot(1.0))
    } else {
        -1.0 / (-theta + theta.hypot(1.0))
    };
    let c = 1.0 / t.hypot(1.0);
    let s = t * c;

    // J = [[c, s e], [-s conj(e), c]] on the (p, q) plane.
    let j_pq = phase * s;
    let j_qp = -phase.conj() * s;

    let n = work.rows();
    for k in 0..n {
        let akp = work[(k, p)];
        let akq = work[(k, q)];
        work[(k, p)] = akp * c + akq * j_qp;
        work[(k, q)] = akp * j_pq + akq * c;
    }
    for k in 0..n {
        let apk = work[(p, k)];
        let aqk = work[(q, k)];
        work[(p, k)] = apk * c + aqk * j_qp.conj();
        work[(q, k)] = apk * j_pq.conj() + aqk * c;
    }
    work[(p, q)] = C64::new(0.0, 0.0);
    work[(q, p)] = C64::new(0.0, 0.0);
    work[(p, p)] = C64::new(work[(p, p)].re, 0.0);
    work[(q, q)] = C64::new(work[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = vectors[(k, p)];
        let vkq = vectors[(k, q)];
        vectors[(k, p)] = vkp * c + vkq * j_qp;
        vectors[(k, q)] = vkp * j_pq + vkq * c;
    }
}

fn dot(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Replaces the columns listed in `cols` (1-based) by an orthonormal basis of
/// their span: modified Gram–Schmidt with one re-orthogonalization pass.
/// Other columns are copied through untouched.
pub fn orthonormalize_block(vectors: &DenseMatrix, cols: &IndexSet) -> Result<DenseMatrix> {
    cols.check_within(vectors.cols())?;
    let mut out = vectors.clone();
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(cols.len());
    for col in cols.iter() {
        let mut v = vectors.column(col - 1);
        let original = norm(&v);
        for _ in 0..2 {
            for q in &basis {
                let proj = dot(q, &v);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= proj * qi;
                }
            }
        }
        let remaining = norm(&v);
        if original == 0.0 || remaining < RANK_COLLAPSE * original {
            return Err(Error::RankDeficient { column: col });
        }
        for vi in &mut v {
            *vi /= remaining;
        }
        out.set_column(col - 1, &v);
        basis.push(v);
    }
    Ok(out)
}

/// `max |P* P - I|` entrywise.
pub fn unitarity_defect(p: &DenseMatrix) -> Result<f64> {
    if !p.is_square() {
        return Err(Error::NotSquare {
            rows: p.rows(),
            cols: p.cols(),
        });
    }
    let gram = p.adjoint().matmul(p);
    Ok((&gram - &DenseMatrix::identity(p.rows())).max_abs())
}
