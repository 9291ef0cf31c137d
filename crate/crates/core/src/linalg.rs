//! Dense complex matrices, Hermitian validation, index sets and determinants.
//!
//! Storage is row-major and 0-based internally. Everything that names a row or
//! column from the outside (index sets, file formats, CLI flags) is 1-based.

use std::fmt;
use std::ops::{Index, IndexMut, Mul, Sub};
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::SizeMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { ONE } else { ZERO })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a real matrix from nested rows. Panics on ragged input.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == n_cols), "ragged rows");
        Self::from_fn(n_rows, n_cols, |r, c| C64::new(rows[r][c], 0.0))
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |r, c| {
            if r == c {
                C64::new(values[r], 0.0)
            } else {
                ZERO
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn set_column(&mut self, c: usize, values: &[C64]) {
        debug_assert_eq!(values.len(), self.rows);
        for (r, &v) in values.iter().enumerate() {
            self[(r, c)] = v;
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Gathers the given 0-based rows and columns, in the order supplied.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |r, c| self[(rows[r], cols[c])])
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let rows: Vec<usize> = (0..self.rows).collect();
        self.select(&rows, cols)
    }

    /// Rows of `self` indexed by `subset`, in ascending order. The result is
    /// square, so `|subset|` must equal the column count.
    pub fn submatrix_rows(&self, subset: &IndexSet) -> Result<Self> {
        if subset.len() != self.cols {
            return Err(Error::SizeMismatch {
                expected: self.cols,
                found: subset.len(),
            });
        }
        subset.check_within(self.rows)?;
        let rows = subset.zero_based();
        let cols: Vec<usize> = (0..self.cols).collect();
        Ok(self.select(&rows, &cols))
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == ZERO {
                    continue;
                }
                for c in 0..rhs.cols {
                    out[(r, c)] += a * rhs[(k, c)];
                }
            }
        }
        out
    }

    /// Determinant by LU factorization with partial pivoting. The empty
    /// matrix has determinant 1.
    pub fn determinant(&self) -> Result<C64> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut lu = self.data.clone();
        let mut det = ONE;
        for k in 0..n {
            let pivot = (k..n)
                .max_by(|&a, &b| lu[a * n + k].norm().total_cmp(&lu[b * n + k].norm()))
                .unwrap_or(k);
            if lu[pivot * n + k] == ZERO {
                return Ok(ZERO);
            }
            if pivot != k {
                for c in 0..n {
                    lu.swap(k * n + c, pivot * n + c);
                }
                det = -det;
            }
            let diag = lu[k * n + k];
            det *= diag;
            for r in (k + 1)..n {
                let factor = lu[r * n + k] / diag;
                if factor == ZERO {
                    continue;
                }
                for c in (k + 1)..n {
                    let upper = lu[k * n + c];
                    lu[r * n + c] -= factor * upper;
                }
            }
        }
        Ok(det)
    }

    /// `|det(self)|²`, never negative.
    pub fn abs_det_squared(&self) -> Result<f64> {
        self.determinant().map(|d| d.norm_sqr())
    }

    /// Householder QR: returns `(Q, R)` with `Q` unitary and `R` upper
    /// triangular, `self = Q R`.
    pub fn householder_qr(&self) -> Result<(Self, Self)> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut r = self.clone();
        let mut q = Self::identity(n);
        for k in 0..n.saturating_sub(1) {
            let x: Vec<C64> = (k..n).map(|i| r[(i, k)]).collect();
            let norm_x = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm_x == 0.0 {
                continue;
            }
            let phase = if x[0] == ZERO {
                ONE
            } else {
                x[0] / x[0].norm()
            };
            let alpha = -phase * norm_x;
            let mut v = x;
            v[0] -= alpha;
            let v_norm_sqr: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            if v_norm_sqr == 0.0 {
                continue;
            }
            // R <- (I - 2 v v* / v*v) R
            for c in 0..n {
                let dot: C64 = (k..n).map(|i| v[i - k].conj() * r[(i, c)]).sum();
                let scale = dot * (2.0 / v_norm_sqr);
                for i in k..n {
                    r[(i, c)] -= v[i - k] * scale;
                }
            }
            // Q <- Q (I - 2 v v* / v*v)
            for row in 0..n {
                let dot: C64 = (k..n).map(|i| q[(row, i)] * v[i - k]).sum();
                let scale = dot * (2.0 / v_norm_sqr);
                for i in k..n {
                    q[(row, i)] -= scale * v[i - k].conj();
                }
            }
        }
        for row in 1..n {
            for col in 0..row {
                r[(row, col)] = ZERO;
            }
        }
        Ok((q, r))
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = C64;

    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &DenseMatrix {
    type Output = DenseMatrix;

    fn mul(self, rhs: &DenseMatrix) -> DenseMatrix {
        self.matmul(rhs)
    }
}

impl Sub for &DenseMatrix {
    type Output = DenseMatrix;

    fn sub(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// `max_{j,k} |M_jk - conj(M_kj)|`.
pub fn hermitian_defect(m: &DenseMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    let mut defect = 0.0f64;
    for r in 0..n {
        for c in r..n {
            defect = defect.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    Ok(defect)
}

/// Square complex matrix whose stored entries are exactly self-adjoint.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    inner: DenseMatrix,
}

impl HermitianMatrix {
    /// Validates `entries` against `hermitian_tol`, then stores `(A + A*)/2`.
    pub fn new(entries: DenseMatrix, hermitian_tol: f64) -> Result<Self> {
        let defect = hermitian_defect(&entries)?;
        if defect > hermitian_tol {
            return Err(Error::NotHermitian { defect });
        }
        let n = entries.rows;
        let sym = DenseMatrix::from_fn(n, n, |r, c| {
            if r == c {
                C64::new(entries[(r, r)].re, 0.0)
            } else {
                (entries[(r, c)] + entries[(c, r)].conj()) * 0.5
            }
        });
        Ok(Self { inner: sym })
    }

    /// Real diagonal matrix; Hermitian by construction.
    pub fn diagonal(values: &[f64]) -> Self {
        Self {
            inner: DenseMatrix::diagonal(values),
        }
    }

    pub fn n(&self) -> usize {
        self.inner.rows
    }

    pub fn as_matrix(&self) -> &DenseMatrix {
        &self.inner
    }

    pub fn into_matrix(self) -> DenseMatrix {
        self.inner
    }

    pub fn trace(&self) -> f64 {
        self.inner.trace().re
    }

    /// `A + shift * I`.
    pub fn shifted(&self, shift: f64) -> Self {
        let mut inner = self.inner.clone();
        for i in 0..inner.rows {
            inner[(i, i)] += shift;
        }
        Self { inner }
    }

    /// `M_S`: delete the rows and columns listed in `subset`.
    pub fn principal_minor(&self, subset: &IndexSet) -> Result<Self> {
        subset.check_within(self.n())?;
        let keep = subset.complement(self.n()).zero_based();
        Ok(Self {
            inner: self.inner.select(&keep, &keep),
        })
    }
}

/// Strictly increasing set of 1-based indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new(members: Vec<usize>) -> Result<Self> {
        if members.contains(&0) {
            return Err(Error::InvalidIndexSet("indices are 1-based".into()));
        }
        if members.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidIndexSet(
                "indices must be strictly increasing".into(),
            ));
        }
        Ok(Self(members))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// `{1, …, n}`.
    pub fn full(n: usize) -> Self {
        Self((1..=n).collect())
    }

    /// Contiguous 1-based range `start..=end`.
    pub fn range(start: usize, end: usize) -> Self {
        Self((start.max(1)..=end).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn zero_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i - 1).collect()
    }

    pub fn complement(&self, n: usize) -> Self {
        Self(
            (1..=n)
                .filter(|i| self.0.binary_search(i).is_err())
                .collect(),
        )
    }

    pub fn check_within(&self, n: usize) -> Result<()> {
        match self.0.last() {
            Some(&index) if index > n => Err(Error::IndexOutOfRange { index, n }),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Parses a comma-separated list such as `"1,3"`. Order in the input does
/// not matter, duplicates are rejected.
impl FromStr for IndexSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::empty());
        }
        let mut members = s
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidIndexSet(format!("bad index {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        members.sort_unstable();
        Self::new(members)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    /// Laplace expansion along the first row; O(n!) and independent of LU.
    fn cofactor_det(m: &DenseMatrix) -> C64 {
        let n = m.rows();
        if n == 0 {
            return ONE;
        }
        let mut total = ZERO;
        for col in 0..n {
            let rows: Vec<usize> = (1..n).collect();
            let cols: Vec<usize> = (0..n).filter(|&k| k != col).collect();
            let minor = m.select(&rows, &cols);
            let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
            total += m[(0, col)] * cofactor_det(&minor) * sign;
        }
        total
    }

    fn pseudo_random(rows: usize, cols: usize, seed: u64) -> DenseMatrix {
        let mut rng = crate::generate::Prng::new(seed);
        DenseMatrix::from_fn(rows, cols, |_, _| rng.complex_gaussian())
    }

    #[test]
    fn hermitian_constructor_accepts_identity_and_pauli_y() {
        let id = HermitianMatrix::new(DenseMatrix::identity(2), 1e-12).unwrap();
        assert_eq!(id.as_matrix(), &DenseMatrix::identity(2));

        let y = DenseMatrix::new(2, 2, vec![ZERO, c(0.0, 1.0), c(0.0, -1.0), ZERO]).unwrap();
        let h = HermitianMatrix::new(y.clone(), 1e-12).unwrap();
        assert_eq!(h.as_matrix(), &y);
    }

    #[test]
    fn hermitian_constructor_rejects_nilpotent() {
        let m = DenseMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert_eq!(
            HermitianMatrix::new(m, 1e-12),
            Err(Error::NotHermitian { defect: 1.0 })
        );
        let rect = DenseMatrix::zeros(2, 3);
        assert!(matches!(
            HermitianMatrix::new(rect, 1e-12),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn constructor_symmetrizes_small_defects() {
        let m = DenseMatrix::new(
            2,
            2,
            vec![
                c(1.0, 1e-14),
                c(2.0, 1.0),
                c(2.0, -1.0 + 2e-14),
                c(3.0, 0.0),
            ],
        )
        .unwrap();
        let h = HermitianMatrix::new(m, 1e-12).unwrap();
        assert_eq!(hermitian_defect(h.as_matrix()).unwrap(), 0.0);
        assert_eq!(h.as_matrix()[(0, 0)].im, 0.0);
    }

    #[test]
    fn non_finite_entries_rejected() {
        let err = DenseMatrix::new(1, 1, vec![c(f64::NAN, 0.0)]).unwrap_err();
        assert_eq!(err, Error::NonFinite);
    }

    #[test]
    fn principal_minor_cases() {
        let a = HermitianMatrix::new(
            DenseMatrix::from_real_rows(&[&[1.0, 2.0, 3.0], &[2.0, 5.0, 6.0], &[3.0, 6.0, 9.0]]),
            0.0,
        )
        .unwrap();
        assert_eq!(a.principal_minor(&IndexSet::empty()).unwrap(), a);

        let m1 = a.principal_minor(&"1".parse().unwrap()).unwrap();
        assert_eq!(
            m1.as_matrix(),
            &DenseMatrix::from_real_rows(&[&[5.0, 6.0], &[6.0, 9.0]])
        );

        let m13 = a.principal_minor(&"1,3".parse().unwrap()).unwrap();
        assert_eq!(m13.as_matrix(), &DenseMatrix::from_real_rows(&[&[5.0]]));

        assert_eq!(
            a.principal_minor(&"4".parse().unwrap()),
            Err(Error::IndexOutOfRange { index: 4, n: 3 })
        );
    }

    #[test]
    fn principal_minor_of_random_hermitian_stays_hermitian() {
        let g = pseudo_random(6, 6, 3);
        let sym = DenseMatrix::from_fn(6, 6, |r, c| g[(r, c)] + g[(c, r)].conj());
        let a = HermitianMatrix::new(sym, 1e-12).unwrap();
        let m = a.principal_minor(&"2,5".parse().unwrap()).unwrap();
        assert!(hermitian_defect(m.as_matrix()).unwrap() <= 1e-14 * a.as_matrix().max_abs());
    }

    #[test]
    fn submatrix_rows_cases() {
        let v = DenseMatrix::new(3, 1, vec![c(1.0, 0.0), c(2.0, -1.0), c(3.0, 0.0)]).unwrap();
        let s = v.submatrix_rows(&"2".parse().unwrap()).unwrap();
        assert_eq!(s.as_slice(), &[c(2.0, -1.0)]);

        let top = DenseMatrix::identity(3).select_columns(&[0, 1]);
        assert_eq!(
            top.submatrix_rows(&"1,2".parse().unwrap()).unwrap(),
            DenseMatrix::identity(2)
        );

        assert_eq!(
            top.submatrix_rows(&"1".parse().unwrap()),
            Err(Error::SizeMismatch {
                expected: 2,
                found: 1
            })
        );
    }

    #[test]
    fn submatrix_rows_matches_elementwise_indexing() {
        let v = pseudo_random(4, 2, 17);
        let s = v.submatrix_rows(&"2,4".parse().unwrap()).unwrap();
        for (out_row, src_row) in [(0usize, 1usize), (1, 3)] {
            for col in 0..2 {
                assert_eq!(s[(out_row, col)], v.as_slice()[src_row * 2 + col]);
            }
        }
        assert_eq!(v.select_columns(&[0, 1]), v);
        let full = pseudo_random(3, 3, 1);
        assert_eq!(full.submatrix_rows(&IndexSet::full(3)).unwrap(), full);
    }

    #[test]
    fn determinant_fixtures() {
        assert_eq!(DenseMatrix::identity(3).determinant().unwrap(), ONE);
        let swap = DenseMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert_eq!(swap.determinant().unwrap(), -ONE);
        assert_eq!(DenseMatrix::zeros(0, 0).determinant().unwrap(), ONE);
        assert!(matches!(
            DenseMatrix::zeros(2, 3).determinant(),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn determinant_matches_cofactor_oracle() {
        let m = pseudo_random(4, 4, 2024);
        let lu = m.determinant().unwrap();
        let oracle = cofactor_det(&m);
        assert!((lu - oracle).norm() <= 1e-12 * oracle.norm());
    }

    #[test]
    fn singular_matrix_has_zero_determinant() {
        let m = DenseMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert_abs_diff_eq!(m.determinant().unwrap().norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn determinant_is_multiplicative() {
        for seed in 0..20 {
            let a = pseudo_random(3, 3, seed);
            let b = pseudo_random(3, 3, seed + 1000);
            let da = a.determinant().unwrap();
            let db = b.determinant().unwrap();
            let dab = a.matmul(&b).determinant().unwrap();
            assert!((dab - da * db).norm() <= 1e-10 * (1.0 + (da * db).norm()));
        }
    }

    #[test]
    fn abs_det_squared_fixtures() {
        assert_eq!(DenseMatrix::identity(2).abs_det_squared().unwrap(), 1.0);
        let swap = DenseMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert_eq!(swap.abs_det_squared().unwrap(), 1.0);
        let z = DenseMatrix::new(1, 1, vec![c(3.0, 4.0)]).unwrap();
        assert_eq!(z.abs_det_squared().unwrap(), 25.0);
    }

    #[test]
    fn householder_qr_reconstructs() {
        let m = pseudo_random(5, 5, 8);
        let (q, r) = m.householder_qr().unwrap();
        let back = q.matmul(&r);
        assert!((&back - &m).max_abs() <= 1e-13);
        let gram = &q.adjoint().matmul(&q) - &DenseMatrix::identity(5);
        assert!(gram.max_abs() <= 1e-14);
        for row in 1..5 {
            for col in 0..row {
                assert_eq!(r[(row, col)], ZERO);
            }
        }
    }

    #[test]
    fn index_set_parsing_and_validation() {
        let s: IndexSet = "3, 1".parse().unwrap();
        assert_eq!(s.members(), &[1, 3]);
        assert_eq!(s.to_string(), "{1,3}");
        assert!("1,1".parse::<IndexSet>().is_err());
        assert!("0,2".parse::<IndexSet>().is_err());
        assert!("a".parse::<IndexSet>().is_err());
        assert!(IndexSet::new(vec![2, 1]).is_err());
        assert_eq!(s.complement(4).members(), &[2, 4]);
        assert_eq!(IndexSet::range(2, 4).members(), &[2, 3, 4]);
    }
}
