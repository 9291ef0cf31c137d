//! Deterministic test instances: Haar unitaries, Hermitian matrices with a
//! prescribed (possibly degenerate) spectrum, and generic Hermitian matrices.
//!
//! The random stream is xoshiro256** whose 256-bit state is expanded from the
//! 64-bit seed with SplitMix64. Uniforms take the top 53 bits of each output
//! (`(x >> 11) * 2^-53`), and Gaussians come from Box–Muller. A complex
//! Gaussian consumes exactly one Box–Muller pair (two outputs): the cosine
//! branch is the real part, the sine branch the imaginary part, each scaled by
//! `1/sqrt(2)` so that `E|z|^2 = 1`. Matrices are filled row-major.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};
use std::fmt;
use std::str::FromStr;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, HermitianMatrix, C64};

/// Seeded pseudo-random stream shared by all generators.
#[derive(Debug, Clone)]
pub struct Prng(Xoshiro256StarStar);

impl Prng {
    pub fn new(seed: u64) -> Self {
        Self(Xoshiro256StarStar::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform on `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    /// Uniform integer in `0..n`.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0);
        ((self.unit() * n as f64) as usize).min(n - 1)
    }

    /// Two independent standard normals.
    pub fn gaussian_pair(&mut self) -> (f64, f64) {
        let u1 = 1.0 - self.unit();
        let u2 = self.unit();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = TAU * u2;
        (radius * angle.cos(), radius * angle.sin())
    }

    pub fn complex_gaussian(&mut self) -> C64 {
        let (re, im) = self.gaussian_pair();
        C64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
    }
}

/// Distinct eigenvalues with their multiplicities, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSpec {
    pairs: Vec<(f64, usize)>,
}

impl SpectrumSpec {
    pub fn new(pairs: Vec<(f64, usize)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidSpectrum("no eigenvalues given".into()));
        }
        for &(value, mult) in &pairs {
            if !value.is_finite() {
                return Err(Error::InvalidSpectrum(format!("non-finite value {value}")));
            }
            if mult == 0 {
                return Err(Error::InvalidSpectrum(format!(
                    "value {value} has zero multiplicity"
                )));
            }
        }
        if let Some(w) = pairs.windows(2).find(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidSpectrum(format!(
                "values must increase strictly ({} then {})",
                w[0].0, w[1].0
            )));
        }
        Ok(Self { pairs })
    }

    pub fn pairs(&self) -> &[(f64, usize)] {
        &self.pairs
    }

    pub fn n(&self) -> usize {
        self.pairs.iter().map(|p| p.1).sum()
    }

    /// Every eigenvalue repeated by its multiplicity, ascending.
    pub fn expanded(&self) -> Vec<f64> {
        self.pairs
            .iter()
            .flat_map(|&(v, m)| std::iter::repeat_n(v, m))
            .collect()
    }
}

/// Text form `value:multiplicity,…`, e.g. `"1:2,2:1"`.
impl FromStr for SpectrumSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let pairs =
            s.split(',')
                .map(|item| {
                    let (value, mult) = item.split_once(':').ok_or_else(|| {
                        Error::InvalidSpectrum(format!("expected value:mult, got {item:?}"))
                    })?;
                    let value: f64 = value
                        .trim()
                        .parse()
                        .map_err(|_| Error::InvalidSpectrum(format!("bad value {value:?}")))?;
                    let mult: usize = mult.trim().parse().map_err(|_| {
                        Error::InvalidSpectrum(format!("bad multiplicity {mult:?}"))
                    })?;
                    Ok((value, mult))
                })
                .collect::<Result<Vec<_>>>()?;
        Self::new(pairs)
    }
}

impl fmt::Display for SpectrumSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs.iter().map(|(v, m)| format!("{v}:{m}")).collect();
        f.write_str(&parts.join(","))
    }
}

fn gaussian_matrix(n: usize, rng: &mut Prng) -> DenseMatrix {
    DenseMatrix::from_fn(n, n, |_, _| rng.complex_gaussian())
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases
/// of `R`'s diagonal moved into `Q`.
pub fn haar_unitary(n: usize, seed: u64) -> DenseMatrix {
    let mut rng = Prng::new(seed);
    let g = gaussian_matrix(n, &mut rng);
    let (mut q, r) = g.householder_qr().expect("gaussian matrix is square");
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            d / d.norm()
        };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// `U diag(spec) U*` with `U = haar_unitary(n, seed)`.
pub fn hermitian_with_spectrum(spec: &SpectrumSpec, seed: u64) -> HermitianMatrix {
    let n = spec.n();
    let values = spec.expanded();
    let u = haar_unitary(n, seed);
    let mut a = DenseMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            a[(r, c)] = (0..n)
                .map(|k| u[(r, k)] * values[k] * u[(c, k)].conj())
                .sum();
        }
    }
    let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    HermitianMatrix::new(a, 1e-8 * scale).expect("conjugation preserves self-adjointness")
}

/// `(G + G*)/2` for a complex Gaussian `G`; generically simple spectrum.
pub fn random_hermitian(n: usize, seed: u64) -> HermitianMatrix {
    let mut rng = Prng::new(seed);
    let g = gaussian_matrix(n, &mut rng);
    let sym = DenseMatrix::from_fn(n, n, |r, c| (g[(r, c)] + g[(c, r)].conj()) * 0.5);
    HermitianMatrix::new(sym, 0.0).expect("symmetrized matrix is exactly Hermitian")
}
