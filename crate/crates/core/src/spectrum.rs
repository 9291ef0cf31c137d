//! Distinct eigenvalues with multiplicities, and spectral products carried in
//! sign / log-magnitude form.

use std::ops::{Mul, MulAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::IndexSet;

pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;

/// Real number stored as `sign * exp(log_mag)`. `sign == 0` is exact zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLogReal {
    pub sign: i8,
    pub log_mag: f64,
}

impl SignedLogReal {
    pub const ONE: Self = Self {
        sign: 1,
        log_mag: 0.0,
    };
    pub const ZERO: Self = Self {
        sign: 0,
        log_mag: f64::NEG_INFINITY,
    };

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self {
                sign: if x > 0.0 { 1 } else { -1 },
                log_mag: x.abs().ln(),
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn powi(self, exponent: usize) -> Self {
        if exponent == 0 {
            return Self::ONE;
        }
        if self.is_zero() {
            return Self::ZERO;
        }
        Self {
            sign: if exponent.is_multiple_of(2) {
                1
            } else {
                self.sign
            },
            log_mag: self.log_mag * exponent as f64,
        }
    }

    /// `None` when `rhs` is zero.
    pub fn checked_div(self, rhs: Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::ZERO);
        }
        Some(Self {
            sign: self.sign * rhs.sign,
            log_mag: self.log_mag - rhs.log_mag,
        })
    }

    /// Exponentiates; underflow goes to zero, overflow is an error.
    pub fn to_f64(self) -> Result<f64> {
        if self.is_zero() {
            return Ok(0.0);
        }
        if self.log_mag > f64::MAX.ln() {
            return Err(Error::Overflow {
                log_mag: self.log_mag,
            });
        }
        Ok(f64::from(self.sign) * self.log_mag.exp())
    }
}

impl Mul for SignedLogReal {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::ZERO;
        }
        Self {
            sign: self.sign * rhs.sign,
            log_mag: self.log_mag + rhs.log_mag,
        }
    }
}

impl MulAssign for SignedLogReal {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl std::iter::Product for SignedLogReal {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ONE, |acc, x| acc * x)
    }
}

/// One distinct eigenvalue and the contiguous run of sorted eigenvalues it
/// represents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueCluster {
    /// Mean of the member eigenvalues.
    pub value: f64,
    pub multiplicity: usize,
    /// 1-based positions in the ascending eigenvalue list.
    pub members: Vec<usize>,
}

impl EigenvalueCluster {
    pub fn member_set(&self) -> IndexSet {
        IndexSet::new(self.members.clone()).expect("cluster members are increasing")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusteredSpectrum {
    clusters: Vec<EigenvalueCluster>,
    n: usize,
    cluster_tol: f64,
    spectral_scale: f64,
    gap_margin: f64,
}

/// Groups ascending eigenvalues by single linkage: neighbours closer than
/// `cluster_tol * max(1, max - min)` share a cluster.
pub fn cluster_eigenvalues(values: &[f64], cluster_tol: f64) -> ClusteredSpectrum {
    debug_assert!(
        values.windows(2).all(|w| w[0] <= w[1]),
        "values must be ascending"
    );
    let spectral_scale = match (values.first(), values.last()) {
        (Some(lo), Some(hi)) => (hi - lo).max(1.0),
        _ => 1.0,
    };
    let link = cluster_tol * spectral_scale;

    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut min_gap = f64::INFINITY;
    let mut start = 0;
    for k in 1..=values.len() {
        if k == values.len() {
            runs.push((start, k));
            break;
        }
        let gap = values[k] - values[k - 1];
        if gap > link {
            runs.push((start, k));
            min_gap = min_gap.min(gap);
            start = k;
        }
    }
    if values.is_empty() {
        runs.clear();
    }

    let clusters = runs
        .into_iter()
        .map(|(lo, hi)| {
            let members = &values[lo..hi];
            EigenvalueCluster {
                value: members.iter().sum::<f64>() / members.len() as f64,
                multiplicity: hi - lo,
                members: (lo + 1..=hi).collect(),
            }
        })
        .collect();

    ClusteredSpectrum {
        clusters,
        n: values.len(),
        cluster_tol,
        spectral_scale,
        gap_margin: min_gap / link,
    }
}

impl ClusteredSpectrum {
    pub fn clusters(&self) -> &[EigenvalueCluster] {
        &self.clusters
    }

    /// Number of distinct eigenvalues.
    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cluster_tol(&self) -> f64 {
        self.cluster_tol
    }

    pub fn spectral_scale(&self) -> f64 {
        self.spectral_scale
    }

    /// Smallest inter-cluster gap over the linkage threshold; infinite for a
    /// single cluster.
    pub fn gap_margin(&self) -> f64 {
        self.gap_margin
    }

    /// Cluster by 1-based index.
    pub fn cluster(&self, index: usize) -> Result<&EigenvalueCluster> {
        index
            .checked_sub(1)
            .and_then(|i| self.clusters.get(i))
            .ok_or(Error::ClusterOutOfRange {
                index,
                count: self.clusters.len(),
            })
    }

    /// 1-based index of the cluster whose value lies within the linkage
    /// threshold of `x`.
    pub fn find_value(&self, x: f64) -> Option<usize> {
        let link = self.cluster_tol * self.spectral_scale;
        self.clusters
            .iter()
            .position(|c| (c.value - x).abs() <= link)
            .map(|i| i + 1)
    }

    /// Characteristic polynomial `∏ (x - λ_i)^{μ_i}`.
    pub fn char_poly_eval(&self, x: f64) -> Result<f64> {
        self.clusters
            .iter()
            .map(|c| SignedLogReal::from_f64(x - c.value).powi(c.multiplicity))
            .product::<SignedLogReal>()
            .to_f64()
    }

    /// `∏_{j≠i} (λ_i - λ_j)^{μ_j}` for the 1-based cluster `index`.
    pub fn denominator_eq1(&self, index: usize) -> Result<SignedLogReal> {
        let target = self.cluster(index)?.value;
        let link = self.cluster_tol * self.spectral_scale;
        let mut acc = SignedLogReal::ONE;
        for (j, c) in self.clusters.iter().enumerate() {
            if j + 1 == index {
                continue;
            }
            let gap = target - c.value;
            if gap.abs() <= link {
                return Err(Error::DegenerateDenominator { gap });
            }
            acc *= SignedLogReal::from_f64(gap).powi(c.multiplicity);
        }
        Ok(acc)
    }
}
