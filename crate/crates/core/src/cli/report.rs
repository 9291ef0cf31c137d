use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::identity::{IdentityEvaluation, Tolerances};
use crate::spectrum::{ClusteredSpectrum, EigenvalueCluster};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    /// `sha256:<hex>` of the matrix file bytes.
    pub input_digest: String,
    pub n: usize,
    pub tolerances: Tolerances,
    pub fail_above: f64,
    pub spectrum: SpectrumSummary,
    pub eigensolver: EigensolverSummary,
    pub records: Vec<Record>,
    pub summary: Summary,
    #[serde(default)]
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub clusters: Vec<EigenvalueCluster>,
    /// Absent when there is only one cluster.
    pub gap_margin: Option<f64>,
    pub spectral_scale: f64,
}

impl From<&ClusteredSpectrum> for SpectrumSummary {
    fn from(spec: &ClusteredSpectrum) -> Self {
        let margin = spec.gap_margin();
        Self {
            clusters: spec.clusters().to_vec(),
            gap_margin: margin.is_finite().then_some(margin),
            spectral_scale: spec.spectral_scale(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigensolverSummary {
    pub residual: f64,
    pub unitarity_defect: f64,
    pub sweeps: usize,
}

/// One `(cluster, S)` evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub cluster: usize,
    pub value: f64,
    pub multiplicity: usize,
    pub subset: Vec<usize>,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub numerator_sign: i8,
}

impl Record {
    pub fn new(cluster: &EigenvalueCluster, ev: &IdentityEvaluation) -> Self {
        Self {
            cluster: ev.cluster_index,
            value: cluster.value,
            multiplicity: cluster.multiplicity,
            subset: ev.subset.members().to_vec(),
            lhs: ev.lhs,
            rhs: ev.rhs,
            abs_err: ev.abs_err,
            rel_err: ev.rel_err,
            numerator_sign: ev.numerator_sign,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetSum {
    pub cluster: usize,
    pub sum: f64,
    /// `|sum - 1|`.
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub record_count: usize,
    pub max_abs_err: f64,
    pub max_rel_err: f64,
    pub subset_sums: Vec<SubsetSum>,
    pub passed: bool,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// One row per record.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "cluster",
            "value",
            "multiplicity",
            "subset",
            "lhs",
            "rhs",
            "abs_err",
            "rel_err",
            "numerator_sign",
        ])?;
        for r in &self.records {
            let subset: Vec<String> = r.subset.iter().map(usize::to_string).collect();
            w.write_record([
                r.cluster.to_string(),
                r.value.to_string(),
                r.multiplicity.to_string(),
                subset.join(","),
                r.lhs.to_string(),
                r.rhs.to_string(),
                r.abs_err.to_string(),
                r.rel_err.to_string(),
                r.numerator_sign.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}
