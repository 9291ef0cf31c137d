//! Matrix JSON: `{"n": 2, "entries": [[[re, im], [re, im]], …]}`, row-major.

use serde::{Deserialize, Serialize};

use crate::linalg::{DenseMatrix, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub n: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &DenseMatrix) -> Self {
        assert!(m.is_square(), "matrix files hold square matrices");
        let entries = (0..m.rows())
            .map(|r| {
                (0..m.cols())
                    .map(|c| {
                        let z = m[(r, c)];
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect();
        Self {
            n: m.rows(),
            entries,
        }
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let file: Self = serde_json::from_str(text).map_err(|e| e.to_string())?;
        file.validate()?;
        Ok(file)
    }

    fn validate(&self) -> Result<(), String> {
        if self.entries.len() != self.n {
            return Err(format!(
                "\"n\" is {} but {} rows were given",
                self.n,
                self.entries.len()
            ));
        }
        if let Some((r, row)) = self
            .entries
            .iter()
            .enumerate()
            .find(|(_, row)| row.len() != self.n)
        {
            return Err(format!(
                "row {} has {} entries, expected {}",
                r + 1,
                row.len(),
                self.n
            ));
        }
        Ok(())
    }

    pub fn to_matrix(&self) -> Result<DenseMatrix, String> {
        self.validate()?;
        let data = self
            .entries
            .iter()
            .flatten()
            .map(|&[re, im]| C64::new(re, im))
            .collect();
        DenseMatrix::new(self.n, self.n, data).map_err(|e| e.to_string())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("matrix file serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_example_parses() {
        let f = MatrixFile::parse(r#"{"n": 2, "entries": [[[0,0],[1,0]],[[1,0],[0,0]]]}"#).unwrap();
        let m = f.to_matrix().unwrap();
        assert_eq!(m, DenseMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]));
        assert_eq!(MatrixFile::from_matrix(&m), f);
    }

    #[test]
    fn shape_errors() {
        assert!(MatrixFile::parse(r#"{"n": 2, "entries": [[[0,0],[1,0]]]}"#).is_err());
        assert!(MatrixFile::parse(r#"{"n": 1, "entries": [[[0,0],[1,0]]]}"#).is_err());
        assert!(MatrixFile::parse(r#"{"n": 1, "entries": [[[0]]]}"#).is_err());
        assert!(MatrixFile::parse("not json").is_err());
    }
}
