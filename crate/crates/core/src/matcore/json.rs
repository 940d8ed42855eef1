use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{c64, CMatrix};
use crate::error::{ConeError, Result};

/// Wire form of a matrix: `{"dim": n, "entries": [[[re, im], …], …]}`,
/// row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub dim: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl From<&CMatrix> for MatrixJson {
    fn from(m: &CMatrix) -> Self {
        let entries = (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
            .collect();
        Self { dim: m.nrows(), entries }
    }
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<CMatrix> {
        if self.entries.len() != self.dim {
            return Err(ConeError::Format(format!(
                "expected {} rows, found {}",
                self.dim,
                self.entries.len()
            )));
        }
        if let Some((i, row)) = self.entries.iter().enumerate().find(|(_, r)| r.len() != self.dim) {
            return Err(ConeError::Format(format!(
                "ragged row {i}: expected {} entries, found {}",
                self.dim,
                row.len()
            )));
        }
        if self.entries.iter().flatten().flatten().any(|x| !x.is_finite()) {
            return Err(ConeError::Format("non-finite entry".into()));
        }
        Ok(CMatrix::from_fn(self.dim, self.dim, |i, j| {
            let [re, im] = self.entries[i][j];
            c64(re, im)
        }))
    }
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<CMatrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| ConeError::Io { path: path.into(), source })?;
    let json: MatrixJson =
        serde_json::from_str(&text).map_err(|source| ConeError::Json { path: path.into(), source })?;
    json.to_matrix().map_err(|e| ConeError::Format(format!("{}: {e}", path.display())))
}

pub fn write_matrix(path: impl AsRef<Path>, m: &CMatrix) -> Result<()> {
    let path = path.as_ref();
    let text = serde_json::to_string_pretty(&MatrixJson::from(m))
        .map_err(|source| ConeError::Json { path: path.into(), source })?;
    fs::write(path, text).map_err(|source| ConeError::Io { path: path.into(), source })
}
