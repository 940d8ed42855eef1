use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use conegeo::matcore::read_matrix;
use conegeo::matgroups::{GroupJson, MatrixGroup, DEFAULT_CLOSURE_CAP};
use conegeo::{CMatrix, ConeError, InvertibleMatrix, PosDefMatrix, Result, Tolerances};

pub fn posdef(path: &Path) -> Result<PosDefMatrix> {
    PosDefMatrix::from_matrix(read_matrix(path)?).map_err(|e| context(path, e))
}

pub fn invertible(path: &Path) -> Result<InvertibleMatrix> {
    InvertibleMatrix::new(read_matrix(path)?).map_err(|e| context(path, e))
}

pub fn generators(path: &Path) -> Result<Vec<CMatrix>> {
    GroupJson::read(path)?.to_generators().map_err(|e| context(path, e))
}

pub fn group(path: &Path, cap: usize) -> Result<MatrixGroup> {
    MatrixGroup::close(&generators(path)?, cap, &Tolerances::default())
}

pub fn default_group(path: &Path) -> Result<MatrixGroup> {
    group(path, DEFAULT_CLOSURE_CAP)
}

/// Validation errors from a file get its name prefixed.
fn context(path: &Path, e: ConeError) -> ConeError {
    match e {
        ConeError::Io { .. } | ConeError::Json { .. } => e,
        other => ConeError::Format(format!("{}: {other}", path.display())),
    }
}

/// Pretty JSON to `out` if given, else stdout.
pub fn emit<T: Serialize>(value: &T, out: Option<&PathBuf>) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("report types serialize");
    match out {
        Some(path) => std::fs::write(path, text + "\n").map_err(|source| ConeError::Io { path: path.clone(), source }),
        None => print(&(text + "\n")),
    }
}

pub fn print(text: &str) -> Result<()> {
    // a closed pipe (`| head`) is not an error worth reporting
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(ConeError::Io { path: PathBuf::from("<stdout>"), source: e }),
        _ => Ok(()),
    }
}
