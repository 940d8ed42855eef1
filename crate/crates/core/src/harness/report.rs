use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{ConeError, Result};

use super::Suite;

#[derive(Clone, Debug, Serialize)]
pub struct InstanceRecord {
    pub check: &'static str,
    pub index: usize,
    /// `None` when the instance failed with an error.
    pub margin: Option<f64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub id: &'static str,
    pub anchor: &'static str,
    pub suite: Suite,
    pub instances: usize,
    pub failures: usize,
    /// Smallest margin over instances that ran; `None` if none did.
    pub worst_margin: Option<f64>,
    pub passed: bool,
    pub runtime_ms: f64,
    pub first_error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub seed: u64,
    pub trials: usize,
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub instances: usize,
    pub all_passed: bool,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub checks: Vec<CheckRecord>,
    pub instances: Vec<InstanceRecord>,
    /// `(log|H|, log Sim(H))` pairs collected along the sweep.
    pub scatter: Vec<(f64, f64)>,
    pub summary: Summary,
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum Line<'a> {
    Instance(&'a InstanceRecord),
    Check(&'a CheckRecord),
    Summary(&'a Summary),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> ConeError + '_ {
    move |source| ConeError::Io { path: path.to_path_buf(), source }
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.summary.all_passed
    }

    pub fn check(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.id == id)
    }

    /// Everything but wall-clock times: what two runs of the same
    /// configuration must agree on bit for bit.
    pub fn fingerprint(&self) -> Vec<(String, bool, usize, Option<u64>)> {
        self.checks
            .iter()
            .map(|c| (c.id.to_string(), c.passed, c.instances, c.worst_margin.map(f64::to_bits)))
            .chain(self.instances.iter().map(|r| (r.check.to_string(), r.error.is_none(), r.index, r.margin.map(f64::to_bits))))
            .collect()
    }

    /// JSON lines: one record per instance, one per check, then the summary.
    pub fn write_jsonl(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(io_err(path))?;
        let mut w = BufWriter::new(file);
        let lines = self
            .instances
            .iter()
            .map(Line::Instance)
            .chain(self.checks.iter().map(Line::Check))
            .chain(std::iter::once(Line::Summary(&self.summary)));
        for line in lines {
            let text = serde_json::to_string(&line).map_err(|source| ConeError::Json { path: path.to_path_buf(), source })?;
            writeln!(w, "{text}").map_err(io_err(path))?;
        }
        w.flush().map_err(io_err(path))
    }

    pub fn write_scatter_csv(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(io_err(path))?;
        let mut w = BufWriter::new(file);
        writeln!(w, "log_size,log_sim").map_err(io_err(path))?;
        for (x, y) in &self.scatter {
            writeln!(w, "{x:.17e},{y:.17e}").map_err(io_err(path))?;
        }
        w.flush().map_err(io_err(path))
    }

    /// Writes `path` and the scatter next to it with a `.csv` extension.
    pub fn write(&self, path: &Path) -> Result<PathBuf> {
        self.write_jsonl(path)?;
        let csv = path.with_extension("csv");
        self.write_scatter_csv(&csv)?;
        Ok(csv)
    }

    /// One line per check, for terminals.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let margin = c.worst_margin.map_or("-".to_string(), |m| format!("{m:.3e}"));
            out.push_str(&format!(
                "{} {:<36} n={:<5} worst_margin={:<11} {:>9.1}ms\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.id,
                c.instances,
                margin,
                c.runtime_ms
            ));
            if let Some(e) = &c.first_error {
                out.push_str(&format!("     first error: {e}\n"));
            }
        }
        let s = &self.summary;
        out.push_str(&format!("{} of {} checks passed ({} instances)\n", s.passed, s.checks, s.instances));
        out
    }
}
