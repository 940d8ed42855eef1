//! Instance generation, verification suites and reports.

mod catalog;
mod checks;
mod report;
pub mod sampling;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ConeError, Result};
use crate::tolerance::Tolerances;

pub use catalog::{default_catalog, gen_bounded_rep, GroupFamily, GroupSpec, RepPlan};
pub use checks::{registry, CheckInfo};
pub use report::{CheckRecord, InstanceRecord, Summary, SuiteReport};

use checks::{Check, Ctx, Outcome};
use sampling::Sampler;

/// Environment variable capping the worker pool.
pub const THREADS_ENV: &str = "CONEGEO_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Geometry,
    Groups,
    Unitarize,
    Split,
    Interpolate,
    All,
}

impl Suite {
    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Suite::Geometry => "geometry",
            Suite::Groups => "groups",
            Suite::Unitarize => "unitarize",
            Suite::Split => "split",
            Suite::Interpolate => "interpolate",
            Suite::All => "all",
        };
        f.write_str(s)
    }
}

impl FromStr for Suite {
    type Err = ConeError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "geometry" => Suite::Geometry,
            "groups" => Suite::Groups,
            "unitarize" => Suite::Unitarize,
            "split" => Suite::Split,
            "interpolate" => Suite::Interpolate,
            "all" => Suite::All,
            _ => return Err(ConeError::BadSpec(format!("unknown suite {s:?}"))),
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub dims: Vec<usize>,
    pub trials: usize,
    pub suite: Suite,
    pub catalog: Vec<GroupSpec>,
    pub tolerances: Tolerances,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 20_240_601,
            dims: vec![2, 4, 8, 16],
            trials: 1000,
            suite: Suite::All,
            catalog: default_catalog(),
            tolerances: Tolerances::default(),
            out: None,
        }
    }
}

impl ExperimentConfig {
    /// Apply a `KEY=VAL` tolerance override.
    pub fn override_tolerance(&mut self, spec: &str) -> Result<()> {
        self.tolerances.apply_override(spec)
    }

    fn validate(&self) -> Result<()> {
        if self.dims.is_empty() || self.dims.contains(&0) {
            return Err(ConeError::BadSpec("dims must be a nonempty list of positive integers".into()));
        }
        if self.catalog.is_empty() {
            return Err(ConeError::BadSpec("empty group catalog".into()));
        }
        Ok(())
    }
}

fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse::<usize>().ok().filter(|&n| n > 0)
}

/// Runs the selected checks and writes the report if `cfg.out` is set.
///
/// Every instance draws from its own stream keyed by `(seed, check id,
/// index)`, so the report does not depend on the thread count.
pub fn run_suite(cfg: &ExperimentConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let report = match thread_cap() {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| ConeError::BadSpec(format!("thread pool: {e}")))?;
            pool.install(|| run_checks(cfg))
        }
        None => run_checks(cfg),
    };
    if let Some(path) = &cfg.out {
        report.write(path)?;
    }
    Ok(report)
}

fn run_checks(cfg: &ExperimentConfig) -> SuiteReport {
    let ctx = Ctx { cfg, tol: cfg.tolerances };
    let mut checks = Vec::new();
    let mut instances = Vec::new();
    let mut scatter = Vec::new();
    if cfg.trials > 0 {
        for check in checks::checks().into_iter().filter(|c| cfg.suite.includes(c.suite)) {
            let (record, rows, points) = run_check(&ctx, &check);
            checks.push(record);
            instances.extend(rows);
            scatter.extend(points);
        }
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    let summary = Summary {
        seed: cfg.seed,
        trials: cfg.trials,
        checks: checks.len(),
        passed,
        failed: checks.len() - passed,
        instances: instances.len(),
        all_passed: passed == checks.len(),
    };
    SuiteReport { checks, instances, scatter, summary }
}

fn run_check(ctx: &Ctx, check: &Check) -> (CheckRecord, Vec<InstanceRecord>, Vec<(f64, f64)>) {
    let start = Instant::now();
    let n = (check.count)(ctx.cfg);
    let outcomes: Vec<Result<Outcome>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut smp = Sampler::for_instance(ctx.cfg.seed, check.id, i as u64);
            (check.run)(ctx, &mut smp, i)
        })
        .collect();
    let mut rows = Vec::with_capacity(n);
    let mut points = Vec::new();
    let mut worst: Option<f64> = None;
    let mut failures = 0;
    let mut first_error = None;
    for (index, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(o) => {
                let ok = o.margin >= 0.0;
                if !ok {
                    failures += 1;
                }
                worst = Some(worst.map_or(o.margin, |w: f64| if o.margin.is_nan() { f64::NAN } else { w.min(o.margin) }));
                points.extend(o.point);
                rows.push(InstanceRecord { check: check.id, index, margin: Some(o.margin), error: None });
            }
            Err(e) => {
                failures += 1;
                let msg = e.to_string();
                first_error.get_or_insert_with(|| format!("instance {index}: {msg}"));
                rows.push(InstanceRecord { check: check.id, index, margin: None, error: Some(msg) });
            }
        }
    }
    let record = CheckRecord {
        id: check.id,
        anchor: check.anchor,
        suite: check.suite,
        instances: n,
        failures,
        worst_margin: worst,
        passed: failures == 0,
        runtime_ms: start.elapsed().as_secs_f64() * 1e3,
        first_error,
    };
    (record, rows, points)
}
