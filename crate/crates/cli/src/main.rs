//! `conegeo`: cone geometry, unitarizers and the verification suites from
//! the command line. Results go to stdout as JSON; exit status is 1 when a
//! verified property fails and 2 on bad input.

mod io;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use conegeo::conegeo::{dist, emi_residual, segal_residual, Geodesic, MetricKind};
use conegeo::harness::sampling::Sampler;
use conegeo::harness::{gen_bounded_rep, run_suite, ExperimentConfig, GroupSpec, Suite};
use conegeo::interpolate::{uniform_grid, verify_interpolation};
use conegeo::matcore::{read_matrix, MatrixJson};
use conegeo::matgroups::{group_size_norm, orbit_diameter, BlockAlgebra, GroupJson, Representation, DEFAULT_CLOSURE_CAP};
use conegeo::splitexp::{pr_split_invertible, thmacs_check, CondExpectation};
use conegeo::unitarize::{is_unitarized, similarity_number, unitarize, UnitarizeMethod};
use conegeo::{ConeError, Result, Tolerances};

#[derive(Parser)]
#[command(name = "conegeo", version, about = "Geometry of the positive-definite cone and group unitarizers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Point at time t on the geodesic from a to b.
    Geodesic {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        t: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Distance between two positive matrices.
    Dist {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, default_value = "op")]
        metric: MetricKind,
    },
    /// Sample an inequality and report its smallest residual.
    Check {
        which: Inequality,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        dim: usize,
    },
    /// Finite matrix groups.
    Group {
        #[command(subcommand)]
        command: GroupCommand,
    },
    /// Positive s with s⁻¹Hs unitary.
    Unitarize {
        #[arg(long)]
        group: PathBuf,
        #[arg(long, default_value = "avg")]
        method: UnitarizeMethod,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Similarity number of a finite group.
    SimNumber {
        #[arg(long)]
        group: PathBuf,
    },
    /// Porta–Recht splitting g = u e^Z e^Y.
    Split {
        #[arg(long)]
        g: PathBuf,
        /// `pinching:P.json` or `avg:GROUP.json`.
        #[arg(long)]
        expectation: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Canonical unitarizer of Ad_g ∘ π₀ for the pinching by a projection.
    Thmacs {
        #[arg(long)]
        g: PathBuf,
        /// Generators of π₀.
        #[arg(long)]
        rep: PathBuf,
        #[arg(long)]
        proj: PathBuf,
        /// Block sizes of the ambient algebra, e.g. `2,3`; the full algebra if absent.
        #[arg(long, value_delimiter = ',')]
        blocks: Vec<usize>,
    },
    /// Interpolating family H_t along the geodesic from r2 to s2.
    Interpolate {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        r2: PathBuf,
        #[arg(long)]
        s2: PathBuf,
        #[arg(long, default_value_t = 11)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run verification suites.
    Verify {
        #[arg(default_value = "all")]
        suite: Suite,
        #[command(flatten)]
        run: RunArgs,
        /// JSON experiment config; flags given on the command line win.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Instance generators.
    Gen {
        #[command(subcommand)]
        command: GenCommand,
    },
}

#[derive(Subcommand)]
enum GroupCommand {
    /// Close the generators under products and report order and size.
    Close {
        #[arg(long)]
        group: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CLOSURE_CAP)]
        cap: usize,
    },
    /// Diameter of the orbit of a point.
    OrbitDiameter {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        point: PathBuf,
        #[arg(long, default_value = "op")]
        metric: MetricKind,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// A bounded representation: a unitary one conjugated by a positive
    /// matrix with the given condition number.
    Rep {
        /// e.g. `cyclic:4/reg`, `dihedral:3/std+reg`, `quaternion`.
        #[arg(long)]
        group: GroupSpec,
        #[arg(long, default_value_t = 1.0)]
        cond: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    #[arg(long)]
    trials: Option<usize>,
    /// Tolerance override, repeatable.
    #[arg(long = "tol", value_name = "KEY=VAL")]
    tol: Vec<String>,
    /// JSON lines report; the scatter CSV goes next to it.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Inequality {
    Segal,
    Emi,
}

#[derive(Serialize)]
struct SplitJson {
    u: MatrixJson,
    z: MatrixJson,
    y: MatrixJson,
    iterations: usize,
    reconstruction_residual: f64,
    kernel_residual: f64,
    range_residual: f64,
}

enum Status {
    Ok,
    PropertyFailed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::PropertyFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<Status> {
    match command {
        Command::Geodesic { a, b, t, out } => {
            let gamma = Geodesic::new(&io::posdef(&a)?, &io::posdef(&b)?)?;
            let point = gamma.eval(t);
            io::emit(&json!({ "value": MatrixJson::from(point.matrix()) }), out.as_ref())?;
        }
        Command::Dist { a, b, metric } => {
            let d = dist(&io::posdef(&a)?, &io::posdef(&b)?, metric)?;
            io::emit(&json!({ "value": d }), None)?;
        }
        Command::Check { which, trials, seed, dim } => return check(which, trials, seed, dim),
        Command::Group { command } => group(command)?,
        Command::Unitarize { group, method, out } => {
            let h = io::default_group(&group)?;
            let u = unitarize(&h, method)?;
            let ok = is_unitarized(&u, &Tolerances::default());
            let report = json!({
                "method": method.to_string(),
                "s": MatrixJson::from(u.s.matrix()),
                "residual": u.residual,
                "unitarized": ok,
            });
            io::emit(&report, out.as_ref())?;
            return Ok(if ok { Status::Ok } else { Status::PropertyFailed });
        }
        Command::SimNumber { group } => {
            let report = similarity_number(&io::default_group(&group)?)?;
            io::emit(&report.to_json(), None)?;
        }
        Command::Split { g, expectation, out } => split(&g, &expectation, out.as_ref())?,
        Command::Thmacs { g, rep, proj, blocks } => {
            let g = io::invertible(&g)?;
            let pi0 = Representation::from_group(&io::default_group(&rep)?)?;
            let p = read_matrix(&proj)?;
            let n = p.nrows();
            let algebra = if blocks.is_empty() { BlockAlgebra::full(n) } else { BlockAlgebra::blocks(&blocks) };
            if algebra.dim() != n {
                return Err(ConeError::BadSpec(format!("blocks sum to {}, projection has dimension {n}", algebra.dim())));
            }
            let identity = conegeo::matcore::identity(n);
            let e = CondExpectation::pinching(vec![p.clone(), identity - &p], algebra, &Tolerances::default())?;
            io::emit(&thmacs_check(&g, &pi0, &e)?, None)?;
        }
        Command::Interpolate { group, r2, s2, grid, out } => {
            if grid < 2 {
                return Err(ConeError::BadSpec("grid needs at least 2 points".into()));
            }
            let h = io::default_group(&group)?;
            let report = verify_interpolation(&h, &io::posdef(&r2)?, &io::posdef(&s2)?, &uniform_grid(grid))?;
            io::emit(&report.to_json(), out.as_ref())?;
            return Ok(if report.holds() { Status::Ok } else { Status::PropertyFailed });
        }
        Command::Verify { suite, run, config } => return verify(suite, run, config),
        Command::Gen { command: GenCommand::Rep { group, cond, seed, out } } => {
            let rep = gen_bounded_rep(&group, cond, seed)?;
            io::emit(&GroupJson::from_generators(rep.dim(), &rep.generator_images()), out.as_ref())?;
        }
    }
    Ok(Status::Ok)
}

/// Trial `i` draws from seed `seed + i`, so the worst one can be replayed alone.
fn check(which: Inequality, trials: usize, seed: u64, dim: usize) -> Result<Status> {
    if dim == 0 {
        return Err(ConeError::BadSpec("dim must be positive".into()));
    }
    let mut worst: Option<(f64, u64)> = None;
    for i in 0..trials as u64 {
        let s = seed.wrapping_add(i);
        let mut smp = Sampler::new(s);
        let r = match which {
            Inequality::Segal => {
                let (x, y) = (smp.hermitian(dim, 1.0), smp.hermitian(dim, 1.0));
                segal_residual(&x, &y)?
            }
            Inequality::Emi => {
                let a = smp.posdef(dim, 1.0);
                let (x, y) = (smp.hermitian(dim, 1.0), smp.hermitian(dim, 1.0));
                emi_residual(&a, &x, &y)?
            }
        };
        if worst.is_none_or(|(w, _)| r < w) {
            worst = Some((r, s));
        }
    }
    let (min_residual, worst_seed) = match worst {
        Some((r, s)) => (Some(r), Some(s)),
        None => (None, None),
    };
    io::emit(&json!({ "min_residual": min_residual, "worst_seed": worst_seed }), None)?;
    Ok(if min_residual.is_some_and(|r| r < -1e-10) { Status::PropertyFailed } else { Status::Ok })
}

fn group(command: GroupCommand) -> Result<()> {
    match command {
        GroupCommand::Close { group, cap } => {
            let h = io::group(&group, cap)?;
            let report = json!({
                "dim": h.dim(),
                "order": h.order(),
                "size": group_size_norm(&h),
                "unitarity_residual": h.unitarity_residual(),
                "unitary": h.is_unitary(&Tolerances::default()),
            });
            io::emit(&report, None)
        }
        GroupCommand::OrbitDiameter { group, point, metric } => {
            let h = io::default_group(&group)?;
            let d = orbit_diameter(&h, &io::posdef(&point)?, metric)?;
            io::emit(&json!({ "value": d }), None)
        }
    }
}

fn split(g: &Path, expectation: &str, out: Option<&PathBuf>) -> Result<()> {
    let g = io::invertible(g)?;
    let e = match expectation.split_once(':') {
        Some(("pinching", path)) => conegeo::splitexp::pinching_expectation(&read_matrix(path)?)?,
        Some(("avg", path)) => conegeo::splitexp::group_average_expectation(&io::default_group(path.as_ref())?)?,
        _ => return Err(ConeError::BadSpec(format!("expectation `{expectation}` is not pinching:FILE or avg:FILE"))),
    };
    let t = pr_split_invertible(&g, &e)?;
    let report = SplitJson {
        u: MatrixJson::from(t.u.matrix()),
        z: MatrixJson::from(t.z.matrix()),
        y: MatrixJson::from(t.y.matrix()),
        iterations: t.iterations,
        reconstruction_residual: (t.reconstruct() - g.matrix()).norm() / g.matrix().norm(),
        kernel_residual: e.apply_hermitian(&t.z).frobenius_norm(),
        range_residual: e.project_kernel(&t.y).frobenius_norm(),
    };
    io::emit(&report, out)
}

fn verify(suite: Suite, run: RunArgs, config: Option<PathBuf>) -> Result<Status> {
    let mut cfg = match &config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| ConeError::Io { path: path.clone(), source })?;
            serde_json::from_str(&text).map_err(|source| ConeError::Json { path: path.clone(), source })?
        }
        None => ExperimentConfig::default(),
    };
    cfg.suite = suite;
    if let Some(seed) = run.seed {
        cfg.seed = seed;
    }
    if let Some(dims) = run.dims {
        cfg.dims = dims;
    }
    if let Some(trials) = run.trials {
        cfg.trials = trials;
    }
    for spec in &run.tol {
        cfg.override_tolerance(spec)?;
    }
    if run.out.is_some() {
        cfg.out = run.out;
    }
    let report = run_suite(&cfg)?;
    io::print(&report.render())?;
    Ok(if report.passed() { Status::Ok } else { Status::PropertyFailed })
}
