//! Named finite groups, their unitary representations, and bounded
//! representations obtained by conjugating those with a positive matrix.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{ConeError, Result};
use crate::matcore::{c64, CMatrix, InvertibleMatrix};
use crate::matgroups::{MatrixGroup, Representation, DEFAULT_CLOSURE_CAP};
use crate::tolerance::Tolerances;

use super::sampling::Sampler;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupFamily {
    Cyclic(usize),
    Dihedral(usize),
    /// The quaternion group `Q₈`.
    Quaternion,
}

/// Which unitary representation of the family to build.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RepPlan {
    /// The defining 2-dimensional representation.
    Standard,
    /// Left-regular permutation representation.
    Regular,
    Sum(Vec<RepPlan>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct GroupSpec {
    pub family: GroupFamily,
    pub plan: RepPlan,
}

impl GroupFamily {
    pub fn order(&self) -> usize {
        match *self {
            GroupFamily::Cyclic(n) => n,
            GroupFamily::Dihedral(n) => 2 * n,
            GroupFamily::Quaternion => 8,
        }
    }

    /// Generators of the defining 2-dimensional representation.
    pub fn standard_generators(&self) -> Vec<CMatrix> {
        let rotation = |n: usize| {
            let (s, c) = (2.0 * PI / n as f64).sin_cos();
            CMatrix::from_row_slice(2, 2, &[c64(c, 0.0), c64(-s, 0.0), c64(s, 0.0), c64(c, 0.0)])
        };
        match *self {
            GroupFamily::Cyclic(n) => vec![rotation(n)],
            GroupFamily::Dihedral(n) => vec![
                rotation(n),
                CMatrix::from_row_slice(2, 2, &[c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(-1.0, 0.0)]),
            ],
            GroupFamily::Quaternion => vec![
                CMatrix::from_row_slice(2, 2, &[c64(0.0, 1.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(0.0, -1.0)]),
                CMatrix::from_row_slice(2, 2, &[c64(0.0, 0.0), c64(1.0, 0.0), c64(-1.0, 0.0), c64(0.0, 0.0)]),
            ],
        }
    }

    /// Is the standard representation irreducible over `C`?
    pub fn standard_is_irreducible(&self) -> bool {
        match *self {
            GroupFamily::Cyclic(_) => false,
            GroupFamily::Dihedral(n) => n >= 3,
            GroupFamily::Quaternion => true,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            GroupFamily::Cyclic(0) => Err(ConeError::BadSpec("cyclic group of order 0".into())),
            GroupFamily::Dihedral(n) if n < 2 => Err(ConeError::BadSpec(format!("dihedral group D{n}"))),
            _ => Ok(()),
        }
    }
}

impl RepPlan {
    pub fn dim(&self, family: &GroupFamily) -> usize {
        match self {
            RepPlan::Standard => 2,
            RepPlan::Regular => family.order(),
            RepPlan::Sum(parts) => parts.iter().map(|p| p.dim(family)).sum(),
        }
    }
}

impl GroupSpec {
    pub fn new(family: GroupFamily, plan: RepPlan) -> Self {
        Self { family, plan }
    }

    pub fn standard(family: GroupFamily) -> Self {
        Self::new(family, RepPlan::Standard)
    }

    pub fn dim(&self) -> usize {
        self.plan.dim(&self.family)
    }

    /// The unitary representation described by the plan. Element ids follow
    /// the closure order of the standard representation.
    pub fn unitary_rep(&self) -> Result<Representation> {
        self.family.validate()?;
        let base = MatrixGroup::close(&self.family.standard_generators(), DEFAULT_CLOSURE_CAP, &Tolerances::default())?;
        let standard = Representation::from_group(&base)?;
        build_plan(&standard, &self.plan)
    }
}

fn regular_images(table: &[Vec<usize>]) -> Vec<CMatrix> {
    let n = table.len();
    (0..n)
        .map(|x| {
            let mut p = CMatrix::zeros(n, n);
            for y in 0..n {
                p[(table[x][y], y)] = c64(1.0, 0.0);
            }
            p
        })
        .collect()
}

fn build_plan(standard: &Representation, plan: &RepPlan) -> Result<Representation> {
    match plan {
        RepPlan::Standard => Ok(standard.clone()),
        RepPlan::Regular => standard.with_images(regular_images(standard.table())),
        RepPlan::Sum(parts) => {
            let (first, rest) = parts.split_first().ok_or_else(|| ConeError::BadSpec("empty direct sum".into()))?;
            let mut acc = build_plan(standard, first)?;
            for p in rest {
                acc = acc.direct_sum(&build_plan(standard, p)?)?;
            }
            Ok(acc)
        }
    }
}

/// `Ad_s ∘ ρ` for a unitary `ρ` and a random positive `s` with condition
/// number `cond`.
pub fn gen_bounded_rep(spec: &GroupSpec, cond: f64, seed: u64) -> Result<Representation> {
    if !(cond >= 1.0 && cond.is_finite()) {
        return Err(ConeError::BadSpec(format!("condition target {cond} must be a finite number >= 1")));
    }
    let unitary = spec.unitary_rep()?;
    if cond == 1.0 {
        return Ok(unitary);
    }
    let s = Sampler::new(seed).posdef_with_condition(unitary.dim(), cond);
    let rep = unitary.conjugate(&InvertibleMatrix::new(s.into_matrix())?)?;
    let residual = rep.homomorphism_residual();
    if residual > Tolerances::default().group * cond * cond {
        return Err(ConeError::BadSpec(format!("homomorphism residual {residual:.3e} after conjugation")));
    }
    Ok(rep)
}

/// The sweep used by the suites: small groups, reducible and irreducible,
/// dimensions 2 to 10.
pub fn default_catalog() -> Vec<GroupSpec> {
    use GroupFamily::*;
    use RepPlan::*;
    vec![
        GroupSpec::new(Cyclic(3), Standard),
        GroupSpec::new(Cyclic(4), Regular),
        GroupSpec::new(Dihedral(3), Standard),
        GroupSpec::new(Dihedral(4), Standard),
        GroupSpec::new(Dihedral(4), Sum(vec![Standard, Standard])),
        GroupSpec::new(Dihedral(3), Regular),
        GroupSpec::new(Quaternion, Standard),
        GroupSpec::new(Quaternion, Regular),
        GroupSpec::new(Dihedral(4), Sum(vec![Standard, Regular])),
        GroupSpec::new(Cyclic(5), Sum(vec![Standard, Regular])),
    ]
}

impl fmt::Display for RepPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepPlan::Standard => write!(f, "std"),
            RepPlan::Regular => write!(f, "reg"),
            RepPlan::Sum(parts) => {
                let names: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "{}", names.join("+"))
            }
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            GroupFamily::Cyclic(n) => write!(f, "cyclic:{n}")?,
            GroupFamily::Dihedral(n) => write!(f, "dihedral:{n}")?,
            GroupFamily::Quaternion => write!(f, "quaternion")?,
        }
        write!(f, "/{}", self.plan)
    }
}

/// `family[:n][/plan]` with plan a `+`-separated list of `std` and `reg`,
/// e.g. `dihedral:4/std+reg`. The plan defaults to `std`.
impl FromStr for GroupSpec {
    type Err = ConeError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || ConeError::BadSpec(format!("unrecognized group spec {s:?}"));
        let (group, plan) = s.split_once('/').unwrap_or((s, "std"));
        let (name, param) = match group.split_once(':') {
            Some((n, p)) => (n, Some(p.parse::<usize>().map_err(|_| bad())?)),
            None => (group, None),
        };
        let family = match (name, param) {
            ("cyclic", Some(n)) => GroupFamily::Cyclic(n),
            ("dihedral", Some(n)) => GroupFamily::Dihedral(n),
            ("quaternion", None) => GroupFamily::Quaternion,
            _ => return Err(bad()),
        };
        let parts = plan
            .split('+')
            .map(|p| match p {
                "std" => Ok(RepPlan::Standard),
                "reg" => Ok(RepPlan::Regular),
                _ => Err(bad()),
            })
            .collect::<Result<Vec<_>>>()?;
        let plan = if parts.len() == 1 { parts.into_iter().next().expect("one part") } else { RepPlan::Sum(parts) };
        family.validate()?;
        Ok(Self { family, plan })
    }
}

impl TryFrom<String> for GroupSpec {
    type Error = ConeError;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<GroupSpec> for String {
    fn from(g: GroupSpec) -> String {
        g.to_string()
    }
}
