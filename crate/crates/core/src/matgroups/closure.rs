use std::collections::{HashMap, VecDeque};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conegeo::{act, dist, MetricKind};
use crate::error::{check_dim, ConeError, Result};
use crate::matcore::MatrixJson;
use crate::matcore::{c64, identity, op_norm, CMatrix, InvertibleMatrix, PosDefMatrix};
use crate::tolerance::Tolerances;

pub const DEFAULT_CLOSURE_CAP: usize = 10_000;

// entries past this size mean the "group" is escaping to infinity
const BLOWUP: f64 = 1e12;

/// Hash index for near-equality lookups: a unit-norm linear functional is
/// 1-Lipschitz in Frobenius norm, so neighbours within `tol` land in the
/// same or an adjacent bucket.
#[derive(Clone, Debug)]
struct ElementIndex {
    weights: CMatrix,
    width: f64,
    buckets: HashMap<i64, Vec<usize>>,
}

impl ElementIndex {
    fn new(n: usize) -> Self {
        let mut w = CMatrix::from_fn(n, n, |i, j| {
            let t = 1.3 * i as f64 + 2.1 * j as f64 + 0.7 + 0.37 * (i * j) as f64;
            c64(t.cos(), t.sin() * 0.83)
        });
        let norm = w.norm();
        w /= c64(norm, 0.0);
        Self { weights: w, width: 1e-5, buckets: HashMap::new() }
    }

    fn key(&self, m: &CMatrix) -> f64 {
        self.weights.iter().zip(m.iter()).map(|(w, x)| (w.conj() * x).re).sum()
    }

    fn bucket(&self, m: &CMatrix) -> i64 {
        (self.key(m) / self.width).floor() as i64
    }

    fn find(&self, m: &CMatrix, elements: &[CMatrix], tol: f64) -> Option<usize> {
        let b = self.bucket(m);
        (b - 1..=b + 1)
            .filter_map(|k| self.buckets.get(&k))
            .flatten()
            .copied()
            .find(|&i| (&elements[i] - m).norm() <= tol)
    }

    fn insert(&mut self, m: &CMatrix, id: usize) {
        let b = self.bucket(m);
        self.buckets.entry(b).or_default().push(id);
    }
}

/// A finite group of invertible matrices, enumerated from generators.
#[derive(Clone, Debug)]
pub struct MatrixGroup {
    dim: usize,
    generators: Vec<CMatrix>,
    elements: Vec<CMatrix>,
    cap: usize,
    tol: f64,
    index: ElementIndex,
}

/// Serialized form: `{"dim": n, "generators": [matrix, ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupJson {
    pub dim: usize,
    pub generators: Vec<MatrixJson>,
}

impl GroupJson {
    pub fn from_generators(dim: usize, generators: &[CMatrix]) -> Self {
        Self { dim, generators: generators.iter().map(MatrixJson::from).collect() }
    }

    pub fn to_generators(&self) -> Result<Vec<CMatrix>> {
        let gens = self.generators.iter().map(|g| g.to_matrix()).collect::<Result<Vec<_>>>()?;
        for g in &gens {
            check_dim(self.dim, g.nrows())?;
        }
        Ok(gens)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConeError::Io { path: path.to_path_buf(), source })?;
        serde_json::from_str(&text).map_err(|source| ConeError::Json { path: path.to_path_buf(), source })
    }
}

pub fn close_group(generators: &[CMatrix], cap: usize) -> Result<MatrixGroup> {
    MatrixGroup::close(generators, cap, &Tolerances::default())
}

impl MatrixGroup {
    pub fn close(generators: &[CMatrix], cap: usize, tol: &Tolerances) -> Result<Self> {
        let first = generators.first().ok_or(ConeError::EmptyInput)?;
        let n = first.nrows();
        for g in generators {
            InvertibleMatrix::new_with(g.clone(), tol)?;
            check_dim(n, g.nrows())?;
        }
        let mut group = Self {
            dim: n,
            generators: generators.to_vec(),
            elements: Vec::new(),
            cap,
            tol: tol.group,
            index: ElementIndex::new(n),
        };
        group.push(identity(n));
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for k in 0..group.generators.len() {
                let p = &group.generators[k] * &group.elements[i];
                if !p.iter().all(|z| z.re.is_finite() && z.im.is_finite()) || p.norm() > BLOWUP {
                    return Err(ConeError::CapExceeded { cap });
                }
                // compare relative to scale for badly conditioned images
                if group.find_scaled(&p).is_none() {
                    if group.elements.len() >= cap {
                        return Err(ConeError::CapExceeded { cap });
                    }
                    queue.push_back(group.push(p));
                }
            }
        }
        // left multiplication by generators closes a finite set under
        // products; inverses come for free, but drift would break that
        for g in &group.generators {
            let inv = InvertibleMatrix::new_with(g.clone(), tol)?.inverse().clone();
            if group.find_scaled(&inv).is_none() {
                return Err(ConeError::CapExceeded { cap });
            }
        }
        Ok(group)
    }

    fn push(&mut self, m: CMatrix) -> usize {
        let id = self.elements.len();
        self.index.insert(&m, id);
        self.elements.push(m);
        id
    }

    fn find_scaled(&self, m: &CMatrix) -> Option<usize> {
        self.index.find(m, &self.elements, self.tol * m.norm().max(1.0))
    }

    /// Index of the element equal to `m` within the closure tolerance.
    pub fn find(&self, m: &CMatrix) -> Option<usize> {
        if m.nrows() != self.dim || m.ncols() != self.dim {
            return None;
        }
        self.find_scaled(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn to_json(&self) -> GroupJson {
        GroupJson::from_generators(self.dim, &self.generators)
    }

    /// Largest `‖hh* − id‖_F` over elements.
    pub fn unitarity_residual(&self) -> f64 {
        self.elements.par_iter().map(crate::matcore::unitarity_residual).reduce(|| 0.0, f64::max)
    }

    pub fn is_unitary(&self, tol: &Tolerances) -> bool {
        self.unitarity_residual() <= tol.unitary * (self.dim as f64).sqrt() * 10.0
    }

    /// `s H s⁻¹`, re-closed from conjugated generators.
    pub fn conjugated(&self, s: &InvertibleMatrix) -> Result<Self> {
        check_dim(self.dim, s.dim())?;
        let gens: Vec<CMatrix> = self.generators.iter().map(|g| s.matrix() * g * s.inverse()).collect();
        Self::close(&gens, self.cap, &Tolerances { group: self.tol, ..Tolerances::default() })
    }

    /// Conjugate every enumerated element without re-closing (keeps ids).
    pub fn conjugate_elements(&self, s: &InvertibleMatrix) -> Vec<CMatrix> {
        self.elements.iter().map(|h| s.matrix() * h * s.inverse()).collect()
    }
}

/// `|H| = max_h ‖h‖`.
pub fn group_size_norm(h: &MatrixGroup) -> f64 {
    h.elements.par_iter().map(op_norm).reduce(|| 1.0, f64::max)
}

pub fn orbit(h: &MatrixGroup, a: &PosDefMatrix) -> Result<Vec<PosDefMatrix>> {
    check_dim(h.dim, a.dim())?;
    let images: Vec<PosDefMatrix> =
        h.elements.par_iter().map(|g| act(g, a)).collect::<Result<Vec<_>>>()?;
    let mut out: Vec<PosDefMatrix> = Vec::new();
    for p in images {
        let scale = p.matrix().norm().max(1.0);
        if !out.iter().any(|q| (q.matrix() - p.matrix()).norm() <= h.tol * scale) {
            out.push(p);
        }
    }
    Ok(out)
}

/// `D_H(a)`. Since each `h` is an isometry, the pairwise maximum over the
/// orbit equals `max_h d(a, h·a)`.
pub fn orbit_diameter(h: &MatrixGroup, a: &PosDefMatrix, m: MetricKind) -> Result<f64> {
    check_dim(h.dim, a.dim())?;
    h.elements
        .par_iter()
        .map(|g| act(g, a).and_then(|b| dist(a, &b, m)))
        .try_reduce(|| 0.0, |x, y| Ok(x.max(y)))
}

/// Brute-force pairwise maximum; quadratic in the orbit size.
pub fn orbit_diameter_pairwise(h: &MatrixGroup, a: &PosDefMatrix, m: MetricKind) -> Result<f64> {
    let pts = orbit(h, a)?;
    (0..pts.len())
        .into_par_iter()
        .flat_map_iter(|i| (i + 1..pts.len()).map(move |j| (i, j)))
        .map(|(i, j)| dist(&pts[i], &pts[j], m))
        .try_reduce(|| 0.0, |x, y| Ok(x.max(y)))
}
