use nalgebra::DMatrix;

use crate::matcore::{c64, CMatrix, HermitianMatrix};

/// A block-diagonal *-subalgebra `⊕ M_{k_i}` of `M_n`; a single block is
/// the full matrix algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockAlgebra {
    blocks: Vec<usize>,
}

impl BlockAlgebra {
    pub fn full(n: usize) -> Self {
        Self { blocks: vec![n] }
    }

    pub fn blocks(sizes: &[usize]) -> Self {
        assert!(sizes.iter().all(|&k| k > 0), "block sizes must be positive");
        Self { blocks: sizes.to_vec() }
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().sum()
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.blocks
    }

    pub fn is_full(&self) -> bool {
        self.blocks.len() == 1
    }

    fn block_of(&self) -> Vec<usize> {
        self.blocks.iter().enumerate().flat_map(|(b, &k)| std::iter::repeat_n(b, k)).collect()
    }

    /// Real dimension of the Hermitian part, `Σ k_i²`.
    pub fn hermitian_dim(&self) -> usize {
        self.blocks.iter().map(|k| k * k).sum()
    }

    /// Orthonormal basis of the Hermitian part under `Re tr(XY)`.
    pub fn hermitian_basis(&self) -> Vec<HermitianMatrix> {
        let n = self.dim();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let mut basis = Vec::with_capacity(self.hermitian_dim());
        let mut offset = 0;
        for &k in &self.blocks {
            for i in offset..offset + k {
                let mut m = CMatrix::zeros(n, n);
                m[(i, i)] = c64(1.0, 0.0);
                basis.push(HermitianMatrix::hermitian_part(&m));
                for j in i + 1..offset + k {
                    let mut re = CMatrix::zeros(n, n);
                    re[(i, j)] = c64(r, 0.0);
                    re[(j, i)] = c64(r, 0.0);
                    basis.push(HermitianMatrix::hermitian_part(&re));
                    let mut im = CMatrix::zeros(n, n);
                    im[(i, j)] = c64(0.0, r);
                    im[(j, i)] = c64(0.0, -r);
                    basis.push(HermitianMatrix::hermitian_part(&im));
                }
            }
            offset += k;
        }
        basis
    }

    /// Zero out entries outside the diagonal blocks.
    pub fn compress(&self, m: &CMatrix) -> CMatrix {
        let owner = self.block_of();
        CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| if owner[i] == owner[j] { m[(i, j)] } else { c64(0.0, 0.0) })
    }

    /// Frobenius norm of the off-block part.
    pub fn leakage(&self, m: &CMatrix) -> f64 {
        (m - self.compress(m)).norm()
    }
}

/// Real and imaginary parts of all entries, row-major.
pub fn realify(m: &CMatrix) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out.push(m[(i, j)].re);
            out.push(m[(i, j)].im);
        }
    }
    out
}

/// Orthonormal null vectors of the real matrix whose columns are given,
/// using singular values below `rel_threshold · σ_max` (or below an absolute
/// floor when the matrix vanishes).
/// Singular values at most `rel_threshold · max(σ_max, reference)` count as
/// zero; `reference` is the natural size of the map, so a map that is zero up
/// to roundoff still has a full kernel.
pub(crate) fn null_space_of_columns(columns: &[Vec<f64>], rel_threshold: f64, reference: f64) -> Vec<Vec<f64>> {
    let k = columns.len();
    if k == 0 {
        return Vec::new();
    }
    let rows = columns[0].len();
    let a = DMatrix::from_fn(rows, k, |i, j| columns[j][i]);
    // reduce tall systems to k×k before the SVD
    let square = if rows > k { a.qr().r() } else { a };
    let padded = if square.nrows() < k {
        let mut p = DMatrix::zeros(k, k);
        p.view_mut((0, 0), (square.nrows(), k)).copy_from(&square);
        p
    } else {
        square
    };
    let (singular_values, v_t) = checked_svd(&padded);
    let sigma_max = singular_values.max().max(reference);
    let threshold = if sigma_max > 1e-300 { rel_threshold * sigma_max } else { f64::INFINITY };
    singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= threshold)
        .map(|(i, _)| v_t.row(i).iter().copied().collect())
        .collect()
}

/// Singular values and `V^T` of a square matrix. nalgebra occasionally
/// returns an inaccurate triplet on matrices with heavily repeated singular
/// values; when the reconstruction is off we redo the SVD of `A·Q` for a
/// fixed orthogonal `Q`, which breaks the structure, and rotate `V` back.
fn checked_svd(a: &DMatrix<f64>) -> (nalgebra::DVector<f64>, DMatrix<f64>) {
    let k = a.ncols();
    let scale = a.norm().max(1e-300);
    let attempt = |m: &DMatrix<f64>| {
        let svd = m.clone().svd(true, true);
        let err = (svd.clone().recompose().expect("U and V^T requested") - m).norm();
        (svd.singular_values, svd.v_t.expect("requested V^T"), err)
    };
    let (s, v_t, err) = attempt(a);
    if err <= 1e-12 * scale {
        return (s, v_t);
    }
    let q = DMatrix::from_fn(k, k, |i, j| ((i * k + j) as f64 * 0.7548776662466927).fract() - 0.5).qr().q();
    let (s2, v_t2, err2) = attempt(&(a * &q));
    if err2 < err {
        // A·Q = UΣW^T gives A = UΣ(QW)^T
        (s2, v_t2 * q.transpose())
    } else {
        (s, v_t)
    }
}

/// Orthonormal basis (in the span of `basis`) of the kernel of a real-linear
/// map on Hermitians, given as a list of matrix outputs per input.
pub(crate) fn linear_null_space(
    basis: &[HermitianMatrix],
    map: impl Fn(&HermitianMatrix) -> Vec<CMatrix>,
    rel_threshold: f64,
    reference: f64,
) -> Vec<HermitianMatrix> {
    let columns: Vec<Vec<f64>> =
        basis.iter().map(|b| map(b).iter().flat_map(realify).collect()).collect();
    combine_all(basis, &null_space_of_columns(&columns, rel_threshold, reference))
}

pub(crate) fn combine(basis: &[HermitianMatrix], coeffs: &[f64]) -> HermitianMatrix {
    let n = basis[0].dim();
    let mut m = CMatrix::zeros(n, n);
    for (b, &c) in basis.iter().zip(coeffs) {
        if c != 0.0 {
            m += b.matrix() * c64(c, 0.0);
        }
    }
    HermitianMatrix::hermitian_part(&m)
}

pub(crate) fn combine_all(basis: &[HermitianMatrix], vectors: &[Vec<f64>]) -> Vec<HermitianMatrix> {
    vectors.iter().map(|v| combine(basis, v)).collect()
}
