use super::{c64, CMatrix};

/// Ascending eigenvalues with an orthonormal eigenvector frame (columns).
#[derive(Clone, Debug)]
pub struct Spectrum {
    values: Vec<f64>,
    frame: CMatrix,
}

impl Spectrum {
    /// Decompose a matrix the caller guarantees is Hermitian.
    pub(crate) fn of_hermitian(m: &CMatrix) -> Self {
        let eig = m.clone().symmetric_eigen();
        Self::from_parts(eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
    }

    /// Sort `values` ascending, permuting frame columns alongside.
    pub(crate) fn from_parts(values: Vec<f64>, frame: CMatrix) -> Self {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        if order.iter().enumerate().all(|(k, &i)| k == i) {
            return Self { values, frame };
        }
        let sorted: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        let frame = CMatrix::from_fn(frame.nrows(), frame.ncols(), |r, c| frame[(r, order[c])]);
        Self { values: sorted, frame }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn frame(&self) -> &CMatrix {
        &self.frame
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `frame · diag(f(λ)) · frame*`, symmetrized.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let mut scaled = self.frame.clone();
        for (j, &lambda) in self.values.iter().enumerate() {
            let w = c64(f(lambda), 0.0);
            scaled.column_mut(j).iter_mut().for_each(|z| *z *= w);
        }
        let m = scaled * self.frame.adjoint();
        (&m + m.adjoint()) * c64(0.5, 0.0)
    }

    /// Spectrum of the mapped matrix, reusing the frame.
    pub(crate) fn mapped(&self, f: impl Fn(f64) -> f64) -> Spectrum {
        Spectrum::from_parts(self.values.iter().map(|&x| f(x)).collect(), self.frame.clone())
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.apply(|x| x)
    }
}
