use rayon::prelude::*;

use crate::error::{check_dim, ConeError, Result};
use crate::matcore::{CMatrix, InvertibleMatrix};
use crate::tolerance::Tolerances;

use super::closure::MatrixGroup;

/// A homomorphism from an abstract finite group (multiplication table over
/// ids, id 0 the identity) into `GL_n`.
#[derive(Clone, Debug)]
pub struct Representation {
    table: Vec<Vec<usize>>,
    images: Vec<CMatrix>,
    generators: Vec<usize>,
}

impl Representation {
    /// The tautological representation of an enumerated group.
    pub fn from_group(group: &MatrixGroup) -> Result<Self> {
        let elems = group.elements();
        let table = elems
            .par_iter()
            .map(|x| {
                elems
                    .iter()
                    .map(|y| group.find(&(x * y)).ok_or(ConeError::CapExceeded { cap: group.cap() }))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let generators = group
            .generators()
            .iter()
            .map(|g| group.find(g).ok_or(ConeError::CapExceeded { cap: group.cap() }))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { table, images: elems.to_vec(), generators })
    }

    /// Same abstract group with new images; the caller vouches for the
    /// homomorphism property, which [`Self::homomorphism_residual`] measures.
    pub fn with_images(&self, images: Vec<CMatrix>) -> Result<Self> {
        if images.len() != self.images.len() {
            return Err(ConeError::DimMismatch { expected: self.images.len(), found: images.len() });
        }
        Ok(Self { table: self.table.clone(), images, generators: self.generators.clone() })
    }

    /// Direct sum `π ⊕ ρ` of two representations of the same abstract group.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.table != other.table {
            return Err(ConeError::BadSpec("direct sum of representations of different groups".into()));
        }
        let images =
            self.images.iter().zip(&other.images).map(|(a, b)| crate::matcore::direct_sum(&[a, b])).collect();
        self.with_images(images)
    }

    pub fn order(&self) -> usize {
        self.images.len()
    }

    pub fn dim(&self) -> usize {
        self.images[0].nrows()
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn product(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    pub fn image(&self, x: usize) -> &CMatrix {
        &self.images[x]
    }

    pub fn images(&self) -> &[CMatrix] {
        &self.images
    }

    pub fn generator_ids(&self) -> &[usize] {
        &self.generators
    }

    pub fn generator_images(&self) -> Vec<CMatrix> {
        self.generators.iter().map(|&g| self.images[g].clone()).collect()
    }

    /// `x ↦ s π(x) s⁻¹`.
    pub fn conjugate(&self, s: &InvertibleMatrix) -> Result<Self> {
        check_dim(self.dim(), s.dim())?;
        let images = self.images.iter().map(|m| s.matrix() * m * s.inverse()).collect();
        self.with_images(images)
    }

    /// `max_{x,y} ‖π(xy) − π(x)π(y)‖_F`, together with `‖π(e) − id‖_F`.
    pub fn homomorphism_residual(&self) -> f64 {
        let unit = (&self.images[0] - crate::matcore::identity(self.dim())).norm();
        let pairs = (0..self.order())
            .into_par_iter()
            .map(|x| {
                (0..self.order())
                    .map(|y| (&self.images[self.table[x][y]] - &self.images[x] * &self.images[y]).norm())
                    .fold(0.0, f64::max)
            })
            .reduce(|| 0.0, f64::max);
        unit.max(pairs)
    }

    /// `sup_x ‖π(x)‖`.
    pub fn norm(&self) -> f64 {
        self.images.par_iter().map(crate::matcore::op_norm).reduce(|| 0.0, f64::max)
    }

    /// Close the image group from generator images.
    pub fn image_group(&self, cap: usize, tol: &Tolerances) -> Result<MatrixGroup> {
        MatrixGroup::close(&self.generator_images(), cap, tol)
    }
}
