//! Geometry of the cone of positive-definite matrices and its use for
//! unitarizing finite matrix groups.
//!
//! The crate is organized bottom-up:
//!
//! - [`matcore`]: Hermitian / positive-definite types and spectral matrix functions.
//! - [`conegeo`]: the operator-norm and Frobenius metrics, geodesics, the
//!   congruence action and classical inequality residuals.
//! - [`matgroups`]: finite groups from generators, orbits, fixed cones and commutants.
//! - [`unitarize`]: unitarizers, circumcenters and the similarity-number optimizer.
//! - [`splitexp`]: conditional expectations, the Porta–Recht splitting and
//!   canonical unitarizers.
//! - [`interpolate`]: conjugated one-parameter families and extension chains.
//! - [`harness`]: instance generators, verification suites and reports.

pub mod error;
pub mod harness;
pub mod interpolate;
pub mod matgroups;
pub mod splitexp;
pub mod conegeo;
pub mod matcore;
pub mod tolerance;
pub mod unitarize;

pub use error::{ConeError, Result};
pub use matcore::{CMatrix, HermitianMatrix, InvertibleMatrix, PosDefMatrix, UnitaryMatrix, C64};
pub use tolerance::Tolerances;
