//! Finite matrix groups, their orbits on the cone, fixed-point cones and
//! commutants.

mod algebra;
mod closure;
mod fixed;
mod representation;

pub use algebra::{realify, BlockAlgebra};
pub(crate) use algebra::{combine, combine_all};
pub use closure::{
    close_group, group_size_norm, orbit, orbit_diameter, orbit_diameter_pairwise, GroupJson, MatrixGroup,
    DEFAULT_CLOSURE_CAP,
};
pub use fixed::{commutant_basis, commutant_in, fixed_cone, fixed_cone_in, FixedCone};
pub use representation::Representation;
