//! Metrics and geodesics on the positive-definite cone.

mod geodesic;
mod inequalities;
mod metric;

pub use geodesic::{exp_at, geodesic_eval, log_at, Geodesic};
pub use inequalities::{emi_residual, segal_residual};
pub use metric::{
    act, banach_mazur_delta, banach_mazur_delta_with, dist, dist_from_identity, relative_spectrum, MetricKind,
    NormConvention,
};

#[cfg(test)]
mod tests;
