//! Conditional expectations, the Porta–Recht splitting and canonical
//! unitarizers of conjugated representations.

mod expectation;
mod split;

pub use expectation::{
    complement_norm, group_average_expectation, pinching_expectation, ComplementNorm, CondExpectation,
    ExpectationKind,
};
pub use split::{
    canonical_unitarizer, leaf_distance, pr_split_invertible, pr_split_positive, range_gap, thmacs_check,
    CanonicalUnitarizer, PositiveSplit, SplitTriple, ThmacsReport, SPLIT_BUDGET,
};

#[cfg(test)]
mod tests;
