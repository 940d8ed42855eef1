use serde::{Deserialize, Serialize};

use crate::error::{ConeError, Result};

/// Numerical thresholds shared by every module.
///
/// Norm-based thresholds are relative to the size of the matrix being
/// checked unless noted otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Hermiticity check, relative to the max-abs entry.
    pub herm: f64,
    /// `‖u*u − id‖` for unitaries (absolute, Frobenius).
    pub unitary: f64,
    /// Relative reconstruction error of spectral round trips.
    pub recon: f64,
    /// Relative positivity floor: `λ_min > pd_floor · λ_max`.
    pub pd_floor: f64,
    /// Absolute floor on the smallest singular value of invertibles.
    pub inv_floor: f64,
    /// Element equality inside group closures (absolute, Frobenius).
    pub group: f64,
    /// Fixed-point residual `max_h ‖h B h* − B‖`.
    pub fix: f64,
    /// Unitarity residual accepted for a unitarizer.
    pub unitarize: f64,
    /// Porta–Recht splitting residuals.
    pub split: f64,
    /// Circumcenter radius tolerance.
    pub cc: f64,
    /// Agreement between `log Sim` and the distance to the fixed cone.
    pub sim: f64,
    /// Relative singular-value threshold for null-space rank decisions.
    pub null_space: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            herm: 1e-10,
            unitary: 1e-10,
            recon: 1e-9,
            pd_floor: 1e-12,
            inv_floor: 1e-12,
            group: 1e-8,
            fix: 1e-8,
            unitarize: 1e-7,
            split: 1e-8,
            cc: 1e-6,
            sim: 1e-5,
            null_space: 1e-9,
        }
    }
}

impl Tolerances {
    /// Override one threshold by name, e.g. from a `--tol recon=1e-8` flag.
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        if !(value.is_finite() && value > 0.0) {
            return Err(ConeError::BadSpec(format!("tolerance {key} must be positive, got {value}")));
        }
        let slot = match key {
            "herm" => &mut self.herm,
            "unitary" => &mut self.unitary,
            "recon" => &mut self.recon,
            "pd_floor" => &mut self.pd_floor,
            "inv_floor" => &mut self.inv_floor,
            "group" => &mut self.group,
            "fix" => &mut self.fix,
            "unitarize" => &mut self.unitarize,
            "split" => &mut self.split,
            "cc" => &mut self.cc,
            "sim" => &mut self.sim,
            "null_space" => &mut self.null_space,
            other => return Err(ConeError::BadSpec(format!("unknown tolerance key `{other}`"))),
        };
        *slot = value;
        Ok(())
    }

    /// Parse a `KEY=VAL` override.
    pub fn apply_override(&mut self, spec: &str) -> Result<()> {
        let (key, value) = spec
            .split_once('=')
            .ok_or_else(|| ConeError::BadSpec(format!("expected KEY=VAL, got `{spec}`")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| ConeError::BadSpec(format!("tolerance value `{value}` is not a number")))?;
        self.set(key.trim(), value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_by_key() {
        let mut tol = Tolerances::default();
        tol.apply_override("recon=1e-7").unwrap();
        assert_eq!(tol.recon, 1e-7);
        assert!(tol.apply_override("nope=1").is_err());
        assert!(tol.apply_override("recon").is_err());
        assert!(tol.apply_override("recon=-1").is_err());
    }
}
