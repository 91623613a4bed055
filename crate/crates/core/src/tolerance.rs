//! Numerical thresholds shared across the crate.

use crate::error::{Error, Result};

/// Thresholds used by checks that must decide rather than just report.
///
/// `FRCHAIN_TOLERANCE` can override them, either as a bare number (the
/// fractional-revival verdict threshold) or as `key=value` pairs separated by
/// commas, with keys matching the field names.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Absolute tolerance for dynamical identities (unitarity, group law).
    pub dynamical: f64,
    /// Absolute tolerance for algebraic identities (normalization, symmetry).
    pub algebraic: f64,
    /// Relative eigenvalue gap below which a spectrum counts as degenerate.
    pub degeneracy: f64,
    /// Residual probability above which a chain is not called FR.
    pub fr_verdict: f64,
    /// Tolerance for bound saturation, scaled by the spectral spread.
    pub saturation: f64,
    /// Probability allowed outside the encoding sites before a protocol round refuses to run.
    pub support: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            dynamical: 1e-10,
            algebraic: 1e-12,
            degeneracy: 1e-9,
            fr_verdict: 1e-6,
            saturation: 1e-8,
            support: 1e-9,
        }
    }
}

pub const ENV_VAR: &str = "FRCHAIN_TOLERANCE";

impl Tolerances {
    /// Defaults, overridden by `FRCHAIN_TOLERANCE` when it is set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(ENV_VAR) {
            Ok(spec) => Self::default().with_overrides(&spec),
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec.is_empty() {
            return Ok(self);
        }
        if let Ok(v) = spec.parse::<f64>() {
            self.fr_verdict = check_positive("fr_verdict", v)?;
            return Ok(self);
        }
        for item in spec.split(',') {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidParameter(format!("{ENV_VAR}: expected key=value, got '{item}'")))?;
            let value: f64 = value.trim().parse().map_err(|_| {
                Error::InvalidParameter(format!("{ENV_VAR}: '{value}' is not a number"))
            })?;
            let key = key.trim();
            let slot = match key {
                "dynamical" => &mut self.dynamical,
                "algebraic" => &mut self.algebraic,
                "degeneracy" => &mut self.degeneracy,
                "fr_verdict" => &mut self.fr_verdict,
                "saturation" => &mut self.saturation,
                "support" => &mut self.support,
                other => {
                    return Err(Error::InvalidParameter(format!("{ENV_VAR}: unknown key '{other}'")))
                }
            };
            *slot = check_positive(key, value)?;
        }
        Ok(self)
    }
}

fn check_positive(key: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::InvalidParameter(format!("{ENV_VAR}: {key} must be positive, got {v}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bare_number_sets_verdict() {
        let t = Tolerances::default().with_overrides("1e-5").unwrap();
        assert_eq!(t.fr_verdict, 1e-5);
        assert_eq!(t.dynamical, 1e-10);
    }

    #[test]
    fn key_value_pairs() {
        let t = Tolerances::default()
            .with_overrides("saturation=1e-7, support=1e-6")
            .unwrap();
        assert_eq!(t.saturation, 1e-7);
        assert_eq!(t.support, 1e-6);
    }

    #[test]
    fn rejects_garbage() {
        assert!(Tolerances::default().with_overrides("nope=1").is_err());
        assert!(Tolerances::default().with_overrides("support=-1").is_err());
        assert!(Tolerances::default().with_overrides("support").is_err());
    }
}
