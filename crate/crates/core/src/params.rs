use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Physical parameters of the driven atom.
///
/// `gamma` is the decay rate of the atomic coherence (half the Einstein
/// coefficient), `omega` the Rabi frequency and `delta` the laser detuning
/// `ω_L - ω_A`. All three are angular rates in the same unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomDriveParams {
    pub gamma: f64,
    pub omega: f64,
    pub delta: f64,
}

impl AtomDriveParams {
    pub fn new(gamma: f64, omega: f64, delta: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(invalid(
                "gamma",
                format!("must be finite and > 0, got {gamma}"),
            ));
        }
        if !(omega.is_finite() && omega >= 0.0) {
            return Err(invalid(
                "omega",
                format!("must be finite and >= 0, got {omega}"),
            ));
        }
        if !delta.is_finite() {
            return Err(invalid("delta", format!("must be finite, got {delta}")));
        }
        Ok(Self {
            gamma,
            omega,
            delta,
        })
    }

    /// Resonant drive at the Rabi frequency minimizing the Mandel factor,
    /// `Ω = √2 γ`.
    pub fn optimal(gamma: f64) -> Self {
        Self {
            gamma,
            omega: std::f64::consts::SQRT_2 * gamma,
            delta: 0.0,
        }
    }

    /// Einstein coefficient `Γ = 2γ`.
    pub fn einstein_a(&self) -> f64 {
        2.0 * self.gamma
    }

    /// `γ - iδ`, the complex damping of the excited amplitude.
    pub fn complex_damping(&self) -> Complex64 {
        Complex64::new(self.gamma, -self.delta)
    }

    pub(crate) fn require_drive(&self, what: &'static str) -> Result<()> {
        if self.omega > 0.0 {
            Ok(())
        } else {
            Err(Error::ZeroRabi(what))
        }
    }
}

impl fmt::Display for AtomDriveParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "gamma={} omega={} delta={}",
            self.gamma, self.omega, self.delta
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_values() {
        assert!(AtomDriveParams::new(0.0, 1.0, 0.0).is_err());
        assert!(AtomDriveParams::new(1.0, -1.0, 0.0).is_err());
        assert!(AtomDriveParams::new(1.0, 1.0, f64::NAN).is_err());
        assert!(AtomDriveParams::new(1.0, 0.0, -3.0).is_ok());
    }

    #[test]
    fn zero_drive_rejected_where_required() {
        let p = AtomDriveParams::new(1.0, 0.0, 0.0).unwrap();
        assert_eq!(p.require_drive("moments"), Err(Error::ZeroRabi("moments")));
    }
}
