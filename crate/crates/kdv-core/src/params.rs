//! Regularity exponents shared by data generation and the diagnostics.

use serde::{Deserialize, Serialize};

use crate::error::{KdvError, Result};

/// Exponent tuple `(s, delta, gamma, eps_tail)` with the admissibility
/// constraints `0 <= s < 1/2`, `0 < 10 delta < 1 - 2s`,
/// `0 < gamma <= 1 - 10 delta`, `eps_tail > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegularityParams {
    pub s: f64,
    pub delta: f64,
    pub gamma: f64,
    /// extra decay margin for random rough data, keeps the `H^{-s}` norm
    /// summable with an analytic certificate
    pub eps_tail: f64,
}

impl RegularityParams {
    pub fn new(s: f64, delta: f64, gamma: f64, eps_tail: f64) -> Result<Self> {
        let p = RegularityParams {
            s,
            delta,
            gamma,
            eps_tail,
        };
        p.validate()?;
        Ok(p)
    }

    /// `gamma` defaulted to its largest admissible value `1 - 10 delta`.
    pub fn with_max_gamma(s: f64, delta: f64, eps_tail: f64) -> Result<Self> {
        Self::new(s, delta, 1.0 - 10.0 * delta, eps_tail)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..0.5).contains(&self.s) {
            return Err(KdvError::Config(format!(
                "constraint violated: 0 <= s < 1/2 (got s = {})",
                self.s
            )));
        }
        if !(self.delta > 0.0 && 10.0 * self.delta < 1.0 - 2.0 * self.s) {
            return Err(KdvError::Config(format!(
                "constraint violated: 0 < 10*delta < 1 - 2*s (got 10*delta = {}, 1 - 2*s = {})",
                10.0 * self.delta,
                1.0 - 2.0 * self.s
            )));
        }
        if !(self.gamma > 0.0 && self.gamma <= 1.0 - 10.0 * self.delta) {
            return Err(KdvError::Config(format!(
                "constraint violated: 0 < gamma <= 1 - 10*delta (got gamma = {}, 1 - 10*delta = {})",
                self.gamma,
                1.0 - 10.0 * self.delta
            )));
        }
        if self.eps_tail <= 0.0 {
            return Err(KdvError::Config(format!(
                "constraint violated: eps_tail > 0 (got {})",
                self.eps_tail
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_admissible_tuple() {
        let p = RegularityParams::new(0.25, 0.02, 0.8, 0.1).unwrap();
        assert_eq!(p.gamma, 0.8);
    }

    #[test]
    fn rejects_delta_too_large() {
        // 10*0.02 = 0.2 > 1 - 2*0.45 = 0.1
        assert!(RegularityParams::new(0.45, 0.02, 0.8, 0.1).is_err());
    }

    #[test]
    fn max_gamma_default() {
        let p = RegularityParams::with_max_gamma(0.25, 0.02, 0.1).unwrap();
        assert!((p.gamma - 0.8).abs() < 1e-15);
    }
}
