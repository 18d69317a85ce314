//! Resonant phase evolution and the phase-shift operator.
//!
//! The cubic resonant self-interaction of each mode integrates exactly to a
//! per-mode phase rotation: mode `xi` of the resonant solution rotates at
//! rate `2 <xi>^{2s} |f_hat(xi)|^2 / xi` on top of the Airy phase.  The
//! phase-shift operator undoes the same rotation at data scale, so composing
//! it with the resonant flow of the data reproduces the free flow exactly.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::field::{bracket, FourierField, MultiplierSymbol};
use crate::solver::airy_propagate;

/// Which weight enters the per-mode rate.
///
/// `VScale` carries the `<xi>^{2s}` factor of the scaled variable
/// `v = <grad>^{-s} u`; `UScale` is the data-scale rate
/// `2 |a_xi|^2 / xi` that the phase-shift operator inverts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateScale {
    VScale,
    UScale,
}

/// Per-mode rotation rates over `xi in [-N, N] \ {0}` (the zero entry is
/// unused and stored as 0).  For real data the array is odd in `xi`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseRates {
    pub max_freq: usize,
    /// indexed by `xi + N`
    pub rates: Vec<f64>,
    pub scale: RateScale,
}

impl PhaseRates {
    #[inline]
    pub fn rate(&self, xi: i64) -> f64 {
        self.rates[(xi + self.max_freq as i64) as usize]
    }
}

/// Data-scale rate `2 |a_xi|^2 / xi`; shared by the resonant flow and the
/// phase-shift operator so the two cancel bit-for-bit.
#[inline]
fn data_rate(xi: i64, coeff: Complex64) -> f64 {
    2.0 * coeff.norm_sqr() / xi as f64
}

#[inline]
fn mode_rate(xi: i64, coeff: Complex64, s: f64, scale: RateScale) -> f64 {
    match scale {
        RateScale::VScale => 2.0 * bracket(xi).powf(2.0 * s) * coeff.norm_sqr() / xi as f64,
        RateScale::UScale => data_rate(xi, coeff),
    }
}

/// Resonant rotation rates of `f` (mean-zero required).
pub fn resonant_rate(f: &FourierField, s: f64, scale: RateScale) -> Result<PhaseRates> {
    f.require_mean_zero("resonant_rate")?;
    let n = f.max_freq() as i64;
    let rates = (-n..=n)
        .map(|xi| {
            if xi == 0 {
                0.0
            } else {
                mode_rate(xi, f.coeff(xi), s, scale)
            }
        })
        .collect();
    Ok(PhaseRates {
        max_freq: f.max_freq(),
        rates,
        scale,
    })
}

/// Resonant solution at time `t`:
/// `a_xi -> a_xi exp(i rate(xi) t) exp(i xi^3 t)`.
///
/// Coefficient magnitudes are invariant, `t = 0` is the identity, and the
/// resonant and Airy phase factors are applied separately so that
/// [`phase_shift`] cancels the former exactly.
pub fn r_evolve(f: &FourierField, s: f64, t: f64, scale: RateScale) -> Result<FourierField> {
    f.require_mean_zero("r_evolve")?;
    let rotated = f.map_coeffs(f.is_real(), true, |xi, c| {
        if xi == 0 {
            c
        } else {
            c * Complex64::from_polar(1.0, mode_rate(xi, c, s, scale) * t)
        }
    });
    Ok(airy_propagate(&rotated, t))
}

/// Phase-shift operator: multiplies mode `xi != 0` of `u_t` by
/// `exp(-2 i |a_xi(u_0)|^2 t / xi)`, leaving the mean untouched.
/// Per-mode unimodular, hence an isometry in every Sobolev norm.
pub fn phase_shift(u_t: &FourierField, u0: &FourierField, t: f64) -> Result<FourierField> {
    u_t.require_same_n(u0)?;
    Ok(u_t.map_coeffs(
        u_t.is_real() && u0.is_real(),
        u_t.is_mean_zero(),
        |xi, c| {
            if xi == 0 {
                c
            } else {
                c * Complex64::from_polar(1.0, -data_rate(xi, u0.coeff(xi)) * t)
            }
        },
    ))
}

/// Data-scale resonant flow `R*`: the resonant solution whose phase the
/// shift operator inverts.  Identical (to rounding) to conjugating the
/// scaled-variable flow by `<grad>^{+-s}`.
pub fn r_star(u0: &FourierField, t: f64) -> Result<FourierField> {
    r_evolve(u0, 0.0, t, RateScale::UScale)
}

/// `R*` via the scaled variable: `<grad>^s R[<grad>^{-s} u0]`.
/// Agrees with [`r_star`] to rounding; kept as a cross-check route.
pub fn r_star_via_scaling(u0: &FourierField, s: f64, t: f64) -> Result<FourierField> {
    let f = u0.apply_multiplier(MultiplierSymbol::Bessel(-s))?;
    let r = r_evolve(&f, s, t, RateScale::VScale)?;
    r.apply_multiplier(MultiplierSymbol::Bessel(s))
}
