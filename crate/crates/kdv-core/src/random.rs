//! Deterministic rough random data.
//!
//! Coefficient magnitudes follow the exact power law
//! `|a_xi| = <xi>^{s - 1/2 - eps_tail}`, so membership in `H^{-s}` has an
//! analytic certificate; only the phases are random.  Phases are drawn in
//! increasing `xi` order from a counter-based generator, so fields built
//! with the same seed at different truncations share every common mode
//! (nested refinement data).

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{bracket, FourierField};
use crate::params::RegularityParams;

/// Real mean-zero field with power-law magnitudes and uniform random phases.
pub fn random_rough_field(n: usize, params: &RegularityParams, seed: u64) -> FourierField {
    assert!(n >= 2, "random_rough_field requires N >= 2");
    let exponent = params.s - 0.5 - params.eps_tail;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = FourierField::zeros(n);
    for xi in 1..=n as i64 {
        let phase = rng.gen_range(0.0..std::f64::consts::TAU);
        let c = Complex64::from_polar(bracket(xi).powf(exponent), phase);
        f.set_coeff(xi, c);
        f.set_coeff(-xi, c.conj());
    }
    f
}

/// Same law rescaled so that the coefficient-l2 norm equals `target`.
pub fn random_rough_field_with_l2(
    n: usize,
    params: &RegularityParams,
    seed: u64,
    target: f64,
) -> FourierField {
    let f = random_rough_field(n, params, seed);
    let norm = f.sobolev_norm(0.0);
    f.map_coeffs(true, true, |_, c| c * (target / norm))
}
