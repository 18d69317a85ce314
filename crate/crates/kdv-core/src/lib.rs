//! Pseudospectral core for the periodic KdV equation
//! `u_t + u_xxx = d_x(u^2)` on the torus.
//!
//! The crate provides truncated Fourier fields with exact dealiased
//! products, an integrating-factor RK4 flow with conserved-quantity audits,
//! the per-mode resonant evolution together with the phase-shift operator
//! that inverts it, and the bilinear/trilinear normal-form operators with
//! their algebraic cancellation identities.
//!
//! Coefficients follow the convention `f(x) = sum a_xi exp(i xi x)`, so all
//! per-frequency operator formulas apply verbatim to the stored values and
//! products are plain convolutions.  Sobolev norms are coefficient-l2 sums
//! weighted by `<xi> = 1 + |xi|`.
//!
//! Heavy inner loops (the constrained trilinear sums) run data-parallel
//! under the default `parallel` feature and fall back to identical
//! sequential code without it; results are bit-equal either way.

pub mod decompose;
pub mod error;
pub mod field;
pub mod normal_form;
pub mod params;
pub mod product;
pub mod random;
pub mod resonant;
pub mod solver;

pub use decompose::{decompose, Decomposition};
pub use error::{KdvError, Result};
pub use field::{bracket, FieldRecord, FourierField, MultiplierSymbol};
pub use normal_form::{
    bilinear_cancellation, bilinear_symbol, cubic_identity, j_trilinear, j_trilinear_direct,
    nonlinearity_symbol, nonresonant_symbol, nr_coefficients, pairwise_product,
    quintic_coefficients, resonant_coefficients, resonant_polynomial_b, t_bilinear,
    t_bilinear_direct, trilinear_cancellation, trilinear_symbol, CubicIdentity, QuinticVariant,
};
pub use params::RegularityParams;
pub use product::{dealiased_product, fft_size, grid_values};
pub use random::{random_rough_field, random_rough_field_with_l2};
pub use resonant::{
    phase_shift, r_evolve, r_star, r_star_via_scaling, resonant_rate, PhaseRates, RateScale,
};
pub use solver::{
    airy_propagate, amplitude_estimate, conserved_quantities, convergence_study, evolve, project,
    ConservedQuantities, ConvergenceReport, Integrator, SolverConfig, Trajectory,
};
