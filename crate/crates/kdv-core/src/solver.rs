//! Time integration of `u_t + u_xxx = d_x(u^2)` on the torus.
//!
//! The linear part is handled exactly by the Airy phase `exp(i xi^3 t)`;
//! classical RK4 acts on the integrating-factor variable, so stiffness from
//! the third derivative never enters the step-size restriction.  Only the
//! nonlinear advection limits `dt`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{KdvError, Result};
use crate::field::FourierField;
use crate::product::{dealiased_product, grid_values};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Integrator {
    IfRk4,
}

/// Fixed-step configuration.  `t_end` must be an integer multiple of `dt`,
/// and the step count a multiple of `sample_stride`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub max_freq: usize,
    pub dt: f64,
    pub t_end: f64,
    pub sample_stride: usize,
    pub integrator: Integrator,
    /// nonlinear CFL safety constant in `dt <= c_cfl / (N (1 + max|u|))`
    #[serde(default = "default_c_cfl")]
    pub c_cfl: f64,
}

pub fn default_c_cfl() -> f64 {
    0.5
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dt <= 0.0 || self.t_end <= 0.0 || self.sample_stride == 0 {
            return Err(KdvError::Config(format!(
                "solver needs dt > 0, t_end > 0, sample_stride > 0 (got dt = {}, t_end = {}, stride = {})",
                self.dt, self.t_end, self.sample_stride
            )));
        }
        let steps = self.steps()?;
        if steps % self.sample_stride != 0 {
            return Err(KdvError::Config(format!(
                "step count {steps} is not a multiple of sample_stride {}",
                self.sample_stride
            )));
        }
        Ok(())
    }

    pub fn steps(&self) -> Result<usize> {
        let raw = self.t_end / self.dt;
        let steps = raw.round();
        if steps < 1.0 || (raw - steps).abs() > 1e-9 * steps.max(1.0) {
            return Err(KdvError::Config(format!(
                "t_end = {} is not an integer multiple of dt = {}",
                self.t_end, self.dt
            )));
        }
        Ok(steps as usize)
    }

    /// Largest admissible `dt` for data with sup-norm estimate `amplitude`.
    pub fn cfl_limit(&self, amplitude: f64) -> f64 {
        self.c_cfl / (self.max_freq as f64 * (1.0 + amplitude))
    }
}

/// Time-sampled solution: `fields[k]` is the state at `times[k]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub fields: Vec<FourierField>,
    pub config: SolverConfig,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Apply a per-sample map, keeping the time grid.
    pub fn map_fields(&self, f: impl Fn(f64, &FourierField) -> FourierField) -> Trajectory {
        Trajectory {
            times: self.times.clone(),
            fields: self
                .times
                .iter()
                .zip(&self.fields)
                .map(|(&t, u)| f(t, u))
                .collect(),
            config: self.config,
        }
    }

    /// CSV of conserved quantities per sample, columns `t,mean,l2,hamiltonian`.
    pub fn conserved_csv(&self) -> Result<String> {
        let mut out = String::from("t,mean,l2,hamiltonian\n");
        for (t, u) in self.times.iter().zip(&self.fields) {
            let q = conserved_quantities(u)?;
            out.push_str(&format!("{t},{},{},{}\n", q.mean, q.l2, q.hamiltonian));
        }
        Ok(out)
    }
}

/// Free Airy flow: `a_xi -> exp(i xi^3 t) a_xi`.  Isometry in every
/// Sobolev norm; `airy(t1)` then `airy(t2)` equals `airy(t1 + t2)`.
pub fn airy_propagate(field: &FourierField, t: f64) -> FourierField {
    field.map_coeffs(field.is_real(), field.is_mean_zero(), |xi, c| {
        c * airy_phase(xi, t)
    })
}

#[inline]
pub(crate) fn airy_phase(xi: i64, t: f64) -> Complex64 {
    // xi^3 is exact in f64 for every truncation used here (|xi| <= ~2^17)
    Complex64::from_polar(1.0, (xi * xi * xi) as f64 * t)
}

/// `d_x(u^2)` with alias-free product; the zero mode is exactly zero.
fn nonlinearity(u: &FourierField) -> Result<FourierField> {
    let sq = dealiased_product(u, u)?;
    Ok(sq.map_coeffs(sq.is_real(), true, |xi, c| c * Complex64::new(0.0, xi as f64)))
}

/// Sup-norm estimate used in the CFL check: exact grid maximum of `|u_0|`
/// on the dealiasing grid.
pub fn amplitude_estimate(u: &FourierField) -> f64 {
    grid_values(u)
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max)
}

/// Integrate the KdV flow from `u0` with integrating-factor RK4.
///
/// `u0` must be real and mean-zero; the CFL restriction is checked against
/// the initial amplitude before any stepping.  The first sample is `u0`
/// itself and the run is deterministic.
pub fn evolve(u0: &FourierField, cfg: &SolverConfig) -> Result<Trajectory> {
    cfg.validate()?;
    if u0.max_freq() != cfg.max_freq {
        return Err(KdvError::TruncationMismatch {
            expected: cfg.max_freq,
            got: u0.max_freq(),
        });
    }
    if !u0.is_real() || !u0.check_conjugate_symmetry() {
        return Err(KdvError::Config("evolve requires real initial data".into()));
    }
    u0.require_mean_zero("evolve")?;

    let amplitude = amplitude_estimate(u0);
    let limit = cfg.cfl_limit(amplitude);
    if cfg.dt > limit {
        return Err(KdvError::Cfl {
            dt: cfg.dt,
            limit,
            c_cfl: cfg.c_cfl,
            max_freq: cfg.max_freq,
            amplitude,
        });
    }

    let steps = cfg.steps()?;
    let h = cfg.dt;
    let half = half_phase(cfg.max_freq, h);
    let full = full_phase(&half);

    let mut u = u0.clone();
    let mut times = Vec::with_capacity(steps / cfg.sample_stride + 1);
    let mut fields = Vec::with_capacity(steps / cfg.sample_stride + 1);
    times.push(0.0);
    fields.push(u.clone());

    for step in 1..=steps {
        u = rk4_step(&u, h, &half, &full)?;
        if step % cfg.sample_stride == 0 {
            times.push(step as f64 * h);
            fields.push(u.clone());
        }
    }

    Ok(Trajectory {
        times,
        fields,
        config: *cfg,
    })
}

fn half_phase(n: usize, h: f64) -> Vec<Complex64> {
    let n_i = n as i64;
    (-n_i..=n_i)
        .map(|xi| airy_phase(xi, h / 2.0))
        .collect()
}

fn full_phase(half: &[Complex64]) -> Vec<Complex64> {
    half.iter().map(|e| e * e).collect()
}

fn apply_phase(f: &FourierField, phase: &[Complex64]) -> FourierField {
    let n = f.max_freq() as i64;
    f.map_coeffs(f.is_real(), f.is_mean_zero(), |xi, c| {
        c * phase[(xi + n) as usize]
    })
}

/// One RK4 step on the integrating-factor variable, written with forward
/// phases only (`E = exp(i xi^3 h/2)`):
///
/// ```text
/// k1 = F(u)
/// k2 = F(E u + (h/2) E k1)
/// k3 = F(E u + (h/2) k2)
/// k4 = F(E^2 u + h E k3)
/// u' = E^2 u + (h/6) (E^2 k1 + 2 E k2 + 2 E k3 + k4)
/// ```
fn rk4_step(
    u: &FourierField,
    h: f64,
    half: &[Complex64],
    full: &[Complex64],
) -> Result<FourierField> {
    let re = |x: f64| Complex64::new(x, 0.0);
    let k1 = nonlinearity(u)?;
    let eu = apply_phase(u, half);
    let e2u = apply_phase(&eu, half);

    let y2 = eu.add_scaled(&apply_phase(&k1, half), re(h / 2.0))?;
    let k2 = nonlinearity(&y2)?;

    let y3 = eu.add_scaled(&k2, re(h / 2.0))?;
    let k3 = nonlinearity(&y3)?;

    let y4 = e2u.add_scaled(&apply_phase(&k3, half), re(h))?;
    let k4 = nonlinearity(&y4)?;

    let mut acc = apply_phase(&k1, full);
    acc = acc.add_scaled(&apply_phase(&k2, half), re(2.0))?;
    acc = acc.add_scaled(&apply_phase(&k3, half), re(2.0))?;
    acc = acc.add_scaled(&k4, re(1.0))?;
    e2u.add_scaled(&acc, re(h / 6.0))
}

/// Mean, squared `L^2` mass and Hamiltonian of a real field:
/// `mean = 2 pi a_0`, `l2 = 2 pi sum |a_xi|^2`,
/// `H = integral (u_x^2 / 2 + u^3 / 3) dx` evaluated spectrally with an
/// alias-free cube.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConservedQuantities {
    pub mean: f64,
    pub l2: f64,
    pub hamiltonian: f64,
}

pub fn conserved_quantities(field: &FourierField) -> Result<ConservedQuantities> {
    use std::f64::consts::PI;
    let two_pi = 2.0 * PI;
    let mean = two_pi * field.coeff(0).re;
    let l2 = two_pi * field.iter().map(|(_, c)| c.norm_sqr()).sum::<f64>();
    // integral u_x^2 dx = 2 pi sum xi^2 |a_xi|^2
    let grad_sq = two_pi
        * field
            .iter()
            .map(|(xi, c)| (xi * xi) as f64 * c.norm_sqr())
            .sum::<f64>();
    // integral u^3 dx = 2 pi (u^3)_0; the zero mode of u * u^2 only needs
    // u^2 on |xi| <= N, which the dealiased product supplies exactly
    let sq = dealiased_product(field, field)?;
    let cube_mean: Complex64 = field.iter().map(|(xi, c)| sq.coeff(-xi) * c).sum();
    let hamiltonian = 0.5 * grad_sq + two_pi / 3.0 * cube_mean.re;
    Ok(ConservedQuantities {
        mean,
        l2,
        hamiltonian,
    })
}

/// Self-convergence study: the final states of successive configurations
/// are compared pairwise in `L^2` and a convergence order is fitted.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvergenceReport {
    /// `L^2` distances between consecutive final states
    pub errors: Vec<f64>,
    /// mean of `log2(err_i / err_{i+1})`; `NaN` when all errors vanish
    pub fitted_order: f64,
}

/// Run `evolve` under each configuration and compare final states.
///
/// The configurations must differ only in `dt` (temporal study) or only in
/// `max_freq` (spatial study); anything else is rejected.  For a spatial
/// study the comparison happens on the common retained modes.
pub fn convergence_study(u0: &FourierField, cfgs: &[SolverConfig]) -> Result<ConvergenceReport> {
    if cfgs.len() < 2 {
        return Err(KdvError::Config(
            "convergence study needs at least two configurations".into(),
        ));
    }
    let base = cfgs[0];
    let temporal = cfgs
        .iter()
        .all(|c| c.max_freq == base.max_freq && c.t_end == base.t_end);
    let spatial = cfgs
        .iter()
        .all(|c| c.dt == base.dt && c.t_end == base.t_end);
    if !temporal && !spatial {
        return Err(KdvError::Config(
            "configurations must differ only in dt (temporal) or only in max_freq (spatial)"
                .into(),
        ));
    }

    let mut finals = Vec::with_capacity(cfgs.len());
    for cfg in cfgs {
        let u0_here = if u0.max_freq() == cfg.max_freq {
            u0.clone()
        } else {
            project(u0, cfg.max_freq)
        };
        let mut cfg = *cfg;
        cfg.sample_stride = cfg.steps()?;
        let traj = evolve(&u0_here, &cfg)?;
        finals.push(traj.fields.last().unwrap().clone());
    }

    let mut errors = Vec::with_capacity(finals.len() - 1);
    for pair in finals.windows(2) {
        let n = pair[0].max_freq().min(pair[1].max_freq());
        let d = project(&pair[0], n).sub(&project(&pair[1], n))?;
        errors.push(d.sobolev_norm(0.0));
    }
    let ratios: Vec<f64> = errors
        .windows(2)
        .filter(|w| w[0] > 0.0 && w[1] > 0.0)
        .map(|w| (w[0] / w[1]).log2())
        .collect();
    let fitted_order = if ratios.is_empty() {
        f64::NAN
    } else {
        ratios.iter().sum::<f64>() / ratios.len() as f64
    };
    Ok(ConvergenceReport {
        errors,
        fitted_order,
    })
}

/// Truncate or zero-extend a field to truncation `n`.
pub fn project(f: &FourierField, n: usize) -> FourierField {
    let mut out = FourierField::zeros(n);
    let keep = n.min(f.max_freq()) as i64;
    for xi in -keep..=keep {
        out.set_coeff(xi, f.coeff(xi));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::RegularityParams;
    use crate::random::random_rough_field_with_l2;
    use std::f64::consts::PI;

    fn two_cos(n: usize) -> FourierField {
        let mut f = FourierField::zeros(n);
        f.set_coeff(1, Complex64::new(1.0, 0.0));
        f.set_coeff(-1, Complex64::new(1.0, 0.0));
        f
    }

    fn cfg(n: usize, dt: f64, t_end: f64) -> SolverConfig {
        let steps = (t_end / dt).round() as usize;
        SolverConfig {
            max_freq: n,
            dt,
            t_end,
            sample_stride: steps,
            integrator: Integrator::IfRk4,
            c_cfl: 0.5,
        }
    }

    #[test]
    fn airy_examples() {
        let mut f = FourierField::zeros(4);
        f.set_coeff(1, Complex64::new(1.0, 0.0));
        let g = airy_propagate(&f, 2.0 * PI);
        assert!((g.coeff(1) - Complex64::new(1.0, 0.0)).norm() < 1e-12);

        let mut f = FourierField::zeros(4);
        f.set_coeff(2, Complex64::new(1.0, 0.0));
        let g = airy_propagate(&f, PI / 8.0);
        assert!((g.coeff(2) - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn airy_isometry_and_group_law() {
        let p = RegularityParams::new(0.25, 0.02, 0.8, 0.1).unwrap();
        let f = random_rough_field_with_l2(16, &p, 4, 1.0);
        let g = airy_propagate(&f, 0.37);
        for sigma in [-0.25, 0.0, 1.0] {
            assert!((g.sobolev_norm(sigma) - f.sobolev_norm(sigma)).abs() < 1e-12);
        }
        let ab = airy_propagate(&airy_propagate(&f, 0.3), 0.5);
        let once = airy_propagate(&f, 0.8);
        let diff = ab.sub(&once).unwrap().sobolev_norm(0.0);
        assert!(diff < 1e-10, "group law defect {diff}");
    }

    #[test]
    fn zero_data_stays_zero() {
        let traj = evolve(&FourierField::zeros(16), &cfg(16, 1e-2, 0.1)).unwrap();
        for u in &traj.fields {
            assert_eq!(u.sobolev_norm(0.0), 0.0);
        }
    }

    #[test]
    fn cfl_violation_rejected_before_stepping() {
        let f = two_cos(64);
        let bad = cfg(64, 0.1, 1.0);
        assert!(matches!(evolve(&f, &bad), Err(KdvError::Cfl { .. })));
    }

    #[test]
    fn linearization_of_small_amplitude_is_quadratic() {
        // evolve vs airy differs by O(lambda^2): the ratio of defects at
        // lambda and lambda/2 should be close to 4
        let n = 16;
        let config = cfg(n, 1e-3, 1.0);
        let defect = |lambda: f64| {
            let u0 = two_cos(n).map_coeffs(true, true, |_, c| c * lambda);
            let traj = evolve(&u0, &config).unwrap();
            let lin = airy_propagate(&u0, config.t_end);
            traj.fields.last().unwrap().sub(&lin).unwrap().sobolev_norm(0.0) / lambda
        };
        let (d1, d2) = (defect(1e-4), defect(5e-5));
        let ratio = d1 / d2;
        assert!((ratio - 2.0).abs() < 0.1, "ratio {ratio} (want ~2 per halving of lambda)");
    }

    #[test]
    fn single_step_matches_taylor_expansion() {
        // one step of size h: u1 = u0 + h (-u0''' + d_x u0^2) + O(h^2),
        // so the defect against the Euler predictor scales like h^2
        let n = 8;
        let u0 = two_cos(n);
        let euler = |h: f64| {
            let traj = evolve(&u0, &cfg(n, h, h)).unwrap();
            let u1 = &traj.fields[1];
            let mut predictor = FourierField::zeros(n);
            let sq = dealiased_product(&u0, &u0).unwrap();
            for (xi, c) in u0.iter() {
                let du = Complex64::new(0.0, ((xi * xi * xi) as f64)) * c
                    + Complex64::new(0.0, xi as f64) * sq.coeff(xi);
                predictor.set_coeff(xi, c + h * du);
            }
            u1.sub(&predictor).unwrap().sobolev_norm(0.0)
        };
        let (e1, e2) = (euler(1e-3), euler(5e-4));
        let order = (e1 / e2).log2();
        assert!(order > 1.8 && order < 2.3, "defect order {order}");
    }

    #[test]
    fn mean_drift_is_exactly_zero() {
        let p = RegularityParams::new(0.25, 0.02, 0.8, 0.1).unwrap();
        let u0 = random_rough_field_with_l2(32, &p, 1, 0.3);
        let mut c = cfg(32, 1e-3, 0.2);
        c.sample_stride = 10;
        let traj = evolve(&u0, &c).unwrap();
        for u in &traj.fields {
            assert_eq!(u.coeff(0), Complex64::ZERO);
        }
    }

    #[test]
    fn l2_and_hamiltonian_nearly_conserved() {
        let p = RegularityParams::new(0.25, 0.02, 0.8, 0.1).unwrap();
        let u0 = random_rough_field_with_l2(64, &p, 9, 1.0 / (2.0 * PI).sqrt());
        let mut c = cfg(64, 2e-3, 0.25);
        c.sample_stride = 25;
        let traj = evolve(&u0, &c).unwrap();
        let q0 = conserved_quantities(&traj.fields[0]).unwrap();
        for u in &traj.fields {
            let q = conserved_quantities(u).unwrap();
            assert!(((q.l2 - q0.l2) / q0.l2).abs() <= 1e-8);
            assert!(
                ((q.hamiltonian - q0.hamiltonian) / (1.0 + q0.hamiltonian.abs())).abs() <= 1e-6
            );
        }
    }

    #[test]
    fn conserved_quantities_of_cosine_data() {
        // u = 2 cos x: mean 0, integral u^2 = 4 pi,
        // H = integral (2 sin^2 x) = 2 pi (odd cube integrates to zero)
        let q = conserved_quantities(&two_cos(8)).unwrap();
        assert_eq!(q.mean, 0.0);
        assert!((q.l2 - 4.0 * PI).abs() < 1e-12);
        assert!((q.hamiltonian - 2.0 * PI).abs() < 1e-12);
        let z = conserved_quantities(&FourierField::zeros(8)).unwrap();
        assert_eq!((z.mean, z.l2, z.hamiltonian), (0.0, 0.0, 0.0));
    }

    #[test]
    fn time_reversal_returns_data() {
        // u(t, x) -> u(-t, -x) solves the same equation, so reflecting,
        // evolving and reflecting again inverts the flow
        let reflect = |f: &FourierField| {
            let mut coeffs: Vec<Complex64> = f.coeffs().to_vec();
            coeffs.reverse();
            FourierField::from_coeffs(f.max_freq(), coeffs).unwrap()
        };
        let p = RegularityParams::new(0.25, 0.02, 0.8, 0.1).unwrap();
        let u0 = random_rough_field_with_l2(32, &p, 13, 0.5);
        let c = cfg(32, 1e-3, 0.25);
        let fwd = evolve(&u0, &c).unwrap();
        let back = evolve(&reflect(fwd.fields.last().unwrap()), &c).unwrap();
        let returned = reflect(back.fields.last().unwrap());
        let err = returned.sub(&u0).unwrap().sobolev_norm(0.0);
        assert!(err <= 1e-7, "time-reversal defect {err}");
    }

    #[test]
    fn temporal_self_convergence_is_fourth_order() {
        let u0 = two_cos(16);
        let cfgs: Vec<SolverConfig> = [8e-3, 4e-3, 2e-3, 1e-3]
            .iter()
            .map(|&dt| cfg(16, dt, 0.5))
            .collect();
        let report = convergence_study(&u0, &cfgs).unwrap();
        assert!(
            (report.fitted_order - 4.0).abs() < 0.4,
            "fitted order {}",
            report.fitted_order
        );
    }

    #[test]
    fn identical_configs_have_zero_error() {
        let u0 = two_cos(8);
        let c = cfg(8, 1e-3, 0.1);
        let report = convergence_study(&u0, &[c, c]).unwrap();
        assert_eq!(report.errors, vec![0.0]);
    }

    #[test]
    fn spatial_refinement_is_spectral() {
        // analytic data: doubling N decays the self-error faster than any
        // fixed algebraic order
        let mut u0 = FourierField::zeros(48);
        for xi in 1..=48i64 {
            let c = Complex64::new(0.5f64.powi(xi as i32), 0.0);
            u0.set_coeff(xi, c);
            u0.set_coeff(-xi, c);
        }
        let cfgs: Vec<SolverConfig> = [12usize, 24, 48]
            .iter()
            .map(|&n| cfg(n, 5e-4, 0.1))
            .collect();
        let report = convergence_study(&u0, &cfgs).unwrap();
        assert!(
            report.errors[1] < 1e-3 * report.errors[0],
            "errors {:?}",
            report.errors
        );
    }

    #[test]
    fn conserved_csv_layout() {
        let traj = evolve(&two_cos(8), &cfg(8, 1e-2, 0.05)).unwrap();
        let csv = traj.conserved_csv().unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "t,mean,l2,hamiltonian");
        assert!(csv.lines().count() >= 2);
    }
}
