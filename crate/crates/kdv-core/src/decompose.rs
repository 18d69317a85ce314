//! Four-part decomposition of the scaled solution.
//!
//! Along a trajectory of `v = <grad>^{-s} u` with `v(0) = f`, the solution
//! splits as `v = r + h + k + w` where `r` is the resonant flow of `f`,
//! `h = T(v, v)` and `k = J(r, r, r)` are the normal-form boundary layers,
//! and `w` is the subtraction remainder.  By construction
//! `w(0) = -T(f, f) - J(f, f, f)`; the constructor verifies this rather
//! than assuming it.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{KdvError, Result};
use crate::field::FourierField;
use crate::normal_form::{j_trilinear, t_bilinear};
use crate::resonant::{r_evolve, RateScale};
use crate::solver::Trajectory;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Decomposition {
    pub times: Vec<f64>,
    /// resonant flow `r(t)` of the initial data
    pub resonant: Vec<FourierField>,
    /// bilinear layer `h(t) = T(v(t), v(t))`
    pub bilinear: Vec<FourierField>,
    /// trilinear layer `k(t) = J(r(t), r(t), r(t))`
    pub trilinear: Vec<FourierField>,
    /// remainder `w = v - r - h - k`
    pub remainder: Vec<FourierField>,
    /// `||w(0) + T(f,f) + J(f,f,f)||_{l2}`, checked against 1e-12
    pub initial_identity_defect: f64,
}

impl Decomposition {
    /// `r + h + k + w` at sample `idx`; equals `v` there by construction.
    pub fn reconstruct(&self, idx: usize) -> Result<FourierField> {
        let one = Complex64::new(1.0, 0.0);
        self.resonant[idx]
            .add_scaled(&self.bilinear[idx], one)?
            .add_scaled(&self.trilinear[idx], one)?
            .add_scaled(&self.remainder[idx], one)
    }
}

/// Tolerance on `||v(0) - f||` and on the `w(0)` identity.
const IDENTITY_TOL: f64 = 1e-12;

/// Decompose a scaled-solution trajectory with initial data `f`.
pub fn decompose(v_traj: &Trajectory, f: &FourierField, s: f64) -> Result<Decomposition> {
    if v_traj.is_empty() {
        return Err(KdvError::Inconsistent("empty trajectory".into()));
    }
    let v0_defect = v_traj.fields[0].sub(f)?.sobolev_norm(0.0);
    if v0_defect > IDENTITY_TOL * f.sobolev_norm(0.0).max(1.0) {
        return Err(KdvError::Inconsistent(format!(
            "trajectory does not start at the given data: ||v(0) - f|| = {v0_defect:.3e}"
        )));
    }

    let mut resonant = Vec::with_capacity(v_traj.len());
    let mut bilinear = Vec::with_capacity(v_traj.len());
    let mut trilinear = Vec::with_capacity(v_traj.len());
    let mut remainder = Vec::with_capacity(v_traj.len());

    for (&t, v) in v_traj.times.iter().zip(&v_traj.fields) {
        let r = r_evolve(f, s, t, RateScale::VScale)?;
        let h = t_bilinear(v, v, s)?;
        let k = j_trilinear(&r, &r, &r, s)?;
        let minus_one = Complex64::new(-1.0, 0.0);
        let w = v
            .add_scaled(&r, minus_one)?
            .add_scaled(&h, minus_one)?
            .add_scaled(&k, minus_one)?;
        resonant.push(r);
        bilinear.push(h);
        trilinear.push(k);
        remainder.push(w);
    }

    // w(0) = -T(f,f) - J(f,f,f), verified rather than assumed
    let one = Complex64::new(1.0, 0.0);
    let expected_w0 = t_bilinear(f, f, s)?
        .add_scaled(&j_trilinear(f, f, f, s)?, one)?
        .map_coeffs(true, true, |_, c| -c);
    let defect = remainder[0].sub(&expected_w0)?.sobolev_norm(0.0);
    if defect > IDENTITY_TOL * expected_w0.sobolev_norm(0.0).max(1.0) {
        return Err(KdvError::Inconsistent(format!(
            "initial remainder identity defect {defect:.3e} exceeds tolerance"
        )));
    }

    Ok(Decomposition {
        times: v_traj.times.clone(),
        resonant,
        bilinear,
        trilinear,
        remainder,
        initial_identity_defect: defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::MultiplierSymbol;
    use crate::params::RegularityParams;
    use crate::random::random_rough_field_with_l2;
    use crate::solver::{evolve, Integrator, SolverConfig};

    fn scaled_trajectory(n: usize, seed: u64, s: f64) -> (Trajectory, FourierField) {
        let p = RegularityParams::new(s, 0.02, 0.8, 0.1).unwrap();
        let u0 = random_rough_field_with_l2(n, &p, seed, 0.5);
        let cfg = SolverConfig {
            max_freq: n,
            dt: 1e-3,
            t_end: 0.1,
            sample_stride: 20,
            integrator: Integrator::IfRk4,
            c_cfl: 0.5,
        };
        let traj = evolve(&u0, &cfg).unwrap();
        let v_traj = traj.map_fields(|_, u| {
            u.apply_multiplier(MultiplierSymbol::Bessel(-s)).unwrap()
        });
        let f = v_traj.fields[0].clone();
        (v_traj, f)
    }

    #[test]
    fn reconstruction_is_exact() {
        let s = 0.25;
        let (v_traj, f) = scaled_trajectory(24, 3, s);
        let d = decompose(&v_traj, &f, s).unwrap();
        for (idx, v) in v_traj.fields.iter().enumerate() {
            let err = d.reconstruct(idx).unwrap().sub(v).unwrap().sobolev_norm(0.0);
            assert!(err <= 1e-12, "sample {idx}: reconstruction defect {err}");
        }
        assert!(d.initial_identity_defect <= 1e-12);
    }

    #[test]
    fn synthetic_resonant_trajectory_gives_pure_layers() {
        // if v(t) is itself the resonant flow, the remainder is -h - k
        let s = 0.25;
        let p = RegularityParams::new(s, 0.02, 0.8, 0.1).unwrap();
        let f = random_rough_field_with_l2(16, &p, 5, 0.5);
        let cfg = SolverConfig {
            max_freq: 16,
            dt: 0.05,
            t_end: 0.2,
            sample_stride: 1,
            integrator: Integrator::IfRk4,
            c_cfl: 0.5,
        };
        let times: Vec<f64> = (0..=4).map(|k| k as f64 * 0.05).collect();
        let fields: Vec<FourierField> = times
            .iter()
            .map(|&t| r_evolve(&f, s, t, RateScale::VScale).unwrap())
            .collect();
        let v_traj = Trajectory {
            times,
            fields,
            config: cfg,
        };
        let d = decompose(&v_traj, &f, s).unwrap();
        for idx in 0..v_traj.len() {
            let minus_hk = d.bilinear[idx]
                .add_scaled(&d.trilinear[idx], Complex64::new(1.0, 0.0))
                .unwrap()
                .map_coeffs(true, true, |_, c| -c);
            let err = d.remainder[idx].sub(&minus_hk).unwrap().sobolev_norm(0.0);
            assert!(err <= 1e-13, "sample {idx}: {err}");
        }
    }

    #[test]
    fn wrong_initial_data_rejected() {
        let s = 0.25;
        let (v_traj, f) = scaled_trajectory(16, 7, s);
        let wrong = f.map_coeffs(true, true, |_, c| c * 1.01);
        assert!(matches!(
            decompose(&v_traj, &wrong, s),
            Err(KdvError::Inconsistent(_))
        ));
    }
}
