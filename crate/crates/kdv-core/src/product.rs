//! Alias-free coefficient products via zero-padded transforms.
//!
//! The product of two fields truncated at `N` has spectral support up to
//! `2N`; evaluating it pointwise on a grid of `M >= 3N + 1` points keeps
//! every retained mode `|xi| <= N` free of aliased contributions (the 2/3
//! rule).  The grid size is fixed per `N`, so results are reproducible
//! bit-for-bit run to run.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::Result;
use crate::field::FourierField;

/// Exact truncated convolution `(uv)_xi = sum_eta a_eta b_{xi-eta}` for
/// `|xi| <= N`, computed alias-free in physical space.
pub fn dealiased_product(u: &FourierField, v: &FourierField) -> Result<FourierField> {
    u.require_same_n(v)?;
    let n = u.max_freq();
    let m = fft_size(n);

    let mut planner = FftPlanner::new();
    let inverse = planner.plan_fft_inverse(m);
    let forward = planner.plan_fft_forward(m);

    let mut a = spread(u, m);
    let mut b = spread(v, m);
    inverse.process(&mut a);
    inverse.process(&mut b);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= y;
    }
    forward.process(&mut a);

    let scale = 1.0 / m as f64;
    let n_i = n as i64;
    let coeffs: Vec<Complex64> = (-n_i..=n_i)
        .map(|xi| a[xi.rem_euclid(m as i64) as usize] * scale)
        .collect();
    FourierField::from_coeffs(n, coeffs)
}

/// Padded transform length for truncation `N`.
pub fn fft_size(n: usize) -> usize {
    (3 * n + 1).next_power_of_two()
}

/// Place coefficients into a length-`m` DFT layout (`xi mod m` bins).
fn spread(f: &FourierField, m: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::ZERO; m];
    for (xi, c) in f.iter() {
        out[xi.rem_euclid(m as i64) as usize] = c;
    }
    out
}

/// Physical-space samples of the field on the dealiasing grid
/// `x_j = 2 pi j / M`.  Used for amplitude estimates.
pub fn grid_values(f: &FourierField) -> Vec<Complex64> {
    let m = fft_size(f.max_freq());
    let mut a = spread(f, m);
    FftPlanner::new().plan_fft_inverse(m).process(&mut a);
    a
}
