//! Normal-form operators for the scaled KdV nonlinearity.
//!
//! The quadratic nonlinearity `N(u, v) = d_x <grad>^{-s} (<grad>^s u <grad>^s v)`
//! is traded for smoother terms through a bilinear transform `T` whose symbol
//! divides by the quadratic resonance function `3 xi_1 xi_2 (xi_1 + xi_2)`,
//! and the remaining cubic nonresonant sum is traded through a trilinear
//! transform `J` dividing by the cubic resonance function
//! `3 (xi_1 + xi_2)(xi_2 + xi_3)(xi_3 + xi_1)`.  The purely resonant cubic
//! part has no inter-mode coupling and is a per-mode polynomial.
//!
//! `T` is evaluated through an alias-free convolution of weighted fields
//! (its symbol factors per slot); the trilinear sums do not factor (their
//! denominators couple pairwise frequency sums), so the production path is a
//! table-driven constrained summation, parallel over the output frequency
//! with a fixed accumulation order per mode.  Naive from-scratch summations
//! (`*_direct`) serve as the independent oracle route.

use num_complex::Complex64;

use crate::error::{KdvError, Result};
use crate::field::{bracket, FourierField};
use crate::product::dealiased_product;
use crate::resonant::{r_evolve, RateScale};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Symbol of the bilinear transform on the admissible set
/// `xi_1 xi_2 (xi_1 + xi_2) != 0`:
/// `-(1/3) <xi_1>^s <xi_2>^s / (<xi_1 + xi_2>^s xi_1 xi_2)` (real).
pub fn bilinear_symbol(xi1: i64, xi2: i64, s: f64) -> f64 {
    debug_assert!(xi1 != 0 && xi2 != 0 && xi1 + xi2 != 0);
    -(1.0 / 3.0) * bracket(xi1).powf(s) * bracket(xi2).powf(s)
        / (bracket(xi1 + xi2).powf(s) * (xi1 as f64) * (xi2 as f64))
}

/// Symbol of the scaled nonlinearity at `xi = xi_1 + xi_2`:
/// `i xi <xi_1>^s <xi_2>^s / <xi>^s`.
pub fn nonlinearity_symbol(xi1: i64, xi2: i64, s: f64) -> Complex64 {
    let xi = xi1 + xi2;
    Complex64::new(0.0, xi as f64) * bracket(xi1).powf(s) * bracket(xi2).powf(s)
        / bracket(xi).powf(s)
}

/// Symbol of the trilinear transform on the admissible set
/// (pairwise sums nonzero, `xi_j != 0`):
/// `-(2/3) <xi_1>^s <xi_2>^s <xi_3>^s / (i xi_3 <xi>^s (xi_1+xi_2)(xi_2+xi_3)(xi_3+xi_1))`.
pub fn trilinear_symbol(xi1: i64, xi2: i64, xi3: i64, s: f64) -> Complex64 {
    let p = pairwise_product(xi1, xi2, xi3) as f64;
    let xi = xi1 + xi2 + xi3;
    let real_part = (2.0 / 3.0) * bracket(xi1).powf(s) * bracket(xi2).powf(s)
        * bracket(xi3).powf(s)
        / (xi3 as f64 * bracket(xi).powf(s) * p);
    // 1/i = -i turns the real quotient into +i * real_part
    Complex64::new(0.0, real_part)
}

/// Symbol of the nonresonant cubic sum at `xi = xi_1 + xi_2 + xi_3`:
/// `<xi_1>^s <xi_2>^s <xi_3>^s / (i xi_3 <xi>^s)`.
pub fn nonresonant_symbol(xi1: i64, xi2: i64, xi3: i64, s: f64) -> Complex64 {
    let xi = xi1 + xi2 + xi3;
    let real_part = bracket(xi1).powf(s) * bracket(xi2).powf(s) * bracket(xi3).powf(s)
        / (xi3 as f64 * bracket(xi).powf(s));
    Complex64::new(0.0, -real_part)
}

#[inline]
pub fn pairwise_product(xi1: i64, xi2: i64, xi3: i64) -> i64 {
    (xi1 + xi2) * (xi2 + xi3) * (xi3 + xi1)
}

/// Per-pair cancellation behind the bilinear normal form: applying the Airy
/// operator to `T` leaves `symbol_T * (-3 i xi_1 xi_2 xi)` on each admissible
/// pair, which equals the nonlinearity symbol exactly.
pub fn bilinear_cancellation(xi1: i64, xi2: i64, s: f64) -> (Complex64, Complex64) {
    let xi = xi1 + xi2;
    let resonance = Complex64::new(0.0, -3.0 * (xi1 * xi2 * xi) as f64);
    let lhs = resonance * bilinear_symbol(xi1, xi2, s);
    let rhs = nonlinearity_symbol(xi1, xi2, s);
    (lhs, rhs)
}

/// Per-triple cancellation behind the trilinear normal form:
/// `symbol_J * (-3 (xi_1+xi_2)(xi_2+xi_3)(xi_3+xi_1))` equals twice the
/// nonresonant symbol exactly.
pub fn trilinear_cancellation(xi1: i64, xi2: i64, xi3: i64, s: f64) -> (Complex64, Complex64) {
    let lhs = trilinear_symbol(xi1, xi2, xi3, s) * (-3.0 * pairwise_product(xi1, xi2, xi3) as f64);
    let rhs = 2.0 * nonresonant_symbol(xi1, xi2, xi3, s);
    (lhs, rhs)
}

/// Bilinear transform `T(u, v)`, alias-free convolution route.
///
/// Weighted slots `<xi>^s a_xi / xi` (zero modes dropped) are convolved
/// exactly, then scaled by `-(1/3) <xi>^{-s}` with the mean killed; this
/// reproduces the constrained double sum termwise.  Output truncated to the
/// common `max_freq`; bilinear and symmetric.
pub fn t_bilinear(u: &FourierField, v: &FourierField, s: f64) -> Result<FourierField> {
    u.require_same_n(v)?;
    let weight = |f: &FourierField| {
        f.map_coeffs(false, true, |xi, c| {
            if xi == 0 {
                Complex64::ZERO
            } else {
                c * bracket(xi).powf(s) / xi as f64
            }
        })
    };
    let conv = dealiased_product(&weight(u), &weight(v))?;
    Ok(conv.map_coeffs(conv.is_real(), true, |xi, c| {
        if xi == 0 {
            Complex64::ZERO
        } else {
            c * (-(1.0 / 3.0) / bracket(xi).powf(s))
        }
    }))
}

/// Direct constrained double sum for `T`; the oracle route.
pub fn t_bilinear_direct(u: &FourierField, v: &FourierField, s: f64) -> Result<FourierField> {
    u.require_same_n(v)?;
    let n = u.max_freq() as i64;
    let coeffs: Vec<Complex64> = (-n..=n)
        .map(|xi| {
            if xi == 0 {
                return Complex64::ZERO;
            }
            let mut acc = Complex64::ZERO;
            for xi1 in -n..=n {
                let xi2 = xi - xi1;
                if xi1 == 0 || xi2 == 0 || xi2 < -n || xi2 > n {
                    continue;
                }
                acc += bilinear_symbol(xi1, xi2, s) * u.coeff(xi1) * v.coeff(xi2);
            }
            acc
        })
        .collect();
    FourierField::from_coeffs(u.max_freq(), coeffs)
}

/// Runs one closure per output frequency, in parallel when the `parallel`
/// feature is on.  The per-mode accumulation order never changes, so results
/// are identical for any thread count.
fn per_output_mode(
    n: usize,
    f: impl Fn(i64) -> Complex64 + Sync + Send,
) -> Vec<Complex64> {
    let n_i = n as i64;
    #[cfg(feature = "parallel")]
    {
        (-n_i..=n_i).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (-n_i..=n_i).map(f).collect()
    }
}

/// Precomputed `<xi>^e` for `|xi| <= n`, indexed by `xi + n`.
struct BracketTable {
    n: i64,
    pow: Vec<f64>,
}

impl BracketTable {
    fn new(n: usize, e: f64) -> Self {
        let n = n as i64;
        BracketTable {
            n,
            pow: (-n..=n).map(|xi| bracket(xi).powf(e)).collect(),
        }
    }

    #[inline]
    fn get(&self, xi: i64) -> f64 {
        self.pow[(xi + self.n) as usize]
    }
}

/// Trilinear transform `J(u, v, w)`: table-driven constrained summation,
/// data-parallel over the output frequency.  Symmetric in the first two
/// slots; output truncated to the common `max_freq`.
pub fn j_trilinear(
    u: &FourierField,
    v: &FourierField,
    w: &FourierField,
    s: f64,
) -> Result<FourierField> {
    u.require_same_n(v)?;
    u.require_same_n(w)?;
    let n = u.max_freq();
    let tab = BracketTable::new(n, s);
    let coeffs = per_output_mode(n, |xi| {
        let mut acc = Complex64::ZERO;
        let n_i = n as i64;
        let out_weight = tab.get(xi);
        for xi1 in -n_i..=n_i {
            if xi1 == 0 {
                continue;
            }
            let a1 = u.coeff(xi1);
            if a1 == Complex64::ZERO {
                continue;
            }
            let w1 = tab.get(xi1);
            for xi2 in (-n_i).max(xi - xi1 - n_i)..=n_i.min(xi - xi1 + n_i) {
                if xi2 == 0 {
                    continue;
                }
                let xi3 = xi - xi1 - xi2;
                if xi3 == 0 {
                    continue;
                }
                let p = pairwise_product(xi1, xi2, xi3);
                if p == 0 {
                    continue;
                }
                let r = (2.0 / 3.0) * w1 * tab.get(xi2) * tab.get(xi3)
                    / (xi3 as f64 * out_weight * p as f64);
                acc += r * v.coeff(xi2) * w.coeff(xi3) * a1;
            }
        }
        // symbol = i * (real quotient)
        Complex64::new(-acc.im, acc.re)
    });
    FourierField::from_coeffs(n, coeffs)
}

/// Naive from-scratch trilinear summation; the oracle route for `J`.
pub fn j_trilinear_direct(
    u: &FourierField,
    v: &FourierField,
    w: &FourierField,
    s: f64,
) -> Result<FourierField> {
    u.require_same_n(v)?;
    u.require_same_n(w)?;
    let n = u.max_freq() as i64;
    let mut out = vec![Complex64::ZERO; (2 * n + 1) as usize];
    for xi1 in -n..=n {
        for xi2 in -n..=n {
            for xi3 in -n..=n {
                let xi = xi1 + xi2 + xi3;
                if xi < -n || xi > n || xi1 == 0 || xi2 == 0 || xi3 == 0 {
                    continue;
                }
                if pairwise_product(xi1, xi2, xi3) == 0 {
                    continue;
                }
                out[(xi + n) as usize] += trilinear_symbol(xi1, xi2, xi3, s)
                    * u.coeff(xi1)
                    * v.coeff(xi2)
                    * w.coeff(xi3);
            }
        }
    }
    FourierField::from_coeffs(u.max_freq(), out)
}

/// Nonresonant cubic sum `NR(u, v, w)`: same constraint set as `J` but with
/// the underived symbol (no resonance-function division).  For equal real
/// arguments, `NR + resonant_cubic` reproduces the full rearranged cubic sum.
pub fn nr_coefficients(
    u: &FourierField,
    v: &FourierField,
    w: &FourierField,
    s: f64,
) -> Result<FourierField> {
    u.require_same_n(v)?;
    u.require_same_n(w)?;
    let n = u.max_freq();
    let tab = BracketTable::new(n, s);
    let coeffs = per_output_mode(n, |xi| {
        let mut acc = Complex64::ZERO;
        let n_i = n as i64;
        let out_weight = tab.get(xi);
        for xi1 in -n_i..=n_i {
            if xi1 == 0 {
                continue;
            }
            let a1 = u.coeff(xi1);
            if a1 == Complex64::ZERO {
                continue;
            }
            let w1 = tab.get(xi1);
            for xi2 in (-n_i).max(xi - xi1 - n_i)..=n_i.min(xi - xi1 + n_i) {
                if xi2 == 0 {
                    continue;
                }
                let xi3 = xi - xi1 - xi2;
                if xi3 == 0 || pairwise_product(xi1, xi2, xi3) == 0 {
                    continue;
                }
                let r = w1 * tab.get(xi2) * tab.get(xi3) / (xi3 as f64 * out_weight);
                acc += r * v.coeff(xi2) * w.coeff(xi3) * a1;
            }
        }
        // symbol carries 1/i = -i
        Complex64::new(acc.im, -acc.re)
    });
    FourierField::from_coeffs(n, coeffs)
}

/// Resonant cubic term: the per-mode map
/// `a_xi -> -(<xi>^{2s} / (i xi)) |a_xi|^2 a_xi` with no inter-mode coupling.
pub fn resonant_coefficients(v: &FourierField, s: f64) -> Result<FourierField> {
    Ok(v.map_coeffs(false, true, |xi, c| {
        if xi == 0 {
            Complex64::ZERO
        } else {
            // -1/i = +i
            Complex64::new(0.0, bracket(xi).powf(2.0 * s) / xi as f64) * c.norm_sqr() * c
        }
    }))
}

/// The resonant-term polynomial
/// `B(a, b, g) = |a+b+g|^2 (b+g) + a |b+g|^2 + a^2 conj(b+g) + |a|^2 (b+g)`,
/// evaluated literally; it never produces the pure `|a|^2 a` monomial.
pub fn resonant_polynomial_b(alpha: Complex64, beta: Complex64, gamma: Complex64) -> Complex64 {
    let bg = beta + gamma;
    (alpha + bg).norm_sqr() * bg
        + alpha * bg.norm_sqr()
        + alpha * alpha * bg.conj()
        + alpha.norm_sqr() * bg
}

/// The two quintic coefficient sums left after the trilinear normal form:
/// the trilinear constraint set weighted by `|f_hat|^2` on the first or
/// third slot, with resonant-flow factors at time `t` in every slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuinticVariant {
    /// weight `|f_hat(xi_1)|^2 / (-xi_1 xi_3 ...)`
    FirstSlot,
    /// weight `|f_hat(xi_3)|^2 / (-xi_3^2 ...)`
    ThirdSlot,
}

/// Evaluate the displayed quintic coefficient sum at time `t`.
/// Quintic-homogeneous in `f`.
pub fn quintic_coefficients(
    f: &FourierField,
    s: f64,
    t: f64,
    variant: QuinticVariant,
) -> Result<FourierField> {
    let r = r_evolve(f, s, t, RateScale::VScale)?;
    let n = f.max_freq();
    let tab = BracketTable::new(n, s);
    let tab3 = BracketTable::new(n, 3.0 * s);
    let coeffs = per_output_mode(n, |xi| {
        let mut acc = Complex64::ZERO;
        let n_i = n as i64;
        let out_weight = tab.get(xi);
        for xi1 in -n_i..=n_i {
            if xi1 == 0 {
                continue;
            }
            let r1 = r.coeff(xi1);
            if r1 == Complex64::ZERO {
                continue;
            }
            for xi2 in (-n_i).max(xi - xi1 - n_i)..=n_i.min(xi - xi1 + n_i) {
                if xi2 == 0 {
                    continue;
                }
                let xi3 = xi - xi1 - xi2;
                if xi3 == 0 {
                    continue;
                }
                let p = pairwise_product(xi1, xi2, xi3);
                if p == 0 {
                    continue;
                }
                let coef = match variant {
                    QuinticVariant::FirstSlot => {
                        tab3.get(xi1) * tab.get(xi2) * tab.get(xi3) * f.coeff(xi1).norm_sqr()
                            / (-(xi1 as f64) * xi3 as f64 * out_weight * p as f64)
                    }
                    QuinticVariant::ThirdSlot => {
                        tab.get(xi1) * tab.get(xi2) * tab3.get(xi3) * f.coeff(xi3).norm_sqr()
                            / (-((xi3 * xi3) as f64) * out_weight * p as f64)
                    }
                };
                acc += coef * r1 * r.coeff(xi2) * r.coeff(xi3);
            }
        }
        acc
    });
    FourierField::from_coeffs(n, coeffs)
}

/// Both sides of the cubic dispersive identity
/// `(t1+t2+t3) - (x1+x2+x3)^3 = sum (t_j - x_j^3) - 3 (x1+x2)(x2+x3)(x3+x1)`
/// in exact wide-integer arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CubicIdentity {
    pub lhs: i128,
    pub rhs: i128,
}

pub fn cubic_identity(
    xi: [i64; 3],
    tau: [i64; 3],
) -> Result<CubicIdentity> {
    let cube = |x: i128| -> Option<i128> { x.checked_mul(x)?.checked_mul(x) };
    let overflow = || KdvError::Overflow("cubic dispersive identity");
    let sx: i128 = xi.iter().map(|&x| x as i128).sum();
    let st: i128 = tau.iter().map(|&t| t as i128).sum();
    let lhs = st.checked_sub(cube(sx).ok_or_else(overflow)?).ok_or_else(overflow)?;

    let mut rhs: i128 = 0;
    for j in 0..3 {
        rhs = rhs
            .checked_add(
                (tau[j] as i128)
                    .checked_sub(cube(xi[j] as i128).ok_or_else(overflow)?)
                    .ok_or_else(overflow)?,
            )
            .ok_or_else(overflow)?;
    }
    let p = (xi[0] as i128 + xi[1] as i128)
        .checked_mul(xi[1] as i128 + xi[2] as i128)
        .ok_or_else(overflow)?
        .checked_mul(xi[2] as i128 + xi[0] as i128)
        .ok_or_else(overflow)?;
    rhs = rhs.checked_sub(p.checked_mul(3).ok_or_else(overflow)?).ok_or_else(overflow)?;
    Ok(CubicIdentity { lhs, rhs })
}
