//! Truncated Fourier representation of periodic functions.
//!
//! A field stores the complex coefficients `a_xi` of
//! `f(x) = sum_{|xi| <= N} a_xi exp(i xi x)` on the torus `[0, 2*pi]`.
//! Products are then plain coefficient convolutions with no `2*pi` factors,
//! and every per-frequency operator identity can be applied verbatim on the
//! stored coefficients.  The classical transform `f_hat(xi) = integral of
//! f exp(-i x xi)` equals `2*pi * a_xi`; norms below differ from that
//! normalization by a global constant only.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{KdvError, Result};

/// `<xi> = 1 + |xi|`, the Japanese-bracket weight used by every symbol here.
#[inline]
pub fn bracket(xi: i64) -> f64 {
    1.0 + xi.unsigned_abs() as f64
}

/// Fourier multiplier symbols: diagonal operators in coefficient space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MultiplierSymbol {
    /// `<xi>^sigma`
    Bessel(f64),
    /// `i xi` (spatial derivative)
    Derivative,
    /// `1/(i xi)` on mean-zero fields; the zero mode stays zero
    InverseDerivative,
    /// `<xi>^sigma / (i xi)` on mean-zero fields
    BesselInverseDerivative(f64),
    /// zeroes the mean mode, identity elsewhere
    MeanKill,
}

/// Truncated coefficient vector with reality / mean-zero bookkeeping flags.
///
/// Coefficients are stored for `xi = -N ..= N`; everything outside is
/// implicitly zero.  The flags are contracts: `is_real` promises
/// `a_{-xi} = conj(a_xi)` and `is_mean_zero` promises `a_0 = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "FieldRecord", try_from = "FieldRecord")]
pub struct FourierField {
    max_freq: usize,
    coeffs: Vec<Complex64>,
    is_real: bool,
    is_mean_zero: bool,
}

/// Wire format: `{n, re[], im[], real, mean_zero}` with arrays in
/// `xi = -N ..= N` order.  Round-trips bit-exactly through JSON.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldRecord {
    pub n: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
    pub real: bool,
    pub mean_zero: bool,
}

impl From<FourierField> for FieldRecord {
    fn from(f: FourierField) -> Self {
        FieldRecord {
            n: f.max_freq,
            re: f.coeffs.iter().map(|c| c.re).collect(),
            im: f.coeffs.iter().map(|c| c.im).collect(),
            real: f.is_real,
            mean_zero: f.is_mean_zero,
        }
    }
}

impl TryFrom<FieldRecord> for FourierField {
    type Error = String;
    fn try_from(r: FieldRecord) -> std::result::Result<Self, String> {
        let len = 2 * r.n + 1;
        if r.re.len() != len || r.im.len() != len {
            return Err(format!(
                "field record arrays must have length 2n+1 = {len}, got re: {}, im: {}",
                r.re.len(),
                r.im.len()
            ));
        }
        Ok(FourierField {
            max_freq: r.n,
            coeffs: r
                .re
                .iter()
                .zip(&r.im)
                .map(|(&re, &im)| Complex64::new(re, im))
                .collect(),
            is_real: r.real,
            is_mean_zero: r.mean_zero,
        })
    }
}

impl FourierField {
    /// Zero field at truncation `N`, flagged real and mean-zero.
    pub fn zeros(max_freq: usize) -> Self {
        FourierField {
            max_freq,
            coeffs: vec![Complex64::ZERO; 2 * max_freq + 1],
            is_real: true,
            is_mean_zero: true,
        }
    }

    /// Build from a coefficient vector in `xi = -N ..= N` order.
    /// Flags are derived from the data (exact checks).
    pub fn from_coeffs(max_freq: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != 2 * max_freq + 1 {
            return Err(KdvError::Config(format!(
                "coefficient vector must have length 2N+1 = {}, got {}",
                2 * max_freq + 1,
                coeffs.len()
            )));
        }
        let mut f = FourierField {
            max_freq,
            coeffs,
            is_real: false,
            is_mean_zero: false,
        };
        f.is_real = f.check_conjugate_symmetry();
        f.is_mean_zero = f.coeff(0) == Complex64::ZERO;
        Ok(f)
    }

    pub fn max_freq(&self) -> usize {
        self.max_freq
    }

    pub fn is_real(&self) -> bool {
        self.is_real
    }

    pub fn is_mean_zero(&self) -> bool {
        self.is_mean_zero
    }

    /// Coefficient at frequency `xi`; zero outside the truncation.
    #[inline]
    pub fn coeff(&self, xi: i64) -> Complex64 {
        let n = self.max_freq as i64;
        if xi < -n || xi > n {
            Complex64::ZERO
        } else {
            self.coeffs[(xi + n) as usize]
        }
    }

    /// Set the coefficient at `xi`.  Re-derives the bookkeeping flags.
    pub fn set_coeff(&mut self, xi: i64, value: Complex64) {
        let n = self.max_freq as i64;
        assert!(
            (-n..=n).contains(&xi),
            "frequency {xi} outside truncation [-{n}, {n}]"
        );
        self.coeffs[(xi + n) as usize] = value;
        self.is_real = self.check_conjugate_symmetry();
        self.is_mean_zero = self.coeff(0) == Complex64::ZERO;
    }

    /// Raw coefficient slice in `xi = -N ..= N` order.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Iterate `(xi, a_xi)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let n = self.max_freq as i64;
        self.coeffs.iter().enumerate().map(move |(i, &c)| (i as i64 - n, c))
    }

    /// Exact conjugate-symmetry test `a_{-xi} == conj(a_xi)`.
    pub fn check_conjugate_symmetry(&self) -> bool {
        let n = self.max_freq as i64;
        (0..=n).all(|xi| self.coeff(-xi) == self.coeff(xi).conj())
    }

    /// Map each coefficient through `f(xi, a_xi)`, keeping flags as claimed.
    pub(crate) fn map_coeffs(
        &self,
        is_real: bool,
        is_mean_zero: bool,
        mut f: impl FnMut(i64, Complex64) -> Complex64,
    ) -> Self {
        let n = self.max_freq as i64;
        FourierField {
            max_freq: self.max_freq,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| f(i as i64 - n, c))
                .collect(),
            is_real,
            is_mean_zero,
        }
    }

    /// Weighted l2 norm `(sum <xi>^{2 sigma} |a_xi|^2)^{1/2}`.
    pub fn sobolev_norm(&self, sigma: f64) -> f64 {
        self.iter()
            .map(|(xi, c)| {
                let w = bracket(xi).powf(sigma);
                w * w * c.norm_sqr()
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Apply a diagonal Fourier multiplier.
    ///
    /// All symbols are even-real or odd-imaginary, so real fields map to
    /// real fields; the flags are carried accordingly.
    pub fn apply_multiplier(&self, sym: MultiplierSymbol) -> Result<Self> {
        use MultiplierSymbol::*;
        match sym {
            Bessel(sigma) => Ok(self.map_coeffs(self.is_real, self.is_mean_zero, |xi, c| {
                c * bracket(xi).powf(sigma)
            })),
            Derivative => Ok(self.map_coeffs(self.is_real, true, |xi, c| {
                c * Complex64::new(0.0, xi as f64)
            })),
            InverseDerivative => {
                self.require_mean_zero("inverse_derivative")?;
                Ok(self.map_coeffs(self.is_real, true, |xi, c| {
                    if xi == 0 {
                        Complex64::ZERO
                    } else {
                        c / Complex64::new(0.0, xi as f64)
                    }
                }))
            }
            BesselInverseDerivative(sigma) => {
                self.require_mean_zero("bessel_inverse_derivative")?;
                Ok(self.map_coeffs(self.is_real, true, |xi, c| {
                    if xi == 0 {
                        Complex64::ZERO
                    } else {
                        c * bracket(xi).powf(sigma) / Complex64::new(0.0, xi as f64)
                    }
                }))
            }
            MeanKill => {
                let mut out = self.clone();
                out.coeffs[self.max_freq] = Complex64::ZERO;
                out.is_mean_zero = true;
                Ok(out)
            }
        }
    }

    pub(crate) fn require_mean_zero(&self, op: &'static str) -> Result<()> {
        if self.coeff(0) == Complex64::ZERO {
            Ok(())
        } else {
            Err(KdvError::MeanZeroRequired {
                op,
                a0: self.coeff(0).norm(),
            })
        }
    }

    /// Same-truncation guard used by binary and ternary operators.
    pub(crate) fn require_same_n(&self, other: &Self) -> Result<()> {
        if self.max_freq == other.max_freq {
            Ok(())
        } else {
            Err(KdvError::TruncationMismatch {
                expected: self.max_freq,
                got: other.max_freq,
            })
        }
    }

    /// Linear combination `self + scale * other` (same truncation).
    pub fn add_scaled(&self, other: &Self, scale: Complex64) -> Result<Self> {
        self.require_same_n(other)?;
        let coeffs: Vec<Complex64> = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| a + scale * b)
            .collect();
        FourierField::from_coeffs(self.max_freq, coeffs)
    }

    /// Pointwise difference, used by residual diagnostics.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add_scaled(other, Complex64::new(-1.0, 0.0))
    }

    /// Serialize to the documented JSON wire format.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    /// Parse the documented JSON wire format.
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}
