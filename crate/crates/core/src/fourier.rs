//! Fourier coefficients of Psi through the Gamma-quotient integral formula,
//! with a DFT cross-check and partial resummation.
//!
//! The k-th Fourier coefficient of e^{P} equals
//! Gamma(1 + log_beta|d| + 2 pi i k / log beta) PsiHat(k). The true size of
//! that integral decays like |Gamma| ~ e^{-pi^2 |k| / log beta}, far below
//! what real-axis quadrature can resolve, so for k != 0 the contour is
//! shifted to Im w = c inside the strip of analyticity of P:
//!
//!   int_0^1 e^{P(w)} e^{2 pi i k w} dw
//!     = e^{-2 pi |k| c} int_0^1 e^{P(w + i c sgn k)} e^{2 pi i k w} dw,
//!
//! which turns the oscillatory decay into an explicit prefactor. The shift
//! is chosen by probing |P| on candidate lines, and every coefficient is
//! computed on two different lines; their agreement is the reported error.

use crate::analytic::{p_complex, p_function};
use crate::density::DensityProfile;
use crate::error::{Error, Result};
use crate::special::{dft, gl_fixed, ln_gamma};
use crate::system::{sigma_c, DigitSet};
use num_complex::Complex64;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Table of PsiHat(k) for |k| <= k_max.
#[derive(Debug, Clone)]
pub struct FourierTable {
    pub beta: f64,
    pub digits: String,
    pub entries: BTreeMap<i64, Complex64>,
    pub est_errors: BTreeMap<i64, f64>,
    pub tol: f64,
}

impl FourierTable {
    pub fn get(&self, k: i64) -> Option<Complex64> {
        self.entries.get(&k).copied()
    }

    /// Max |PsiHat(-k) - conj(PsiHat(k))| over the table.
    pub fn hermitian_defect(&self) -> f64 {
        self.entries
            .iter()
            .filter(|(k, _)| **k > 0)
            .filter_map(|(k, v)| self.entries.get(&-k).map(|w| (w - v.conj()).norm()))
            .fold(0.0, f64::max)
    }
}

/// Largest safe contour shift: walk a ladder of heights and keep the last
/// one where e^{P} stays finite and moderate on the whole line.
fn contour_shift(beta: f64, digits: &DigitSet) -> f64 {
    // the strip is bounded by where the digit exponential sum first
    // vanishes (at pi / (2 ln beta) for symmetric cases); probe |P| on a
    // fine ladder of heights rather than solving for the root
    let cap = PI / beta.ln();
    let line_ok = |c: f64| -> bool {
        (0..48).all(|i| {
            let w = Complex64::new(i as f64 / 48.0, c);
            let p = p_complex(beta, digits, w, 1e-12);
            p.re.is_finite() && p.im.is_finite() && p.re.abs() <= 24.0
        })
    };
    let mut best = 0.0;
    let mut c = 0.05 * cap;
    while c < 0.995 * cap {
        if !line_ok(c) {
            break;
        }
        best = c;
        c += 0.01 * cap;
    }
    0.97 * best
}

/// int_0^1 e^{P(w)} e^{2 pi i k w} dw by shifted quadrature; returns the
/// value and an error estimate from evaluating on two contour heights.
pub fn exp_p_fourier_integral(
    beta: f64,
    digits: &DigitSet,
    k: i64,
    tol: f64,
) -> Result<(Complex64, f64)> {
    if k == 0 {
        let f = |w: f64| Complex64::new(p_function(beta, digits, w, tol / 10.0).exp(), 0.0);
        let coarse = gl_fixed(&f, 0.0, 1.0, 64);
        let fine = gl_fixed(&f, 0.0, 1.0, 128);
        return Ok((fine, (fine - coarse).norm()));
    }
    let c_max = contour_shift(beta, digits);
    if c_max <= 0.0 {
        return Err(Error::QuadratureFailure {
            nodes: 0,
            tol,
            last_delta: f64::INFINITY,
        });
    }
    let eval = |c: f64| -> Complex64 {
        let sign = if k > 0 { 1.0 } else { -1.0 };
        let integrand = |w: f64| -> Complex64 {
            let p = p_complex(beta, digits, Complex64::new(w, sign * c), tol / 10.0);
            let osc = Complex64::new(0.0, 2.0 * PI * k as f64 * w).exp();
            p.exp() * osc
        };
        // enough nodes to resolve 2 pi k oscillation plus the peaks of P
        let n = (24 * k.unsigned_abs() as usize).clamp(96, 1536);
        let shifted = gl_fixed(&integrand, 0.0, 1.0, n);
        shifted * (-2.0 * PI * k.abs() as f64 * c).exp()
    };
    let a = eval(c_max);
    let b = eval(0.96 * c_max);
    Ok((a, (a - b).norm()))
}

/// PsiHat(k) = [int_0^1 e^{P(w)} e^{2 pi i k w} dw]
///             / Gamma(1 + log_beta |d| + 2 pi i k / log beta).
pub fn psi_hat(beta: f64, digits: &DigitSet, k: i64, tol: f64) -> Result<Complex64> {
    let (value, _err) = psi_hat_with_error(beta, digits, k, tol)?;
    Ok(value)
}

pub fn psi_hat_with_error(
    beta: f64,
    digits: &DigitSet,
    k: i64,
    tol: f64,
) -> Result<(Complex64, f64)> {
    let sc = sigma_c(beta, digits);
    let gamma_arg = Complex64::new(1.0 + sc, 2.0 * PI * k as f64 / beta.ln());
    let lg = ln_gamma(gamma_arg)?;
    let (integral, ierr) = exp_p_fourier_integral(beta, digits, k, tol)?;
    Ok((integral * (-lg).exp(), ierr * (-lg.re).exp()))
}

/// Full table for |k| <= k_max; positive and negative modes are computed
/// independently (on opposite contours), so Hermitian symmetry stays a
/// meaningful check.
pub fn psi_hat_table(beta: f64, digits: &DigitSet, k_max: i64, tol: f64) -> Result<FourierTable> {
    let ks: Vec<i64> = (-k_max..=k_max).collect();
    let rows: Result<Vec<(i64, Complex64, f64)>> = ks
        .par_iter()
        .map(|&k| psi_hat_with_error(beta, digits, k, tol).map(|(v, e)| (k, v, e)))
        .collect();
    let mut entries = BTreeMap::new();
    let mut est_errors = BTreeMap::new();
    for (k, v, e) in rows? {
        entries.insert(k, v);
        est_errors.insert(k, e);
    }
    Ok(FourierTable {
        beta,
        digits: digits.describe(),
        entries,
        est_errors,
        tol,
    })
}

/// Partial Fourier sum at x over |k| <= k_cut. Returns (real part,
/// |imaginary part|); the imaginary residue is a diagnostic and should sit
/// at the table's noise level.
pub fn resum(x: f64, table: &FourierTable, k_cut: i64) -> Result<(f64, f64)> {
    let mut acc = Complex64::new(0.0, 0.0);
    for k in -k_cut..=k_cut {
        let v = table
            .get(k)
            .ok_or_else(|| Error::InvalidArgument(format!("table has no mode k = {k}")))?;
        acc += v * Complex64::new(0.0, 2.0 * PI * k as f64 * x).exp();
    }
    Ok((acc.re, acc.im.abs()))
}

/// The displayed product form of the coefficient formula, used as an
/// independent oracle at small |k|:
/// PsiHat(k) = (-1)^k sqrt(|d|) / Gamma(1 + sigma_c + 2 pi i k / log beta)
///             * int_T prod_h (S(beta^{h+w-1/2}) / S(beta^{h+w+1/2}))^{h+w}
///               e^{2 pi i k w} dw,
/// where S is the digit exponential sum. Real-axis quadrature limits this
/// to |k| <= 1.
pub fn psi_hat_product_form(beta: f64, digits: &DigitSet, k: i64, tol: f64) -> Result<Complex64> {
    if k.abs() > 1 {
        return Err(Error::InvalidArgument(
            "product-form oracle only supports |k| <= 1".into(),
        ));
    }
    let card = digits.cardinality() as f64;
    let sc = sigma_c(beta, digits);
    let ln_beta = beta.ln();
    let log_product = |w: f64| -> f64 {
        // sum_h (h + w)(L(beta^{h+w-1/2}) - L(beta^{h+1+w-1/2}))
        let l_at = |h: f64| crate::analytic::digit_log_sum(digits, ((h + w - 0.5) * ln_beta).exp());
        let mut total = 0.0;
        let mut upper = l_at(0.0);
        let mut h = 0i64;
        loop {
            let next = l_at((h + 1) as f64);
            total += (h as f64 + w) * (upper - next);
            upper = next;
            if upper.abs() < 1e-18 && h > 2 {
                break;
            }
            h += 1;
            if h > 256 {
                break;
            }
        }
        let mut outer = l_at(0.0);
        let mut h = -1i64;
        loop {
            let inner = l_at(h as f64);
            total += (h as f64 + w) * (inner - outer);
            outer = inner;
            let scale = (h.unsigned_abs() as f64 + 2.0)
                * digits.max_digit_f64()
                * ((h as f64 + w) * ln_beta).exp()
                * (beta + 1.0);
            if scale < 1e-18 {
                break;
            }
            h -= 1;
            if h < -4096 {
                break;
            }
        }
        total
    };
    let integrand = |w: f64| -> Complex64 {
        Complex64::new(0.0, 2.0 * PI * k as f64 * w).exp() * log_product(w).exp()
    };
    let coarse = gl_fixed(&integrand, 0.0, 1.0, 96);
    let fine = gl_fixed(&integrand, 0.0, 1.0, 192);
    if (fine - coarse).norm() > tol.max(1e-12) * 100.0 {
        return Err(Error::QuadratureFailure {
            nodes: 192,
            tol,
            last_delta: (fine - coarse).norm(),
        });
    }
    let gamma_arg = Complex64::new(1.0 + sc, 2.0 * PI * k as f64 / ln_beta);
    let lg = ln_gamma(gamma_arg)?;
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * card.sqrt() * fine * (-lg).exp())
}

/// DFT coefficients of a density profile (the test oracle for psi_hat).
pub fn profile_dft(profile: &DensityProfile) -> Result<Vec<Complex64>> {
    dft(&profile.values())
}

/// Parseval probe: (sum_k |PsiHat(k)|^2, mean of Psi^2 over the profile).
pub fn parseval_probe(table: &FourierTable, profile: &DensityProfile) -> (f64, f64) {
    let lhs: f64 = table.entries.values().map(|v| v.norm_sqr()).sum();
    let n = profile.estimates.len() as f64;
    let rhs = profile
        .estimates
        .iter()
        .map(|e| e.value * e.value)
        .sum::<f64>()
        / n;
    (lhs, rhs)
}

pub use crate::special::dft_mode as signed_dft_mode;
