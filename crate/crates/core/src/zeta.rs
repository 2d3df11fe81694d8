//! The zeta function of a numeration system: the Dirichlet series in its
//! half-plane of convergence, the meromorphic continuation for geometric
//! bases, the half-plane continuation for perturbed bases, poles, residues,
//! special values and trivial zeros.

use crate::analytic::{c_coeffs, radius, PSampler, RadiusInfo};
use crate::counting::RepCountTable;
use crate::error::{Error, Result};
use crate::fourier::exp_p_fourier_integral;

use crate::special::{rgamma, upper_incomplete_gamma};
use crate::system::{sigma_c, BaseSequence, DigitSet};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Guard radius around pole locations for the continued formulas.
pub const POLE_GUARD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZetaMethod {
    Direct,
    ContinuedGeometric,
    ContinuedPerturbed,
}

#[derive(Debug, Clone, Copy)]
pub struct ZetaTruncations {
    pub lambda_cut: f64,
    pub ell_cut: usize,
    pub c_shift: u32,
}

#[derive(Debug, Clone, Copy)]
pub struct ZetaEval {
    pub s: Complex64,
    pub value: Complex64,
    pub method: ZetaMethod,
    pub truncations: ZetaTruncations,
    pub est_error: f64,
}

/// One pole of the continued zeta function.
#[derive(Debug, Clone, Copy)]
pub struct PoleInfo {
    pub j: u32,
    pub k: i64,
    pub location: Complex64,
    pub residue: Complex64,
    /// |residue| < 1e-14: the singularity may be removable. The formula
    /// only says poles are possible; vanishing is reported, never asserted.
    pub possibly_removable: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryBehavior {
    Divergent,
    Convergent,
}

/// Abscissa of convergence sigma_c = log_beta |d| together with a numeric
/// probe of the boundary series sum_h |d|^{h - log_beta b_h}.
pub fn abscissa(base: &BaseSequence, digits: &DigitSet) -> (f64, BoundaryBehavior) {
    let sc = sigma_c(base.beta(), digits);
    let card = digits.cardinality() as f64;
    let horizon = base.max_index().map(|m| m.min(60)).unwrap_or(60);
    let term = |h: usize| (h as f64 * card.ln() - sc * base.value_f64(h).ln()).exp();
    let half: f64 = (0..=horizon / 2).map(term).sum();
    let full: f64 = (0..=horizon).map(term).sum();
    let behavior = if full / half >= 1.2 {
        BoundaryBehavior::Divergent
    } else {
        BoundaryBehavior::Convergent
    };
    (sc, behavior)
}

// ---------------------------------------------------------------------------
// direct evaluation
// ---------------------------------------------------------------------------

/// Direct Dirichlet-series evaluation on Re(s) >= sigma_c + 0.2.
///
/// The head sum_{lambda <= X0} r(lambda) lambda^{-s} comes from an exact
/// table. For integer geometric bases the tail is then resolved by the
/// self-similar decomposition lambda = beta nu + delta: writing
/// T_j = sum_{lambda > X0} r(lambda) lambda^{-s-j} and expanding
/// (beta nu + delta)^{-s-j} binomially yields a triangular system
///
///   (1 - |d| beta^{-(s+j)}) T_j
///     = sum_delta beta^{-(s+j)} sum_i C(-(s+j), i) (delta/beta)^i (T_{j+i} + C_delta(j+i)),
///
/// solved downward from T_J ~ 0, where C_delta(m) are exact boundary sums
/// from the table. This reaches machine-level tails without touching the
/// analytic continuation machinery, keeping the two routes independent.
/// For other integer bases the tail uses the counting asymptotics: the
/// periodic part of S(x) x^{-sigma_c} over the last table period is
/// Fourier-expanded and integrated in closed form.
pub fn zeta_direct(
    base: &BaseSequence,
    digits: &DigitSet,
    s: Complex64,
    x_cut: u64,
) -> Result<ZetaEval> {
    let sc = sigma_c(base.beta(), digits);
    if s.re < sc + 0.2 {
        return Err(Error::InvalidArgument(format!(
            "direct evaluation needs Re(s) >= sigma_c + 0.2 = {:.4}, got {}",
            sc + 0.2,
            s.re
        )));
    }
    if let Some(beta) = base.integer_beta() {
        if digits.is_integer() {
            return direct_self_similar(beta, digits, s, x_cut, sc);
        }
    }
    if base.is_integer_valued() && digits.is_integer() {
        return direct_profile_tail(base, digits, s, x_cut, sc);
    }
    Err(Error::NotIntegerValued(format!(
        "direct evaluation needs an integer-valued system, got base {}",
        base.describe()
    )))
}

fn head_sum(table: &RepCountTable, upper: u64, s: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for lambda in 1..=upper {
        let r = table.count_f64(lambda);
        if r != 0.0 {
            acc += r * (-s * (lambda as f64).ln()).exp();
        }
    }
    acc
}

fn direct_self_similar(
    beta: u64,
    digits: &DigitSet,
    s: Complex64,
    x_cut: u64,
    _sc: f64,
) -> Result<ZetaEval> {
    // head cutoff: a power of beta near 5e4 (or the requested cut if smaller)
    let bf = beta as f64;
    let mut x0: u64 = beta;
    while x0.saturating_mul(beta) <= x_cut.min(200_000).max(beta * beta) && (x0 as f64) < 5.0e4 {
        x0 *= beta;
    }
    let base = BaseSequence::geometric(bf)?;
    let table = RepCountTable::build(&base, digits, x0)?;
    let head = head_sum(&table, x0, s);

    const J: usize = 16;
    const I: usize = 8;
    let digit_vals = digits.integer_values().unwrap();

    // boundary sums C_delta(m) = sum_{W_delta < nu <= X0} r(nu) nu^{-s-m}
    let mut c_sums = vec![vec![Complex64::new(0.0, 0.0); J + I + 1]; digit_vals.len()];
    let w_min = digit_vals
        .iter()
        .map(|&d| (x0 - d.min(x0)) / beta)
        .min()
        .unwrap();
    for nu in w_min + 1..=x0 {
        let r = table.count_f64(nu);
        if r == 0.0 {
            continue;
        }
        let nu_f = nu as f64;
        let base_pow = (-s * nu_f.ln()).exp() * r;
        for (di, &d) in digit_vals.iter().enumerate() {
            let w_delta = (x0 - d.min(x0)) / beta;
            if nu > w_delta {
                let mut p = base_pow;
                for m in 0..=J + I {
                    c_sums[di][m] += p;
                    p /= nu_f;
                }
            }
        }
    }

    // solve the triangular system downward
    let mut t = vec![Complex64::new(0.0, 0.0); J + I + 2];
    let card = digits.cardinality() as f64;
    for j in (0..=J).rev() {
        let z = s + j as f64;
        let beta_pow = (-z * bf.ln()).exp(); // beta^{-(s+j)}
        let mut rhs = Complex64::new(0.0, 0.0);
        for (di, &d) in digit_vals.iter().enumerate() {
            // i = 0 boundary part
            rhs += beta_pow * c_sums[di][j];
            if d == 0 {
                continue;
            }
            let ratio = d as f64 / bf;
            let mut binom = Complex64::new(1.0, 0.0);
            let mut ratio_pow = 1.0f64;
            for i in 1..=I {
                binom *= (-z - (i as f64 - 1.0)) / i as f64;
                ratio_pow *= ratio;
                let t_next = if j + i <= J {
                    t[j + i]
                } else {
                    Complex64::new(0.0, 0.0)
                };
                rhs += beta_pow * binom * ratio_pow * (t_next + c_sums[di][j + i]);
            }
        }
        let denom = 1.0 - card * beta_pow;
        t[j] = rhs / denom;
    }
    let value = head + t[0];

    // truncation diagnostics: first omitted binomial term and roundoff
    let w_f = w_min.max(1) as f64;
    let binom_bound = ((s.norm() + (I + 1) as f64) * digits.max_digit_f64() / (bf * w_f))
        .powi(I as i32 + 1)
        * t[0].norm().max(1.0);
    let est_error = binom_bound + 1e-15 * (x0 as f64).sqrt() + 1e-14 * value.norm();
    Ok(ZetaEval {
        s,
        value,
        method: ZetaMethod::Direct,
        truncations: ZetaTruncations {
            lambda_cut: x0 as f64,
            ell_cut: J,
            c_shift: 0,
        },
        est_error,
    })
}

fn direct_profile_tail(
    base: &BaseSequence,
    digits: &DigitSet,
    s: Complex64,
    x_cut: u64,
    sc: f64,
) -> Result<ZetaEval> {
    let table = RepCountTable::build(base, digits, x_cut)?;
    let beta = base.beta();
    let value_at_cut = |x0: u64| -> Complex64 {
        let head = head_sum(&table, x0, s);
        // periodic profile of S(x) x^{-sigma_c} over the last beta-period
        let n = 256usize;
        let m_max = 24i64;
        let u_hi = (x0 as f64).ln() / beta.ln();
        let samples: Vec<(f64, f64)> = (0..n)
            .map(|j| {
                let u = u_hi - 1.0 + (j + 1) as f64 / n as f64;
                let x = beta.powf(u).min(x0 as f64);
                let sv = crate::scalar::natural_to_f64(&table.partial_sum(x.floor() as u64));
                (u, sv * x.powf(-sc))
            })
            .collect();
        let mut tail = -crate::scalar::natural_to_f64(&table.partial_sum(x0))
            * (-s * (x0 as f64).ln()).exp();
        for m in -m_max..=m_max {
            let mut ghat = Complex64::new(0.0, 0.0);
            for &(u, g) in &samples {
                ghat += g * Complex64::new(0.0, -2.0 * PI * m as f64 * u).exp();
            }
            ghat /= n as f64;
            let z = Complex64::new(sc, 2.0 * PI * m as f64 / beta.ln()) - s;
            // int_X^inf x^{z-1} dx = -X^z / z for Re z < 0
            tail += s * ghat * (-(z * (x0 as f64).ln()).exp() / z);
        }
        head + tail
    };
    let v1 = value_at_cut(x_cut);
    let v2 = value_at_cut(((x_cut as f64) / beta).floor() as u64);
    Ok(ZetaEval {
        s,
        value: v1,
        method: ZetaMethod::Direct,
        truncations: ZetaTruncations {
            lambda_cut: x_cut as f64,
            ell_cut: 0,
            c_shift: 0,
        },
        est_error: (v1 - v2).norm() + 1e-14 * v1.norm(),
    })
}

// ---------------------------------------------------------------------------
// continued evaluation, geometric bases
// ---------------------------------------------------------------------------

/// Cached continuation machinery for one geometric system.
pub struct GeometricZeta {
    beta: f64,
    digits: DigitSet,
    sigma_c: f64,
    c_coeffs: Vec<f64>,
    pub radius: RadiusInfo,
    sampler: PSampler,
    exp_p_mean: f64,
    lambda_table: RepCountTable,
    tol: f64,
}

const C_SERIES_LEN: usize = 72;

impl GeometricZeta {
    pub fn new(beta: f64, digits: &DigitSet, tol: f64) -> Result<Self> {
        if !(beta > 1.0) {
            return Err(Error::InvalidBase(format!("needs beta > 1, got {beta}")));
        }
        let base = BaseSequence::geometric(beta)?;
        if base.integer_beta().is_none() || !digits.is_integer() {
            return Err(Error::NotIntegerValued(format!(
                "continued geometric evaluation is implemented for integer systems, got beta {beta}, digits {}",
                digits.describe()
            )));
        }
        let rad = radius(beta, digits, 48)?;
        let coeffs = c_coeffs(beta, digits, C_SERIES_LEN)?;
        let sampler = PSampler::new(beta, digits, 256, tol.min(1e-12))?;
        let exp_p_mean = sampler.integrate_real(|_| 1.0);
        // lambda values up to 40 beta^{c} for every admissible shift we allow
        let max_c = rad.safe_shift + 2;
        let bound = (40.0 * beta.powi(max_c as i32)).ceil() as u64;
        let lambda_table = RepCountTable::build(&base, digits, bound)?;
        Ok(GeometricZeta {
            beta,
            digits: digits.clone(),
            sigma_c: sigma_c(beta, digits),
            c_coeffs: coeffs.coeffs,
            radius: rad,
            sampler,
            exp_p_mean,
            lambda_table,
            tol,
        })
    }

    pub fn sigma_c(&self) -> f64 {
        self.sigma_c
    }

    /// int_0^1 e^{P(u)} du.
    pub fn exp_p_mean(&self) -> f64 {
        self.exp_p_mean
    }

    pub fn c_coeff(&self, l: usize) -> f64 {
        self.c_coeffs.get(l).copied().unwrap_or(0.0)
    }

    /// Location of the candidate pole p(j, k) = sigma_c - j - 2 pi i k / ln beta.
    pub fn pole_location(&self, j: u32, k: i64) -> Complex64 {
        Complex64::new(
            self.sigma_c - j as f64,
            -2.0 * PI * k as f64 / self.beta.ln(),
        )
    }

    /// Distance from s to the nearest candidate pole within j <= j_scan.
    pub fn nearest_pole(&self, s: Complex64, j_scan: u32) -> (f64, u32, i64) {
        let mut best = (f64::INFINITY, 0u32, 0i64);
        let k_guess = (-s.im * self.beta.ln() / (2.0 * PI)).round() as i64;
        for j in 0..=j_scan {
            for k in [k_guess - 1, k_guess, k_guess + 1] {
                let d = (s - self.pole_location(j, k)).norm();
                if d < best.0 {
                    best = (d, j, k);
                }
            }
        }
        best
    }

    /// Meromorphic continuation at s (three-part formula).
    pub fn evaluate(&self, s: Complex64, c_shift: Option<u32>) -> Result<ZetaEval> {
        let c = c_shift.unwrap_or(self.radius.safe_shift);
        if c < self.radius.rho {
            return Err(Error::InvalidArgument(format!(
                "c_shift {c} below rho = {}",
                self.radius.rho
            )));
        }
        if c > self.radius.safe_shift + 2 {
            return Err(Error::InvalidArgument(format!(
                "c_shift {c} beyond prepared range {}",
                self.radius.safe_shift + 2
            )));
        }
        // exact non-positive integers evaluate through the limit formula
        if s.im == 0.0 && s.re <= 0.0 && s.re.fract() == 0.0 {
            let n = (-s.re) as u32;
            let value = self.special_value(n)?;
            return Ok(ZetaEval {
                s,
                value: Complex64::new(value, 0.0),
                method: ZetaMethod::ContinuedGeometric,
                truncations: ZetaTruncations {
                    lambda_cut: 0.0,
                    ell_cut: 0,
                    c_shift: c,
                },
                est_error: self.sampler.est_error() + 1e-13,
            });
        }
        let (dist, j, k) = self.nearest_pole(s, 80);
        if dist < POLE_GUARD {
            return Err(Error::PoleProximity {
                s: s.to_string(),
                pole: self.pole_location(j, k).to_string(),
                dist,
                guard: POLE_GUARD,
            });
        }

        let ln_beta = self.beta.ln();
        let lambda_cut = 40.0 * self.beta.powi(c as i32);
        let beta_mc = self.beta.powi(-(c as i32));

        // (i) incomplete-gamma lambda sum
        let mut lam_sum = Complex64::new(0.0, 0.0);
        for lambda in 1..=(lambda_cut.floor() as u64) {
            let r = self.lambda_table.count_f64(lambda);
            if r == 0.0 {
                continue;
            }
            let lf = lambda as f64;
            let g = upper_incomplete_gamma(s, lf * beta_mc)?;
            lam_sum += r * (-s * lf.ln()).exp() * g;
        }

        // (ii) -beta^{-cs} / Gamma(s+1)
        let term2 = -(-(c as f64) * s * ln_beta).exp() * rgamma(s + 1.0);

        // (iii) the c(l) sum; J(z) = int_0^1 e^P beta^{z(u-1)} du keeps every
        // factor bounded: the summand is c(l) beta^{-zc} ln(beta) J / (1 - beta^{-z})
        let mut ell_sum = Complex64::new(0.0, 0.0);
        let mut ell_cut = self.c_coeffs.len();
        let mut small_streak = 0;
        let mut truncation_ok = false;
        for (l, &cl) in self.c_coeffs.iter().enumerate() {
            let z = s + l as f64 - self.sigma_c;
            let zl = z * ln_beta;
            let one_minus = 1.0 - (-zl).exp();
            let j_int = self.sampler.integrate(|u| (zl * (u - 1.0)).exp());
            let term = cl * (-zl * c as f64).exp() * ln_beta * j_int / one_minus;
            ell_sum += term;
            let min_ell = (self.sigma_c + s.norm() + 4.0) as usize;
            if term.norm() < self.tol / 10.0 && l >= min_ell {
                small_streak += 1;
                if small_streak >= 3 {
                    ell_cut = l + 1;
                    truncation_ok = true;
                    break;
                }
            } else {
                small_streak = 0;
            }
        }
        if !truncation_ok {
            return Err(Error::TruncationFailure(format!(
                "c(l) sum not below {:.1e} within {} terms at s = {s}",
                self.tol / 10.0,
                self.c_coeffs.len()
            )));
        }

        let rg = rgamma(s);
        let value = rg * (lam_sum + ell_sum) + term2;
        let est_error = rg.norm()
            * (3.0 * self.tol / 10.0 + (-38.0f64).exp() + self.sampler.est_error() * ell_sum.norm())
            + 1e-14 * value.norm();
        Ok(ZetaEval {
            s,
            value,
            method: ZetaMethod::ContinuedGeometric,
            truncations: ZetaTruncations {
                lambda_cut,
                ell_cut,
                c_shift: c,
            },
            est_error,
        })
    }

    /// Residue at p(j, k):
    /// c(j) / Gamma(p(j,k)) * int_0^1 e^{P(u)} e^{-2 pi i k u} du.
    ///
    /// Where the Gamma argument hits a non-positive integer the 1/Gamma
    /// factor vanishes and the residue is reported as (possibly) removable.
    pub fn residue(&self, j: u32, k: i64) -> Result<PoleInfo> {
        let location = self.pole_location(j, k);
        let (integral, _err) = exp_p_fourier_integral(self.beta, &self.digits, -k, self.tol)?;
        let residue = self.c_coeff(j as usize) * rgamma(location) * integral;
        Ok(PoleInfo {
            j,
            k,
            location,
            residue,
            possibly_removable: residue.norm() < 1e-14,
        })
    }

    /// zeta(-n) by the closed special-value formula.
    ///
    /// With sigma_c not an integer: zeta(0) = -1 and zeta(-n) = 0.
    /// With sigma_c = q integer: zeta(-n) = (-1)^n n! c(n + q) int_0^1 e^P du - [n = 0].
    pub fn special_value(&self, n: u32) -> Result<f64> {
        let indicator = if n == 0 { 1.0 } else { 0.0 };
        let rounded = self.sigma_c.round();
        if (self.sigma_c - rounded).abs() < 1e-9 && rounded >= 1.0 {
            let index = n as usize + rounded as usize;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let mut fact = 1.0;
            for i in 2..=n as u64 {
                fact *= i as f64;
            }
            Ok(sign * fact * self.c_coeff(index) * self.exp_p_mean - indicator)
        } else {
            Ok(-indicator)
        }
    }

    /// All candidate poles with j <= j_max, |k| <= k_max.
    pub fn pole_grid(&self, j_max: u32, k_max: i64) -> Result<Vec<PoleInfo>> {
        let cells: Vec<(u32, i64)> = (0..=j_max)
            .flat_map(|j| (-k_max..=k_max).map(move |k| (j, k)))
            .collect();
        cells
            .par_iter()
            .map(|&(j, k)| self.residue(j, k))
            .collect()
    }
}

/// One-shot wrapper around `GeometricZeta::evaluate`.
pub fn zeta_continued_geometric(
    beta: f64,
    digits: &DigitSet,
    s: Complex64,
    c_shift: Option<u32>,
    tol: f64,
) -> Result<ZetaEval> {
    GeometricZeta::new(beta, digits, tol)?.evaluate(s, c_shift)
}

// ---------------------------------------------------------------------------
// continued evaluation, perturbed bases
// ---------------------------------------------------------------------------

/// Continuation for b_k = alpha beta^k + O(beta^{(1-gamma)k}) on
/// Re(s) > sigma_c - min(1, gamma) + 0.05:
///
/// zeta(s) = alpha^{-s} [ -1/Gamma(s+1)
///            + (ln beta / (beta^{s-sigma_c} - 1)) int_0^1 e^P beta^{(s-sigma_c)u} du / Gamma(s)
///            + h(s) / Gamma(s) ],
/// h(s) = sum_lambda r(lambda) mu^{-s} Gamma(s, mu)  (mu = lambda / alpha <= 40)
///        + int_0^1 B(t) t^{s - 1 - sigma_c + min(1,gamma)} dt,
/// with the B integral taken through t = e^{-v} on dyadic panels.
pub fn zeta_continued_perturbed(
    base: &BaseSequence,
    digits: &DigitSet,
    s: Complex64,
    tol: f64,
) -> Result<ZetaEval> {
    let alpha = base.alpha().ok_or(Error::MissingBaseParameter("alpha"))?;
    let gamma_eff = base
        .gamma()
        .ok_or(Error::MissingBaseParameter("gamma"))?
        .min(1.0);
    let beta = base.beta();
    let sc = sigma_c(beta, digits);
    if s.re <= sc - gamma_eff + 0.05 {
        return Err(Error::InvalidArgument(format!(
            "perturbed continuation needs Re(s) > {:.4}, got {}",
            sc - gamma_eff + 0.05,
            s.re
        )));
    }
    let ln_beta = beta.ln();
    let z = s - sc;
    let one_minus = 1.0 - (-z * ln_beta).exp();
    if one_minus.norm() < POLE_GUARD * ln_beta {
        return Err(Error::PoleProximity {
            s: s.to_string(),
            pole: format!("sigma_c line near {}", sc),
            dist: one_minus.norm() / ln_beta,
            guard: POLE_GUARD,
        });
    }

    let sampler = PSampler::new(beta, digits, 256, tol.min(1e-12))?;
    let j_int = sampler.integrate(|u| (z * ln_beta * (u - 1.0)).exp());
    let term_p = ln_beta * j_int / one_minus;

    // lambda part over the base's own values, scaled by alpha
    let bound = (40.0 * alpha).ceil() as u64;
    let table = RepCountTable::build(base, digits, bound)?;
    let mut lam_sum = Complex64::new(0.0, 0.0);
    for lambda in 1..=bound {
        let r = table.count_f64(lambda);
        if r == 0.0 {
            continue;
        }
        let mu = lambda as f64 / alpha;
        if mu > 40.0 {
            break;
        }
        lam_sum += r * (-s * mu.ln()).exp() * upper_incomplete_gamma(s, mu)?;
    }

    // B integral via t = e^{-v}
    let bfun = crate::analytic::BFunction::new(base, digits)?;
    let exponent = s - sc + gamma_eff; // integrand B(e^{-v}) e^{-v exponent} dv
    let mut b_int = Complex64::new(0.0, 0.0);
    let mut b_sup = 0.0f64;
    let mut v_lo = 0.0f64;
    let mut width = 0.5f64;
    let v_max;
    loop {
        let f = |v: f64| -> Complex64 {
            let b = bfun.eval((-v).exp());
            (-v * exponent).exp() * b
        };
        let panel = crate::special::gl_fixed(&f, v_lo, v_lo + width, 32);
        b_int += panel;
        for q in [0.2, 0.7] {
            b_sup = b_sup.max(bfun.eval((-(v_lo + q * width)).exp()).abs());
        }
        v_lo += width;
        width = (width * 2.0).min(8.0);
        let tail_bound = (b_sup + 1.0) * (-v_lo * exponent.re).exp() / exponent.re;
        if tail_bound < tol / 10.0 || v_lo > 600.0 {
            v_max = v_lo;
            break;
        }
    }

    let rg = rgamma(s);
    let scaled = -rgamma(s + 1.0) + rg * (term_p + lam_sum + b_int);
    let value = (-s * alpha.ln()).exp() * scaled;
    // float noise in Delta grows like e^{(sigma_c - Re s) v} where Delta is
    // formed by cancellation; geometric bases switch to the exact c-series
    // below t ~ sigma/2, capping that region
    let noise_horizon = if base.is_geometric() { 3.0 } else { v_max };
    let noise_rate = sc - s.re;
    let delta_noise = if noise_rate > 1e-9 {
        1e-14 * ((noise_rate * noise_horizon).exp() - 1.0) / noise_rate
    } else {
        1e-14 * noise_horizon
    };
    let est_error = rg.norm() * (delta_noise + tol / 10.0) + 1e-14 * value.norm();
    Ok(ZetaEval {
        s,
        value,
        method: ZetaMethod::ContinuedPerturbed,
        truncations: ZetaTruncations {
            lambda_cut: 40.0,
            ell_cut: 0,
            c_shift: 0,
        },
        est_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI2_6: f64 = 1.6449340668482264;

    fn binary() -> DigitSet {
        DigitSet::from_integers(&[0, 1]).unwrap()
    }

    #[test]
    fn abscissa_examples() {
        let b2 = BaseSequence::geometric(2.0).unwrap();
        let (sc, flag) = abscissa(&b2, &binary());
        assert!((sc - 1.0).abs() < 1e-14);
        assert_eq!(flag, BoundaryBehavior::Divergent);

        let fib = BaseSequence::fibonacci();
        let (sc, _) = abscissa(&fib, &binary());
        // log_phi 2 = ln 2 / ln phi
        assert!((sc - 2.0f64.ln() / crate::system::base::PHI.ln()).abs() < 1e-12);
    }

    #[test]
    fn direct_binary_is_riemann() {
        let b = BaseSequence::geometric(2.0).unwrap();
        let d = binary();
        let z2 = zeta_direct(&b, &d, Complex64::new(2.0, 0.0), 100_000).unwrap();
        assert!(
            (z2.value.re - PI2_6).abs() < 1e-9,
            "zeta(2) = {} (err {:.2e}, est {:.2e})",
            z2.value.re,
            (z2.value.re - PI2_6).abs(),
            z2.est_error
        );
        let z3 = zeta_direct(&b, &d, Complex64::new(3.0, 0.0), 100_000).unwrap();
        assert!((z3.value.re - 1.2020569031595943).abs() < 1e-10);
    }

    #[test]
    fn continued_binary_classical_values() {
        let gz = GeometricZeta::new(2.0, &binary(), 1e-10).unwrap();
        let z2 = gz.evaluate(Complex64::new(2.0, 0.0), None).unwrap();
        assert!((z2.value.re - PI2_6).abs() < 1e-8, "zeta(2) = {}", z2.value.re);
        let z0 = gz.evaluate(Complex64::new(0.0, 0.0), None).unwrap();
        assert!((z0.value.re + 0.5).abs() < 1e-8, "zeta(0) = {}", z0.value.re);
        let zm1 = gz.evaluate(Complex64::new(-1.0, 0.0), None).unwrap();
        assert!(
            (zm1.value.re + 1.0 / 12.0).abs() < 1e-6,
            "zeta(-1) = {}",
            zm1.value.re
        );
    }

    #[test]
    fn residue_binary_pole_at_one() {
        let gz = GeometricZeta::new(2.0, &binary(), 1e-10).unwrap();
        let p = gz.residue(0, 0).unwrap();
        assert!((p.residue.re - 1.0).abs() < 1e-8, "residue = {}", p.residue);
        assert!(!p.possibly_removable);
        let p01 = gz.residue(0, 1).unwrap();
        assert!(p01.residue.norm() < 1e-9);
    }

    #[test]
    fn trivial_zeros_when_sigma_c_not_integer() {
        // (2, {0,1,5}): sigma_c = log2 3, so zeta(0) = -1 and zeta(-n) = 0
        let d = DigitSet::from_integers(&[0, 1, 5]).unwrap();
        let gz = GeometricZeta::new(2.0, &d, 1e-10).unwrap();
        assert!((gz.special_value(0).unwrap() + 1.0).abs() < 1e-12);
        for n in 1..=3 {
            let via_formula = gz
                .evaluate(Complex64::new(-(n as f64), 0.0), None)
                .unwrap();
            assert!(via_formula.value.norm() < 1e-8, "zeta(-{n}) = {}", via_formula.value);
        }
    }

    #[test]
    fn c_shift_invariance() {
        let d = DigitSet::from_integers(&[0, 1, 5]).unwrap();
        let gz = GeometricZeta::new(3.0, &d, 1e-10).unwrap();
        let s = Complex64::new(1.5, 1.0);
        let r0 = gz.evaluate(s, Some(gz.radius.rho)).unwrap().value;
        let r1 = gz.evaluate(s, Some(gz.radius.rho + 1)).unwrap().value;
        let r2 = gz.evaluate(s, Some(gz.radius.rho + 2)).unwrap().value;
        assert!((r0 - r1).norm() < 1e-8, "{r0} vs {r1}");
        assert!((r1 - r2).norm() < 1e-8, "{r1} vs {r2}");
    }

    #[test]
    fn pole_guard_trips() {
        let gz = GeometricZeta::new(2.0, &binary(), 1e-10).unwrap();
        let near = Complex64::new(1.0 + 1e-8, 0.0);
        assert!(matches!(
            gz.evaluate(near, None),
            Err(Error::PoleProximity { .. })
        ));
    }

    #[test]
    fn direct_matches_continued_on_overlap() {
        let d = DigitSet::from_integers(&[0, 1, 5]).unwrap();
        let b = BaseSequence::geometric(3.0).unwrap();
        let gz = GeometricZeta::new(3.0, &d, 1e-10).unwrap();
        for im in [-3.0, 0.0, 2.5] {
            let s = Complex64::new(1.5, im);
            let direct = zeta_direct(&b, &d, s, 100_000).unwrap();
            let cont = gz.evaluate(s, None).unwrap();
            assert!(
                (direct.value - cont.value).norm() < 1e-6,
                "s = {s}: direct {} vs continued {} (direct est {:.2e})",
                direct.value,
                cont.value,
                direct.est_error
            );
        }
    }

    #[test]
    fn perturbed_agrees_with_geometric_when_exact() {
        let b = BaseSequence::geometric(2.0).unwrap();
        let d = binary();
        let gz = GeometricZeta::new(2.0, &d, 1e-10).unwrap();
        for s in [
            Complex64::new(1.4, 0.0),
            Complex64::new(0.6, 1.0),
            Complex64::new(0.2, -2.0),
        ] {
            let pert = zeta_continued_perturbed(&b, &d, s, 1e-10).unwrap();
            let geo = gz.evaluate(s, None).unwrap();
            assert!(
                (pert.value - geo.value).norm() < 1e-6,
                "s = {s}: perturbed {} vs geometric {}",
                pert.value,
                geo.value
            );
        }
    }

    #[test]
    fn pole_approach_limit() {
        // (s - 1) zeta(s) -> residue(0,0) = 1 for the binary system
        let gz = GeometricZeta::new(2.0, &binary(), 1e-10).unwrap();
        let mut prev = f64::INFINITY;
        for t in [1e-1, 1e-2, 1e-3] {
            let s = Complex64::new(1.0 + t, 0.0);
            let v = gz.evaluate(s, None).unwrap().value;
            let probe = ((s - 1.0) * v - 1.0).norm();
            assert!(probe < prev, "probe {probe} at t = {t}");
            prev = probe;
        }
        assert!(prev < 2e-3, "final probe {prev}");
    }
}
