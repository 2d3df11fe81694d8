//! The analytic toolkit behind the continuation formulas: the digit
//! exponential-sum logarithm L_d and its Maclaurin coefficients, the smooth
//! period-1 function P, the Bernoulli-like coefficients c(l), the radius
//! data (sigma, rho), the generating function Z, and the perturbation
//! remainder B(t).
//!
//! Series arithmetic runs over exact rationals whenever the digits are
//! rational (they always are here); floating point enters only at the
//! boundary.

use crate::error::{Error, Result};
use crate::scalar::{rational_to_f64, Natural, Rational};
use crate::system::{sigma_c, BaseSequence, DigitSet};

use num_complex::Complex64;
use num_traits::{One, Zero};

/// Truncated real power series; index = degree.
#[derive(Debug, Clone)]
pub struct PowerSeries {
    pub coeffs: Vec<f64>,
    pub truncation_degree: usize,
}

impl PowerSeries {
    pub fn coeff(&self, degree: usize) -> f64 {
        self.coeffs.get(degree).copied().unwrap_or(0.0)
    }
}

// ---------------------------------------------------------------------------
// exact series arithmetic
// ---------------------------------------------------------------------------

/// exp of a series with zero constant term: e_n = (1/n) sum_k k a_k e_{n-k}.
fn series_exp(a: &[Rational], m: usize) -> Vec<Rational> {
    debug_assert!(a[0].is_zero());
    let mut e = vec![Rational::zero(); m + 1];
    e[0] = Rational::one();
    for n in 1..=m {
        let mut acc = Rational::zero();
        for k in 1..=n {
            if !a[k].is_zero() {
                acc += Rational::from_integer(k.into()) * &a[k] * &e[n - k];
            }
        }
        e[n] = acc / Rational::from_integer(n.into());
    }
    e
}

/// log of a series with constant term 1:
/// g_n = f_n - (1/n) sum_{k<n} k g_k f_{n-k}.
fn series_log(f: &[Rational], m: usize) -> Vec<Rational> {
    debug_assert!(f[0].is_one());
    let mut g = vec![Rational::zero(); m + 1];
    for n in 1..=m {
        let mut acc = Rational::zero();
        for k in 1..n {
            if !g[k].is_zero() && !f[n - k].is_zero() {
                acc += Rational::from_integer(k.into()) * &g[k] * &f[n - k];
            }
        }
        g[n] = &f[n] - acc / Rational::from_integer(n.into());
    }
    g
}

// ---------------------------------------------------------------------------
// L and its Maclaurin coefficients
// ---------------------------------------------------------------------------

/// L_d(y) = log(sum_delta e^{-delta y}) for real y >= 0.
pub fn digit_log_sum(digits: &DigitSet, y: f64) -> f64 {
    digits
        .values_f64()
        .iter()
        .map(|d| (-d * y).exp())
        .sum::<f64>()
        .ln()
}

/// L_d at a complex argument (principal logarithm).
pub fn digit_log_sum_complex(digits: &DigitSet, y: Complex64) -> Complex64 {
    digits
        .values_f64()
        .iter()
        .map(|d| (-d * y).exp())
        .sum::<Complex64>()
        .ln()
}

/// Maclaurin coefficients [y^h] L_d(y) for h = 1..=m, exact.
///
/// With E(y) = sum_delta e^{-delta y} the coefficient of y^h in E is
/// sum_delta (-delta)^h / h!; the h >= 1 part of log E equals
/// log(E / |d|) which stays rational.
pub fn l_coeffs_exact(digits: &DigitSet, m: usize) -> Vec<Rational> {
    let card = Rational::from_integer((digits.cardinality() as u64).into());
    let mut e_hat = vec![Rational::zero(); m + 1];
    e_hat[0] = Rational::one();
    let mut h_fact = Natural::from(1u32);
    for h in 1..=m {
        h_fact *= h as u64;
        let mut acc = Rational::zero();
        for d in digits.values() {
            let mut p = Rational::one();
            for _ in 0..h {
                p *= -d;
            }
            acc += p;
        }
        e_hat[h] = acc / (&card * Rational::from_integer(h_fact.clone().into()));
    }
    series_log(&e_hat, m)
}

/// Maclaurin series of L_d up to degree m; the degree-0 term is log |d|.
pub fn l_coeffs(digits: &DigitSet, m: usize) -> PowerSeries {
    let exact = l_coeffs_exact(digits, m);
    let mut coeffs: Vec<f64> = exact.iter().map(rational_to_f64).collect();
    coeffs[0] = (digits.cardinality() as f64).ln();
    PowerSeries {
        coeffs,
        truncation_degree: m,
    }
}

// ---------------------------------------------------------------------------
// the periodic function P
// ---------------------------------------------------------------------------

/// P_{beta,d}(w) at a complex argument:
/// sum_{k in Z} (k + w + 1/2)(L(beta^{k+w}) - L(beta^{k+1+w})) + (1/2) log |d|.
///
/// Upward the terms die double-exponentially; the run stops after three
/// consecutive terms below tol/10. Downward |L(beta^{k+w}) - log |d|| is
/// O(max(d) beta^{k + Re w}), giving a geometric tail bound.
pub fn p_complex(beta: f64, digits: &DigitSet, w: Complex64, tol: f64) -> Complex64 {
    // P has period 1; reduce to the fundamental domain so the truncation
    // windows always straddle the active terms
    let w = Complex64::new(w.re - w.re.floor(), w.im);
    let cut = tol / 10.0;
    let ln_beta = beta.ln();
    let card = digits.cardinality() as f64;
    let max_digit = digits.max_digit_f64();
    let l_at = |k: f64| -> Complex64 {
        let y = ((k + w.re) * ln_beta).exp() * Complex64::new(0.0, w.im * ln_beta).exp();
        digit_log_sum_complex(digits, y)
    };

    let mut total = Complex64::new(0.5 * card.ln(), 0.0);
    // upward: k = 0, 1, 2, ...
    let mut upper = l_at(0.0);
    let mut small_streak = 0;
    let mut k = 0i64;
    loop {
        let next = l_at((k + 1) as f64);
        let term = (w + (k as f64 + 0.5)) * (upper - next);
        total += term;
        upper = next;
        if term.norm() < cut {
            small_streak += 1;
            if small_streak >= 3 {
                break;
            }
        } else {
            small_streak = 0;
        }
        k += 1;
        if k > 4096 {
            break; // double-exponential decay makes this unreachable
        }
    }
    // downward: k = -1, -2, ...
    let mut outer = l_at(0.0);
    let mut k = -1i64;
    loop {
        let inner = l_at(k as f64);
        let term = (w + (k as f64 + 0.5)) * (inner - outer);
        total += term;
        outer = inner;
        let scale = (k.unsigned_abs() as f64 + w.norm() + 1.0)
            * max_digit
            * ((k as f64 + w.re) * ln_beta).exp()
            * (beta + 1.0);
        if scale / (1.0 - 1.0 / beta) < cut {
            break;
        }
        k -= 1;
        if k < -8192 {
            break;
        }
    }
    total
}

/// P_{beta,d}(w) for real w.
pub fn p_function(beta: f64, digits: &DigitSet, w: f64, tol: f64) -> f64 {
    p_complex(beta, digits, Complex64::new(w, 0.0), tol).re
}

/// Gauss-Legendre samples of e^{P(u)} on [0, 1], shared by every integral
/// of the form int_0^1 e^{P(u)} g(u) du in the Fourier and zeta modules.
#[derive(Debug, Clone)]
pub struct PSampler {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    exp_p: Vec<f64>,
    est_error: f64,
}

impl PSampler {
    pub fn new(beta: f64, digits: &DigitSet, order: usize, tol: f64) -> Result<Self> {
        let (nodes, weights) = crate::special::gl_nodes_unit(order);
        let exp_p: Vec<f64> = nodes
            .iter()
            .map(|&u| p_function(beta, digits, u, tol).exp())
            .collect();
        // error probe: the same functional through half the nodes
        let (nh, wh) = crate::special::gl_nodes_unit(order / 2);
        let coarse: f64 = nh
            .iter()
            .zip(&wh)
            .map(|(&u, &w)| w * p_function(beta, digits, u, tol).exp())
            .sum();
        let fine: f64 = exp_p.iter().zip(&weights).map(|(e, w)| e * w).sum();
        Ok(PSampler {
            nodes,
            weights,
            exp_p,
            est_error: (fine - coarse).abs(),
        })
    }

    /// sum_i w_i e^{P(u_i)} g(u_i), approximating int_0^1 e^{P(u)} g(u) du.
    pub fn integrate<F: Fn(f64) -> Complex64>(&self, g: F) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.nodes.len() {
            acc += self.weights[i] * self.exp_p[i] * g(self.nodes[i]);
        }
        acc
    }

    pub fn integrate_real<F: Fn(f64) -> f64>(&self, g: F) -> f64 {
        self.nodes
            .iter()
            .enumerate()
            .map(|(i, &u)| self.weights[i] * self.exp_p[i] * g(u))
            .sum()
    }

    pub fn est_error(&self) -> f64 {
        self.est_error
    }
}

// ---------------------------------------------------------------------------
// c coefficients, radius, Z, B
// ---------------------------------------------------------------------------

/// Exact c_{beta,d}(l) for l = 0..=m via the formal exponential of
/// sum_{h>=1} t^h [y^h]L / (1 - beta^h). Requires an exactly-representable
/// beta (integer geometric bases in practice).
pub fn c_coeffs_exact(beta_exact: &Rational, digits: &DigitSet, m: usize) -> Vec<Rational> {
    let l = l_coeffs_exact(digits, m);
    let mut arg = vec![Rational::zero(); m + 1];
    let mut beta_pow = Rational::one();
    for (h, item) in arg.iter_mut().enumerate().take(m + 1).skip(1) {
        beta_pow *= beta_exact;
        *item = &l[h] / (Rational::one() - &beta_pow);
    }
    series_exp(&arg, m)
}

/// c coefficients as floats, for any beta > 1.
pub fn c_coeffs(beta: f64, digits: &DigitSet, m: usize) -> Result<PowerSeries> {
    let coeffs = match crate::scalar::rational_from_f64(beta) {
        Some(b) => c_coeffs_exact(&b, digits, m)
            .iter()
            .map(rational_to_f64)
            .collect(),
        None => return Err(Error::InvalidBase(format!("beta {beta} is not finite"))),
    };
    Ok(PowerSeries {
        coeffs,
        truncation_degree: m,
    })
}

/// Secondary route for c(m): the partition sum
/// sum over (l_1, ..., l_m) with sum h l_h = m of
/// prod_h (1/l_h!) ([y^h]L / (1 - beta^h))^{l_h}.
///
/// Exponential in m; used for cross-checks with m <= 8.
pub fn c_partition_sum(beta_exact: &Rational, digits: &DigitSet, m: usize) -> Result<Rational> {
    if m > 12 {
        return Err(Error::BudgetExceeded(format!(
            "partition-sum path is for small m (got {m})"
        )));
    }
    let l = l_coeffs_exact(digits, m.max(1));
    let mut ratios = vec![Rational::zero(); m + 1];
    let mut beta_pow = Rational::one();
    for h in 1..=m {
        beta_pow *= beta_exact;
        ratios[h] = &l[h] / (Rational::one() - &beta_pow);
    }
    // enumerate multiplicities l_h of each part size h
    fn recurse(h: usize, remaining: usize, ratios: &[Rational], acc: Rational, total: &mut Rational) {
        if remaining == 0 {
            *total += acc;
            return;
        }
        if h > remaining {
            return;
        }
        let mut power = Rational::one();
        let mut fact = Natural::from(1u32);
        let mut used = 0usize;
        // l_h = 0, 1, 2, ... while h * l_h <= remaining
        loop {
            if used > 0 {
                fact *= used as u64;
            }
            let contrib = &acc * &power / Rational::from_integer(fact.clone().into());
            recurse(h + 1, remaining - h * used, ratios, contrib, total);
            used += 1;
            if h * used > remaining {
                break;
            }
            power *= &ratios[h];
        }
    }
    let mut total = Rational::zero();
    if m == 0 {
        return Ok(Rational::one());
    }
    recurse(1, m, &ratios, Rational::one(), &mut total);
    Ok(total)
}

/// Estimated convergence radius of sum c(l) t^l and the derived shift rho.
#[derive(Debug, Clone, Copy)]
pub struct RadiusInfo {
    pub sigma_est: f64,
    /// min { h : beta^{-h} < sigma_est }, the smallest admissible cut.
    pub rho: u32,
    /// Same with a sigma/2 safety margin; used as the default c-shift.
    pub safe_shift: u32,
}

/// Root-test radius estimate over the tail window l in [m/2, m].
pub fn radius(beta: f64, digits: &DigitSet, m: usize) -> Result<RadiusInfo> {
    if m < 20 {
        return Err(Error::InvalidArgument(format!(
            "radius estimation needs m >= 20, got {m}"
        )));
    }
    let c = c_coeffs(beta, digits, m)?;
    let mut max_root = 0.0f64;
    for l in m / 2..=m {
        let a = c.coeff(l).abs();
        if a > 0.0 {
            max_root = max_root.max(a.powf(1.0 / l as f64));
        }
    }
    if max_root == 0.0 {
        return Ok(RadiusInfo {
            sigma_est: f64::INFINITY,
            rho: 0,
            safe_shift: 0,
        });
    }
    let sigma_est = 1.0 / max_root;
    let min_shift = |target: f64| -> u32 {
        let mut h = 0u32;
        while beta.powi(-(h as i32)) >= target {
            h += 1;
        }
        h
    };
    Ok(RadiusInfo {
        sigma_est,
        rho: min_shift(sigma_est),
        safe_shift: min_shift(sigma_est / 2.0),
    })
}

/// Generating-function value Z(e^{-t}) = prod_k sum_delta e^{-t delta b_k},
/// truncated once the next factor is within 1e-16 of 1 (cap `max_factors`).
pub fn z_value(base: &BaseSequence, digits: &DigitSet, t: f64, max_factors: usize) -> Result<f64> {
    Ok(log_z_value(base, digits, t, max_factors)?.exp())
}

/// log Z(e^{-t}), the overflow-safe form.
pub fn log_z_value(
    base: &BaseSequence,
    digits: &DigitSet,
    t: f64,
    max_factors: usize,
) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("Z needs t > 0, got {t}")));
    }
    let min_nonzero = digits.min_nonzero_f64();
    let mut acc = 0.0f64;
    for k in 0..max_factors.max(1) {
        let l = digit_log_sum(digits, t * base.value_f64(k));
        acc += l;
        // remaining factors differ from 1 by < |d| e^{-t min_d b_k}
        if t * base.value_f64(k) * min_nonzero > 40.0 {
            break;
        }
    }
    Ok(acc)
}

/// Report of the Euler-Maclaurin identity
/// sum_{k>=0} L(beta^k t) = -(log_beta t) log|d| + P(log_beta t)
///                          + sum_{k>=1} (log|d| - L(beta^{-k} t)).
#[derive(Debug, Clone, Copy)]
pub struct IdentityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub abs_diff: f64,
}

pub fn euler_maclaurin_identity_check(
    beta: f64,
    digits: &DigitSet,
    t: f64,
) -> Result<IdentityReport> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "identity check expects 0 < t <= 1, got {t}"
        )));
    }
    let card = digits.cardinality() as f64;
    let mut lhs = 0.0;
    let mut k = 0;
    loop {
        let y = beta.powi(k) * t;
        let l = digit_log_sum(digits, y);
        lhs += l;
        if y * digits.min_nonzero_f64() > 45.0 {
            break;
        }
        k += 1;
    }
    let log_beta_t = t.ln() / beta.ln();
    let mut correction = 0.0;
    let mut k = 1;
    loop {
        let y = beta.powi(-k) * t;
        let term = card.ln() - digit_log_sum(digits, y);
        correction += term;
        if term.abs() < 1e-18 {
            break;
        }
        k += 1;
        if k > 4096 {
            break;
        }
    }
    let rhs = -log_beta_t * card.ln() + p_function(beta, digits, log_beta_t, 1e-13) + correction;
    Ok(IdentityReport {
        lhs,
        rhs,
        abs_diff: (lhs - rhs).abs(),
    })
}

/// Cached evaluator of the perturbation remainder
/// B(t) = (Z(e^{-t/alpha}) - e^{P(log_beta t)} t^{-sigma_c}) t^{sigma_c - min(1, gamma)}.
///
/// B is computed as e^{P - g ln t} expm1(Delta) with
/// Delta = log Z(e^{-t/alpha}) + sigma_c ln t - P(log_beta t), which survives
/// the cancellation between the two large factors at small t. For an exactly
/// geometric base Delta equals log(sum c(m) t^m), evaluated through the
/// series inside the radius so the remainder stays accurate down to t -> 0.
pub struct BFunction {
    base: BaseSequence,
    digits: DigitSet,
    alpha: f64,
    gamma_eff: f64,
    sigma_c: f64,
    series: Option<(Vec<f64>, f64)>, // (c coefficients, validity threshold)
}

impl BFunction {
    pub fn new(base: &BaseSequence, digits: &DigitSet) -> Result<Self> {
        let alpha = base.alpha().ok_or(Error::MissingBaseParameter("alpha"))?;
        let gamma = base.gamma().ok_or(Error::MissingBaseParameter("gamma"))?;
        let series = if base.is_geometric() {
            let c = c_coeffs(base.beta(), digits, 48)?;
            let rad = radius(base.beta(), digits, 48)?;
            Some((c.coeffs, (0.45 * rad.sigma_est).min(0.5)))
        } else {
            None
        };
        Ok(BFunction {
            base: base.clone(),
            digits: digits.clone(),
            alpha,
            gamma_eff: gamma.min(1.0),
            sigma_c: sigma_c(base.beta(), digits),
            series,
        })
    }

    pub fn eval(&self, t: f64) -> f64 {
        debug_assert!(t > 0.0 && t <= 1.0);
        let p = p_function(self.base.beta(), self.digits(), t.ln() / self.base.beta().ln(), 1e-13);
        let delta = match &self.series {
            Some((c, threshold)) if t < *threshold => {
                // Delta = log(1 + sum_{m>=1} c(m) t^m), exact for geometric bases
                let mut tail = 0.0;
                let mut tp = 1.0;
                for &cm in &c[1..] {
                    tp *= t;
                    tail += cm * tp;
                }
                tail.ln_1p()
            }
            _ => self.scaled_log_z(t) + self.sigma_c * t.ln() - p,
        };
        (p - self.gamma_eff * t.ln()).exp() * delta.exp_m1()
    }

    fn digits(&self) -> &DigitSet {
        &self.digits
    }

    /// log Z(e^{-t/alpha}) over the base's own values.
    fn scaled_log_z(&self, t: f64) -> f64 {
        let min_nonzero = self.digits.min_nonzero_f64();
        let mut acc = 0.0f64;
        for k in 0..4096 {
            let y = t / self.alpha * self.base.value_f64(k);
            acc += digit_log_sum(&self.digits, y);
            if y * min_nonzero > 40.0 {
                break;
            }
        }
        acc
    }
}

/// One-shot B(t).
pub fn b_fn(base: &BaseSequence, digits: &DigitSet, t: f64) -> Result<f64> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "B(t) is defined on (0, 1], got {t}"
        )));
    }
    Ok(BFunction::new(base, digits)?.eval(t))
}
