//! Complex special functions and numeric primitives: Gamma, upper incomplete
//! Gamma, Gauss-Legendre quadrature with node doubling, and a plain DFT.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

/// B_{2m} / (2m (2m-1)) for m = 1..9, the Stirling series coefficients.
const STIRLING: [f64; 9] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
];

/// |s| beyond which the Stirling tail is below double rounding.
const STIRLING_RADIUS: f64 = 12.0;

fn stirling_ln_gamma(s: Complex64) -> Complex64 {
    let ln_s = s.ln();
    let mut acc = (s - 0.5) * ln_s - s + 0.5 * (2.0 * PI).ln();
    let s2 = s * s;
    let mut spow = s;
    for c in STIRLING {
        acc += c / spow;
        spow *= s2;
    }
    acc
}

/// Principal-branch log-Gamma (up to an invisible 2-pi-i ambiguity introduced
/// by the recurrence shift; callers only exponentiate the result).
pub fn ln_gamma(s: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(s) {
        return Err(Error::GammaPole(s.re as i64));
    }
    if s.re < 0.5 {
        // reflection: ln pi - ln sin(pi s) - ln_gamma(1 - s)
        let sin = (PI * s).sin();
        if sin.norm() == 0.0 {
            return Err(Error::GammaPole(s.re.round() as i64));
        }
        return Ok(PI.ln() - sin.ln() - ln_gamma(Complex64::new(1.0, 0.0) - s)?);
    }
    let mut shift = Complex64::new(0.0, 0.0);
    let mut z = s;
    while z.norm() < STIRLING_RADIUS {
        shift += z.ln();
        z += 1.0;
    }
    Ok(stirling_ln_gamma(z) - shift)
}

/// Gamma(s) on the complex plane; errors with a distinct pole signal at
/// non-positive integers (callers needing 1/Gamma(-n) = 0 use `rgamma`).
pub fn gamma_complex(s: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(s) {
        return Err(Error::GammaPole(s.re.round() as i64));
    }
    if s.re < 0.5 {
        let sin = (PI * s).sin();
        return Ok(PI / (sin * gamma_complex(Complex64::new(1.0, 0.0) - s)?));
    }
    let mut correction = Complex64::new(1.0, 0.0);
    let mut z = s;
    while z.norm() < STIRLING_RADIUS {
        correction *= z;
        z += 1.0;
    }
    Ok(stirling_ln_gamma(z).exp() / correction)
}

/// Reciprocal Gamma, entire: 1/Gamma(-n) = 0 for n in N_0.
pub fn rgamma(s: Complex64) -> Complex64 {
    if is_nonpositive_integer(s) {
        return Complex64::new(0.0, 0.0);
    }
    match gamma_complex(s) {
        Ok(g) => 1.0 / g,
        Err(_) => Complex64::new(0.0, 0.0),
    }
}

fn is_nonpositive_integer(s: Complex64) -> bool {
    s.im == 0.0 && s.re <= 0.0 && s.re.fract() == 0.0
}

/// The non-positive integer within `radius` of s, if any.
pub fn near_nonpositive_integer(s: Complex64, radius: f64) -> Option<i64> {
    let n = s.re.round();
    if n <= 0.0 && (s - Complex64::new(n, 0.0)).norm() <= radius {
        Some(n as i64)
    } else {
        None
    }
}

const INC_GAMMA_MAX_ITER: usize = 512;

/// Upper incomplete Gamma(s, w) for real w > 0 and complex s, entire in s.
///
/// Series path through the lower function when w < |s| + 2 (and s is safely
/// away from the Gamma poles), Legendre continued fraction otherwise.
pub fn upper_incomplete_gamma(s: Complex64, w: f64) -> Result<Complex64> {
    if w < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "incomplete gamma needs w >= 0, got {w}"
        )));
    }
    if w == 0.0 {
        return gamma_complex(s);
    }
    let series_ok = w < s.norm() + 2.0 && near_nonpositive_integer(s, 0.25).is_none();
    if series_ok {
        let lower = lower_incomplete_series(s, w)?;
        Ok(gamma_complex(s)? - lower)
    } else {
        upper_incomplete_cf(s, w)
    }
}

/// Lower gamma(s, w) = w^s e^{-w} sum_{n>=0} w^n / (s (s+1) ... (s+n)).
pub fn lower_incomplete_series(s: Complex64, w: f64) -> Result<Complex64> {
    let mut denom = s;
    let mut term = 1.0 / s;
    let mut sum = term;
    for _ in 0..INC_GAMMA_MAX_ITER {
        denom += 1.0;
        term *= w / denom;
        sum += term;
        if term.norm() < sum.norm() * 1e-17 {
            let prefactor = (s * w.ln()).exp() * (-w).exp();
            return Ok(prefactor * sum);
        }
    }
    Err(Error::IncompleteGammaDivergence(INC_GAMMA_MAX_ITER))
}

/// Modified Lentz evaluation of the Legendre continued fraction
/// Gamma(s,w) = e^{-w} w^s / (w + 1 - s - K_n( n (n - s) / (w + 2n + 1 - s) )).
fn upper_incomplete_cf(s: Complex64, w: f64) -> Result<Complex64> {
    let tiny = Complex64::new(1e-300, 0.0);
    let b0 = Complex64::new(w + 1.0, 0.0) - s;
    let mut f = if b0.norm() < 1e-300 { tiny } else { b0 };
    let mut c = f;
    let mut d = Complex64::new(0.0, 0.0);
    for n in 1..=INC_GAMMA_MAX_ITER {
        let nf = n as f64;
        let an = nf * (s - nf);
        let bn = Complex64::new(w + 2.0 * nf + 1.0, 0.0) - s;
        d = bn + an * d;
        if d.norm() < 1e-300 {
            d = tiny;
        }
        d = 1.0 / d;
        c = bn + an / c;
        if c.norm() < 1e-300 {
            c = tiny;
        }
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).norm() < 1e-16 {
            let prefactor = (s * w.ln()).exp() * (-w).exp();
            return Ok(prefactor / f);
        }
    }
    Err(Error::IncompleteGammaDivergence(INC_GAMMA_MAX_ITER))
}

/// Result of an adaptive quadrature.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub nodes_used: usize,
    pub est_error: f64,
}

static GL_NODES: OnceLock<Mutex<HashMap<usize, (Vec<f64>, Vec<f64>)>>> = OnceLock::new();

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0f64, 0.0f64);
    for j in 0..n {
        let p2 = p1;
        p1 = p0;
        p0 = ((2 * j + 1) as f64 * x * p1 - j as f64 * p2) / (j as f64 + 1.0);
    }
    let dp = n as f64 * (x * p0 - p1) / (x * x - 1.0);
    (p0, dp)
}

/// Gauss-Legendre nodes and weights on [-1, 1], cached per order.
fn gl_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let cache = GL_NODES.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = cache.lock().unwrap().get(&n) {
        return rule.clone();
    }
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Newton from the Chebyshev-angle initial guess
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..64 {
            let (p, dp) = legendre_and_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_and_derivative(n, x);
        xs[i] = -x;
        xs[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        ws[i] = w;
        ws[n - 1 - i] = w;
    }
    cache.lock().unwrap().insert(n, (xs.clone(), ws.clone()));
    (xs, ws)
}

/// Gauss-Legendre nodes and weights transformed to [0, 1].
pub fn gl_nodes_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    let (xs, ws) = gl_rule(n.max(4));
    (
        xs.iter().map(|x| 0.5 * (x + 1.0)).collect(),
        ws.iter().map(|w| 0.5 * w).collect(),
    )
}

/// Fixed-order Gauss-Legendre approximation of int_a^b f.
pub fn gl_fixed<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, n: usize) -> Complex64 {
    let (xs, ws) = gl_rule(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, w) in xs.iter().zip(&ws) {
        acc += *w * f(mid + half * x);
    }
    acc * half
}

const GL_MAX_NODES: usize = 2048;

/// Gauss-Legendre with node doubling until successive approximations differ
/// by less than `tol` (absolute); `est_error` is the final difference.
pub fn gl_integrate<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<QuadratureResult> {
    let mut n = 8;
    let mut prev = gl_fixed(&f, a, b, n);
    loop {
        n *= 2;
        let cur = gl_fixed(&f, a, b, n);
        let delta = (cur - prev).norm();
        if delta < tol {
            return Ok(QuadratureResult {
                value: cur,
                nodes_used: n,
                est_error: delta,
            });
        }
        if n >= GL_MAX_NODES {
            return Err(Error::QuadratureFailure {
                nodes: n,
                tol,
                last_delta: delta,
            });
        }
        prev = cur;
    }
}

/// DFT of uniform samples over one period:
/// coefficient k = (1/N) sum_j samples\[j\] e^{-2 pi i k j / N}, k = 0..N-1.
///
/// The signed mode -k sits at index N - k (see `dft_mode`).
pub fn dft(samples: &[f64]) -> Result<Vec<Complex64>> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("dft of empty input".into()));
    }
    let n = samples.len();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &v) in samples.iter().enumerate() {
            let angle = -2.0 * PI * (k as f64) * (j as f64) / (n as f64);
            acc += v * Complex64::new(angle.cos(), angle.sin());
        }
        out.push(acc / n as f64);
    }
    Ok(out)
}

/// Signed-mode accessor for a full DFT table.
pub fn dft_mode(table: &[Complex64], k: i64) -> Complex64 {
    let n = table.len() as i64;
    table[k.rem_euclid(n) as usize]
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT_PI: f64 = 1.772453850905516;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gamma_small_integers_and_half() {
        assert!((gamma_complex(c(4.0, 0.0)).unwrap().re - 6.0).abs() < 1e-13);
        assert!((gamma_complex(c(0.5, 0.0)).unwrap().re - SQRT_PI).abs() < 1e-13);
        assert!((gamma_complex(c(1.0, 0.0)).unwrap().re - 1.0).abs() < 1e-13);
    }

    #[test]
    fn gamma_recurrence_complex() {
        let s = c(2.5, 3.0);
        let lhs = gamma_complex(s + 1.0).unwrap();
        let rhs = s * gamma_complex(s).unwrap();
        assert!((lhs - rhs).norm() / lhs.norm() < 1e-12);
    }

    #[test]
    fn gamma_reflection_region() {
        // Gamma(-1.5) = 4 sqrt(pi) / 3
        let g = gamma_complex(c(-1.5, 0.0)).unwrap();
        assert!((g.re - 4.0 * SQRT_PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn gamma_pole_signals() {
        assert!(matches!(gamma_complex(c(0.0, 0.0)), Err(Error::GammaPole(0))));
        assert!(matches!(gamma_complex(c(-3.0, 0.0)), Err(Error::GammaPole(-3))));
        assert_eq!(rgamma(c(-7.0, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn ln_gamma_consistent_with_gamma() {
        for &s in &[c(3.3, 1.0), c(1.0, 9.06), c(2.0, 45.7), c(0.7, -2.0)] {
            let via_ln = ln_gamma(s).unwrap().exp();
            let direct = gamma_complex(s).unwrap();
            assert!((via_ln - direct).norm() / direct.norm() < 1e-12, "s = {s}");
        }
    }

    #[test]
    fn incomplete_gamma_closed_forms() {
        // Gamma(1, w) = e^{-w}
        for &w in &[0.3, 1.0, 3.7, 10.0] {
            let g = upper_incomplete_gamma(c(1.0, 0.0), w).unwrap();
            assert!((g.re - (-w).exp()).abs() < 1e-14, "w = {w}");
        }
        // Gamma(2, 1) = 2/e
        let g = upper_incomplete_gamma(c(2.0, 0.0), 1.0).unwrap();
        assert!((g.re - 2.0 / std::f64::consts::E).abs() < 1e-14);
    }

    #[test]
    fn incomplete_gamma_paths_agree_on_overlap() {
        // near w = |s| + 2 both the series and the continued fraction apply
        for &s in &[c(1.5, 0.7), c(3.0, -2.0), c(0.8, 1.1)] {
            for &w in &[s.norm() + 1.5, s.norm() + 2.5] {
                let series = gamma_complex(s).unwrap() - lower_incomplete_series(s, w).unwrap();
                let cf = upper_incomplete_cf(s, w).unwrap();
                assert!((series - cf).norm() / cf.norm().max(1e-30) < 1e-11);
            }
        }
    }

    #[test]
    fn incomplete_gamma_complement_identity() {
        for &s in &[c(1.3, 2.0), c(2.5, -1.0), c(4.0, 0.5)] {
            for &w in &[0.4, 2.0, 6.0] {
                let upper = upper_incomplete_gamma(s, w).unwrap();
                let lower = lower_incomplete_series(s, w).unwrap();
                let total = gamma_complex(s).unwrap();
                assert!((upper + lower - total).norm() / total.norm() < 1e-10);
            }
        }
    }

    #[test]
    fn incomplete_gamma_monotone_limit_small_w() {
        // Gamma(s, w) -> Gamma(s) as w -> 0+ on real s > 0
        let s = c(1.7, 0.0);
        let total = gamma_complex(s).unwrap().re;
        let mut prev = f64::NEG_INFINITY;
        for &w in &[1.0, 0.1, 0.01, 1e-4, 1e-6] {
            let g = upper_incomplete_gamma(s, w).unwrap().re;
            assert!(g > prev);
            prev = g;
        }
        assert!((prev - total).abs() < 1e-6);
    }

    #[test]
    fn gl_basics() {
        let one = gl_integrate(|_| c(1.0, 0.0), 0.0, 1.0, 1e-14).unwrap();
        assert!((one.value.re - 1.0).abs() < 1e-14);

        let full_period =
            gl_integrate(|u| Complex64::new(0.0, 2.0 * PI * u).exp(), 0.0, 1.0, 1e-13).unwrap();
        assert!(full_period.value.norm() < 1e-13);
    }

    #[test]
    fn gl_exponential_closed_form() {
        // int_0^1 beta^{z u} du = (beta^z - 1) / (z ln beta), beta = 3, z = 1 + i
        let beta: f64 = 3.0;
        let z = c(1.0, 1.0);
        let got = gl_integrate(|u| (z * beta.ln() * u).exp(), 0.0, 1.0, 1e-14)
            .unwrap()
            .value;
        let expect = ((z * beta.ln()).exp() - 1.0) / (z * beta.ln());
        assert!((got - expect).norm() < 1e-12);
    }

    #[test]
    fn gl_polynomial_exactness() {
        // degree 7 is integrated exactly by 4 nodes
        let f = |x: f64| c(x.powi(7) - 2.0 * x.powi(5) + x, 0.0);
        let got = gl_fixed(&f, 0.0, 1.0, 4);
        let expect = 1.0 / 8.0 - 2.0 / 6.0 + 0.5;
        assert!((got.re - expect).abs() < 1e-14);
    }

    #[test]
    fn dft_constant_and_cosine() {
        let table = dft(&vec![1.0; 64]).unwrap();
        assert!((table[0].re - 1.0).abs() < 1e-13);
        assert!(table[1..].iter().all(|z| z.norm() < 1e-12));

        let n = 64;
        let samples: Vec<f64> = (0..n)
            .map(|j| (2.0 * PI * j as f64 / n as f64).cos())
            .collect();
        let table = dft(&samples).unwrap();
        assert!((dft_mode(&table, 1).re - 0.5).abs() < 1e-12);
        assert!((dft_mode(&table, -1).re - 0.5).abs() < 1e-12);
        assert!(dft_mode(&table, 0).norm() < 1e-12);
    }

    #[test]
    fn dft_empty_is_rejected() {
        assert!(dft(&[]).is_err());
    }
}
