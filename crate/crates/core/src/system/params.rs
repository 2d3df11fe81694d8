//! Structural constants of a numeration system: kappa, mu, and the
//! convergence abscissa exponent log_beta |d|.

use super::digits::DigitSet;
use crate::error::{Error, Result};

/// log_beta |d|, the growth exponent of S and the abscissa of convergence.
pub fn sigma_c(beta: f64, digits: &DigitSet) -> f64 {
    (digits.cardinality() as f64).ln() / beta.ln()
}

/// Feasibility sum of the kappa definition at a given u:
/// sum_{k>=1} beta^{-floor(k/u)} * max(d), grouped over blocks of constant
/// floor(k/u) and truncated once the geometric tail bound drops below `cut`.
fn kappa_feasibility_sum(beta: f64, max_digit: f64, u: f64, cut: f64) -> f64 {
    let mut total = 0.0;
    let mut m: u64 = 0;
    loop {
        // k >= 1 with floor(k/u) = m  <=>  k in [m*u, (m+1)*u)
        let lo = ((m as f64) * u).ceil().max(1.0);
        let hi = (((m + 1) as f64) * u).ceil() - 1.0;
        if hi >= lo {
            let count = hi - lo + 1.0;
            total += count * beta.powf(-(m as f64)) * max_digit;
        }
        if total > 1.0 + cut {
            return total; // already infeasible, no need to refine the tail
        }
        // per-block count never exceeds u + 1
        let tail_bound = max_digit * (u + 1.0) * beta.powf(-((m + 1) as f64)) / (1.0 - 1.0 / beta);
        if tail_bound < cut {
            return total + tail_bound;
        }
        m += 1;
    }
}

/// kappa_{beta, d}: the largest u with sum_{k>=1} beta^{-floor(k/u)} max(d) <= 1,
/// located by bisection to within `tol` and clamped to (0, 1].
///
/// The clamp matters only for digit sets with max digit < 1, where the
/// feasible region can extend past 1; every bound that consumes kappa stays
/// valid for smaller values.
pub fn kappa(beta: f64, digits: &DigitSet, tol: f64) -> Result<f64> {
    if !(beta > 1.0) {
        return Err(Error::InvalidBase(format!("kappa needs beta > 1, got {beta}")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tol must be positive, got {tol}")));
    }
    let max_digit = digits.max_digit_f64();
    let cut = tol / 10.0;
    let feasible = |u: f64| kappa_feasibility_sum(beta, max_digit, u, cut) <= 1.0 + cut;

    if feasible(1.0) {
        return Ok(1.0);
    }
    // the sum vanishes as u -> 0+, so a feasible left endpoint always exists
    let mut lo = 1e-3;
    while !feasible(lo) {
        lo /= 2.0;
        if lo < 1e-12 {
            return Ok(lo);
        }
    }
    let mut hi = 1.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// mu_{beta, d}: the maximum number of digits falling in a single residue
/// class mod beta. Requires integer beta, integer digits, and gcd(d) = 1.
pub fn mu(beta: u64, digits: &DigitSet) -> Result<u64> {
    if beta < 2 {
        return Err(Error::InvalidBase(format!("mu needs integer beta >= 2, got {beta}")));
    }
    let ints = digits
        .integer_values()
        .ok_or_else(|| Error::NotIntegerValued(digits.describe()))?;
    match digits.gcd_if_integer() {
        Some(1) => {}
        Some(g) => return Err(Error::GcdNotOne(g.to_string())),
        None => return Err(Error::NotIntegerValued(digits.describe())),
    }
    let mut counts = vec![0u64; beta as usize];
    for v in ints {
        counts[(v % beta) as usize] += 1;
    }
    Ok(*counts.iter().max().unwrap())
}

/// Bundle of the structural constants of one system.
#[derive(Debug, Clone)]
pub struct SystemParams {
    pub kappa: f64,
    pub mu: Option<u64>,
    pub log_card: f64,
}

impl SystemParams {
    pub fn compute(beta: f64, digits: &DigitSet, tol: f64) -> Result<Self> {
        let kappa = kappa(beta, digits, tol)?;
        let mu = if beta.fract() == 0.0 && digits.gcd_if_integer() == Some(1) {
            Some(mu(beta as u64, digits)?)
        } else {
            None
        };
        Ok(SystemParams {
            kappa,
            mu,
            log_card: sigma_c(beta, digits),
        })
    }
}
