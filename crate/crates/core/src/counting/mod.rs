//! Exact computation of the representation function r(lambda) and the
//! counting function S(x), brute-force oracles, and the pointwise/window
//! upper-bound checks.

mod dfs;
mod geometric;
mod table;

pub use dfs::{bruteforce_count_eq, DfsCounter, DfsOutcome};
pub use geometric::GeometricCounter;
pub use table::RepCountTable;

use crate::error::{Error, Result};
use crate::scalar::{
    natural_to_f64, rational_from_f64, rational_to_f64, Natural, Rational,
};
use crate::system::{mu, sigma_c, BaseSequence, DigitSet, SystemParams};
use num_traits::{Signed, ToPrimitive, Zero};

/// Result of a single count query.
#[derive(Debug, Clone)]
pub struct CountResult {
    pub value: Natural,
    /// Search nodes explored (0 for closed-form / memoized paths).
    pub nodes_explored: u64,
    /// For systems without exact values the threshold is counted twice with
    /// a relative nudge; a differing lower count lands here.
    pub ambiguous_lower: Option<Natural>,
}

impl CountResult {
    fn exact(value: Natural, nodes_explored: u64) -> Self {
        CountResult {
            value,
            nodes_explored,
            ambiguous_lower: None,
        }
    }

    pub fn value_f64(&self) -> f64 {
        natural_to_f64(&self.value)
    }
}

/// Exact r(n) for all n <= upper; integer-valued systems only.
pub fn rep_counts_integer(
    base: &BaseSequence,
    digits: &DigitSet,
    upper: u64,
) -> Result<RepCountTable> {
    RepCountTable::build(base, digits, upper)
}

/// Exact r(lambda) for one rational target.
///
/// Integer geometric systems use the residue-filtered recursion; everything
/// else runs the pruned DFS. Bases without exact values are rejected: exact
/// mode does no tolerance matching.
pub fn rep_count_exact(
    base: &BaseSequence,
    digits: &DigitSet,
    lambda: &Rational,
) -> Result<CountResult> {
    if lambda.is_negative() {
        return Ok(CountResult::exact(Natural::zero(), 0));
    }
    if let (Some(beta), Some(_)) = (base.integer_beta(), digits.integer_values()) {
        if lambda.is_integer() {
            let c = GeometricCounter::new(beta, digits)?;
            return Ok(CountResult::exact(c.rep_count(&lambda.to_integer()), 0));
        }
        // integer lattice cannot hit a non-integer target
        return Ok(CountResult::exact(Natural::zero(), 0));
    }
    let dfs = DfsCounter::new(base, digits, lambda)?;
    let out = dfs.count_eq(lambda)?;
    Ok(CountResult::exact(out.value, out.nodes))
}

/// Test oracle: exhaustive enumeration over d^depth digit tuples.
pub fn rep_count_bruteforce(
    base: &BaseSequence,
    digits: &DigitSet,
    lambda: &Rational,
    depth: u32,
) -> Result<CountResult> {
    let out = bruteforce_count_eq(base, digits, lambda, depth)?;
    Ok(CountResult::exact(out.value, out.nodes))
}

/// S(x) for a rational threshold, exact.
pub fn counting_fn_exact(
    base: &BaseSequence,
    digits: &DigitSet,
    x: &Rational,
) -> Result<CountResult> {
    if x.is_negative() {
        return Ok(CountResult::exact(Natural::zero(), 0));
    }
    if let Some(beta) = base.integer_beta() {
        if digits.is_integer() {
            let c = GeometricCounter::new(beta, digits)?;
            return Ok(CountResult::exact(c.count_leq(x), 0));
        }
        // rational digits: clear denominators, S_{b,d}(x) = S_{b,Dd}(Dx)
        let (scaled, denom) = digits.cleared_denominators();
        let scaled_digits = DigitSet::from_integers(&scaled)?;
        let c = GeometricCounter::new(beta, &scaled_digits)?;
        return Ok(CountResult::exact(
            c.count_leq(&(x * Rational::from_integer(denom.into()))),
            0,
        ));
    }
    let dfs = DfsCounter::new(base, digits, x)?;
    let out = dfs.count_leq(x)?;
    Ok(CountResult::exact(out.value, out.nodes))
}

/// S(x) for a real threshold. Exact comparisons whenever the system carries
/// exact values; for a base only known through floating approximations the
/// count is taken at x(1 +- 1e-12) and a difference is flagged.
pub fn counting_fn(base: &BaseSequence, digits: &DigitSet, x: f64) -> Result<CountResult> {
    if x < 0.0 {
        return Ok(CountResult::exact(Natural::zero(), 0));
    }
    let xq = rational_from_f64(x)
        .ok_or_else(|| Error::InvalidArgument(format!("threshold {x} is not finite")))?;
    if base.is_integer_valued() || base.is_integer_geometric() {
        return counting_fn_exact(base, digits, &xq);
    }
    // approximate base values: probe both sides of the threshold
    let eps = rational_from_f64((x.abs() * 1e-12).max(1e-12)).unwrap();
    let hi = counting_fn_exact(base, digits, &(&xq + &eps))?;
    let lo = counting_fn_exact(base, digits, &(&xq - &eps))?;
    let ambiguous_lower = (lo.value != hi.value).then_some(lo.value);
    Ok(CountResult {
        value: hi.value,
        nodes_explored: hi.nodes_explored + lo.nodes_explored,
        ambiguous_lower,
    })
}

/// Scan of r(n) <= mu n^{log_beta mu} for n <= upper (integer geometric
/// systems with gcd(d) = 1).
#[derive(Debug, Clone)]
pub struct UpperBoundReport {
    pub mu: u64,
    pub exponent: f64,
    pub max_ratio: f64,
    pub argmax: u64,
    pub violation: bool,
}

pub fn verify_upper_bound(
    base: &BaseSequence,
    digits: &DigitSet,
    upper: u64,
) -> Result<UpperBoundReport> {
    let beta = base
        .integer_beta()
        .ok_or_else(|| Error::NonIntegerBeta(base.beta()))?;
    let m = mu(beta, digits)?;
    let exponent = (m as f64).ln() / (beta as f64).ln();
    let table = RepCountTable::build(base, digits, upper)?;
    let mut max_ratio = 0.0f64;
    let mut argmax = 1u64;
    for n in 1..=upper {
        let r = table.count_f64(n);
        if r == 0.0 {
            continue;
        }
        let ratio = r / (m as f64 * (n as f64).powf(exponent));
        if ratio > max_ratio {
            max_ratio = ratio;
            argmax = n;
        }
    }
    Ok(UpperBoundReport {
        mu: m,
        exponent,
        max_ratio,
        argmax,
        violation: max_ratio > 1.0 + 1e-12,
    })
}

/// One evaluation of the window bound
/// S(x) - S(x - Delta) <= (1 + Delta) x^{(1 - kappa) log_beta |d| + eps}.
#[derive(Debug, Clone)]
pub struct WindowBoundReport {
    pub lhs: Natural,
    pub rhs: f64,
    pub ratio: f64,
    pub epsilon: f64,
}

pub fn window_bound_probe(
    base: &BaseSequence,
    digits: &DigitSet,
    x: f64,
    delta: f64,
) -> Result<WindowBoundReport> {
    if delta < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "window width must be non-negative, got {delta}"
        )));
    }
    let epsilon = 0.05;
    let params = SystemParams::compute(base.beta(), digits, 1e-9)?;
    let s_hi = counting_fn(base, digits, x)?;
    let s_lo = counting_fn(base, digits, x - delta)?;
    let lhs = &s_hi.value - &s_lo.value; // S is non-decreasing
    let rhs = (1.0 + delta)
        * x.powf((1.0 - params.kappa) * sigma_c(base.beta(), digits) + epsilon);
    let ratio = natural_to_f64(&lhs) / rhs;
    Ok(WindowBoundReport {
        lhs,
        rhs,
        ratio,
        epsilon,
    })
}

/// Shared entry point for S queries used by the density and zeta modules:
/// picks the fastest exact backend for the system at hand.
pub enum CountingBackend {
    Geometric(GeometricCounter),
    Table(RepCountTable),
    Dfs { bound: Rational, counter: DfsCounter },
}

impl CountingBackend {
    /// Backend able to answer S(x) for any rational 0 <= x <= bound.
    pub fn new(base: &BaseSequence, digits: &DigitSet, bound: &Rational) -> Result<Self> {
        if let Some(beta) = base.integer_beta() {
            if digits.is_integer() {
                return Ok(CountingBackend::Geometric(GeometricCounter::new(
                    beta, digits,
                )?));
            }
        }
        if base.is_integer_valued() && digits.is_integer() {
            if let Some(upper) = rational_to_f64(bound).to_u64().filter(|&u| u <= 4_000_000) {
                return Ok(CountingBackend::Table(RepCountTable::build(
                    base, digits, upper,
                )?));
            }
        }
        Ok(CountingBackend::Dfs {
            bound: bound.clone(),
            counter: DfsCounter::new(base, digits, bound)?,
        })
    }

    pub fn count_leq(&self, x: &Rational) -> Result<Natural> {
        if x.is_negative() {
            return Ok(Natural::zero());
        }
        match self {
            CountingBackend::Geometric(c) => Ok(c.count_leq(x)),
            CountingBackend::Table(t) => {
                let m = x.floor().to_integer().to_u64().ok_or_else(|| {
                    Error::BudgetExceeded(format!("threshold {x} out of table range"))
                })?;
                if m > t.upper() {
                    return Err(Error::BudgetExceeded(format!(
                        "threshold {m} beyond table upper {}",
                        t.upper()
                    )));
                }
                Ok(t.partial_sum(m))
            }
            CountingBackend::Dfs { counter, bound, .. } => {
                if x > bound {
                    return Err(Error::BudgetExceeded(format!(
                        "threshold {x} beyond prepared bound {bound}"
                    )));
                }
                Ok(counter.count_leq(x)?.value)
            }
        }
    }

    pub fn count_leq_f64(&self, x: f64) -> Result<f64> {
        if x < 0.0 {
            return Ok(0.0);
        }
        let xq = rational_from_f64(x)
            .ok_or_else(|| Error::InvalidArgument(format!("threshold {x} is not finite")))?;
        Ok(natural_to_f64(&self.count_leq(&xq)?))
    }
}
