//! Base sequences b = (b_k) with b_{k+1}/b_k -> beta.

use crate::error::{Error, Result};
use crate::scalar::{
    parse_decimal_rational, rational_floor, rational_from_f64, rational_pow, rational_to_f64,
    Rational,
};
use num_traits::{One, Signed, Zero};

/// Golden ratio.
pub const PHI: f64 = 1.618033988749894848204586834365638118;

/// How many terms of a non-geometric base are materialized up front.
const MAX_INDEX: usize = 128;

#[derive(Debug, Clone, PartialEq)]
pub enum BaseKind {
    /// b_k = beta^k.
    Geometric,
    /// b_k = F_{k+2} = 1, 2, 3, 5, 8, ...
    Fibonacci,
    /// b_k = L_{k+1} = 1, 3, 4, 7, 11, ...
    Lucas,
    /// b_k = floor(tau^{k+1}) for a fixed tau in (1, 2).
    TauFloor { tau: Rational },
    /// b_k = C(2k, k) = 1, 2, 6, 20, 70, ...
    CentralBinomial,
    /// Values supplied by a table file.
    Table,
}

/// Evaluator for a base sequence, with its declared limit ratio `beta`,
/// scale `alpha` (b_k ~ alpha beta^k, when known) and perturbation exponent
/// `gamma` (b_k = alpha beta^k + O(beta^{(1-gamma)k}), when known).
///
/// Immutable after construction; all terms of a non-geometric base are
/// computed exactly at construction time.
#[derive(Debug, Clone)]
pub struct BaseSequence {
    kind: BaseKind,
    beta: f64,
    beta_exact: Option<Rational>,
    alpha: Option<f64>,
    gamma: Option<f64>,
    values: Option<Vec<Rational>>,
    values_f64: Vec<f64>,
    integer_valued: bool,
}

impl BaseSequence {
    /// Geometric base b_k = beta^k. The given double is interpreted exactly,
    /// so an integral beta yields an exact integer-valued base.
    pub fn geometric(beta: f64) -> Result<Self> {
        if !(beta > 1.0) || !beta.is_finite() {
            return Err(Error::InvalidBase(format!(
                "geometric base needs beta > 1, got {beta}"
            )));
        }
        let beta_exact = rational_from_f64(beta);
        let integer_valued = beta.fract() == 0.0;
        Ok(BaseSequence {
            kind: BaseKind::Geometric,
            beta,
            beta_exact,
            alpha: Some(1.0),
            gamma: Some(1.0),
            values: None,
            values_f64: Vec::new(),
            integer_valued,
        })
    }

    /// Fibonacci base (F_{k+2})_{k>=0} = (1, 2, 3, 5, 8, ...).
    ///
    /// beta = phi, alpha = phi^2 / sqrt(5), and the error term F_{k+2} -
    /// alpha phi^k = O(phi^{-k}) decays, so gamma is declared as 1.
    pub fn fibonacci() -> Self {
        let mut values = Vec::with_capacity(MAX_INDEX);
        let (mut a, mut b) = (Rational::one(), Rational::from_integer(2.into()));
        for _ in 0..MAX_INDEX {
            values.push(a.clone());
            let next = &a + &b;
            a = b;
            b = next;
        }
        let alpha = PHI * PHI / 5.0_f64.sqrt();
        Self::from_exact_values(BaseKind::Fibonacci, values, PHI, Some(alpha), Some(1.0))
    }

    /// Lucas base (L_{k+1})_{k>=0} = (1, 3, 4, 7, 11, ...).
    ///
    /// alpha is derived numerically from b_40 / phi^40 rather than hard-coded.
    pub fn lucas() -> Self {
        let mut values = Vec::with_capacity(MAX_INDEX);
        let (mut a, mut b) = (Rational::one(), Rational::from_integer(3.into()));
        for _ in 0..MAX_INDEX {
            values.push(a.clone());
            let next = &a + &b;
            a = b;
            b = next;
        }
        let alpha = rational_to_f64(&values[40]) / PHI.powi(40);
        Self::from_exact_values(BaseKind::Lucas, values, PHI, Some(alpha), Some(1.0))
    }

    /// Floor-power base (floor(tau^m))_{m>=1}, indexed as b_k = floor(tau^{k+1}).
    ///
    /// The double is interpreted exactly; beta = tau and alpha = tau since
    /// b_k = tau * tau^k + O(1).
    pub fn tau_floor(tau: f64) -> Result<Self> {
        let tau_exact = rational_from_f64(tau)
            .ok_or_else(|| Error::InvalidBase(format!("tau must be finite, got {tau}")))?;
        Self::tau_floor_exact(tau_exact)
    }

    /// Floor-power base from an exact rational tau in (1, 2).
    pub fn tau_floor_exact(tau: Rational) -> Result<Self> {
        if tau <= Rational::one() || tau >= Rational::from_integer(2.into()) {
            return Err(Error::InvalidBase(format!(
                "tau_floor needs tau in (1,2), got {tau}"
            )));
        }
        let beta = rational_to_f64(&tau);
        // values[k] = floor(tau^{k+1}), i.e. the paper's (floor(tau^m))_{m>=1}
        let mut values = Vec::with_capacity(MAX_INDEX);
        let mut power = Rational::one();
        for _ in 0..MAX_INDEX {
            power *= &tau;
            values.push(Rational::from_integer(rational_floor(&power)));
        }
        if values[0].is_zero() {
            return Err(Error::InvalidBase(
                "tau_floor base starts at floor(tau) = 0".into(),
            ));
        }
        Ok(Self::from_exact_values(
            BaseKind::TauFloor { tau },
            values,
            beta,
            Some(beta),
            Some(1.0),
        ))
    }

    /// Central binomial base (C(2k, k))_{k>=0} = (1, 2, 6, 20, ...).
    ///
    /// Ratios converge to beta = 4, but C(2k,k) ~ 4^k / sqrt(pi k) has no
    /// positive limit of b_k / 4^k, so alpha (and gamma) stay undeclared.
    pub fn central_binomial() -> Self {
        let mut values = Vec::with_capacity(MAX_INDEX);
        let mut v = Rational::one();
        for k in 0..MAX_INDEX {
            values.push(v.clone());
            // C(2k+2, k+1) = C(2k, k) * (2k+1)(2k+2) / (k+1)^2
            let k = k as i64;
            v *= Rational::new(((2 * k + 1) * (2 * k + 2)).into(), ((k + 1) * (k + 1)).into());
        }
        Self::from_exact_values(BaseKind::CentralBinomial, values, 4.0, None, None)
    }

    /// Base from a table file: a `beta=<value>` header line (required),
    /// optional `gamma=<value>` and `alpha=<value>` lines, then one positive
    /// integer or decimal per line, index 0 first.
    pub fn from_table_str(contents: &str) -> Result<Self> {
        let mut beta: Option<Rational> = None;
        let mut alpha: Option<f64> = None;
        let mut gamma: Option<f64> = None;
        let mut values: Vec<Rational> = Vec::new();
        for (lineno, raw) in contents.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("beta=") {
                beta = Some(parse_decimal_rational(rest).ok_or_else(|| {
                    Error::TableFile(format!("line {}: bad beta value '{rest}'", lineno + 1))
                })?);
            } else if let Some(rest) = line.strip_prefix("gamma=") {
                gamma = Some(rest.trim().parse().map_err(|_| {
                    Error::TableFile(format!("line {}: bad gamma value '{rest}'", lineno + 1))
                })?);
            } else if let Some(rest) = line.strip_prefix("alpha=") {
                alpha = Some(rest.trim().parse().map_err(|_| {
                    Error::TableFile(format!("line {}: bad alpha value '{rest}'", lineno + 1))
                })?);
            } else {
                let v = parse_decimal_rational(line).ok_or_else(|| {
                    Error::TableFile(format!("line {}: bad value '{line}'", lineno + 1))
                })?;
                if !v.is_positive() {
                    return Err(Error::TableFile(format!(
                        "line {}: base values must be positive",
                        lineno + 1
                    )));
                }
                values.push(v);
            }
        }
        let beta = beta.ok_or_else(|| Error::TableFile("missing 'beta=' header".into()))?;
        if values.len() < 2 {
            return Err(Error::TableFile("need at least two base values".into()));
        }
        let beta_f = rational_to_f64(&beta);
        if !(beta_f > 1.0) {
            return Err(Error::TableFile(format!("beta must exceed 1, got {beta}")));
        }
        let mut seq = Self::from_exact_values(BaseKind::Table, values, beta_f, alpha, gamma);
        seq.beta_exact = Some(beta);
        seq.ratio_convergence_probe()?;
        Ok(seq)
    }

    pub fn from_table_file(path: &std::path::Path) -> Result<Self> {
        let contents = std::fs::read_to_string(path)
            .map_err(|e| Error::TableFile(format!("{}: {e}", path.display())))?;
        Self::from_table_str(&contents)
    }

    fn from_exact_values(
        kind: BaseKind,
        values: Vec<Rational>,
        beta: f64,
        alpha: Option<f64>,
        gamma: Option<f64>,
    ) -> Self {
        let values_f64 = values.iter().map(rational_to_f64).collect();
        let integer_valued = values.iter().all(|v| v.is_integer());
        BaseSequence {
            kind,
            beta,
            beta_exact: rational_from_f64(beta),
            alpha,
            gamma,
            values: Some(values),
            values_f64,
            integer_valued,
        }
    }

    pub fn kind(&self) -> &BaseKind {
        &self.kind
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Exact rational beta when available (always, except on request for a
    /// base whose beta was never given exactly).
    pub fn beta_exact(&self) -> Option<&Rational> {
        self.beta_exact.as_ref()
    }

    pub fn alpha(&self) -> Option<f64> {
        self.alpha
    }

    pub fn gamma(&self) -> Option<f64> {
        self.gamma
    }

    pub fn is_geometric(&self) -> bool {
        matches!(self.kind, BaseKind::Geometric)
    }

    /// `true` when beta is an integer >= 2 and the base is geometric.
    pub fn is_integer_geometric(&self) -> bool {
        self.is_geometric() && self.beta.fract() == 0.0 && self.beta >= 2.0
    }

    pub fn integer_beta(&self) -> Option<u64> {
        if self.is_integer_geometric() {
            Some(self.beta as u64)
        } else {
            None
        }
    }

    /// All b_k integers?
    pub fn is_integer_valued(&self) -> bool {
        self.integer_valued
    }

    /// Largest index available, `None` for geometric bases (unbounded).
    pub fn max_index(&self) -> Option<usize> {
        self.values.as_ref().map(|v| v.len() - 1)
    }

    pub fn value_f64(&self, k: usize) -> f64 {
        match &self.values_f64[..] {
            [] => self.beta.powi(k as i32),
            vals => vals
                .get(k)
                .copied()
                .unwrap_or_else(|| vals[vals.len() - 1] * self.beta.powi((k + 1 - vals.len()) as i32)),
        }
    }

    /// Exact value when the base is exactly representable.
    pub fn value_exact(&self, k: usize) -> Option<Rational> {
        match &self.values {
            Some(vals) => vals.get(k).cloned(),
            None => self
                .beta_exact
                .as_ref()
                .map(|b| rational_pow(b, k as u32)),
        }
    }

    /// Largest k with b_k <= bound, probing exactly when possible.
    pub fn max_index_with_value_leq(&self, bound: &Rational) -> Option<usize> {
        if bound.is_negative() {
            return None;
        }
        let mut last = None;
        for k in 0..self.values.as_ref().map(|v| v.len()).unwrap_or(MAX_INDEX * 4) {
            match self.value_exact(k) {
                Some(v) => {
                    if &v <= bound {
                        last = Some(k);
                    } else if v > bound * Rational::from_integer(2.into()) {
                        break;
                    }
                }
                None => {
                    if self.value_f64(k) <= rational_to_f64(bound) {
                        last = Some(k);
                    } else {
                        break;
                    }
                }
            }
        }
        last
    }

    /// Numeric probe: |b_{k+1}/b_k - beta| must shrink (in windowed maxima)
    /// beyond a burn-in index. Floor-type bases jitter at fine scale, so the
    /// probe compares maxima over blocks of 8 indices and treats anything
    /// below 1e-12 as converged.
    pub fn ratio_convergence_probe(&self) -> Result<()> {
        let upto = self
            .max_index()
            .map(|m| m.min(60))
            .unwrap_or(60);
        if upto < 17 {
            return Err(Error::InvalidBase(
                "too few base values for the ratio convergence probe".into(),
            ));
        }
        let errs: Vec<f64> = (0..upto)
            .map(|k| (self.value_f64(k + 1) / self.value_f64(k) - self.beta).abs())
            .collect();
        let block_max: Vec<f64> = errs.chunks(8).map(|c| c.iter().cloned().fold(0.0, f64::max)).collect();
        let burn_in = 1;
        for w in block_max[burn_in..].windows(2) {
            let (prev, next) = (w[0], w[1]);
            if next > prev * (1.0 + 1e-9) && next > 1e-12 {
                return Err(Error::InvalidBase(format!(
                    "ratios do not converge to beta = {}: window error grew {prev:.3e} -> {next:.3e}",
                    self.beta
                )));
            }
        }
        Ok(())
    }

    /// Short textual form for reports.
    pub fn describe(&self) -> String {
        match &self.kind {
            BaseKind::Geometric => format!("geometric(beta={})", self.beta),
            BaseKind::Fibonacci => "fibonacci".into(),
            BaseKind::Lucas => "lucas".into(),
            BaseKind::TauFloor { tau } => format!("tau_floor({})", rational_to_f64(tau)),
            BaseKind::CentralBinomial => "central_binomial".into(),
            BaseKind::Table => format!("table(beta={})", self.beta),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_first_terms() {
        let b = BaseSequence::fibonacci();
        let got: Vec<f64> = (0..7).map(|k| b.value_f64(k)).collect();
        assert_eq!(got, vec![1.0, 2.0, 3.0, 5.0, 8.0, 13.0, 21.0]);
        assert!(b.is_integer_valued());
    }

    #[test]
    fn fibonacci_ratio_near_phi() {
        let b = BaseSequence::fibonacci();
        for k in 40..46 {
            let ratio = b.value_f64(k + 1) / b.value_f64(k);
            assert!((ratio - PHI).abs() < 1e-10, "k={k}: {ratio}");
        }
        b.ratio_convergence_probe().unwrap();
    }

    #[test]
    fn lucas_first_terms_and_alpha() {
        let b = BaseSequence::lucas();
        let got: Vec<f64> = (0..6).map(|k| b.value_f64(k)).collect();
        assert_eq!(got, vec![1.0, 3.0, 4.0, 7.0, 11.0, 18.0]);
        // L_{k+1} = phi^{k+1} + (-1/phi)^{k+1}, so b_k / phi^k -> phi
        assert!((b.alpha().unwrap() - PHI).abs() < 1e-8);
    }

    #[test]
    fn tau_floor_terms() {
        let b = BaseSequence::tau_floor(1.8).unwrap();
        let got: Vec<f64> = (0..5).map(|k| b.value_f64(k)).collect();
        assert_eq!(got, vec![1.0, 3.0, 5.0, 10.0, 18.0]);
        assert_eq!(b.alpha(), Some(1.8));
        b.ratio_convergence_probe().unwrap();
    }

    #[test]
    fn central_binomial_terms() {
        let b = BaseSequence::central_binomial();
        let got: Vec<f64> = (0..5).map(|k| b.value_f64(k)).collect();
        assert_eq!(got, vec![1.0, 2.0, 6.0, 20.0, 70.0]);
        assert_eq!(b.beta(), 4.0);
        assert_eq!(b.alpha(), None);
        b.ratio_convergence_probe().unwrap();
    }

    #[test]
    fn geometric_exact_powers() {
        let b = BaseSequence::geometric(3.0).unwrap();
        assert!(b.is_integer_geometric());
        assert_eq!(b.value_exact(5).unwrap(), Rational::from_integer(243.into()));
    }

    #[test]
    fn table_parsing_round_trip() {
        let mut text = String::from("beta=1.8\ngamma=1\nalpha=1.8\n");
        let probe = BaseSequence::tau_floor(1.8).unwrap();
        for k in 0..40 {
            text.push_str(&format!("{}\n", probe.value_f64(k)));
        }
        let b = BaseSequence::from_table_str(&text).unwrap();
        assert_eq!(b.value_f64(3), 10.0);
        assert_eq!(b.gamma(), Some(1.0));
        assert_eq!(b.beta(), 1.8);
    }

    #[test]
    fn table_missing_beta_is_rejected() {
        assert!(matches!(
            BaseSequence::from_table_str("1\n2\n4\n"),
            Err(Error::TableFile(_))
        ));
    }

    #[test]
    fn bad_geometric_beta_rejected() {
        assert!(BaseSequence::geometric(1.0).is_err());
        assert!(BaseSequence::geometric(0.5).is_err());
    }
}
