//! Arbitrary-moment asymptotics of the representation function and the
//! partition reports for the Fibonacci, Lucas and floor-power bases.

use crate::counting::RepCountTable;
use crate::density::{DensityProfile, PsiEstimator};
use crate::error::{Error, Result};
use crate::scalar::{rational_from_f64, rational_to_f64};

use crate::system::{sigma_c, BaseKind, BaseSequence, DigitSet};

/// Moment comparison across depths: the exact normalized sums against the
/// density-functional limit.
#[derive(Debug, Clone)]
pub struct MomentReport {
    pub k: f64,
    pub x: f64,
    pub depths: Vec<u32>,
    pub lhs_values: Vec<f64>,
    pub rhs_value: f64,
    pub relative_gaps: Vec<f64>,
    /// Gaps non-increasing over the final three depths. A convergence
    /// signature, not a theorem; reported softly.
    pub converging: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct LogAverageRow {
    pub n: u32,
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
}

/// Shared exact table + density profile for one system's moment work.
pub struct MomentContext {
    base: BaseSequence,
    digits: DigitSet,
    sigma_c: f64,
    table: RepCountTable,
    profile: DensityProfile,
}

impl MomentContext {
    pub fn new(
        base: &BaseSequence,
        digits: &DigitSet,
        table_upper: u64,
        profile_points: usize,
        profile_depth: u32,
    ) -> Result<Self> {
        let table = RepCountTable::build(base, digits, table_upper)?;
        let est = PsiEstimator::new(base, digits)?;
        let profile = est.profile(profile_points, profile_depth)?;
        Ok(MomentContext {
            base: base.clone(),
            digits: digits.clone(),
            sigma_c: sigma_c(base.beta(), digits),
            table,
            profile,
        })
    }

    pub fn profile(&self) -> &DensityProfile {
        &self.profile
    }

    pub fn table(&self) -> &RepCountTable {
        &self.table
    }

    fn threshold(&self, x: f64, n: u32) -> Result<u64> {
        let b_n = self
            .base
            .value_exact(n as usize)
            .ok_or_else(|| Error::InvalidBase(format!("no base value at {n}")))?;
        let t = rational_to_f64(&(b_n * rational_from_f64(self.base.beta().powf(x)).unwrap()));
        let t = t.floor() as u64;
        if t > self.table.upper() {
            return Err(Error::BudgetExceeded(format!(
                "moment threshold {t} beyond table upper {}",
                self.table.upper()
            )));
        }
        Ok(t)
    }

    /// Exact normalized moment
    /// |d|^{log_beta b_n - n} (beta^x b_n)^{-k} sum_{0 < lambda <= beta^x b_n}
    ///     r(lambda) lambda^{k - sigma_c}.
    pub fn moment_lhs(&self, k: f64, x: f64, n: u32) -> Result<f64> {
        if k <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "moment_lhs covers the k > 0 branch, got {k}"
            )));
        }
        let cut = self.threshold(x, n)?;
        let card = self.digits.cardinality() as f64;
        let b_n = self.base.value_f64(n as usize);
        let mut sum = 0.0f64;
        for lambda in 1..=cut {
            let r = self.table.count_f64(lambda);
            if r != 0.0 {
                sum += r * ((k - self.sigma_c) * (lambda as f64).ln()).exp();
            }
        }
        let norm = (card.ln() * (b_n.ln() / self.base.beta().ln() - n as f64)).exp()
            * (self.base.beta().powf(x) * b_n).powf(-k);
        Ok(norm * sum)
    }

    /// Density-side limit
    /// Psi(x) - log(beta^k / |d|) / (beta^k - 1) int_0^1 Psi(x + w) beta^{kw} dw,
    /// with Psi interpolated linearly from the profile (periodic extension)
    /// and the exponential weight integrated exactly over each cell.
    pub fn moment_rhs(&self, k: f64, x: f64) -> Result<f64> {
        if self.profile.grid.len() < 256 {
            return Err(Error::ProfileTooCoarse {
                needed: 256,
                got: self.profile.grid.len(),
            });
        }
        if k <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "moment_rhs covers the k > 0 branch, got {k}"
            )));
        }
        let beta = self.base.beta();
        let card = self.digits.cardinality() as f64;
        let integral = self.weighted_period_integral(k, x);
        let coefficient = (k * beta.ln() - card.ln()) / (beta.powf(k) - 1.0);
        Ok(self.profile.interpolate(x) - coefficient * integral)
    }

    /// int_0^1 Psi(x + w) beta^{kw} dw by cells: Psi piecewise linear,
    /// beta^{kw} exact (4x the profile resolution to absorb breakpoint
    /// misalignment between the shifted grid and the cells).
    fn weighted_period_integral(&self, k: f64, x: f64) -> f64 {
        let c = k * self.base.beta().ln();
        let cells = 4 * self.profile.grid.len();
        let h = 1.0 / cells as f64;
        let mut acc = 0.0f64;
        for j in 0..cells {
            let a = j as f64 * h;
            let b = a + h;
            let fa = self.profile.interpolate(x + a);
            let fb = self.profile.interpolate(x + b);
            let slope = (fb - fa) / h;
            // int_a^b (fa + slope (u - a)) e^{cu} du
            let ea = (c * a).exp();
            let eb = (c * b).exp();
            acc += fa * (eb - ea) / c + slope * ((eb * (b - a)) / c - (eb - ea) / (c * c));
        }
        acc
    }

    pub fn moment_report(&self, k: f64, x: f64, depths: &[u32]) -> Result<MomentReport> {
        let rhs_value = self.moment_rhs(k, x)?;
        let mut lhs_values = Vec::with_capacity(depths.len());
        let mut relative_gaps = Vec::with_capacity(depths.len());
        for &n in depths {
            let lhs = self.moment_lhs(k, x, n)?;
            lhs_values.push(lhs);
            relative_gaps.push((lhs - rhs_value).abs() / rhs_value.abs().max(1e-300));
        }
        let tail = relative_gaps.len().saturating_sub(3);
        let converging = relative_gaps[tail..]
            .windows(2)
            .all(|w| w[1] <= w[0] * 1.25 + 1e-9);
        Ok(MomentReport {
            k,
            x,
            depths: depths.to_vec(),
            lhs_values,
            rhs_value,
            relative_gaps,
            converging,
        })
    }

    /// The k = 0 logarithmic average: exact
    /// LHS = (1/log|d|) sum_{0 < lambda <= beta^x b_n} r(lambda) lambda^{-sigma_c}
    /// against the leading term
    /// RHS = sum_{0 <= h < n} |d|^{h - log_beta b_h} int_0^1 Psi(u) du.
    /// The O(1) term of the asymptotic is left to the caller's inspection.
    pub fn log_average(&self, x: f64, n: u32) -> Result<LogAverageRow> {
        let cut = self.threshold(x, n)?;
        let card = self.digits.cardinality() as f64;
        let mut sum = 0.0f64;
        for lambda in 1..=cut {
            let r = self.table.count_f64(lambda);
            if r != 0.0 {
                sum += r * (-self.sigma_c * (lambda as f64).ln()).exp();
            }
        }
        let lhs = sum / card.ln();
        let psi_mean = self.profile.mean();
        let mut rhs = 0.0f64;
        for h in 0..n {
            let b_h = self.base.value_f64(h as usize);
            rhs += (card.ln() * (h as f64 - b_h.ln() / self.base.beta().ln())).exp();
        }
        rhs *= psi_mean;
        Ok(LogAverageRow {
            n,
            lhs,
            rhs,
            gap: lhs - rhs,
        })
    }
}

/// One-shot wrappers around a fresh context.
pub fn moment_lhs(
    base: &BaseSequence,
    digits: &DigitSet,
    k: f64,
    x: f64,
    n: u32,
    table_upper: u64,
) -> Result<f64> {
    MomentContext::new(base, digits, table_upper, 256, 12)?.moment_lhs(k, x, n)
}

pub fn moment_rhs(base: &BaseSequence, digits: &DigitSet, k: f64, x: f64) -> Result<f64> {
    MomentContext::new(base, digits, 4, 512, 12)?.moment_rhs(k, x)
}

/// Report for the partition problems over a named base with digits {0, 1}:
/// the abscissa, the logarithmic-average constant, the gap table of the
/// logarithmic average, and k = 1, 2 moment tables.
#[derive(Debug, Clone)]
pub struct ChowSlatteryReport {
    pub base: String,
    pub sigma_c: f64,
    pub alpha: f64,
    pub psi_mean: f64,
    /// log_beta|d| * alpha^{-log_beta|d|} * int_0^1 Psi.
    pub log_avg_constant: f64,
    pub log_average_rows: Vec<LogAverageRow>,
    pub moment_reports: Vec<MomentReport>,
}

pub fn chow_slattery_report(kind: &BaseKind, n_max: u32) -> Result<ChowSlatteryReport> {
    let base = match kind {
        BaseKind::Fibonacci => BaseSequence::fibonacci(),
        BaseKind::Lucas => BaseSequence::lucas(),
        BaseKind::TauFloor { tau } => BaseSequence::tau_floor_exact(tau.clone())?,
        other => {
            return Err(Error::InvalidArgument(format!(
                "chow-slattery report covers fibonacci / lucas / tau_floor, got {other:?}"
            )))
        }
    };
    let digits = DigitSet::from_integers(&[0, 1])?;
    let sc = sigma_c(base.beta(), &digits);
    let alpha = base.alpha().ok_or(Error::MissingBaseParameter("alpha"))?;
    let upper = rational_to_f64(&base.value_exact(n_max as usize).ok_or_else(|| {
        Error::InvalidBase(format!("base has no value at {n_max}"))
    })?)
    .ceil() as u64
        + 2;
    if upper > 2_000_000 {
        return Err(Error::BudgetExceeded(format!(
            "chow-slattery table would need {upper} entries"
        )));
    }
    let ctx = MomentContext::new(&base, &digits, upper, 512, 16.min(n_max))?;
    let psi_mean = ctx.profile.mean();
    let log_avg_constant = sc * alpha.powf(-sc) * psi_mean;

    let mut log_average_rows = Vec::new();
    let mut n = 5u32.min(n_max);
    while n <= n_max {
        log_average_rows.push(ctx.log_average(0.0, n)?);
        n += 1;
    }
    let depths: Vec<u32> = (8..=n_max.min(20)).step_by(4).collect();
    let moment_reports = vec![
        ctx.moment_report(1.0, 0.0, &depths)?,
        ctx.moment_report(2.0, 0.0, &depths)?,
    ];
    Ok(ChowSlatteryReport {
        base: base.describe(),
        sigma_c: sc,
        alpha,
        psi_mean,
        log_avg_constant,
        log_average_rows,
        moment_reports,
    })
}
