//! numzeta: counting functions, density profiles, Fourier data and zeta
//! values of (b, d) numeration systems, emitted as CSV or JSON.

mod emit;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use emit::{Cell, Format, Table};
use num_complex::Complex64;
use numzeta::analytic;
use numzeta::counting;
use numzeta::density::PsiEstimator;
use numzeta::fourier;
use numzeta::moments;
use numzeta::scalar::{natural_to_f64, parse_decimal_rational, rational_from_f64};
use numzeta::system::{sigma_c, BaseKind, BaseSequence, DigitSet};
use numzeta::zeta::{self, GeometricZeta, ZetaMethod};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "numzeta", version, about = "numeration-system counting, density and zeta computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SystemArgs {
    /// Growth ratio beta (required for geometric bases, implied otherwise)
    #[arg(long)]
    beta: Option<f64>,
    /// Digit set, e.g. 0,1,5 (decimals allowed)
    #[arg(long, default_value = "0,1")]
    digits: String,
    /// Base kind: geometric | fibonacci | lucas | tau-floor:<tau> |
    /// central-binomial | table:<path>
    #[arg(long, default_value = "geometric")]
    base: String,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct PrecisionArgs {
    /// Target tolerance for analytic quantities
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Estimator depth n for density-type quantities
    #[arg(long, default_value_t = 12)]
    depth: u32,
    /// Grid resolution of density profiles
    #[arg(long, default_value_t = 512)]
    profile_points: usize,
    /// Guard on the size of exact enumerations and tables
    #[arg(long, default_value_t = 4_000_000)]
    max_count: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Auto,
    Direct,
    Geometric,
    Perturbed,
}

#[derive(Subcommand)]
enum Command {
    /// Representation counts r(n) and counting-function queries S(x)
    Count {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        precision: PrecisionArgs,
        /// Emit the exact table n, r(n) for n = 0..=N
        #[arg(long)]
        upto: Option<u64>,
        /// Emit a single counting-function value S(x)
        #[arg(long)]
        sum_to: Option<f64>,
    },
    /// Relative density profile over one period
    Density {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        precision: PrecisionArgs,
    },
    /// Fourier coefficients of the density function
    Fourier {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        precision: PrecisionArgs,
        /// Largest mode |k|
        #[arg(long, default_value_t = 8)]
        kmax: i64,
    },
    /// Maclaurin data: L coefficients, c coefficients, and the radius row
    Coeffs {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Highest degree
        #[arg(long, default_value_t = 16)]
        terms: usize,
        /// Emit the sigma/rho radius summary instead of the coefficient table
        #[arg(long)]
        radius: bool,
    },
    /// Zeta values, poles and special values
    Zeta {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        precision: PrecisionArgs,
        /// Evaluation point "re,im" (or just "re")
        #[arg(long, allow_hyphen_values = true)]
        s: Option<String>,
        /// Evaluation route
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        /// Direct-sum cutoff X
        #[arg(long, default_value_t = 1_000_000)]
        upto: u64,
        /// Shift parameter c of the geometric continuation
        #[arg(long)]
        c_shift: Option<u32>,
        /// Emit the pole grid instead of a value
        #[arg(long)]
        poles: bool,
        #[arg(long, default_value_t = 2)]
        jmax: u32,
        #[arg(long, default_value_t = 2)]
        kmax: i64,
        /// Emit the special value zeta(-n)
        #[arg(long)]
        special: Option<u32>,
    },
    /// Moment asymptotics and the partition reports
    Moments {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        precision: PrecisionArgs,
        /// Moment order k > 0
        #[arg(long, default_value_t = 1.0)]
        k: f64,
        /// Window offset x
        #[arg(long, default_value_t = 0.0)]
        x: f64,
        /// Depths n to tabulate, e.g. 8,10,12
        #[arg(long, default_value = "8,10,12")]
        depths: String,
        /// Emit the logarithmic-average table up to this n instead
        #[arg(long)]
        log_average: Option<u32>,
        /// Emit the Chow-Slattery report for fibonacci | lucas | tau-floor:<tau>
        #[arg(long)]
        chow_slattery: Option<String>,
        /// Largest depth for the report tables
        #[arg(long, default_value_t = 24)]
        n_max: u32,
    },
    /// Reproduction data for the two density panels
    Figure1 {
        #[command(flatten)]
        output: OutputArgs,
        /// Panel a: (3^k, {0,1,5}); panel b: (C(2k,k), {0,1,3})
        #[arg(long)]
        panel: char,
        /// Number of grid steps (grid is x_0 + k/500, k = 0..=points)
        #[arg(long, default_value_t = 1000)]
        points: usize,
    },
}

/// Marker attached to errors raised while interpreting arguments; these
/// exit with status 2 rather than 1.
#[derive(Debug)]
struct ConfigProblem;

impl std::fmt::Display for ConfigProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "invalid configuration")
    }
}

fn config<T>(r: Result<T>) -> Result<T> {
    r.map_err(|e| e.context(ConfigProblem))
}

fn parse_digits(text: &str) -> Result<DigitSet> {
    let values = text
        .split(',')
        .map(|part| {
            parse_decimal_rational(part).ok_or_else(|| anyhow!("bad digit value '{part}'"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DigitSet::new(&values)?)
}

fn parse_base(args: &SystemArgs) -> Result<BaseSequence> {
    let spec = args.base.as_str();
    let base = if spec == "geometric" {
        let beta = args
            .beta
            .ok_or_else(|| anyhow!("geometric base needs --beta"))?;
        BaseSequence::geometric(beta)?
    } else if spec == "fibonacci" {
        BaseSequence::fibonacci()
    } else if spec == "lucas" {
        BaseSequence::lucas()
    } else if spec == "central-binomial" {
        BaseSequence::central_binomial()
    } else if let Some(tau) = spec.strip_prefix("tau-floor:") {
        let tau = parse_decimal_rational(tau).ok_or_else(|| anyhow!("bad tau '{tau}'"))?;
        BaseSequence::tau_floor_exact(tau)?
    } else if let Some(path) = spec.strip_prefix("table:") {
        BaseSequence::from_table_file(std::path::Path::new(path))?
    } else {
        bail!("unknown base kind '{spec}'");
    };
    if let Some(beta) = args.beta {
        if !base.is_geometric() && (beta - base.beta()).abs() > 1e-9 {
            bail!(
                "--beta {beta} conflicts with the declared ratio {} of base {}",
                base.beta(),
                base.describe()
            );
        }
    }
    Ok(base)
}

fn parse_complex(text: &str) -> Result<Complex64> {
    let mut parts = text.splitn(2, ',');
    let re: f64 = parts
        .next()
        .unwrap()
        .trim()
        .parse()
        .with_context(|| format!("bad real part in '{text}'"))?;
    let im: f64 = match parts.next() {
        Some(p) => p
            .trim()
            .parse()
            .with_context(|| format!("bad imaginary part in '{text}'"))?,
        None => 0.0,
    };
    Ok(Complex64::new(re, im))
}

fn parse_depths(text: &str) -> Result<Vec<u32>> {
    text.split(',')
        .map(|p| p.trim().parse::<u32>().with_context(|| format!("bad depth '{p}'")))
        .collect()
}

/// Configuration errors exit 2, computation failures exit 1.
fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<ConfigProblem>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Count {
            system,
            output,
            precision,
            upto,
            sum_to,
        } => {
            let digits = config(parse_digits(&system.digits))?;
            let base = config(parse_base(&system))?;
            match (upto, sum_to) {
                (Some(upper), None) => {
                    if upper > precision.max_count {
                        return config(Err(anyhow!(
                            "--upto {upper} exceeds --max-count {}",
                            precision.max_count
                        )));
                    }
                    let table = counting::rep_counts_integer(&base, &digits, upper)?;
                    let mut t = Table::new("rep_counts", &["n", "r"]);
                    for n in 0..=upper {
                        t.push(vec![Cell::Int(n as i64), Cell::Str(table.count(n).to_string())]);
                    }
                    emit::emit(&t, output.format.into(), output.out.as_deref())?;
                }
                (None, Some(x)) => {
                    let result = counting::counting_fn(&base, &digits, x)?;
                    let mut t = Table::new("counting_fn", &["x", "s", "nodes"]);
                    t.push(vec![
                        Cell::Float(x),
                        Cell::Str(result.value.to_string()),
                        Cell::Int(result.nodes_explored as i64),
                    ]);
                    emit::emit(&t, output.format.into(), output.out.as_deref())?;
                }
                _ => return config(Err(anyhow!("count needs exactly one of --upto or --sum-to"))),
            }
        }
        Command::Density {
            system,
            output,
            precision,
        } => {
            let digits = config(parse_digits(&system.digits))?;
            let base = config(parse_base(&system))?;
            let est = PsiEstimator::new(&base, &digits)?;
            let profile = est.profile(precision.profile_points, precision.depth)?;
            let mut t = Table::new("density_profile", &["x", "psi", "depth", "error_bound"]);
            for e in &profile.estimates {
                t.push(vec![
                    Cell::Float(e.x),
                    Cell::Float(e.value),
                    Cell::Int(e.depth as i64),
                    Cell::Float(e.error_bound),
                ]);
            }
            emit::emit(&t, output.format.into(), output.out.as_deref())?;
        }
        Command::Fourier {
            system,
            output,
            precision,
            kmax,
        } => {
            let digits = config(parse_digits(&system.digits))?;
            let base = config(parse_base(&system))?;
            if !base.is_geometric() {
                bail!("fourier coefficients are defined for geometric bases");
            }
            let table = fourier::psi_hat_table(base.beta(), &digits, kmax, precision.tol)?;
            let mut t = Table::new("fourier_table", &["k", "re", "im", "est_error"]);
            for (k, v) in &table.entries {
                t.push(vec![
                    Cell::Int(*k),
                    Cell::Float(v.re),
                    Cell::Float(v.im),
                    Cell::Float(table.est_errors[k]),
                ]);
            }
            emit::emit(&t, output.format.into(), output.out.as_deref())?;
        }
        Command::Coeffs {
            system,
            output,
            terms,
            radius,
        } => {
            let digits = config(parse_digits(&system.digits))?;
            let base = config(parse_base(&system))?;
            if radius {
                let info = analytic::radius(base.beta(), &digits, terms.max(20))?;
                let mut t = Table::new("radius", &["sigma_est", "rho", "safe_shift"]);
                t.push(vec![
                    Cell::Float(info.sigma_est),
                    Cell::Int(info.rho as i64),
                    Cell::Int(info.safe_shift as i64),
                ]);
                emit::emit(&t, output.format.into(), output.out.as_deref())?;
            } else {
                let l = analytic::l_coeffs(&digits, terms);
                let c = analytic::c_coeffs(base.beta(), &digits, terms)?;
                let mut t = Table::new("coeffs", &["ell", "l_coeff", "c_coeff"]);
                for ell in 0..=terms {
                    t.push(vec![
                        Cell::Int(ell as i64),
                        Cell::Float(l.coeff(ell)),
                        Cell::Float(c.coeff(ell)),
                    ]);
                }
                emit::emit(&t, output.format.into(), output.out.as_deref())?;
            }
        }
        Command::Zeta {
            system,
            output,
            precision,
            s,
            method,
            upto,
            c_shift,
            poles,
            jmax,
            kmax,
            special,
        } => {
            let digits = config(parse_digits(&system.digits))?;
            let base = config(parse_base(&system))?;
            if poles {
                let gz = GeometricZeta::new(base.beta(), &digits, precision.tol)?;
                let grid = gz.pole_grid(jmax, kmax)?;
                let mut t = Table::new(
                    "pole_grid",
                    &["j", "k", "loc_re", "loc_im", "res_re", "res_im", "possibly_removable"],
                );
                for p in grid {
                    t.push(vec![
                        Cell::Int(p.j as i64),
                        Cell::Int(p.k),
                        Cell::Float(p.location.re),
                        Cell::Float(p.location.im),
                        Cell::Float(p.residue.re),
                        Cell::Float(p.residue.im),
                        Cell::Int(p.possibly_removable as i64),
                    ]);
                }
                emit::emit(&t, output.format.into(), output.out.as_deref())?;
                return Ok(());
            }
            if let Some(n) = special {
                let gz = GeometricZeta::new(base.beta(), &digits, precision.tol)?;
                let value = gz.special_value(n)?;
                let mut t = Table::new("special_value", &["n", "value"]);
                t.push(vec![Cell::Int(n as i64), Cell::Float(value)]);
                emit::emit(&t, output.format.into(), output.out.as_deref())?;
                return Ok(());
            }
            let s = config(parse_complex(&s.ok_or_else(|| anyhow!("zeta needs --s (or --poles / --special)"))?))?;
            let sc = sigma_c(base.beta(), &digits);
            let eval = match method {
                MethodArg::Direct => zeta::zeta_direct(&base, &digits, s, upto)?,
                MethodArg::Geometric => {
                    zeta::zeta_continued_geometric(base.beta(), &digits, s, c_shift, precision.tol)?
                }
                MethodArg::Perturbed => {
                    zeta::zeta_continued_perturbed(&base, &digits, s, precision.tol)?
                }
                MethodArg::Auto => {
                    if base.is_integer_geometric() {
                        zeta::zeta_continued_geometric(base.beta(), &digits, s, c_shift, precision.tol)?
                    } else if s.re >= sc + 0.2 {
                        zeta::zeta_direct(&base, &digits, s, upto)?
                    } else {
                        zeta::zeta_continued_perturbed(&base, &digits, s, precision.tol)?
                    }
                }
            };
            let mut t = Table::new(
                "zeta_value",
                &["s_re", "s_im", "value_re", "value_im", "method", "est_error"],
            );
            t.push(vec![
                Cell::Float(eval.s.re),
                Cell::Float(eval.s.im),
                Cell::Float(eval.value.re),
                Cell::Float(eval.value.im),
                Cell::Str(
                    match eval.method {
                        ZetaMethod::Direct => "direct",
                        ZetaMethod::ContinuedGeometric => "continued_geometric",
                        ZetaMethod::ContinuedPerturbed => "continued_perturbed",
                    }
                    .to_string(),
                ),
                Cell::Float(eval.est_error),
            ]);
            emit::emit(&t, output.format.into(), output.out.as_deref())?;
        }
        Command::Moments {
            system,
            output,
            precision,
            k,
            x,
            depths,
            log_average,
            chow_slattery,
            n_max,
        } => {
            if let Some(kind_text) = chow_slattery {
                let kind = if kind_text == "fibonacci" {
                    BaseKind::Fibonacci
                } else if kind_text == "lucas" {
                    BaseKind::Lucas
                } else if let Some(tau) = kind_text.strip_prefix("tau-floor:") {
                    let tau = parse_decimal_rational(tau).ok_or_else(|| anyhow!("bad tau"))?;
                    BaseKind::TauFloor { tau }
                } else {
                    return config(Err(anyhow!("unknown chow-slattery kind '{kind_text}'")));
                };
                let report = moments::chow_slattery_report(&kind, n_max)?;
                let mut t = Table::new(
                    "chow_slattery",
                    &["base", "section", "n_or_k", "lhs", "rhs", "gap"],
                );
                t.push(vec![
                    Cell::Str(report.base.clone()),
                    Cell::Str("sigma_c".into()),
                    Cell::Int(0),
                    Cell::Float(report.sigma_c),
                    Cell::Float(report.log_avg_constant),
                    Cell::Float(report.psi_mean),
                ]);
                for row in &report.log_average_rows {
                    t.push(vec![
                        Cell::Str(report.base.clone()),
                        Cell::Str("log_average".into()),
                        Cell::Int(row.n as i64),
                        Cell::Float(row.lhs),
                        Cell::Float(row.rhs),
                        Cell::Float(row.gap),
                    ]);
                }
                for rep in &report.moment_reports {
                    for (i, &n) in rep.depths.iter().enumerate() {
                        t.push(vec![
                            Cell::Str(report.base.clone()),
                            Cell::Str(format!("moment_k{}", rep.k)),
                            Cell::Int(n as i64),
                            Cell::Float(rep.lhs_values[i]),
                            Cell::Float(rep.rhs_value),
                            Cell::Float(rep.relative_gaps[i]),
                        ]);
                    }
                }
                emit::emit(&t, output.format.into(), output.out.as_deref())?;
                return Ok(());
            }
            let digits = config(parse_digits(&system.digits))?;
            let base = config(parse_base(&system))?;
            let depths = config(parse_depths(&depths))?;
            let top = *depths.iter().max().unwrap_or(&12).max(&log_average.unwrap_or(0));
            let upper = (base.value_f64(top as usize) * base.beta().powf(x.max(0.0))).ceil() as u64 + 2;
            if upper > precision.max_count {
                bail!("moment table would need {upper} entries (> --max-count)");
            }
            let ctx = moments::MomentContext::new(
                &base,
                &digits,
                upper,
                precision.profile_points.max(256),
                precision.depth,
            )?;
            if let Some(n_top) = log_average {
                let mut t = Table::new("log_average", &["n", "lhs", "rhs", "gap"]);
                for n in 2..=n_top {
                    let row = ctx.log_average(x, n)?;
                    t.push(vec![
                        Cell::Int(row.n as i64),
                        Cell::Float(row.lhs),
                        Cell::Float(row.rhs),
                        Cell::Float(row.gap),
                    ]);
                }
                emit::emit(&t, output.format.into(), output.out.as_deref())?;
            } else {
                let rep = ctx.moment_report(k, x, &depths)?;
                let mut t = Table::new("moment_report", &["n", "lhs", "rhs", "relative_gap"]);
                for (i, &n) in rep.depths.iter().enumerate() {
                    t.push(vec![
                        Cell::Int(n as i64),
                        Cell::Float(rep.lhs_values[i]),
                        Cell::Float(rep.rhs_value),
                        Cell::Float(rep.relative_gaps[i]),
                    ]);
                }
                emit::emit(&t, output.format.into(), output.out.as_deref())?;
            }
        }
        Command::Figure1 { output, panel, points } => {
            let t = figure1_table(panel, points)?;
            emit::emit(&t, output.format.into(), output.out.as_deref())?;
        }
    }
    Ok(())
}

/// Panel (a): x = 8 + k/500 with values 3^{-x} S_{3,{0,1,5}}(3^x).
/// Panel (b): x = 6 + k/500 with values 3^{-x} S_{b,{0,1,3}}(3^{x - floor x} b_{floor x})
/// over the central binomial base (ratio limit beta = 4).
fn figure1_table(panel: char, points: usize) -> Result<Table> {
    let mut t = Table::new(&format!("figure1_panel_{panel}"), &["x", "value"]);
    match panel {
        'a' => {
            let digits = DigitSet::from_integers(&[0, 1, 5])?;
            let counter = counting::GeometricCounter::new(3, &digits)?;
            for k in 0..=points {
                let x = 8.0 + k as f64 / 500.0;
                let arg = rational_from_f64(3.0f64.powf(x))
                    .ok_or_else(|| anyhow!("overflow at x = {x}"))?;
                let s = natural_to_f64(&counter.count_leq(&arg));
                t.push(vec![Cell::Float(x), Cell::Float(s * 3.0f64.powf(-x))]);
            }
        }
        'b' => {
            let digits = DigitSet::from_integers(&[0, 1, 3])?;
            let base = BaseSequence::central_binomial();
            let est = PsiEstimator::new(&base, &digits)?;
            for k in 0..=points {
                let x = 6.0 + k as f64 / 500.0;
                let n = x.floor() as u32;
                let frac = x - x.floor();
                // |d|^{-x} S(3^{x - floor x} b_{floor x}) with |d| = 3
                let b_n = base
                    .value_exact(n as usize)
                    .ok_or_else(|| anyhow!("no base value at {n}"))?;
                let arg = b_n
                    * rational_from_f64(3.0f64.powf(frac))
                        .ok_or_else(|| anyhow!("overflow at x = {x}"))?;
                let s = natural_to_f64(&est.count_leq(&arg)?);
                t.push(vec![Cell::Float(x), Cell::Float(s * 3.0f64.powf(-x))]);
            }
        }
        other => return config(Err(anyhow!("panel must be 'a' or 'b', got '{other}'"))),
    }
    Ok(t)
}
