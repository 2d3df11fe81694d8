//! Density and Fourier cross-module checks: profile DFT against the
//! Gamma-quotient coefficients, Parseval, regularity refinement, the
//! sandwich report, the window bound, and perturbed-base agreement.

use numzeta::counting::window_bound_probe;
use numzeta::density::*;
use numzeta::fourier::*;
use numzeta::system::{kappa, mu, sigma_c};
use numzeta::{BaseSequence, DigitSet};

fn digits_015() -> DigitSet {
    DigitSet::from_integers(&[0, 1, 5]).unwrap()
}

#[test]
fn gamma_formula_matches_profile_dft() {
    let d = digits_015();
    let base = BaseSequence::geometric(3.0).unwrap();
    let est = PsiEstimator::new(&base, &d).unwrap();
    let profile = est.profile(512, 12).unwrap();
    let dft = profile_dft(&profile).unwrap();
    let table = psi_hat_table(3.0, &d, 8, 1e-10).unwrap();
    for k in -8..=8i64 {
        let a = table.get(k).unwrap();
        let b = signed_dft_mode(&dft, k);
        assert!((a - b).norm() < 1e-4, "k = {k}: {:.3e}", (a - b).norm());
    }
}

#[test]
fn parseval_probe_holds() {
    let d = digits_015();
    let base = BaseSequence::geometric(3.0).unwrap();
    let est = PsiEstimator::new(&base, &d).unwrap();
    let profile = est.profile(512, 12).unwrap();
    let table = psi_hat_table(3.0, &d, 16, 1e-10).unwrap();
    let (lhs, rhs) = parseval_probe(&table, &profile);
    assert!((lhs - rhs).abs() < 1e-3, "{lhs} vs {rhs}");
}

#[test]
fn fourier_tail_decays_in_blocks() {
    // the absolute-convergence proxy: partial sums of |PsiHat| flatten and
    // block maxima of the tail shrink
    let d = digits_015();
    let table = psi_hat_table(3.0, &d, 32, 1e-10).unwrap();
    let norm = |k: i64| table.get(k).unwrap().norm();
    let head: f64 = (1..=16i64).map(norm).fold(0.0, f64::max);
    let tail: f64 = (17..=32i64).map(norm).fold(0.0, f64::max);
    assert!(tail < head, "head max {head:.3e}, tail max {tail:.3e}");
    let total: f64 = (-32..=32i64).map(norm).sum();
    assert!(total.is_finite() && total < 2.0);
}

#[test]
fn regularity_stable_under_refinement() {
    let d = digits_015();
    let base = BaseSequence::geometric(3.0).unwrap();
    let est = PsiEstimator::new(&base, &d).unwrap();
    let kap = kappa(3.0, &d, 1e-9).unwrap();
    let eta = 0.9 * kap * sigma_c(3.0, &d);
    let coarse = regularity_probe(&est.profile(256, 12).unwrap(), eta);
    let fine = regularity_probe(&est.profile(512, 12).unwrap(), eta);
    assert!(coarse.lipschitz_quotient.is_finite() && fine.lipschitz_quotient.is_finite());
    let ratio = fine.lipschitz_quotient / coarse.lipschitz_quotient;
    assert!(ratio < 2.0, "quotient refinement ratio {ratio}");
    let tv_ratio = fine.total_variation / coarse.total_variation;
    assert!(tv_ratio < 2.0, "variation refinement ratio {tv_ratio}");
}

#[test]
fn regularity_with_mu_exponent() {
    // (3, {0,1,3}): eta = log_3 3 - log_3 mu = 1 - log_3 2
    let d = DigitSet::from_integers(&[0, 1, 3]).unwrap();
    let base = BaseSequence::geometric(3.0).unwrap();
    let m = mu(3, &d).unwrap() as f64;
    let eta = 1.0 - m.ln() / 3.0f64.ln();
    let est = PsiEstimator::new(&base, &d).unwrap();
    let rep = regularity_probe(&est.profile(512, 12).unwrap(), eta);
    assert!(rep.lipschitz_quotient.is_finite());
    assert!(rep.total_variation < 10.0);
}

#[test]
fn sandwich_constant_for_0_1_3() {
    // mu / (|d| - mu) * sum (1 + floor(delta/3)) = 2 * 3 = 6
    let d = DigitSet::from_integers(&[0, 1, 3]).unwrap();
    let rep = sandwich_check(3, &d, 1.0e3, 16, 14).unwrap();
    assert!((rep.rhs_constant - 6.0).abs() < 1e-12);
    assert!(rep.all_hold);
}

#[test]
fn window_bound_fibonacci() {
    let base = BaseSequence::fibonacci();
    let d = DigitSet::from_integers(&[0, 1]).unwrap();
    let rep = window_bound_probe(&base, &d, 1.0e4, 1.0).unwrap();
    assert!(rep.ratio < 1.0, "ratio = {}", rep.ratio);
}

#[test]
fn perturbed_base_agreement_shrinks() {
    let d = DigitSet::from_integers(&[0, 1]).unwrap();
    for base in [BaseSequence::fibonacci(), BaseSequence::tau_floor(1.8).unwrap()] {
        let rows = perturbed_agreement(&base, &d, &[8, 12, 16, 20], 14).unwrap();
        let first = rows.first().unwrap().3;
        let last = rows.last().unwrap().3;
        assert!(
            last < first.max(0.05),
            "{}: gaps {:?}",
            base.describe(),
            rows.iter().map(|r| r.3).collect::<Vec<_>>()
        );
        assert!(last < 0.05, "{}: final gap {last}", base.describe());
    }
}

#[test]
fn central_binomial_scaling_form_only() {
    // alpha is undeclared, so Psi comes only through the b_n form
    let base = BaseSequence::central_binomial();
    let d = DigitSet::from_integers(&[0, 1, 3]).unwrap();
    assert!(base.alpha().is_none());
    let est = PsiEstimator::new(&base, &d).unwrap();
    let e = est.psi_scaling(0.5, 9).unwrap();
    assert!(e.value > 0.0);
    assert!(perturbed_agreement(&base, &d, &[6, 8], 10).is_err());
}

#[test]
fn resum_with_zero_modes_is_the_mean() {
    let d = digits_015();
    let base = BaseSequence::geometric(3.0).unwrap();
    let est = PsiEstimator::new(&base, &d).unwrap();
    let profile = est.profile(256, 14).unwrap();
    let table = psi_hat_table(3.0, &d, 2, 1e-10).unwrap();
    let (re, im) = resum(0.37, &table, 0).unwrap();
    assert!(im < 1e-12);
    assert!((re - profile.mean()).abs() < 1e-3, "{re} vs {}", profile.mean());
}
