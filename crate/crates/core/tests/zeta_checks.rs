//! Zeta-side checks: abscissa values, direct/continued consistency,
//! residues, trivial zeros, the pole grid and the perturbed continuation.

use num_complex::Complex64;
use numzeta::fourier::psi_hat;
use numzeta::system::PHI;
use numzeta::zeta::*;
use numzeta::{BaseSequence, DigitSet};

fn digits_01() -> DigitSet {
    DigitSet::from_integers(&[0, 1]).unwrap()
}

fn digits_015() -> DigitSet {
    DigitSet::from_integers(&[0, 1, 5]).unwrap()
}

#[test]
fn abscissa_values_and_flags() {
    let (sc, flag) = abscissa(&BaseSequence::geometric(3.0).unwrap(), &digits_015());
    assert!((sc - 1.0).abs() < 1e-14);
    assert_eq!(flag, BoundaryBehavior::Divergent);

    let (sc, flag) = abscissa(&BaseSequence::fibonacci(), &digits_01());
    assert!((sc - 2.0f64.ln() / PHI.ln()).abs() < 1e-12, "sigma_c = {sc}");
    assert!((sc - 1.4404200904125564).abs() < 1e-12);
    assert_eq!(flag, BoundaryBehavior::Divergent);
}

#[test]
fn golden_value_at_two() {
    // frozen from the accelerated direct run; the continued formula agrees
    // to 1.6e-13 and the naive partial sum to 1e6 sits ~6e-7 below
    let base = BaseSequence::geometric(3.0).unwrap();
    let direct = zeta_direct(&base, &digits_015(), Complex64::new(2.0, 0.0), 1_000_000).unwrap();
    assert!((direct.value.re - 1.3149255312294) .abs() < 5e-12, "{}", direct.value.re);
}

#[test]
fn overlap_consistency_strip() {
    // |direct - continued| < 1e-6 on Re(s) = sigma_c + 0.5
    let d = digits_015();
    let base = BaseSequence::geometric(3.0).unwrap();
    let gz = GeometricZeta::new(3.0, &d, 1e-10).unwrap();
    for i in 0..8 {
        let s = Complex64::new(1.5, -5.0 + 10.0 * i as f64 / 7.0);
        let direct = zeta_direct(&base, &d, s, 200_000).unwrap();
        let cont = gz.evaluate(s, None).unwrap();
        assert!(
            (direct.value - cont.value).norm() < 1e-6,
            "s = {s}: {:.3e}",
            (direct.value - cont.value).norm()
        );
    }
}

#[test]
fn residue_cross_module_and_approach() {
    let d = digits_015();
    let gz = GeometricZeta::new(3.0, &d, 1e-10).unwrap();
    let p00 = gz.residue(0, 0).unwrap();
    // sigma_c = 1 here, so the residue at s = 1 equals PsiHat(0)
    let psi0 = psi_hat(3.0, &d, 0, 1e-10).unwrap();
    assert!((p00.residue - psi0).norm() < 1e-10);
    // shrinking pole approach: (s - 1) zeta(s) -> residue
    let mut prev = f64::INFINITY;
    for t in [1e-1, 1e-2, 1e-3, 1e-4] {
        let v = gz.evaluate(Complex64::new(1.0 + t, 0.0), None).unwrap().value;
        let gap = (Complex64::new(t, 0.0) * v - p00.residue).norm();
        assert!(gap < prev, "gap {gap:.3e} at t = {t}");
        prev = gap;
    }
    assert!(prev < 1e-4, "final approach gap {prev:.3e}");
}

#[test]
fn pole_grid_binary_and_locations() {
    let gz = GeometricZeta::new(2.0, &digits_01(), 1e-10).unwrap();
    let grid = gz.pole_grid(2, 2).unwrap();
    for info in &grid {
        if info.j == 0 && info.k == 0 {
            assert!((info.residue.re - 1.0).abs() < 1e-8);
            assert!(!info.possibly_removable);
        } else {
            // PsiHat(k != 0) = 0 and 1/Gamma kills the k = 0, j >= 1 cells
            assert!(
                info.residue.norm() < 1e-9,
                "({}, {}): residue {}",
                info.j,
                info.k,
                info.residue
            );
        }
    }
    // location formula for (3, {0,1,5}): p(1,1) = 1 - 1 - 2 pi i / ln 3
    let gz3 = GeometricZeta::new(3.0, &digits_015(), 1e-10).unwrap();
    let p11 = gz3.residue(1, 1).unwrap();
    assert!((p11.location.re - 0.0).abs() < 1e-14);
    assert!((p11.location.im + 2.0 * std::f64::consts::PI / 3.0f64.ln()).abs() < 1e-12);
}

#[test]
fn special_values_branch_on_integer_sigma_c() {
    // binary: classical zeta(0), zeta(-1)
    let gz = GeometricZeta::new(2.0, &digits_01(), 1e-10).unwrap();
    assert!((gz.special_value(0).unwrap() + 0.5).abs() < 1e-10);
    assert!((gz.special_value(1).unwrap() + 1.0 / 12.0).abs() < 1e-10);
    // (2, {0,1,5}): log2 3 not an integer, so -1 and trivial zeros
    let gz2 = GeometricZeta::new(2.0, &digits_015(), 1e-10).unwrap();
    assert!((gz2.special_value(0).unwrap() + 1.0).abs() < 1e-12);
    for n in 1..=3 {
        assert_eq!(gz2.special_value(n).unwrap(), 0.0);
    }
}

#[test]
fn perturbed_tau_floor_overlap() {
    let d = digits_01();
    let base = BaseSequence::tau_floor(1.8).unwrap();
    let sc = 2.0f64.ln() / 1.8f64.ln();
    for &im in &[0.0, 1.5] {
        let s = Complex64::new(sc + 0.5, im);
        let direct = zeta_direct(&base, &d, s, 1_500_000).unwrap();
        let pert = zeta_continued_perturbed(&base, &d, s, 1e-9).unwrap();
        assert!(
            (direct.value - pert.value).norm() < 1e-4,
            "s = {s}: {:.3e} (direct est {:.1e})",
            (direct.value - pert.value).norm(),
            direct.est_error
        );
    }
}

#[test]
fn perturbed_fibonacci_below_abscissa() {
    let d = digits_01();
    let base = BaseSequence::fibonacci();
    let sc = 2.0f64.ln() / PHI.ln();
    let v = zeta_continued_perturbed(&base, &d, Complex64::new(sc - 0.3, 0.0), 1e-9).unwrap();
    assert!(v.value.re.is_finite());
    assert!(v.value.im.abs() < 1e-9);
    // pole behavior near sigma_c: (s - sigma_c) zeta stabilizes
    let probes: Vec<f64> = [1e-1, 1e-2, 1e-3]
        .iter()
        .map(|&t| {
            let s = Complex64::new(sc + t, 0.0);
            let v = zeta_continued_perturbed(&base, &d, s, 1e-9).unwrap().value;
            (Complex64::new(t, 0.0) * v).re
        })
        .collect();
    let d1 = (probes[1] - probes[0]).abs();
    let d2 = (probes[2] - probes[1]).abs();
    assert!(d2 < d1, "probe values {probes:?}");
}

#[test]
fn lambda_cut_is_recorded() {
    let gz = GeometricZeta::new(2.0, &digits_01(), 1e-10).unwrap();
    let e = gz.evaluate(Complex64::new(2.0, 0.0), None).unwrap();
    assert_eq!(e.method, ZetaMethod::ContinuedGeometric);
    assert!(e.truncations.lambda_cut >= 40.0);
    assert!(e.truncations.ell_cut > 4);
}
