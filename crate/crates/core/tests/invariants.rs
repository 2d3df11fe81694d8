//! Property tests of the structural invariants.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use numzeta::counting::{counting_fn, rep_counts_integer};
use numzeta::system::{kappa, mu};
use numzeta::{BaseSequence, DigitSet};
use proptest::prelude::*;

fn digit_set_strategy() -> impl Strategy<Value = Vec<u64>> {
    proptest::collection::btree_set(1u64..=9, 1..=3)
        .prop_map(|s| std::iter::once(0).chain(s).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// kappa is monotone non-increasing in the max digit at fixed beta.
    #[test]
    fn kappa_monotone_in_max_digit(digits in digit_set_strategy(), beta in 2u64..=4, bump in 1u64..=6) {
        let small = DigitSet::from_integers(&digits).unwrap();
        let mut bigger = digits.clone();
        let max = *bigger.iter().max().unwrap();
        bigger.push(max + bump);
        let big = DigitSet::from_integers(&bigger).unwrap();
        let k_small = kappa(beta as f64, &small, 1e-9).unwrap();
        let k_big = kappa(beta as f64, &big, 1e-9).unwrap();
        prop_assert!(k_big <= k_small + 2e-9, "kappa grew: {k_small} -> {k_big}");
    }

    /// mu stays inside max(1, |d|/beta) <= mu <= |d| - 1.
    #[test]
    fn mu_within_bounds(digits in digit_set_strategy(), beta in 2u64..=4) {
        let set = DigitSet::from_integers(&digits).unwrap();
        if set.gcd_if_integer() == Some(1) {
            let m = mu(beta, &set).unwrap();
            let card = set.cardinality() as f64;
            prop_assert!(m as f64 + 1e-12 >= (card / beta as f64).max(1.0));
            prop_assert!(m <= set.cardinality() as u64 - 1);
        }
    }

    /// S is non-decreasing and sums the table exactly.
    #[test]
    fn counting_fn_is_consistent(digits in digit_set_strategy(), beta in 2u64..=3, upper in 20u64..160) {
        let set = DigitSet::from_integers(&digits).unwrap();
        let base = BaseSequence::geometric(beta as f64).unwrap();
        let table = rep_counts_integer(&base, &set, upper).unwrap();
        let mut acc = BigUint::zero();
        let mut prev = BigUint::zero();
        for n in 0..=upper {
            acc += table.count(n);
            let s = counting_fn(&base, &set, n as f64).unwrap();
            prop_assert_eq!(&s.value, &acc, "n = {}", n);
            prop_assert!(s.value >= prev);
            prev = s.value;
        }
    }

    /// Binary closed form S(x) = floor(x) + 1.
    #[test]
    fn binary_counting_closed_form(x in 0.0f64..1.0e6) {
        let base = BaseSequence::geometric(2.0).unwrap();
        let set = DigitSet::from_integers(&[0, 1]).unwrap();
        let s = counting_fn(&base, &set, x).unwrap();
        prop_assert_eq!(s.value, BigUint::from(x.floor() as u64 + 1));
    }

    /// Non-integer targets in an integer lattice have no representations.
    #[test]
    fn fractional_targets_count_zero(num in 1u64..1000, beta in 2u64..=3) {
        let set = DigitSet::from_integers(&[0, 1, 3]).unwrap();
        let base = BaseSequence::geometric(beta as f64).unwrap();
        let lambda = BigRational::new(num.into(), 2.into()) + BigRational::new(1.into(), 4.into());
        let r = numzeta::counting::rep_count_exact(&base, &set, &lambda).unwrap();
        prop_assert!(r.value.is_zero());
    }
}

/// The concurrency contract: shared values are immutable after construction
/// and usable across threads.
#[test]
fn shared_types_are_send_and_sync() {
    fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<numzeta::DigitSet>();
    assert_send_sync::<numzeta::BaseSequence>();
    assert_send_sync::<numzeta::counting::RepCountTable>();
    assert_send_sync::<numzeta::counting::GeometricCounter>();
    assert_send_sync::<numzeta::density::PsiEstimator>();
    assert_send_sync::<numzeta::density::DensityProfile>();
    assert_send_sync::<numzeta::fourier::FourierTable>();
    assert_send_sync::<numzeta::zeta::GeometricZeta>();
}
