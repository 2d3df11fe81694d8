//! Finite digit sets.

use crate::error::{Error, Result};
use crate::scalar::{gcd_u64, rational_to_f64, rational_to_u64, Rational};
use num_traits::{Signed, Zero};

/// A finite set of distinct non-negative rational digits containing 0.
///
/// Values are kept sorted ascending; cached metadata (max digit, smallest
/// nonzero digit, gcd when integer-valued) is computed at construction.
/// Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DigitSet {
    values: Vec<Rational>,
    values_f64: Vec<f64>,
    max_digit: Rational,
    min_nonzero: Rational,
    gcd_if_integer: Option<u64>,
}

impl DigitSet {
    /// Validate a list of rationals as a digit set.
    ///
    /// Errors when 0 is missing, fewer than two distinct values remain after
    /// deduplication, or any value is negative.
    pub fn new(values: &[Rational]) -> Result<Self> {
        let mut sorted: Vec<Rational> = values.to_vec();
        sorted.sort();
        sorted.dedup();
        if let Some(neg) = sorted.iter().find(|v| v.is_negative()) {
            return Err(Error::NegativeDigit(neg.to_string()));
        }
        if sorted.first().map(|v| !v.is_zero()).unwrap_or(true) {
            return Err(Error::MissingZeroDigit);
        }
        if sorted.len() < 2 {
            return Err(Error::TooFewDigits(sorted.len()));
        }
        let max_digit = sorted.last().unwrap().clone();
        let min_nonzero = sorted[1].clone();
        let gcd_if_integer = sorted
            .iter()
            .map(rational_to_u64)
            .collect::<Option<Vec<u64>>>()
            .map(|ints| gcd_u64(&ints));
        let values_f64 = sorted.iter().map(rational_to_f64).collect();
        Ok(DigitSet {
            values: sorted,
            values_f64,
            max_digit,
            min_nonzero,
            gcd_if_integer,
        })
    }

    /// Digit set from integer values, e.g. `DigitSet::from_integers(&[0, 1, 5])`.
    pub fn from_integers(values: &[u64]) -> Result<Self> {
        let rats: Vec<Rational> = values
            .iter()
            .map(|&v| Rational::from_integer(v.into()))
            .collect();
        Self::new(&rats)
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn values_f64(&self) -> &[f64] {
        &self.values_f64
    }

    /// Number of digits, written |d| throughout.
    pub fn cardinality(&self) -> usize {
        self.values.len()
    }

    pub fn max_digit(&self) -> &Rational {
        &self.max_digit
    }

    pub fn max_digit_f64(&self) -> f64 {
        rational_to_f64(&self.max_digit)
    }

    /// Smallest nonzero digit.
    pub fn min_nonzero(&self) -> &Rational {
        &self.min_nonzero
    }

    pub fn min_nonzero_f64(&self) -> f64 {
        rational_to_f64(&self.min_nonzero)
    }

    /// gcd of the nonzero values; present iff every digit is an integer.
    pub fn gcd_if_integer(&self) -> Option<u64> {
        self.gcd_if_integer
    }

    pub fn is_integer(&self) -> bool {
        self.gcd_if_integer.is_some()
    }

    /// Integer digit values when the set is integer-valued.
    pub fn integer_values(&self) -> Option<Vec<u64>> {
        self.values.iter().map(rational_to_u64).collect()
    }

    /// `true` for the full beta-adic digit set {0, 1, ..., beta-1}.
    pub fn is_full_set(&self, beta: u64) -> bool {
        match self.integer_values() {
            Some(ints) => {
                ints.len() as u64 == beta && ints.iter().enumerate().all(|(i, &v)| v == i as u64)
            }
            None => false,
        }
    }

    /// Scale all digits by the common denominator, yielding integer digits
    /// and the denominator D, so that `S_{b, d}(x) = S_{b, D d}(D x)`.
    pub fn cleared_denominators(&self) -> (Vec<u64>, u64) {
        let mut denom: u64 = 1;
        for v in &self.values {
            let d = v.denom();
            if let Some(d) = num_traits::ToPrimitive::to_u64(d) {
                denom = num_integer::lcm(denom, d);
            }
        }
        let ints = self
            .values
            .iter()
            .map(|v| {
                rational_to_u64(&(v * Rational::from_integer(denom.into())))
                    .expect("digit does not fit u64 after clearing denominators")
            })
            .collect();
        (ints, denom)
    }

    /// Short textual form, e.g. `{0,1,5}`.
    pub fn describe(&self) -> String {
        let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        format!("{{{}}}", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_legal_set() {
        let d = DigitSet::from_integers(&[0, 1]).unwrap();
        assert_eq!(d.cardinality(), 2);
        assert_eq!(d.max_digit_f64(), 1.0);
        assert_eq!(d.gcd_if_integer(), Some(1));
    }

    #[test]
    fn example_set_0_1_5() {
        let d = DigitSet::from_integers(&[0, 1, 5]).unwrap();
        assert_eq!(d.cardinality(), 3);
        assert_eq!(d.gcd_if_integer(), Some(1));
        assert_eq!(d.min_nonzero_f64(), 1.0);
    }

    #[test]
    fn missing_zero_is_rejected() {
        assert!(matches!(
            DigitSet::from_integers(&[1, 2]),
            Err(Error::MissingZeroDigit)
        ));
    }

    #[test]
    fn negative_digit_is_rejected() {
        let vals = vec![
            Rational::from_integer(0.into()),
            Rational::from_integer((-1).into()),
        ];
        assert!(matches!(DigitSet::new(&vals), Err(Error::NegativeDigit(_))));
    }

    #[test]
    fn duplicates_collapse() {
        let d = DigitSet::from_integers(&[0, 1, 1, 5, 5]).unwrap();
        assert_eq!(d.cardinality(), 3);
    }

    #[test]
    fn single_value_after_dedup_is_rejected() {
        assert!(matches!(
            DigitSet::from_integers(&[0, 0]),
            Err(Error::TooFewDigits(1))
        ));
    }

    #[test]
    fn rational_digits_clear_denominators() {
        let vals = vec![
            Rational::from_integer(0.into()),
            Rational::new(1.into(), 2.into()),
            Rational::new(3.into(), 4.into()),
        ];
        let d = DigitSet::new(&vals).unwrap();
        assert!(!d.is_integer());
        let (ints, denom) = d.cleared_denominators();
        assert_eq!(denom, 4);
        assert_eq!(ints, vec![0, 2, 3]);
    }

    #[test]
    fn full_set_detection() {
        let d = DigitSet::from_integers(&[0, 1, 2]).unwrap();
        assert!(d.is_full_set(3));
        assert!(!d.is_full_set(2));
        let e = DigitSet::from_integers(&[0, 1, 3]).unwrap();
        assert!(!e.is_full_set(3));
    }
}
