//! Query counters for integer geometric systems.
//!
//! For b_k = beta^k with integer beta and integer digits, every attainable
//! value is a non-negative integer and S satisfies
//!
//! S(m) = sum_{delta <= m} S((m - delta) div beta),
//!
//! which a floor-keyed memo turns into an O(log m)-depth recursion with a
//! bounded number of distinct arguments per level. This evaluates S exactly
//! at thresholds far beyond anything a table could hold.

use crate::error::{Error, Result};
use crate::scalar::{rational_floor, Integer, Natural, Rational};
use crate::system::DigitSet;
use num_traits::{Signed, Zero};
use std::collections::HashMap;
use std::sync::Mutex;

#[derive(Debug)]
pub struct GeometricCounter {
    beta: Integer,
    digits: Vec<Integer>,
    min_nonzero: Integer,
    s_memo: Mutex<HashMap<Integer, Natural>>,
    r_memo: Mutex<HashMap<Integer, Natural>>,
}

impl GeometricCounter {
    pub fn new(beta: u64, digits: &DigitSet) -> Result<Self> {
        if beta < 2 {
            return Err(Error::InvalidBase(format!(
                "geometric counter needs integer beta >= 2, got {beta}"
            )));
        }
        let ints = digits
            .integer_values()
            .ok_or_else(|| Error::NotIntegerValued(digits.describe()))?;
        Ok(GeometricCounter {
            beta: Integer::from(beta),
            digits: ints.into_iter().map(Integer::from).collect(),
            min_nonzero: rational_floor(digits.min_nonzero()),
            s_memo: Mutex::new(HashMap::new()),
            r_memo: Mutex::new(HashMap::new()),
        })
    }

    /// S(m) for an integer threshold.
    pub fn count_leq_int(&self, m: &Integer) -> Natural {
        if m.is_negative() {
            return Natural::zero();
        }
        if m < &self.min_nonzero {
            return Natural::from(1u32); // only the all-zero sequence
        }
        if let Some(hit) = self.s_memo.lock().unwrap().get(m) {
            return hit.clone();
        }
        let mut total = Natural::zero();
        for delta in &self.digits {
            if delta > m {
                break;
            }
            let next = (m - delta).div_floor(&self.beta);
            total += self.count_leq_int(&next);
        }
        self.s_memo.lock().unwrap().insert(m.clone(), total.clone());
        total
    }

    /// S(q) for a rational threshold: S(q) = S(floor(q)) on integer systems.
    pub fn count_leq(&self, q: &Rational) -> Natural {
        if q.is_negative() {
            return Natural::zero();
        }
        self.count_leq_int(&rational_floor(q))
    }

    /// r(n): representations are filtered by residue, since
    /// delta_0 = n (mod beta) forces the admissible first digits.
    pub fn rep_count(&self, n: &Integer) -> Natural {
        if n.is_negative() {
            return Natural::zero();
        }
        if n.is_zero() {
            return Natural::from(1u32);
        }
        if let Some(hit) = self.r_memo.lock().unwrap().get(n) {
            return hit.clone();
        }
        let residue = n.mod_floor(&self.beta);
        let mut total = Natural::zero();
        for delta in &self.digits {
            if delta > n {
                break;
            }
            if delta.mod_floor(&self.beta) == residue {
                total += self.rep_count(&((n - delta) / &self.beta));
            }
        }
        self.r_memo.lock().unwrap().insert(n.clone(), total.clone());
        total
    }
}

// num-integer's div_floor/mod_floor via an extension, keeping call sites short.
trait DivFloor {
    fn div_floor(&self, other: &Self) -> Self;
    fn mod_floor(&self, other: &Self) -> Self;
}

impl DivFloor for Integer {
    fn div_floor(&self, other: &Self) -> Self {
        num_integer::Integer::div_floor(self, other)
    }
    fn mod_floor(&self, other: &Self) -> Self {
        num_integer::Integer::mod_floor(self, other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_counting_is_floor_plus_one() {
        let d = DigitSet::from_integers(&[0, 1]).unwrap();
        let c = GeometricCounter::new(2, &d).unwrap();
        for m in [0u64, 1, 7, 100, 12345, 1_000_000] {
            assert_eq!(
                c.count_leq_int(&Integer::from(m)),
                Natural::from(m + 1),
                "m = {m}"
            );
        }
    }

    #[test]
    fn example_system_at_20() {
        let d = DigitSet::from_integers(&[0, 1, 5]).unwrap();
        let c = GeometricCounter::new(3, &d).unwrap();
        assert_eq!(c.count_leq_int(&Integer::from(20)), Natural::from(15u32));
    }

    #[test]
    fn rep_count_matches_table() {
        use crate::counting::RepCountTable;
        use crate::system::BaseSequence;
        let b = BaseSequence::geometric(3.0).unwrap();
        for digits in [vec![0u64, 1, 3], vec![0, 1, 5], vec![0, 2, 3, 7]] {
            let d = DigitSet::from_integers(&digits).unwrap();
            let t = RepCountTable::build(&b, &d, 400).unwrap();
            let c = GeometricCounter::new(3, &d).unwrap();
            for n in 0..=400u64 {
                assert_eq!(c.rep_count(&Integer::from(n)), t.count(n), "n = {n}");
            }
        }
    }

    #[test]
    fn negative_thresholds_count_zero() {
        let d = DigitSet::from_integers(&[0, 1]).unwrap();
        let c = GeometricCounter::new(2, &d).unwrap();
        assert_eq!(c.count_leq_int(&Integer::from(-1)), Natural::zero());
        assert_eq!(
            c.count_leq(&Rational::new((-1).into(), 2.into())),
            Natural::zero()
        );
    }

    #[test]
    fn huge_threshold_stays_cheap() {
        let d = DigitSet::from_integers(&[0, 1, 5]).unwrap();
        let c = GeometricCounter::new(3, &d).unwrap();
        // 3^40-scale argument: must return quickly via the floor memo
        let m = Integer::from(3u64).pow(40) + 17;
        let s = c.count_leq_int(&m);
        assert!(s > Natural::zero());
    }
}
