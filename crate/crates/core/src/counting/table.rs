//! Exact representation-count tables r(0..X) built by bounded convolution.

use crate::error::{Error, Result};
use crate::scalar::{Natural, Rational};
use crate::system::{BaseSequence, DigitSet};
use num_traits::{ToPrimitive, Zero};

/// Hard cap on table size; larger sweeps should use the query-based counters.
const MAX_TABLE: u64 = 100_000_000;

/// Counts are held in u128 while they fit and promoted wholesale to
/// arbitrary precision on overflow.
#[derive(Debug, Clone)]
enum Counts {
    Small(Vec<u128>),
    Big(Vec<Natural>),
}

/// Exact table of r(n) for n = 0..=upper of an integer-valued system.
#[derive(Debug, Clone)]
pub struct RepCountTable {
    base_id: String,
    digit_id: String,
    upper: u64,
    counts: Counts,
    prefix: std::sync::OnceLock<Vec<Natural>>,
}

impl RepCountTable {
    /// Build the table by bounded convolution: starting from e_0, fold in
    /// sum_{delta} shift(counts, delta * b_k) for every k with
    /// min_nonzero * b_k <= X, truncating at X.
    pub fn build(base: &BaseSequence, digits: &DigitSet, upper: u64) -> Result<Self> {
        Self::build_with_cap(base, digits, upper, u128::MAX)
    }

    /// As `build`, but counts above `cap` trigger the big-integer path.
    /// Exposed so the promotion path stays testable at small sizes.
    pub(crate) fn build_with_cap(
        base: &BaseSequence,
        digits: &DigitSet,
        upper: u64,
        cap: u128,
    ) -> Result<Self> {
        if upper > MAX_TABLE {
            return Err(Error::BudgetExceeded(format!(
                "table upper bound {upper} exceeds cap {MAX_TABLE}"
            )));
        }
        let digit_vals = digits
            .integer_values()
            .ok_or_else(|| Error::NotIntegerValued(digits.describe()))?;
        if !base.is_integer_valued() {
            return Err(Error::NotIntegerValued(base.describe()));
        }
        // indices beyond min_nonzero * b_k > upper can only carry digit 0
        let bound = Rational::from_integer(upper.into()) / digits.min_nonzero();
        let max_k = base.max_index_with_value_leq(&bound);

        let base_values: Vec<u64> = match max_k {
            None => Vec::new(),
            Some(mk) => (0..=mk)
                .map(|k| {
                    base.value_exact(k)
                        .and_then(|v| v.to_integer().to_u64())
                        .ok_or_else(|| {
                            Error::InvalidBase(format!("base value at index {k} does not fit u64"))
                        })
                })
                .collect::<Result<_>>()?,
        };

        let n = (upper + 1) as usize;
        let mut cur = vec![0u128; n];
        cur[0] = 1;
        let mut next = vec![0u128; n];
        let mut overflowed = false;

        'outer: for &bk in &base_values {
            next.iter_mut().for_each(|v| *v = 0);
            for &delta in &digit_vals {
                let shift = match delta.checked_mul(bk) {
                    Some(s) if s <= upper => s as usize,
                    _ if delta == 0 => 0,
                    _ => continue,
                };
                for i in 0..n - shift {
                    let (sum, over) = next[i + shift].overflowing_add(cur[i]);
                    if over || sum > cap {
                        overflowed = true;
                        break 'outer;
                    }
                    next[i + shift] = sum;
                }
            }
            std::mem::swap(&mut cur, &mut next);
        }

        let counts = if overflowed {
            Counts::Big(Self::build_big(&base_values, &digit_vals, upper))
        } else {
            Counts::Small(cur)
        };
        Ok(RepCountTable {
            base_id: base.describe(),
            digit_id: digits.describe(),
            upper,
            counts,
            prefix: std::sync::OnceLock::new(),
        })
    }

    fn build_big(base_values: &[u64], digit_vals: &[u64], upper: u64) -> Vec<Natural> {
        let n = (upper + 1) as usize;
        let mut cur = vec![Natural::zero(); n];
        cur[0] = Natural::from(1u32);
        let mut next = vec![Natural::zero(); n];
        for &bk in base_values {
            next.iter_mut().for_each(|v| *v = Natural::zero());
            for &delta in digit_vals {
                let shift = match delta.checked_mul(bk) {
                    Some(s) if s <= upper => s as usize,
                    _ if delta == 0 => 0,
                    _ => continue,
                };
                for i in 0..n - shift {
                    if !cur[i].is_zero() {
                        next[i + shift] += &cur[i];
                    }
                }
            }
            std::mem::swap(&mut cur, &mut next);
        }
        cur
    }

    pub fn upper(&self) -> u64 {
        self.upper
    }

    pub fn base_id(&self) -> &str {
        &self.base_id
    }

    pub fn digit_id(&self) -> &str {
        &self.digit_id
    }

    /// r(n), exact.
    pub fn count(&self, n: u64) -> Natural {
        assert!(n <= self.upper, "index {n} beyond table upper {}", self.upper);
        match &self.counts {
            Counts::Small(v) => Natural::from(v[n as usize]),
            Counts::Big(v) => v[n as usize].clone(),
        }
    }

    pub fn count_f64(&self, n: u64) -> f64 {
        match &self.counts {
            Counts::Small(v) => v[n as usize] as f64,
            Counts::Big(v) => v[n as usize].to_f64().unwrap_or(f64::INFINITY),
        }
    }

    /// S(n) = sum_{m <= n} r(m), exact, from cached prefix sums.
    pub fn partial_sum(&self, n: u64) -> Natural {
        assert!(n <= self.upper, "index {n} beyond table upper {}", self.upper);
        let prefix = self.prefix.get_or_init(|| {
            let mut acc = Natural::zero();
            let mut out = Vec::with_capacity(self.upper as usize + 1);
            for m in 0..=self.upper {
                match &self.counts {
                    Counts::Small(v) => acc += v[m as usize],
                    Counts::Big(v) => acc += &v[m as usize],
                }
                out.push(acc.clone());
            }
            out
        });
        prefix[n as usize].clone()
    }

    /// S(x) for a real threshold: 0 for x < 0, otherwise S(floor(x)).
    pub fn counting_fn(&self, x: f64) -> Natural {
        if x < 0.0 {
            return Natural::zero();
        }
        self.partial_sum((x.floor() as u64).min(self.upper))
    }

    pub fn iter_counts(&self) -> impl Iterator<Item = Natural> + '_ {
        (0..=self.upper).map(move |n| self.count(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binary() -> (BaseSequence, DigitSet) {
        (
            BaseSequence::geometric(2.0).unwrap(),
            DigitSet::from_integers(&[0, 1]).unwrap(),
        )
    }

    #[test]
    fn binary_counts_are_all_one() {
        let (b, d) = binary();
        let t = RepCountTable::build(&b, &d, 100).unwrap();
        assert!((0..=100).all(|n| t.count(n) == Natural::from(1u32)));
    }

    #[test]
    fn fibonacci_count_at_10() {
        // 10 = 8 + 2 = 5 + 3 + 2 over distinct terms of (1, 2, 3, 5, 8, ...)
        let b = BaseSequence::fibonacci();
        let d = DigitSet::from_integers(&[0, 1]).unwrap();
        let t = RepCountTable::build(&b, &d, 10).unwrap();
        assert_eq!(t.count(10), Natural::from(2u32));
        assert_eq!(t.count(0), Natural::from(1u32));
    }

    #[test]
    fn zero_upper_keeps_the_empty_representation() {
        let (b, d) = binary();
        let t = RepCountTable::build(&b, &d, 0).unwrap();
        assert_eq!(t.count(0), Natural::from(1u32));
    }

    #[test]
    fn partial_sums_match_direct_accumulation() {
        let b = BaseSequence::geometric(3.0).unwrap();
        let d = DigitSet::from_integers(&[0, 1, 3]).unwrap();
        let t = RepCountTable::build(&b, &d, 200).unwrap();
        let mut acc = Natural::zero();
        for n in 0..=200 {
            acc += t.count(n);
            assert_eq!(t.partial_sum(n), acc);
        }
        assert_eq!(t.counting_fn(-1.0), Natural::zero());
        assert_eq!(t.counting_fn(5.9), t.partial_sum(5));
    }

    #[test]
    fn promotion_path_matches_small_path() {
        let b = BaseSequence::geometric(2.0).unwrap();
        let d = DigitSet::from_integers(&[0, 1, 2, 3]).unwrap();
        let plain = RepCountTable::build(&b, &d, 300).unwrap();
        let forced = RepCountTable::build_with_cap(&b, &d, 300, 10).unwrap();
        for n in 0..=300 {
            assert_eq!(plain.count(n), forced.count(n), "n = {n}");
        }
    }
}
