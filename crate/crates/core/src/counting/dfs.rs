//! Pruned depth-first counting over exact rationals, for bases that are not
//! integer geometric (Fibonacci, Lucas, floor powers, tables, or geometric
//! with a non-integral beta interpreted through its exact binary value).

use crate::error::{Error, Result};
use crate::scalar::{Natural, Rational};
use crate::system::{BaseSequence, DigitSet};
use num_traits::{One, Signed, Zero};

const DEFAULT_NODE_BUDGET: u64 = 200_000_000;

pub struct DfsCounter {
    /// Base values with min_nonzero * b_k <= bound, largest first.
    values: Vec<Rational>,
    /// suffix_max[i] = max_digit * (values[i] + values[i+1] + ...).
    suffix_max: Vec<Rational>,
    digits: Vec<Rational>,
    /// |d|^j for the all-remaining-digits-fit shortcut.
    card_powers: Vec<Natural>,
    node_budget: u64,
}

pub struct DfsOutcome {
    pub value: Natural,
    pub nodes: u64,
}

impl DfsCounter {
    /// Prepare a counter able to answer queries with threshold <= `bound`.
    pub fn new(base: &BaseSequence, digits: &DigitSet, bound: &Rational) -> Result<Self> {
        let scaled_bound = bound / digits.min_nonzero();
        let max_k = base.max_index_with_value_leq(&scaled_bound);
        let mut values: Vec<Rational> = match max_k {
            None => Vec::new(),
            Some(mk) => (0..=mk)
                .map(|k| {
                    base.value_exact(k).ok_or_else(|| {
                        Error::NotIntegerValued(format!(
                            "base {} has no exact values for DFS",
                            base.describe()
                        ))
                    })
                })
                .collect::<Result<_>>()?,
        };
        values.sort();
        values.reverse();
        let max_digit = digits.max_digit().clone();
        let mut suffix_max = vec![Rational::zero(); values.len() + 1];
        for i in (0..values.len()).rev() {
            suffix_max[i] = &suffix_max[i + 1] + &values[i] * &max_digit;
        }
        let card = digits.cardinality();
        let mut card_powers = Vec::with_capacity(values.len() + 1);
        let mut p = Natural::one();
        for _ in 0..=values.len() {
            card_powers.push(p.clone());
            p *= card as u64;
        }
        Ok(DfsCounter {
            values,
            suffix_max,
            digits: digits.values().to_vec(),
            card_powers,
            node_budget: DEFAULT_NODE_BUDGET,
        })
    }

    /// S(x): digit sequences with sum <= x. Exact.
    pub fn count_leq(&self, x: &Rational) -> Result<DfsOutcome> {
        let mut nodes = 0u64;
        let value = self.leq_rec(0, x.clone(), &mut nodes)?;
        Ok(DfsOutcome { value, nodes })
    }

    fn leq_rec(&self, i: usize, remaining: Rational, nodes: &mut u64) -> Result<Natural> {
        *nodes += 1;
        if *nodes > self.node_budget {
            return Err(Error::BudgetExceeded(format!(
                "DFS exceeded {} nodes",
                self.node_budget
            )));
        }
        if remaining.is_negative() {
            return Ok(Natural::zero());
        }
        if i == self.values.len() {
            return Ok(Natural::one());
        }
        // every assignment of the remaining positions fits
        if self.suffix_max[i] <= remaining {
            return Ok(self.card_powers[self.values.len() - i].clone());
        }
        let mut total = Natural::zero();
        for delta in &self.digits {
            let spent = delta * &self.values[i];
            if spent > remaining {
                break; // digits ascend
            }
            total += self.leq_rec(i + 1, &remaining - spent, nodes)?;
        }
        Ok(total)
    }

    /// r(lambda): digit sequences with sum exactly lambda. Exact.
    pub fn count_eq(&self, lambda: &Rational) -> Result<DfsOutcome> {
        let mut nodes = 0u64;
        let value = self.eq_rec(0, lambda.clone(), &mut nodes)?;
        Ok(DfsOutcome { value, nodes })
    }

    fn eq_rec(&self, i: usize, remaining: Rational, nodes: &mut u64) -> Result<Natural> {
        *nodes += 1;
        if *nodes > self.node_budget {
            return Err(Error::BudgetExceeded(format!(
                "DFS exceeded {} nodes",
                self.node_budget
            )));
        }
        if remaining.is_negative() || remaining > self.suffix_max[i] {
            return Ok(Natural::zero());
        }
        if i == self.values.len() {
            return Ok(if remaining.is_zero() {
                Natural::one()
            } else {
                Natural::zero()
            });
        }
        let mut total = Natural::zero();
        for delta in &self.digits {
            let spent = delta * &self.values[i];
            if spent > remaining {
                break;
            }
            total += self.eq_rec(i + 1, &remaining - spent, nodes)?;
        }
        Ok(total)
    }
}

/// Exhaustive enumeration over d^depth digit tuples; a test oracle only.
/// Guarded by |d|^depth <= 10^8.
pub fn bruteforce_count_eq(
    base: &BaseSequence,
    digits: &DigitSet,
    lambda: &Rational,
    depth: u32,
) -> Result<DfsOutcome> {
    let card = digits.cardinality() as f64;
    if card.powi(depth as i32) > 1e8 {
        return Err(Error::BudgetExceeded(format!(
            "bruteforce guard: |d|^{depth} > 1e8"
        )));
    }
    let values: Vec<Rational> = (0..depth as usize)
        .map(|k| {
            base.value_exact(k).ok_or_else(|| {
                Error::NotIntegerValued(format!("no exact base values for {}", base.describe()))
            })
        })
        .collect::<Result<_>>()?;
    let digit_vals = digits.values();
    let mut nodes = 0u64;
    let mut count = Natural::zero();
    let mut stack: Vec<(usize, Rational)> = vec![(0, lambda.clone())];
    while let Some((i, rem)) = stack.pop() {
        nodes += 1;
        if rem.is_negative() {
            continue;
        }
        if i == values.len() {
            if rem.is_zero() {
                count += 1u32;
            }
            continue;
        }
        for delta in digit_vals {
            stack.push((i + 1, &rem - delta * &values[i]));
        }
    }
    Ok(DfsOutcome { value: count, nodes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_eq_and_leq() {
        let b = BaseSequence::fibonacci();
        let d = DigitSet::from_integers(&[0, 1]).unwrap();
        let ten = Rational::from_integer(10.into());
        let dfs = DfsCounter::new(&b, &d, &ten).unwrap();
        assert_eq!(dfs.count_eq(&ten).unwrap().value, Natural::from(2u32));
        // sum of A000119(0..10) = 1+1+1+2+1+2+2+1+3+2+2
        assert_eq!(dfs.count_leq(&ten).unwrap().value, Natural::from(18u32));
    }

    #[test]
    fn bruteforce_matches_dfs() {
        let b = BaseSequence::fibonacci();
        let d = DigitSet::from_integers(&[0, 1]).unwrap();
        let ten = Rational::from_integer(10.into());
        let bf = bruteforce_count_eq(&b, &d, &ten, 6).unwrap();
        assert_eq!(bf.value, Natural::from(2u32));
    }

    #[test]
    fn bruteforce_guard_trips() {
        let b = BaseSequence::fibonacci();
        let d = DigitSet::from_integers(&[0, 1]).unwrap();
        let one = Rational::one();
        assert!(matches!(
            bruteforce_count_eq(&b, &d, &one, 40),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn non_integer_target_counts_zero() {
        let b = BaseSequence::geometric(2.0).unwrap();
        let d = DigitSet::from_integers(&[0, 1]).unwrap();
        let lambda = Rational::new(15.into(), 2.into());
        let dfs = DfsCounter::new(&b, &d, &lambda).unwrap();
        assert_eq!(dfs.count_eq(&lambda).unwrap().value, Natural::zero());
    }
}
