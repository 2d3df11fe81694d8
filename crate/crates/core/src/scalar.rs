//! Scalar policy: exact arbitrary-precision integers/rationals for counting,
//! `f64` for analytic quantities.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

pub type Natural = BigUint;
pub type Integer = BigInt;
pub type Rational = BigRational;

/// Exact rational value of a finite `f64`. Every finite double is a dyadic
/// rational, so no information is lost.
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    BigRational::from_float(x)
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Floor of a rational as a big integer (exact, works for negative values).
pub fn rational_floor(q: &Rational) -> Integer {
    q.floor().to_integer()
}

/// `true` iff the rational is an integer.
pub fn is_integer(q: &Rational) -> bool {
    q.is_integer()
}

pub fn natural_to_f64(n: &Natural) -> f64 {
    n.to_f64().unwrap_or(f64::INFINITY)
}

/// `u64` value of a rational that is a small non-negative integer.
pub fn rational_to_u64(q: &Rational) -> Option<u64> {
    if !q.is_integer() || q.is_negative() {
        return None;
    }
    q.to_integer().to_u64()
}

/// gcd of a slice of `u64`, ignoring zeros; returns 0 for an all-zero slice.
pub fn gcd_u64(values: &[u64]) -> u64 {
    let mut g: u64 = 0;
    for &v in values {
        g = num_integer::gcd(g, v);
    }
    g
}

/// Exact `beta^k` for a rational beta.
pub fn rational_pow(beta: &Rational, k: u32) -> Rational {
    let mut acc = Rational::from_integer(1.into());
    let mut base = beta.clone();
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    acc
}

/// Exact factorial as a `Natural`.
pub fn factorial(n: u32) -> Natural {
    let mut acc = Natural::from(1u32);
    for i in 2..=n as u64 {
        acc *= i;
    }
    acc
}

pub fn rational_is_zero(q: &Rational) -> bool {
    q.is_zero()
}

/// Parse a decimal literal (`"5"`, `"1.8"`, `"-0.25"`) into an exact rational.
pub fn parse_decimal_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (sign, digits) = match s.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let joined = format!("{}{}", int_part, frac_part);
    let numer: Integer = joined.parse().ok()?;
    let denom = Integer::from(10u32).pow(frac_part.len() as u32);
    Some(Rational::new(numer * sign, denom))
}
