//! Representation counting and zeta functions of generalized numeration systems.
//!
//! A numeration system here is a pair (b, d): a base sequence `b = (b_k)` of
//! positive reals with `b_{k+1}/b_k -> beta > 1`, and a finite digit set
//! `d` of non-negative reals containing 0. The library computes, exactly or
//! with controlled error:
//!
//! - `r(lambda)`: the number of digit sequences with `sum delta_k b_k = lambda`
//! - `S(x)`: the counting function `sum_{lambda <= x} r(lambda)`
//! - `Psi`: the period-1 relative density function in `S(x) ~ x^{sigma_c} Psi(log_beta x)`
//! - Fourier coefficients of `Psi` through a Gamma-quotient integral formula
//! - the Maclaurin data of the digit exponential sum: `L_d`, the periodic
//!   function `P`, and the Bernoulli-like coefficients `c(l)`
//! - the Dirichlet series `zeta(s) = sum r(lambda) lambda^{-s}`, its
//!   meromorphic continuation, poles, residues, special values and trivial zeros
//! - moment asymptotics of `r`, including the Fibonacci/Lucas/floor-power
//!   partition reports
//!
//! Counting is exact (arbitrary-precision integers); analytic quantities are
//! double precision with reported error estimates.

// negated float comparisons reject NaN at API boundaries; `x <= cut` would not
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod counting;
pub mod density;
pub mod error;
pub mod fourier;
pub mod moments;
pub mod scalar;
pub mod special;
pub mod system;
pub mod zeta;

pub use error::{Error, Result};
pub use scalar::{Natural, Rational};
pub use system::{BaseKind, BaseSequence, DigitSet, SystemParams};
