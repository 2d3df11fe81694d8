//! Digit sets, base sequences, and the structural constants kappa and mu
//! of a numeration system.

pub mod base;
mod digits;
mod params;

pub use base::{BaseKind, BaseSequence, PHI};
pub use digits::DigitSet;
pub use params::{kappa, mu, sigma_c, SystemParams};
