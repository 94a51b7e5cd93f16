//! Exact rational scalars and dense univariate polynomials over them.

mod polynomial;
mod rational;
pub mod serde_exact;

pub use polynomial::Polynomial;
pub use rational::{parse_rational, rat, simplest_between, RationalExt};

/// Arbitrary-precision rational, always stored reduced with a positive
/// denominator.
pub type Rational = num_rational::BigRational;
