//! Exact upper bounds on equiangular line systems.
//!
//! The crate computes bounds on `M_α(n)`, the largest number of lines in
//! `R^n` with common angle `arccos α`, in exact rational arithmetic:
//!
//! * [`bounds`]: closed-form Gerzon, Lemmens–Seidel and three-point relative
//!   bounds, plus the per-`k` nonexistence certificate for tight harmonic
//!   index 4 designs.
//! * [`lp`]: an exact two-phase simplex with Farkas certificates and the
//!   "triangle LP" driver that bisects over the objective level.
//! * [`threepoint`] and [`gegenbauer`]: the polynomial kernels feeding the LP.
//! * [`designs`]: inner-product profiles and harmonic index design tests for
//!   explicit configurations.

pub mod bounds;
pub mod designs;
mod error;
pub mod exact;
pub mod exec;
pub mod gegenbauer;
pub mod lp;
pub mod threepoint;

pub use error::{Error, Result};
pub use exact::{parse_rational, Polynomial, Rational, RationalExt};
pub use exec::Exec;
