//! Exact asymptotic expansions and prime-field congruences for partial sums
//! of central binomial coefficients and Catalan numbers.
//!
//! * [`arith`]: exact integers, rationals, prime fields, Lucas and Jacobi.
//! * [`series`]: truncated formal power series over `Q` or `F_p`.
//! * [`darboux`]: Puiseux expansions at `z = 1` and the resulting 1/n series.
//! * [`sums`]: exact partial sums and high-precision numeric verification.
//! * [`modp`]: closed-form polynomials for the truncated sums over `F_p`.

pub mod arith;
pub mod darboux;
pub mod error;
pub mod highprec;
pub mod modp;
pub mod series;
pub mod sums;

pub use arith::{ComplexRational, PrimeFieldElem, PrimePower, Rational};
pub use darboux::{AsymExpansion, PuiseuxExpansion};
pub use highprec::{HighPrecComplex, HighPrecReal};
pub use modp::ModPoly;
pub use series::{ModSeries, PrimeField, RationalSeries, Rationals, TruncatedSeries};
