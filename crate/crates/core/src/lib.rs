//! Exact kernel for real radicals of positive rationals.
//!
//! * [`radical`] rewrites `b^(1/m)` as `coeff * prod p^(a/d)` with reduced
//!   exponents in (0, 1), the unique canonical form of a radical.
//! * [`sumalg`] normalizes rational linear combinations of radicals and
//!   decides whether they are rational.
//! * [`reduced_set`] builds a multiplicatively independent generating set
//!   of prime roots for a sum, and checks independence by enumeration.
//! * [`polyq`] provides polynomials over the rationals, their gcd, and
//!   minimal polynomials of radical products.
//! * [`numeric`] is a certified interval oracle used to cross-check every
//!   symbolic answer.
//! * [`exprlang`] parses the `rt(b, m)` expression language and lowers it to
//!   a normalized sum.

pub mod arith;
pub mod error;
pub mod exprlang;
pub mod numeric;
pub mod polyq;
pub mod radical;
pub mod reduced_set;
pub mod sumalg;

pub use error::{Error, Result};
