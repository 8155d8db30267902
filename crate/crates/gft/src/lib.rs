//! Exact arithmetic and numerical Euler products for the totient function
//! of a global field.
//!
//! The crate enumerates places (closed points) of a global field (the
//! rationals, imaginary quadratic fields, the projective line over a prime
//! field, or a counts-supplied curve), builds effective divisors over
//! them, computes divisor norms and totients exactly with brute-force
//! quotient-ring oracles, evaluates the zeta functions ζ_K, f_K, T_K by
//! truncated Euler products with rigorous tail bounds, enumerates
//! inverse-totient fibers t_K(n), and measures the empirical Cesàro mean
//! of t_K against the constant ρ_K·ζ_K(2)ζ_K(3)/ζ_K(6).
//!
//! The companion guide in `book/` walks through the concepts chapter by
//! chapter; its code snippets compile and run as doc-tests of this crate.

pub mod analytic;
pub mod arith;
pub mod curve;
pub mod divisors;
pub mod error;
pub mod ffpoly;
pub mod places;

#[cfg(doctest)]
mod book;

pub use error::{Error, Result};
