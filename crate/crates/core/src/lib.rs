//! Exact indefinite summation in difference fields `Q(x)(t0, ..., t_{n-1})`
//! with `sigma(x) = x + 1` and `sigma(t) = A t`.
//!
//! The pipeline splits a denominator into special and normal factors, bounds
//! the normal part of any telescoper by dispersion, guesses the special part,
//! and solves the resulting numerator equation by an exact ansatz.
#![no_std]

extern crate alloc;

pub mod classify;
pub mod error;
pub mod field;
pub mod linalg;
pub mod multipoly;
pub mod scalar;
pub mod shift;
pub mod specials;
pub mod telescope;

pub use error::{Error, Result};
pub use scalar::{rat, Rational, XPoly, XRat};
