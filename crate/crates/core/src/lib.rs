//! Distributions that are stable under random summation.
//!
//! A random variable `X` is strictly ν-stable when
//! `X = p^{1/α} (X_1 + … + X_{ν_p})` in distribution for every `p` of an
//! admissible set, with `ν_p` independent of the i.i.d. summands and
//! `E[ν_p] = 1/p`. This crate implements the five summation schemes
//! ([`families::NuFamily`]), expands their generating functions into
//! probability tables ([`series`]), samples the resulting laws
//! ([`distributions`]) and runs reproducible verification experiments
//! ([`harness`]).
//!
//! The Chebyshev scheme `P_p(z) = 1 / T_n(1/z)`, `p = 1/n²`, is the centre
//! of the crate: its ν-normal law is the hyperbolic secant distribution and
//! `p ν_p` converges to `ξ = ∫W₁² + ∫W₂²`, whose Laplace transform is
//! `1 / cosh √(2t)`.

pub mod chebyshev;
pub mod distributions;
mod error;
pub mod families;
pub mod harness;
pub mod numerics;
pub mod series;

pub use error::{Error, Result};
