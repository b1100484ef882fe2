//! Continuous laws: the hyperbolic secant law, the Wiener-functional laws
//! `ξ_m`, symmetric stable laws and the scale mixtures that produce the
//! ν-normal and ν-stable laws.

mod mixture;
mod sech;
mod stable;
mod xi;

pub use mixture::{
    mixing_law, nu_normal_sample, nu_stable_sample, LaplaceDist, MixingLaw, NuNormal, NuStable,
};
pub use sech::SechDist;
pub use stable::{stable_sample, SymmetricStable};
pub use xi::{
    geometric_analogue_cdf, xi1_sample, WienerSquareIntegral, XiDist, DEFAULT_KL_TERMS, MAX_XI_M,
};

use rand_distr::{Distribution, Open01};

use crate::numerics::RngStream;

/// Uniform draw in the open interval `(0, 1)`.
pub(crate) fn open01(rng: &mut RngStream) -> f64 {
    Open01.sample(rng)
}
