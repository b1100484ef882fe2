//! Every tolerance the experiments judge against, with its origin.

pub use crate::numerics::ks::{ks_band, ks_band_two_sample, KOLMOGOROV_Q99};

/// `|φ(t) − P_p(φ(pt))|`: an algebraic identity, so only rounding remains.
pub const FUNCTIONAL_EQUATION: f64 = 1e-10;

/// Coefficientwise difference of the two composition orders.
pub const COMMUTATIVITY: f64 = 1e-12;

/// Truncation order for the composition comparison.
pub const COMMUTATIVITY_ORDER: usize = 200;

/// Table mass plus tail bound must equal 1 to this accuracy.
pub const MASS: f64 = 1e-10;

/// Relative error of the table mean against `1/p`.
pub const MEAN_RELATIVE: f64 = 1e-8;

/// Most negative coefficient accepted as rounding dust.
pub const NEGATIVE_DUST: f64 = 1e-14;

/// `|S(n_max, x) − S(n_max/2, x)|`: the curve has settled.
pub const PLATEAU: f64 = 0.01;

/// `|S(n_max, x) − A(x)|`.
pub const LIMIT_GAP: f64 = 0.01;

/// `|A(x)_inversion − A(x)_MC|` at 10⁶ draws. The ecdf has standard error
/// at most `0.5/√10⁶ = 5e−4`; 0.004 leaves room for inversion error.
pub const CDF_CROSS_CHECK: f64 = 0.004;

/// `|mean ξ − 1|` at 10⁶ draws: 3σ with `Var ξ = 2/3` is `0.0025`.
pub const XI_MEAN: f64 = 0.004;

/// `|var ξ − 2/3|` at 10⁶ draws: 3σ of the sample variance is about 0.003.
pub const XI_VARIANCE: f64 = 0.01;

/// Final KS distance of `p ν_p` to its limit law.
pub const LLN_FINAL_KS: f64 = 0.02;

/// A wrong fixed-point candidate must be rejected at least this clearly.
pub const WRONG_CANDIDATE_KS: f64 = 0.05;

/// Gaver–Stehfest error on the χ²₁ cdf over `[0.1, 5]`.
pub const INVERSION_CHI2: f64 = 1e-5;

/// Transform of the mixing law against `1/cosh(√2 t)` at 10⁶ draws.
pub const MIXTURE_TRANSFORM: f64 = 0.003;

/// Smallest accepted eigenvalue of a characteristic-function Toeplitz
/// matrix.
pub const PD_EIGENVALUE: f64 = -1e-8;

/// Width of Monte Carlo bands in standard errors.
pub const SIGMA: f64 = 3.0;
