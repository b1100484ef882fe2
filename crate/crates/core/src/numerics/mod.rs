//! Numerical machinery shared by the distribution and harness modules:
//! reproducible random streams, Laplace inversion, Kolmogorov–Smirnov
//! statistics and characteristic-function checks.

pub mod chf;
pub mod ks;
pub mod laplace;
pub mod parallel;
pub mod rng;

pub use chf::{chf_positive_definiteness_probe, empirical_chf, empirical_chf_complex};
pub use ks::{ks_band, ks_band_two_sample, ks_statistic, ks_two_sample, EmpiricalSample};
pub use laplace::{gaver_stehfest, Extended, Real};
pub use parallel::sample_blocks;
pub use rng::RngStream;
