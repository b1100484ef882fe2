use std::f64::consts::PI;

use rand_distr::{Distribution, Exp1, Gamma, StandardNormal};
use serde::Serialize;

use crate::error::{domain, Result};
use crate::families::NuFamily;
use crate::numerics::laplace::{gaver_stehfest, Extended, DEFAULT_ORDER};
use crate::numerics::RngStream;

/// Karhunen–Loève terms kept by default.
pub const DEFAULT_KL_TERMS: usize = 200;

/// Largest supported `m`.
pub const MAX_XI_M: u32 = 8;

/// `λ_k = 1/((k − ½)² π²)`, the eigenvalues of the Brownian covariance
/// kernel on `[0, 1]`; `Σ_k λ_k = ½`.
fn kl_eigenvalue(k: usize) -> f64 {
    let h = k as f64 - 0.5;
    1.0 / (h * h * PI * PI)
}

/// The law of `ξ_m` with Laplace transform `cosh(√(2mt))^{−1/m}`.
///
/// `ξ_1 = ∫₀¹W₁² + ∫₀¹W₂²` for independent Wiener processes. Sampling uses
/// the Karhunen–Loève form `ξ_m = Σ_k 2mλ_k G_k` with independent
/// `G_k ~ Gamma(1/m, 1)`, whose transform is
/// `Π_k (1 + 2mλ_k t)^{−1/m} = cosh(√(2mt))^{−1/m}`. The series is cut
/// after `K` terms and the mean of the dropped part, `Σ_{k>K} 2λ_k`, is
/// added as a constant. Mean 1, variance `2m/3`.
#[derive(Debug, Clone, Serialize)]
pub struct XiDist {
    m: u32,
    kl_terms: usize,
    #[serde(skip)]
    weights: Vec<f64>,
    tail_mean: f64,
    #[serde(skip)]
    gamma: Option<Gamma<f64>>,
}

impl XiDist {
    pub fn new(m: u32) -> Result<Self> {
        Self::with_terms(m, DEFAULT_KL_TERMS)
    }

    pub fn with_terms(m: u32, kl_terms: usize) -> Result<Self> {
        if m == 0 || m > MAX_XI_M {
            return domain(format!("ξ_m is supported for 1 ≤ m ≤ {MAX_XI_M}, got {m}"));
        }
        if kl_terms == 0 {
            return domain("at least one Karhunen–Loève term is needed");
        }
        let mf = m as f64;
        let weights: Vec<f64> = (1..=kl_terms).map(|k| 2.0 * mf * kl_eigenvalue(k)).collect();
        // Σ_k 2λ_k = 1, so the dropped mean is 1 − Σ_{k≤K} 2λ_k.
        let kept: f64 = (1..=kl_terms).map(|k| 2.0 * kl_eigenvalue(k)).sum();
        let gamma = (m > 1).then(|| Gamma::new(1.0 / mf, 1.0).expect("valid gamma shape"));
        Ok(Self {
            m,
            kl_terms,
            weights,
            tail_mean: 1.0 - kept,
            gamma,
        })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn kl_terms(&self) -> usize {
        self.kl_terms
    }

    pub fn tail_mean(&self) -> f64 {
        self.tail_mean
    }

    pub fn mean(&self) -> f64 {
        1.0
    }

    pub fn variance(&self) -> f64 {
        2.0 * self.m as f64 / 3.0
    }

    fn family(&self) -> NuFamily {
        NuFamily::chebyshev_m(self.m).expect("m ≥ 1")
    }

    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        let mut acc = self.tail_mean;
        match &self.gamma {
            None => {
                for w in &self.weights {
                    let e: f64 = Exp1.sample(rng);
                    acc += w * e;
                }
            }
            Some(g) => {
                for w in &self.weights {
                    acc += w * g.sample(rng);
                }
            }
        }
        acc
    }

    /// `E e^{−tξ_m} = cosh(√(2mt))^{−1/m}`.
    pub fn laplace_transform(&self, t: f64) -> f64 {
        self.family().phi_real(t)
    }

    /// Exact Laplace transform of the truncated sampler.
    pub fn truncated_laplace_transform(&self, t: f64) -> f64 {
        let beta = -1.0 / self.m as f64;
        let log: f64 = self.weights.iter().map(|w| (w * t).ln_1p()).sum();
        (beta * log - t * self.tail_mean).exp()
    }

    /// `A(x) = P(ξ_m ≤ x)` by Gaver–Stehfest inversion of `φ(t)/t` at the
    /// default order in double precision, clamped to `[0, 1]`.
    pub fn cdf(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return 0.0;
        }
        let fam = self.family();
        gaver_stehfest(|t: f64| fam.phi_real(t) / t, x, DEFAULT_ORDER)
            .map(|v| v.clamp(0.0, 1.0))
            .unwrap_or(f64::NAN)
    }

    /// `A(x)` inverted in 256-bit arithmetic at a chosen even order up to
    /// 40; slower, far more accurate.
    pub fn cdf_extended(&self, x: f64, order: usize) -> Result<f64> {
        if !(x > 0.0) {
            return Ok(0.0);
        }
        let fam = self.family();
        gaver_stehfest(|t: Extended| fam.phi_real(t.clone()) / t, x, order)
    }
}

/// `A₁(x) = 1 − e^{−x}`, the limit law of `p ν_p` in the geometric scheme.
pub fn geometric_analogue_cdf(x: f64) -> f64 {
    if x > 0.0 {
        -(-x).exp_m1()
    } else {
        0.0
    }
}

/// `(η₁² + η₂²)/2` for independent standard normals: the variable with cdf
/// [`geometric_analogue_cdf`]. The unhalved sum is χ²₂ with mean 2.
pub fn xi1_sample(rng: &mut RngStream) -> f64 {
    let a: f64 = StandardNormal.sample(rng);
    let b: f64 = StandardNormal.sample(rng);
    (a * a + b * b) / 2.0
}

/// `∫₀¹ W²` for one standard Wiener process, via
/// `Σ_k λ_k η_k² + Σ_{k>K} λ_k`. Its Laplace transform is
/// `cosh(√(2t))^{−1/2}`; twice it has the law of `ξ_2`.
#[derive(Debug, Clone)]
pub struct WienerSquareIntegral {
    lambdas: Vec<f64>,
    tail_mean: f64,
}

impl WienerSquareIntegral {
    pub fn new(kl_terms: usize) -> Self {
        let lambdas: Vec<f64> = (1..=kl_terms).map(kl_eigenvalue).collect();
        let tail_mean = 0.5 - lambdas.iter().sum::<f64>();
        Self { lambdas, tail_mean }
    }

    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        self.lambdas.iter().fold(self.tail_mean, |acc, l| {
            let z: f64 = StandardNormal.sample(rng);
            acc + l * z * z
        })
    }

    pub fn laplace_transform(t: f64) -> f64 {
        (2.0 * t).sqrt().cosh().powf(-0.5)
    }
}

impl Default for WienerSquareIntegral {
    fn default() -> Self {
        Self::new(DEFAULT_KL_TERMS)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{ks_statistic, sample_blocks, EmpiricalSample};

    fn draws(xi: &XiDist, n: usize, seed: u64) -> Vec<f64> {
        sample_blocks(n, seed, 0, 8, |r| xi.sample(r))
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(XiDist::new(0).is_err());
        assert!(XiDist::new(MAX_XI_M + 1).is_err());
        assert!(XiDist::with_terms(1, 0).is_err());
    }

    #[test]
    fn tail_mean_is_exact() {
        let xi = XiDist::new(1).unwrap();
        // Σ_{k>200} 2/((k−½)²π²) ≈ 2/(200π²)
        assert!((xi.tail_mean() - 2.0 / (200.0 * PI * PI)).abs() < 1e-6);
        let total: f64 = xi.weights.iter().sum::<f64>() + xi.tail_mean();
        assert!((total - 1.0).abs() < 1e-14);
    }

    #[test]
    fn truncated_transform_is_close() {
        for m in 1..=3 {
            let xi = XiDist::new(m).unwrap();
            for t in [0.5, 1.0, 2.0, 4.0] {
                assert!((xi.truncated_laplace_transform(t) - xi.laplace_transform(t)).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn moments_and_transform() {
        let xi = XiDist::new(1).unwrap();
        let v = draws(&xi, 1_000_000, 21);
        let s = EmpiricalSample::new(v.clone()).unwrap();
        assert!((s.mean() - 1.0).abs() < 0.004, "{}", s.mean());
        assert!((s.variance() - 2.0 / 3.0).abs() < 0.01, "{}", s.variance());
        let lt = v.iter().map(|x| (-x).exp()).sum::<f64>() / v.len() as f64;
        assert!((lt - 1.0 / 2f64.sqrt().cosh()).abs() < 0.002, "{lt}");
    }

    #[test]
    fn general_m_moments() {
        for m in [2, 3] {
            let xi = XiDist::new(m).unwrap();
            let v = draws(&xi, 200_000, 22 + m as u64);
            let s = EmpiricalSample::new(v).unwrap();
            let sd = (xi.variance() / s.len() as f64).sqrt();
            assert!((s.mean() - 1.0).abs() < 4.0 * sd, "m={m}: {}", s.mean());
        }
    }

    #[test]
    fn cdf_properties() {
        let xi = XiDist::new(1).unwrap();
        assert_eq!(xi.cdf(0.0), 0.0);
        assert_eq!(xi.cdf(-1.0), 0.0);
        assert!(xi.cdf(1e-3) < 1e-6);
        assert!(xi.cdf(10.0) >= 0.99);
        let mut prev = 0.0;
        for i in 1..=100 {
            let c = xi.cdf(0.05 * i as f64);
            assert!(c + 1e-9 >= prev);
            prev = c;
        }
        // ∫ (1 − A) = E ξ = 1
        let h = 0.01;
        let mean: f64 = (0..2000).map(|i| (1.0 - xi.cdf(h * (i as f64 + 0.5))) * h).sum();
        assert!((mean - 1.0).abs() < 1e-3, "{mean}");
    }

    #[test]
    fn cdf_agrees_with_extended_inversion() {
        let xi = XiDist::new(1).unwrap();
        for x in [0.3, 1.0, 2.5] {
            let a = xi.cdf(x);
            let b = xi.cdf_extended(x, 30).unwrap();
            assert!((a - b).abs() < 1e-4, "x={x}: {a} vs {b}");
        }
    }

    #[test]
    fn halved_chi_square_is_the_geometric_analogue() {
        let n = 100_000;
        let v = sample_blocks(n, 31, 0, 4, xi1_sample);
        let halved = EmpiricalSample::new(v.clone()).unwrap();
        assert!(ks_statistic(&halved, geometric_analogue_cdf) < 0.0163);
        let full = EmpiricalSample::new(v.iter().map(|x| 2.0 * x).collect()).unwrap();
        assert!(ks_statistic(&full, geometric_analogue_cdf) > 0.1);
        assert_eq!(geometric_analogue_cdf(0.0), 0.0);
        assert!((geometric_analogue_cdf(2f64.ln()) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn wiener_integral_transform() {
        let w = WienerSquareIntegral::default();
        let v = sample_blocks(400_000, 41, 0, 4, |r| w.sample(r));
        for t in [0.5, 1.0, 2.0] {
            let lt = v.iter().map(|x| (-t * x).exp()).sum::<f64>() / v.len() as f64;
            let exact = WienerSquareIntegral::laplace_transform(t);
            let sd = ((WienerSquareIntegral::laplace_transform(2.0 * t) - exact * exact) / v.len() as f64).sqrt();
            assert!((lt - exact).abs() < 4.0 * sd, "t={t}: {lt} vs {exact}");
        }
    }
}
