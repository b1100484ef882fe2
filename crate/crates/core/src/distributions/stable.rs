use std::f64::consts::FRAC_PI_2;

use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::Serialize;

use super::open01;
use crate::error::Result;
use crate::families::check_alpha;
use crate::numerics::RngStream;

/// Symmetric strictly stable law with characteristic function
/// `exp(−c|t|^α)`, `0 < α ≤ 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetricStable {
    alpha: f64,
    c: f64,
}

impl SymmetricStable {
    pub fn new(alpha: f64, c: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if !(c > 0.0) || !c.is_finite() {
            return crate::error::domain(format!("stable scale must be positive, got {c}"));
        }
        Ok(Self { alpha, c })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn chf(&self, t: f64) -> f64 {
        (-self.c * t.abs().powf(self.alpha)).exp()
    }

    /// Chambers–Mallows–Stuck draw:
    /// `sin(αV)/cos(V)^{1/α} · (cos((1−α)V)/W)^{(1−α)/α}` with `V` uniform
    /// on `(−π/2, π/2)` and `W` standard exponential, scaled by `c^{1/α}`.
    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        let a = self.alpha;
        if a == 2.0 {
            let z: f64 = StandardNormal.sample(rng);
            return (2.0 * self.c).sqrt() * z;
        }
        let v = FRAC_PI_2 * (2.0 * open01(rng) - 1.0);
        if a == 1.0 {
            return self.c * v.tan();
        }
        let w: f64 = Exp1.sample(rng);
        let s = (a * v).sin() / v.cos().powf(1.0 / a) * (((1.0 - a) * v).cos() / w).powf((1.0 - a) / a);
        self.c.powf(1.0 / a) * s
    }
}

/// One draw from [`SymmetricStable`].
pub fn stable_sample(alpha: f64, c: f64, rng: &mut RngStream) -> Result<f64> {
    Ok(SymmetricStable::new(alpha, c)?.sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{empirical_chf, sample_blocks, EmpiricalSample};

    fn draws(alpha: f64, c: f64, n: usize, seed: u64) -> Vec<f64> {
        let d = SymmetricStable::new(alpha, c).unwrap();
        sample_blocks(n, seed, 0, 4, |r| d.sample(r))
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(SymmetricStable::new(0.0, 1.0).is_err());
        assert!(SymmetricStable::new(2.1, 1.0).is_err());
        assert!(SymmetricStable::new(1.5, 0.0).is_err());
        let mut r = RngStream::new(0, 0);
        assert!(stable_sample(3.0, 1.0, &mut r).is_err());
    }

    #[test]
    fn gaussian_case() {
        let c = 0.7;
        let n = 100_000;
        let s = EmpiricalSample::new(draws(2.0, c, n, 1)).unwrap();
        // Var of the sample variance of a normal: 2σ⁴/(n−1)
        let band = 3.0 * (2.0 * (2.0 * c) * (2.0 * c) / n as f64).sqrt();
        assert!((s.variance() - 2.0 * c).abs() < band);
    }

    #[test]
    fn cauchy_case() {
        let c = 1.3;
        let n = 100_000;
        let s = EmpiricalSample::new(draws(1.0, c, n, 2)).unwrap();
        let band = 3.0 * (0.25 * 0.75 / n as f64).sqrt();
        assert!((s.ecdf(c) - 0.75).abs() < band);
        assert!(s.median().abs() < 0.02);
    }

    #[test]
    fn general_alpha_chf_and_symmetry() {
        for alpha in [0.5, 1.2, 1.8] {
            let n = 200_000;
            let v = draws(alpha, 0.8, n, 3);
            let d = SymmetricStable::new(alpha, 0.8).unwrap();
            for t in [0.5, 1.0, 2.0] {
                let e = empirical_chf(&v, t);
                assert!((e - d.chf(t)).abs() < 3.0 / (n as f64).sqrt(), "α={alpha} t={t}");
            }
            let s = EmpiricalSample::new(v).unwrap();
            for x in [0.3, 1.0, 3.0] {
                let band = 4.0 * (0.25 / n as f64).sqrt();
                assert!((s.ecdf(x) + s.ecdf(-x) - 1.0).abs() < 2.0 * band);
            }
        }
    }
}
