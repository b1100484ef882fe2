use std::f64::consts::{FRAC_2_PI, PI};

use serde::Serialize;

use super::open01;
use crate::error::{domain, Result};
use crate::numerics::RngStream;

/// Hyperbolic secant law with characteristic function `1/cosh(a t)`.
///
/// Density `(1/(2a)) sech(πx/(2a))`, cdf `(2/π) atan(exp(πx/(2a)))`. The
/// standard law `a = 1` has density `½ sech(πx/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SechDist {
    a: f64,
}

impl SechDist {
    pub fn new(a: f64) -> Result<Self> {
        if a > 0.0 && a.is_finite() {
            Ok(Self { a })
        } else {
            domain(format!("sech scale must be positive, got {a}"))
        }
    }

    pub fn standard() -> Self {
        Self { a: 1.0 }
    }

    pub fn scale(&self) -> f64 {
        self.a
    }

    pub fn pdf(&self, x: f64) -> f64 {
        let y = PI * x / (2.0 * self.a);
        1.0 / (2.0 * self.a * y.cosh())
    }

    pub fn cdf(&self, x: f64) -> f64 {
        FRAC_2_PI * (PI * x / (2.0 * self.a)).exp().atan()
    }

    /// `a (2/π) ln tan(πu/2)`.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return domain(format!("quantile needs 0 < u < 1, got {u}"));
        }
        Ok(self.quantile_unchecked(u))
    }

    fn quantile_unchecked(&self, u: f64) -> f64 {
        self.a * FRAC_2_PI * (PI * u / 2.0).tan().ln()
    }

    pub fn chf(&self, t: f64) -> f64 {
        1.0 / (self.a * t).cosh()
    }

    /// Inverse-cdf draw.
    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        self.quantile_unchecked(open01(rng))
    }

    pub fn variance(&self) -> f64 {
        self.a * self.a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{ks_statistic, sample_blocks, EmpiricalSample};
    use approx::assert_abs_diff_eq;

    fn simpson(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
        let h = (hi - lo) / n as f64;
        let mut s = f(lo) + f(hi);
        for i in 1..n {
            s += f(lo + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn examples() {
        let s = SechDist::standard();
        assert_eq!(s.pdf(0.0), 0.5);
        assert_eq!(SechDist::new(2.0).unwrap().pdf(0.0), 0.25);
        assert_abs_diff_eq!(s.cdf(0.0), 0.5, epsilon = 1e-16);
        assert_abs_diff_eq!(s.cdf(0.561099), 0.75, epsilon = 1e-6);
        let q = s.quantile(0.75).unwrap();
        assert_abs_diff_eq!(q, FRAC_2_PI * (1.0 + 2f64.sqrt()).ln(), epsilon = 1e-15);
        assert_abs_diff_eq!(s.quantile(0.5).unwrap(), 0.0, epsilon = 1e-16);
        assert!(s.quantile(0.0).is_err());
        assert!(s.quantile(1.0).is_err());
        assert!(SechDist::new(0.0).is_err());
        assert_eq!(s.cdf(-1e3), 0.0);
        assert_eq!(s.cdf(1e3), 1.0);
    }

    #[test]
    fn normalization_and_monotonicity() {
        for a in [0.5, 1.0, 2.0] {
            let d = SechDist::new(a).unwrap();
            let mass = simpson(|x| d.pdf(x), -50.0, 50.0, 20_000);
            assert!((mass - 1.0).abs() <= 1e-10, "a={a}: {mass}");
            let mut prev = 0.0;
            for i in -400..=400 {
                let c = d.cdf(i as f64 * 0.05);
                assert!(c >= prev);
                prev = c;
            }
        }
    }

    #[test]
    fn quantile_roundtrip_and_symmetry() {
        let d = SechDist::new(1.7).unwrap();
        for i in 1..1000 {
            let u = i as f64 / 1000.0;
            let x = d.quantile(u).unwrap();
            assert!((d.cdf(x) - u).abs() <= 1e-12);
            assert!((d.quantile(1.0 - u).unwrap() + x).abs() <= 1e-12);
        }
    }

    #[test]
    fn fourier_transform_of_density() {
        for a in [1.0, 0.6] {
            let d = SechDist::new(a).unwrap();
            for i in 0..=20 {
                let t = 0.25 * i as f64;
                let ft = 2.0 * simpson(|x| d.pdf(x) * (t * x).cos(), 0.0, 60.0 * a, 60_000);
                assert!((ft - d.chf(t)).abs() <= 1e-6, "a={a} t={t}: {ft}");
            }
        }
    }

    #[test]
    fn sampler_fits() {
        let d = SechDist::standard();
        let v = sample_blocks(100_000, 3, 0, 4, |r| d.sample(r));
        let s = EmpiricalSample::new(v).unwrap();
        assert!(s.median().abs() < 0.02);
        assert!(ks_statistic(&s, |x| d.cdf(x)) < 0.0163);
    }

    #[test]
    fn sign_flip_is_symmetric() {
        let d = SechDist::standard();
        let mut r = RngStream::new(5, 0);
        let us: Vec<f64> = (0..1000).map(|_| open01(&mut r)).collect();
        for u in us {
            let a = d.quantile(u).unwrap();
            let b = d.quantile(1.0 - u).unwrap();
            assert!((a + b).abs() < 1e-12);
        }
    }
}
