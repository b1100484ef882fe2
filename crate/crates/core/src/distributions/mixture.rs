use rand_distr::{Distribution, Exp1, Gamma, StandardNormal};

use super::stable::SymmetricStable;
use super::xi::{XiDist, MAX_XI_M};
use crate::error::{domain, Error, Result};
use crate::families::{FamilyKind, NuFamily};
use crate::numerics::RngStream;

/// Positive mixing variable `M` with `E e^{−tM} = φ(t)`.
#[derive(Debug, Clone)]
pub enum MixingLaw {
    /// `M = 1` (deterministic scheme).
    Unit,
    /// Standard exponential (geometric scheme).
    Exponential,
    /// `m · Gamma(1/m, 1)` (melamed scheme).
    ScaledGamma { m: u32, gamma: Gamma<f64> },
    /// `ξ_m` (Chebyshev schemes).
    Xi(XiDist),
}

impl MixingLaw {
    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        match self {
            MixingLaw::Unit => 1.0,
            MixingLaw::Exponential => Exp1.sample(rng),
            MixingLaw::ScaledGamma { m, gamma } => *m as f64 * gamma.sample(rng),
            MixingLaw::Xi(xi) => xi.sample(rng),
        }
    }
}

/// The mixing law whose Laplace transform is the family's `φ`.
pub fn mixing_law(family: &NuFamily) -> Result<MixingLaw> {
    let m = family.m();
    Ok(match family.kind() {
        FamilyKind::Deterministic => MixingLaw::Unit,
        FamilyKind::Geometric => MixingLaw::Exponential,
        FamilyKind::Melamed if m == 1 => MixingLaw::Exponential,
        FamilyKind::Melamed => MixingLaw::ScaledGamma {
            m,
            gamma: Gamma::new(1.0 / m as f64, 1.0).expect("valid gamma shape"),
        },
        FamilyKind::Chebyshev => MixingLaw::Xi(XiDist::new(1)?),
        FamilyKind::ChebyshevM if m <= MAX_XI_M => MixingLaw::Xi(XiDist::new(m)?),
        FamilyKind::ChebyshevM => {
            return Err(Error::Unsupported(format!(
                "no mixing sampler for {family}; m ≤ {MAX_XI_M} is supported"
            )))
        }
    })
}

/// Strictly ν-normal law with characteristic function `φ(a t²)`, sampled
/// as `√(2aM) Z`.
#[derive(Debug, Clone)]
pub struct NuNormal {
    law: MixingLaw,
    a: f64,
}

impl NuNormal {
    pub fn new(family: &NuFamily, a: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return domain(format!("scale a must be positive, got {a}"));
        }
        Ok(Self {
            law: mixing_law(family)?,
            a,
        })
    }

    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        let m = self.law.sample(rng);
        let z: f64 = StandardNormal.sample(rng);
        (2.0 * self.a * m).sqrt() * z
    }
}

/// Strictly ν-stable law with characteristic function `φ(c|t|^α)`, sampled
/// as `M^{1/α} S` with `S` symmetric stable, `E e^{itS} = exp(−c|t|^α)`.
#[derive(Debug, Clone)]
pub struct NuStable {
    law: MixingLaw,
    stable: SymmetricStable,
}

impl NuStable {
    pub fn new(family: &NuFamily, alpha: f64, c: f64) -> Result<Self> {
        Ok(Self {
            stable: SymmetricStable::new(alpha, c)?,
            law: mixing_law(family)?,
        })
    }

    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        let m = self.law.sample(rng);
        m.powf(1.0 / self.stable.alpha()) * self.stable.sample(rng)
    }
}

pub fn nu_normal_sample(family: &NuFamily, a: f64, rng: &mut RngStream) -> Result<f64> {
    Ok(NuNormal::new(family, a)?.sample(rng))
}

pub fn nu_stable_sample(family: &NuFamily, alpha: f64, c: f64, rng: &mut RngStream) -> Result<f64> {
    Ok(NuStable::new(family, alpha, c)?.sample(rng))
}

/// Laplace law with characteristic function `1/(1 + b² t²)`: the ν-normal
/// law of the geometric scheme with `a = b²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceDist {
    b: f64,
}

impl LaplaceDist {
    pub fn new(b: f64) -> Result<Self> {
        if b > 0.0 && b.is_finite() {
            Ok(Self { b })
        } else {
            domain(format!("Laplace scale must be positive, got {b}"))
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            0.5 * (x / self.b).exp()
        } else {
            1.0 - 0.5 * (-x / self.b).exp()
        }
    }

    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        let e: f64 = Exp1.sample(rng);
        let sign = if rand::Rng::random::<bool>(rng) { 1.0 } else { -1.0 };
        sign * self.b * e
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::SechDist;
    use crate::numerics::{empirical_chf, ks_statistic, sample_blocks, EmpiricalSample};

    fn families() -> Vec<NuFamily> {
        vec![
            NuFamily::deterministic(),
            NuFamily::geometric(),
            NuFamily::chebyshev(),
            NuFamily::melamed(2).unwrap(),
            NuFamily::chebyshev_m(2).unwrap(),
        ]
    }

    #[test]
    fn chebyshev_normal_is_sech() {
        let a = 0.5;
        let d = NuNormal::new(&NuFamily::chebyshev(), a).unwrap();
        let v = sample_blocks(100_000, 7, 0, 4, |r| d.sample(r));
        let s = EmpiricalSample::new(v).unwrap();
        let sech = SechDist::new((2.0 * a).sqrt()).unwrap();
        assert!(ks_statistic(&s, |x| sech.cdf(x)) < 0.0163);
        assert!(s.mean().abs() < 3.0 * (1.0 / s.len() as f64).sqrt());
    }

    #[test]
    fn geometric_normal_is_laplace() {
        let a = 1.5;
        let d = NuNormal::new(&NuFamily::geometric(), a).unwrap();
        let n = 100_000;
        let v = sample_blocks(n, 8, 0, 4, |r| d.sample(r));
        let e = empirical_chf(&v, 1.0);
        assert!((e - 1.0 / (1.0 + a)).abs() < 3.0 / (n as f64).sqrt());
        let s = EmpiricalSample::new(v).unwrap();
        let lap = LaplaceDist::new(a.sqrt()).unwrap();
        assert!(ks_statistic(&s, |x| lap.cdf(x)) < 0.0163);
    }

    #[test]
    fn every_family_matches_its_chf() {
        let n = 100_000;
        for f in families() {
            let normal = NuNormal::new(&f, 0.8).unwrap();
            let v = sample_blocks(n, 9, 0, 4, |r| normal.sample(r));
            let stable = NuStable::new(&f, 1.4, 0.8).unwrap();
            let w = sample_blocks(n, 10, 0, 4, |r| stable.sample(r));
            for t in [0.5, 1.0, 2.0] {
                let band = 3.0 / (n as f64).sqrt();
                assert!((empirical_chf(&v, t) - f.nu_normal_chf(0.8, t).unwrap()).abs() < band, "{f} t={t}");
                assert!((empirical_chf(&w, t) - f.nu_stable_chf(1.4, 0.8, t).unwrap()).abs() < band, "{f} t={t}");
            }
        }
    }

    #[test]
    fn alpha_two_reduces_to_normal() {
        let f = NuFamily::chebyshev();
        let c = 0.6;
        let st = NuStable::new(&f, 2.0, c).unwrap();
        let v = sample_blocks(100_000, 11, 0, 4, |r| st.sample(r));
        let s = EmpiricalSample::new(v).unwrap();
        // φ(c t²) is the sech law with scale √(2c)
        let sech = SechDist::new((2.0 * c).sqrt()).unwrap();
        assert!(ks_statistic(&s, |x| sech.cdf(x)) < 0.0163);
    }

    #[test]
    fn unsupported_and_bad_scale() {
        assert!(matches!(
            mixing_law(&NuFamily::chebyshev_m(9).unwrap()),
            Err(Error::Unsupported(_))
        ));
        assert!(NuNormal::new(&NuFamily::chebyshev(), 0.0).is_err());
        assert!(NuStable::new(&NuFamily::chebyshev(), 2.5, 1.0).is_err());
    }
}
