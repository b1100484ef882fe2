//! The five summation schemes `ν_p` and their Laplace-transform fixed
//! points `φ`.
//!
//! | kind          | `P_p(z)`                                 | `φ(t)`                   | admissible `p` |
//! |---------------|------------------------------------------|--------------------------|----------------|
//! | deterministic | `z^{1/p}`                                | `e^{−t}`                 | `1/n`          |
//! | geometric     | `p z / (1 − (1−p) z)`                    | `1/(1+t)`                | `(0, 1)`       |
//! | chebyshev     | `1 / T_n(1/z)`                           | `1/cosh √(2t)`           | `1/n²`         |
//! | melamed       | `p^{1/m} z (1 − (1−p) z^m)^{−1/m}`       | `(1+mt)^{−1/m}`          | `(0, 1)`       |
//! | chebyshev-m   | `T_n(1/z^m)^{−1/m}`                      | `cosh(√(2mt))^{−1/m}`    | `1/n²`         |
//!
//! Each pair satisfies `φ(t) = P_p(φ(p t))`, `φ(0) = 1`, `φ'(0) = −1`.

mod sampler;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::chebyshev;
use crate::error::{domain, Error, Result};
use crate::numerics::laplace::{gaver_stehfest, DEFAULT_ORDER};
use crate::numerics::Real;

pub use sampler::{sample_nu, NuSampler};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    Deterministic,
    Geometric,
    Chebyshev,
    Melamed,
    ChebyshevM,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 5] = [
        FamilyKind::Deterministic,
        FamilyKind::Geometric,
        FamilyKind::Chebyshev,
        FamilyKind::Melamed,
        FamilyKind::ChebyshevM,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Deterministic => "deterministic",
            FamilyKind::Geometric => "geometric",
            FamilyKind::Chebyshev => "chebyshev",
            FamilyKind::Melamed => "melamed",
            FamilyKind::ChebyshevM => "chebyshev-m",
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown family '{s}'")))
    }
}

/// Admissible parameter set of a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Delta {
    /// `{1/n : n ≥ 1}`
    Reciprocals,
    /// `(0, 1)`
    OpenUnitInterval,
    /// `{1/n² : n ≥ 1}`
    ReciprocalSquares,
}

impl fmt::Display for Delta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Delta::Reciprocals => "p = 1/n, n ≥ 1",
            Delta::OpenUnitInterval => "0 < p < 1",
            Delta::ReciprocalSquares => "p = 1/n², n ≥ 1",
        })
    }
}

/// An admitted parameter. Lattice families carry their integer `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Param {
    p: f64,
    n: Option<u32>,
}

impl Param {
    pub fn p(&self) -> f64 {
        self.p
    }

    /// `n` with `p = 1/n` or `p = 1/n²`; `None` for continuous `Δ`.
    pub fn n(&self) -> Option<u32> {
        self.n
    }

    pub(crate) fn n_unchecked(&self) -> u32 {
        self.n.expect("lattice family parameter carries n")
    }
}

/// A summation scheme: its kind and, for the generalized schemes, the
/// integer `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct NuFamily {
    kind: FamilyKind,
    m: u32,
}

impl fmt::Display for NuFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FamilyKind::Melamed | FamilyKind::ChebyshevM => write!(f, "{}(m={})", self.kind, self.m),
            _ => write!(f, "{}", self.kind),
        }
    }
}

impl NuFamily {
    /// `m` must be 1 except for the melamed and chebyshev-m kinds.
    pub fn new(kind: FamilyKind, m: u32) -> Result<Self> {
        if m == 0 {
            return domain("m must be at least 1");
        }
        if m != 1 && !matches!(kind, FamilyKind::Melamed | FamilyKind::ChebyshevM) {
            return domain(format!("the {kind} family has no parameter m"));
        }
        Ok(Self { kind, m })
    }

    pub fn deterministic() -> Self {
        Self { kind: FamilyKind::Deterministic, m: 1 }
    }

    pub fn geometric() -> Self {
        Self { kind: FamilyKind::Geometric, m: 1 }
    }

    pub fn chebyshev() -> Self {
        Self { kind: FamilyKind::Chebyshev, m: 1 }
    }

    pub fn melamed(m: u32) -> Result<Self> {
        Self::new(FamilyKind::Melamed, m)
    }

    pub fn chebyshev_m(m: u32) -> Result<Self> {
        Self::new(FamilyKind::ChebyshevM, m)
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn delta(&self) -> Delta {
        match self.kind {
            FamilyKind::Deterministic => Delta::Reciprocals,
            FamilyKind::Geometric | FamilyKind::Melamed => Delta::OpenUnitInterval,
            FamilyKind::Chebyshev | FamilyKind::ChebyshevM => Delta::ReciprocalSquares,
        }
    }

    fn inadmissible(&self, p: f64) -> Error {
        Error::Inadmissible {
            family: self.to_string(),
            p,
            delta: self.delta().to_string(),
        }
    }

    /// Checks `p ∈ Δ`. Lattice members are recognised up to a relative
    /// error of `1e−9`, and `p` is then snapped to the exact member.
    pub fn admit(&self, p: f64) -> Result<Param> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(self.inadmissible(p));
        }
        match self.delta() {
            Delta::OpenUnitInterval if p < 1.0 => Ok(Param { p, n: None }),
            Delta::OpenUnitInterval => Err(self.inadmissible(p)),
            Delta::Reciprocals => {
                let n = (1.0 / p).round();
                if (n * p - 1.0).abs() <= 1e-9 && n <= u32::MAX as f64 {
                    self.with_n(n as u32)
                } else {
                    Err(self.inadmissible(p))
                }
            }
            Delta::ReciprocalSquares => {
                let n = (1.0 / p).sqrt().round();
                if (n * n * p - 1.0).abs() <= 1e-9 && n <= u32::MAX as f64 {
                    self.with_n(n as u32)
                } else {
                    Err(self.inadmissible(p))
                }
            }
        }
    }

    /// The lattice member with index `n`: `p = 1/n` or `p = 1/n²`.
    pub fn with_n(&self, n: u32) -> Result<Param> {
        if n == 0 {
            return domain("n must be at least 1");
        }
        let nf = n as f64;
        match self.delta() {
            Delta::Reciprocals => Ok(Param { p: 1.0 / nf, n: Some(n) }),
            Delta::ReciprocalSquares => Ok(Param { p: 1.0 / (nf * nf), n: Some(n) }),
            Delta::OpenUnitInterval => domain(format!("the {self} family is parametrized by p, not n")),
        }
    }

    /// `E[ν_p] = 1/p`.
    pub fn mean(&self, param: &Param) -> f64 {
        1.0 / param.p
    }

    /// `P_p(z)` for `z ∈ [0, 1]`.
    pub fn pgf_eval(&self, param: &Param, z: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&z) {
            return domain(format!("generating function evaluated at z = {z} outside [0, 1]"));
        }
        Ok(self.pgf(param, z))
    }

    /// `P_p(z)` for `0 ≤ z` below the convergence radius, unchecked.
    pub(crate) fn pgf(&self, param: &Param, z: f64) -> f64 {
        let p = param.p;
        let m = self.m as f64;
        if z == 0.0 {
            return 0.0;
        }
        match self.kind {
            FamilyKind::Deterministic => z.powi(param.n_unchecked() as i32),
            FamilyKind::Geometric => p * z / (1.0 - (1.0 - p) * z),
            FamilyKind::Chebyshev => 1.0 / chebyshev::eval(param.n_unchecked() as f64, 1.0 / z),
            FamilyKind::Melamed => p.powf(1.0 / m) * z * (1.0 - (1.0 - p) * z.powf(m)).powf(-1.0 / m),
            FamilyKind::ChebyshevM => {
                chebyshev::eval(param.n_unchecked() as f64, z.powf(-m)).powf(-1.0 / m)
            }
        }
    }

    /// Radius of convergence of `P_p`; infinite for polynomials.
    pub fn radius(&self, param: &Param) -> f64 {
        let p = param.p;
        let m = self.m as f64;
        match self.kind {
            FamilyKind::Deterministic => f64::INFINITY,
            FamilyKind::Geometric => 1.0 / (1.0 - p),
            FamilyKind::Melamed => (1.0 - p).powf(-1.0 / m),
            FamilyKind::Chebyshev | FamilyKind::ChebyshevM => {
                let r = chebyshev::largest_root(param.n_unchecked());
                if r <= 0.0 {
                    f64::INFINITY
                } else {
                    r.powf(-1.0 / m)
                }
            }
        }
    }

    /// Decay rate of `p_k` per unit `k`: the reciprocal convergence radius.
    pub fn tail_rate(&self, param: &Param) -> f64 {
        1.0 / self.radius(param)
    }

    /// Largest value of `ν_p` when it is bounded.
    pub fn max_support(&self, param: &Param) -> Option<usize> {
        match self.kind {
            FamilyKind::Deterministic => param.n.map(|n| n as usize),
            FamilyKind::Chebyshev | FamilyKind::ChebyshevM if param.n == Some(1) => Some(1),
            _ => None,
        }
    }

    /// Smallest value of `ν_p`.
    pub fn min_support(&self, param: &Param) -> usize {
        match self.kind {
            FamilyKind::Geometric | FamilyKind::Melamed => 1,
            _ => param.n_unchecked() as usize,
        }
    }

    /// Lattice span of the support of `ν_p`.
    pub fn lattice_step(&self, _param: &Param) -> usize {
        match self.kind {
            FamilyKind::Deterministic | FamilyKind::Geometric => 1,
            FamilyKind::Melamed => self.m as usize,
            FamilyKind::Chebyshev => 2,
            FamilyKind::ChebyshevM => 2 * self.m as usize,
        }
    }

    /// `φ(t)`, the Laplace transform of the limit law of `p ν_p`.
    pub fn phi(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return domain(format!("φ needs t ≥ 0, got {t}"));
        }
        Ok(self.phi_real(t))
    }

    /// `φ` in any [`Real`] type, unchecked. Used for Laplace inversion in
    /// extended precision.
    pub fn phi_real<R: Real>(&self, t: R) -> R {
        let one = R::from_f64(1.0);
        let m = R::from_f64(self.m as f64);
        match self.kind {
            FamilyKind::Deterministic => (-t).exp(),
            FamilyKind::Geometric => (one + t).recip(),
            FamilyKind::Chebyshev => (R::from_f64(2.0) * t).sqrt().cosh().recip(),
            FamilyKind::Melamed => (one + m.clone() * t).powf(&(-m.recip())),
            FamilyKind::ChebyshevM => {
                let c = (R::from_f64(2.0) * m.clone() * t).sqrt().cosh();
                if self.m == 1 {
                    c.recip()
                } else {
                    c.powf(&(-m.recip()))
                }
            }
        }
    }

    /// `P(Y ≤ x)` for the limit `Y` of `p ν_p`, whose Laplace transform is
    /// `φ`. Closed forms for the deterministic, geometric and melamed (gamma)
    /// schemes, Gaver–Stehfest inversion of `φ(t)/t` otherwise.
    pub fn limit_cdf(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return 0.0;
        }
        match self.kind {
            FamilyKind::Deterministic => {
                if x >= 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
            FamilyKind::Geometric => -(-x).exp_m1(),
            FamilyKind::Melamed => {
                let m = f64::from(self.m);
                statrs::function::gamma::gamma_lr(1.0 / m, x / m)
            }
            _ => gaver_stehfest(|t: f64| self.phi_real(t) / t, x, DEFAULT_ORDER)
                .map(|v| v.clamp(0.0, 1.0))
                .unwrap_or(f64::NAN),
        }
    }

    /// Characteristic function `φ(a t²)` of the strictly ν-normal law with
    /// scale `a`.
    pub fn nu_normal_chf(&self, a: f64, t: f64) -> Result<f64> {
        if !(a > 0.0) || !a.is_finite() {
            return domain(format!("scale a must be positive, got {a}"));
        }
        Ok(self.phi_real(a * t * t))
    }

    /// Characteristic function `φ(c |t|^α)` of the strictly ν-stable law
    /// built on the symmetric stable law `exp(−c|t|^α)`.
    pub fn nu_stable_chf(&self, alpha: f64, c: f64, t: f64) -> Result<f64> {
        check_alpha(alpha)?;
        if !(c > 0.0) || !c.is_finite() {
            return domain(format!("scale c must be positive, got {c}"));
        }
        Ok(self.phi_real(c * t.abs().powf(alpha)))
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 2.0 {
        Ok(())
    } else {
        domain(format!("stability index must lie in (0, 2], got {alpha}"))
    }
}

/// Right derivative of `f` at 0 from one-sided differences at
/// `h = 1e−4, 1e−5, 1e−6`, Richardson-extrapolated.
pub fn right_derivative_at_zero(f: impl Fn(f64) -> f64) -> f64 {
    let f0 = f(0.0);
    let d = |h: f64| (f(h) - f0) / h;
    let r1 = (10.0 * d(1e-5) - d(1e-4)) / 9.0;
    let r2 = (10.0 * d(1e-6) - d(1e-5)) / 9.0;
    (10.0 * r2 - r1) / 9.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::expand_series;
    use approx::assert_abs_diff_eq;

    fn all_members() -> Vec<(NuFamily, Param)> {
        let mut v = Vec::new();
        for n in [1, 2, 3, 7] {
            let f = NuFamily::deterministic();
            v.push((f, f.with_n(n).unwrap()));
        }
        for p in [0.1, 0.5, 0.9] {
            let f = NuFamily::geometric();
            v.push((f, f.admit(p).unwrap()));
            for m in 1..=3 {
                let f = NuFamily::melamed(m).unwrap();
                v.push((f, f.admit(p).unwrap()));
            }
        }
        for n in [1, 2, 3, 5, 10] {
            let f = NuFamily::chebyshev();
            v.push((f, f.with_n(n).unwrap()));
            for m in 1..=3 {
                let f = NuFamily::chebyshev_m(m).unwrap();
                v.push((f, f.with_n(n).unwrap()));
            }
        }
        v
    }

    #[test]
    fn normalization() {
        for (f, p) in all_members() {
            assert_abs_diff_eq!(f.pgf_eval(&p, 1.0).unwrap(), 1.0, epsilon = 1e-14);
            assert_eq!(f.pgf_eval(&p, 0.0).unwrap(), 0.0);
            assert!(f.pgf_eval(&p, 1.5).is_err());
        }
    }

    #[test]
    fn pgf_examples() {
        let f = NuFamily::chebyshev();
        let v = f.pgf_eval(&f.admit(0.25).unwrap(), 0.5).unwrap();
        assert_abs_diff_eq!(v, 0.25 / 1.75, epsilon = 1e-15);
        let f = NuFamily::geometric();
        let v = f.pgf_eval(&f.admit(0.5).unwrap(), 0.5).unwrap();
        assert_abs_diff_eq!(v, 1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn phi_examples() {
        for kind in FamilyKind::ALL {
            let f = NuFamily::new(kind, 1).unwrap();
            assert_eq!(f.phi(0.0).unwrap(), 1.0);
            assert!(f.phi(-0.1).is_err());
        }
        assert_abs_diff_eq!(NuFamily::chebyshev().phi(0.5).unwrap(), 1.0 / 1f64.cosh(), epsilon = 1e-15);
        assert_abs_diff_eq!(
            NuFamily::melamed(2).unwrap().phi(1.0).unwrap(),
            3f64.powf(-0.5),
            epsilon = 1e-15
        );
    }

    #[test]
    fn functional_equation() {
        for (f, p) in all_members() {
            for i in 0..=100 {
                let t = 0.1 * i as f64;
                let lhs = f.phi(t).unwrap();
                let rhs = f.pgf_eval(&p, f.phi(p.p() * t).unwrap()).unwrap();
                assert!((lhs - rhs).abs() <= 1e-10, "{f} p={} t={t}: {lhs} vs {rhs}", p.p());
            }
        }
    }

    #[test]
    fn phi_slope_at_zero() {
        for (f, _) in all_members() {
            let d = right_derivative_at_zero(|t| f.phi(t).unwrap());
            assert!((d + 1.0).abs() <= 1e-6, "{f}: {d}");
        }
    }

    #[test]
    fn pgf_matches_series() {
        for (f, p) in all_members() {
            let s = expand_series(&f, &p, 1200).unwrap();
            for i in 1..=9 {
                let z = 0.1 * i as f64;
                let a = f.pgf_eval(&p, z).unwrap();
                assert!((a - s.eval(z)).abs() <= 1e-10, "{f} p={} z={z}", p.p());
            }
        }
    }

    #[test]
    fn m_one_reductions() {
        let g = NuFamily::geometric();
        let mel = NuFamily::melamed(1).unwrap();
        let c = NuFamily::chebyshev();
        let cm = NuFamily::chebyshev_m(1).unwrap();
        for i in 0..=50 {
            let t = 0.2 * i as f64;
            assert!((g.phi(t).unwrap() - mel.phi(t).unwrap()).abs() <= 1e-12);
            assert!((c.phi(t).unwrap() - cm.phi(t).unwrap()).abs() <= 1e-12);
            let z = i as f64 / 50.0;
            let (pg, pm) = (g.admit(0.3).unwrap(), mel.admit(0.3).unwrap());
            assert!((g.pgf_eval(&pg, z).unwrap() - mel.pgf_eval(&pm, z).unwrap()).abs() <= 1e-12);
            let (pc, pcm) = (c.with_n(4).unwrap(), cm.with_n(4).unwrap());
            assert!((c.pgf_eval(&pc, z).unwrap() - cm.pgf_eval(&pcm, z).unwrap()).abs() <= 1e-12);
        }
    }

    #[test]
    fn admissibility() {
        let c = NuFamily::chebyshev();
        assert_eq!(c.admit(0.25).unwrap().n(), Some(2));
        assert_eq!(c.admit(1.0 / 9.0).unwrap().n(), Some(3));
        assert!(matches!(c.admit(0.3), Err(Error::Inadmissible { .. })));
        let d = NuFamily::deterministic();
        assert_eq!(d.admit(0.2).unwrap().n(), Some(5));
        assert!(d.admit(0.3).is_err());
        let g = NuFamily::geometric();
        assert!(g.admit(1.0).is_err());
        assert!(g.admit(0.0).is_err());
        assert!(g.admit(f64::NAN).is_err());
        assert!(g.with_n(3).is_err());
        assert!(NuFamily::new(FamilyKind::Chebyshev, 2).is_err());
        assert!(NuFamily::melamed(0).is_err());
        assert_eq!("chebyshev-m".parse::<FamilyKind>().unwrap(), FamilyKind::ChebyshevM);
        assert!("cauchy".parse::<FamilyKind>().is_err());
    }

    #[test]
    fn limit_cdfs() {
        let xi = crate::distributions::XiDist::new(1).unwrap();
        for x in [0.2, 1.0, 3.0] {
            assert_eq!(NuFamily::chebyshev().limit_cdf(x), xi.cdf(x));
            let mel = NuFamily::melamed(1).unwrap().limit_cdf(x);
            assert_abs_diff_eq!(mel, NuFamily::geometric().limit_cdf(x), epsilon = 1e-15);
            let gs = gaver_stehfest(|t: f64| NuFamily::melamed(3).unwrap().phi_real(t) / t, x, DEFAULT_ORDER).unwrap();
            assert!((NuFamily::melamed(3).unwrap().limit_cdf(x) - gs).abs() < 1e-4);
        }
        assert_eq!(NuFamily::deterministic().limit_cdf(0.99), 0.0);
        assert_eq!(NuFamily::deterministic().limit_cdf(1.0), 1.0);
        assert_eq!(NuFamily::geometric().limit_cdf(-1.0), 0.0);
    }

    #[test]
    fn chf_examples() {
        let c = NuFamily::chebyshev();
        assert_eq!(c.nu_normal_chf(1.0, 0.0).unwrap(), 1.0);
        assert_abs_diff_eq!(c.nu_normal_chf(0.5, 1.0).unwrap(), 1.0 / 1f64.cosh(), epsilon = 1e-15);
        let g = NuFamily::geometric();
        assert_abs_diff_eq!(g.nu_normal_chf(1.0, 2.0).unwrap(), 0.2, epsilon = 1e-15);
        assert!(g.nu_normal_chf(0.0, 1.0).is_err());
        for (f, _) in all_members() {
            for i in 0..40 {
                let t = 0.25 * i as f64;
                assert_eq!(f.nu_normal_chf(0.7, t).unwrap(), f.nu_normal_chf(0.7, -t).unwrap());
                let s = f.nu_stable_chf(1.3, 0.7, t).unwrap();
                assert_eq!(s, f.nu_stable_chf(1.3, 0.7, -t).unwrap());
                assert!((0.0..=1.0).contains(&s));
            }
            assert_eq!(f.nu_stable_chf(0.5, 1.0, 0.0).unwrap(), 1.0);
        }
        assert!(c.nu_stable_chf(2.5, 1.0, 1.0).is_err());
        assert!(c.nu_stable_chf(0.0, 1.0, 1.0).is_err());
        assert!(c.nu_stable_chf(1.0, -1.0, 1.0).is_err());
    }
}
