use rand::Rng;
use rand_distr::{Distribution, Gamma, Poisson};

use super::{FamilyKind, NuFamily, Param};
use crate::error::Result;
use crate::numerics::RngStream;
use crate::series::expand_pgf;

/// Reusable sampler for `ν_p`.
///
/// Closed forms for the deterministic, geometric and melamed schemes;
/// inverse-cdf lookup in the probability table for the Chebyshev schemes.
/// A uniform landing in the table's tail mass (below `1e−10`) is mapped to
/// a geometric tail beyond the table, with the rate fitted to the last
/// table entries.
#[derive(Debug, Clone)]
pub enum NuSampler {
    Fixed(u64),
    Geometric { log_q: f64 },
    Melamed { m: u64, mixing: Gamma<f64> },
    Table(TableSampler),
}

#[derive(Debug, Clone)]
pub struct TableSampler {
    /// `P(ν ≤ start + i step)` on the support lattice.
    cdf: Vec<f64>,
    start: u64,
    step: u64,
    /// `ln` of the decay rate per lattice step beyond the table.
    log_tail: f64,
}

impl NuSampler {
    pub fn new(family: &NuFamily, param: &Param) -> Result<Self> {
        let p = param.p();
        Ok(match family.kind() {
            FamilyKind::Deterministic => NuSampler::Fixed(param.n_unchecked() as u64),
            FamilyKind::Geometric => NuSampler::Geometric { log_q: (1.0 - p).ln() },
            FamilyKind::Melamed if family.m() == 1 => NuSampler::Geometric { log_q: (1.0 - p).ln() },
            FamilyKind::Melamed => {
                let r = 1.0 / family.m() as f64;
                NuSampler::Melamed {
                    m: family.m() as u64,
                    mixing: Gamma::new(r, (1.0 - p) / p).expect("valid gamma parameters"),
                }
            }
            FamilyKind::Chebyshev | FamilyKind::ChebyshevM => {
                if param.n() == Some(1) {
                    return Ok(NuSampler::Fixed(1));
                }
                let pmf = expand_pgf(family, param, None)?;
                let (start, step) = (pmf.support_start(), pmf.step());
                let mut acc = 0.0;
                let cdf: Vec<f64> = pmf
                    .probs()
                    .iter()
                    .skip(start)
                    .step_by(step)
                    .map(|&q| {
                        acc += q;
                        acc
                    })
                    .collect();
                let rate = pmf
                    .fitted_tail_rate()
                    .unwrap_or_else(|| family.tail_rate(param));
                NuSampler::Table(TableSampler {
                    cdf,
                    start: start as u64,
                    step: step as u64,
                    log_tail: step as f64 * rate.ln(),
                })
            }
        })
    }

    pub fn sample(&self, rng: &mut RngStream) -> u64 {
        match self {
            NuSampler::Fixed(n) => *n,
            NuSampler::Geometric { log_q } => {
                // P(ν > k) = q^k
                let u: f64 = 1.0 - rng.random::<f64>();
                1 + (u.ln() / log_q).floor() as u64
            }
            NuSampler::Melamed { m, mixing } => {
                // ν = 1 + m N with N negative binomial of shape 1/m, drawn as
                // a gamma-mixed Poisson count.
                let lambda = mixing.sample(rng);
                let count = if lambda > 0.0 {
                    Poisson::new(lambda).map(|d| d.sample(rng) as u64).unwrap_or(0)
                } else {
                    0
                };
                1 + m * count
            }
            NuSampler::Table(t) => t.sample(rng),
        }
    }
}

impl TableSampler {
    fn sample(&self, rng: &mut RngStream) -> u64 {
        let u: f64 = rng.random();
        let i = self.cdf.partition_point(|&c| c <= u);
        if i < self.cdf.len() {
            return self.start + self.step * i as u64;
        }
        let v: f64 = 1.0 - rng.random::<f64>();
        let extra = 1 + (v.ln() / self.log_tail).floor() as u64;
        self.start + self.step * (self.cdf.len() as u64 - 1 + extra)
    }
}

/// One draw of `ν_p`. Builds the sampler on every call; reuse a
/// [`NuSampler`] for repeated draws.
pub fn sample_nu(family: &NuFamily, param: &Param, rng: &mut RngStream) -> Result<u64> {
    Ok(NuSampler::new(family, param)?.sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::sample_blocks;

    fn draws(family: &NuFamily, param: &Param, n: usize, seed: u64) -> Vec<u64> {
        let s = NuSampler::new(family, param).unwrap();
        sample_blocks(n, seed, 0, 4, |r| s.sample(r))
    }

    #[test]
    fn deterministic_is_constant() {
        let f = NuFamily::deterministic();
        let p = f.admit(1.0 / 7.0).unwrap();
        let mut rng = RngStream::new(1, 0);
        for _ in 0..100 {
            assert_eq!(sample_nu(&f, &p, &mut rng).unwrap(), 7);
        }
    }

    #[test]
    fn chebyshev_mean() {
        let f = NuFamily::chebyshev();
        let v = draws(&f, &f.admit(0.25).unwrap(), 1_000_000, 11);
        let mean = v.iter().sum::<u64>() as f64 / v.len() as f64;
        assert!((mean - 4.0).abs() < 0.02, "{mean}");
        assert!(v.iter().all(|&k| k >= 2 && k % 2 == 0));
    }

    #[test]
    fn geometric_first_atom() {
        let f = NuFamily::geometric();
        let v = draws(&f, &f.admit(0.2).unwrap(), 1_000_000, 12);
        let ones = v.iter().filter(|&&k| k == 1).count() as f64 / v.len() as f64;
        assert!((ones - 0.2).abs() < 0.0013, "{ones}");
    }

    #[test]
    fn melamed_matches_table() {
        let f = NuFamily::melamed(2).unwrap();
        let p = f.admit(0.3).unwrap();
        let pmf = expand_pgf(&f, &p, None).unwrap();
        let n = 400_000;
        let v = draws(&f, &p, n, 13);
        let mean = v.iter().sum::<u64>() as f64 / n as f64;
        // Var ν = 2(1−p)/p² for m = 2 (4 · var of NB with shape 1/2)
        let sd = (2.0 * 0.7 / 0.09f64).sqrt();
        assert!((mean - 1.0 / 0.3).abs() < 4.0 * sd / (n as f64).sqrt(), "{mean}");
        for k in [1usize, 3, 5, 9] {
            let freq = v.iter().filter(|&&x| x == k as u64).count() as f64 / n as f64;
            let q = pmf.prob(k);
            assert!((freq - q).abs() < 4.0 * (q * (1.0 - q) / n as f64).sqrt(), "k={k}");
        }
        assert!(v.iter().all(|&x| x % 2 == 1));
    }

    #[test]
    fn chebyshev_m_support() {
        let f = NuFamily::chebyshev_m(2).unwrap();
        let p = f.with_n(3).unwrap();
        let v = draws(&f, &p, 200_000, 14);
        assert!(v.iter().all(|&k| k >= 3 && (k - 3) % 4 == 0));
        let mean = v.iter().sum::<u64>() as f64 / v.len() as f64;
        assert!((mean - 9.0).abs() < 0.15, "{mean}");
    }
}
