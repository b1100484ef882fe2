use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Where a sample came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub generator: String,
}

/// Sorted sample values with their provenance.
#[derive(Debug, Clone)]
pub struct EmpiricalSample {
    values: Vec<f64>,
    provenance: Option<Provenance>,
}

impl EmpiricalSample {
    /// Sorts `values`. Fails on an empty or NaN-containing input.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        if values.iter().any(|v| v.is_nan()) {
            return domain("sample contains NaN");
        }
        values.sort_by(f64::total_cmp);
        Ok(Self {
            values,
            provenance: None,
        })
    }

    pub fn with_provenance(mut self, seed: u64, generator: impl Into<String>) -> Self {
        self.provenance = Some(Provenance {
            seed,
            generator: generator.into(),
        });
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.len() as f64
    }

    /// Unbiased sample variance; zero for a single point.
    pub fn variance(&self) -> f64 {
        let n = self.len();
        if n < 2 {
            return 0.0;
        }
        let mean = self.mean();
        self.values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64
    }

    /// Fraction of values `≤ x`.
    pub fn ecdf(&self, x: f64) -> f64 {
        self.values.partition_point(|&v| v <= x) as f64 / self.len() as f64
    }

    pub fn median(&self) -> f64 {
        let n = self.len();
        if n % 2 == 1 {
            self.values[n / 2]
        } else {
            0.5 * (self.values[n / 2 - 1] + self.values[n / 2])
        }
    }
}

/// One-sample Kolmogorov–Smirnov distance `sup |F_N(x) − F(x)|`.
///
/// Uses `max_i max(i/N − F(x_(i)), F(x_(i)) − (i−1)/N)`, exact for a
/// continuous `cdf`.
pub fn ks_statistic(sample: &EmpiricalSample, cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sample.len() as f64;
    sample
        .values()
        .iter()
        .enumerate()
        .fold(0.0f64, |d, (i, &x)| {
            let f = cdf(x);
            let above = (i + 1) as f64 / n - f;
            let below = f - i as f64 / n;
            d.max(above).max(below)
        })
}

/// Two-sample Kolmogorov–Smirnov distance between empirical cdfs.
pub fn ks_two_sample(a: &EmpiricalSample, b: &EmpiricalSample) -> f64 {
    let (xa, xb) = (a.values(), b.values());
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < xa.len() && j < xb.len() {
        let x = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] <= x {
            i += 1;
        }
        while j < xb.len() && xb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Asymptotic 99% quantile of the Kolmogorov distribution,
/// `P(√N D_N > 1.6276) ≈ 0.01`.
pub const KOLMOGOROV_Q99: f64 = 1.6276;

/// One-sample 1% rejection threshold for `n` points.
pub fn ks_band(n: usize) -> f64 {
    KOLMOGOROV_Q99 / (n as f64).sqrt()
}

/// Two-sample 1% rejection threshold, scaled by `√((n₁+n₂)/(n₁n₂))`.
pub fn ks_band_two_sample(n1: usize, n2: usize) -> f64 {
    let (a, b) = (n1 as f64, n2 as f64);
    KOLMOGOROV_Q99 * ((a + b) / (a * b)).sqrt()
}

/// Asymptotic Kolmogorov survival function `P(K > λ) = 2 Σ (−1)^{k−1} e^{−2k²λ²}`.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    let mut s = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        s += if k % 2 == 1 { term } else { -term };
        if term < 1e-18 {
            break;
        }
    }
    (2.0 * s).clamp(0.0, 1.0)
}
