use std::io::{self, Write};

use crate::chebyshev;
use crate::error::{Error, Result};
use crate::families::{FamilyKind, NuFamily, Param};

use super::truncated::TruncatedSeries;

/// Largest acceptable tail mass for a probability table.
pub const TAIL_LIMIT: f64 = 1e-10;

/// Rounding floor: coefficients in `[−NEGATIVE_FLOOR, 0)` are treated as
/// zero, anything lower is a genuine negative coefficient.
pub const NEGATIVE_FLOOR: f64 = 1e-14;

/// Upper limit on table length for automatic order selection.
pub const MAX_TABLE_ORDER: usize = 4_000_000;

/// Probability mass function of `ν_p` tabulated on `0..=order`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    probs: Vec<f64>,
    support_start: usize,
    step: usize,
    tail_mass: f64,
    tail_mean: f64,
    clamped_mass: f64,
    mean_exact: Option<f64>,
}

impl Pmf {
    /// `probs()[k] = P(ν = k)` for `k = 0..=order()`.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, k: usize) -> f64 {
        self.probs.get(k).copied().unwrap_or(0.0)
    }

    pub fn order(&self) -> usize {
        self.probs.len() - 1
    }

    /// Smallest value in the support.
    pub fn support_start(&self) -> usize {
        self.support_start
    }

    /// Lattice span of the support.
    pub fn step(&self) -> usize {
        self.step
    }

    /// Upper bound on `P(ν > order)`.
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    /// Upper bound on `E[ν; ν > order]`.
    pub fn tail_mean(&self) -> f64 {
        self.tail_mean
    }

    /// Negative rounding dust that was set to zero.
    pub fn clamped_mass(&self) -> f64 {
        self.clamped_mass
    }

    pub fn mean_exact(&self) -> Option<f64> {
        self.mean_exact
    }

    pub fn table_sum(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// `Σ k p_k` over the table.
    pub fn table_mean(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(k, p)| k as f64 * p)
            .sum()
    }

    /// `P(ν ≤ k)` restricted to the table.
    pub fn partial_sum(&self, k: usize) -> f64 {
        self.probs.iter().take(k + 1).sum()
    }

    /// Cumulative sums `P(ν ≤ k)` for every table index.
    pub fn cumulative(&self) -> Vec<f64> {
        self.probs
            .iter()
            .scan(0.0, |acc, p| {
                *acc += p;
                Some(*acc)
            })
            .collect()
    }

    /// Geometric decay rate per unit `k` fitted to the last 20 support
    /// points of the table.
    pub fn fitted_tail_rate(&self) -> Option<f64> {
        let pts: Vec<(usize, f64)> = self
            .probs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &p)| p > 0.0)
            .take(20)
            .map(|(k, &p)| (k, p))
            .collect();
        if pts.len() < 2 {
            return None;
        }
        let (k_hi, p_hi) = pts[0];
        let (k_lo, p_lo) = pts[pts.len() - 1];
        Some(((p_hi.ln() - p_lo.ln()) / (k_hi - k_lo) as f64).exp())
    }

    /// The table as a power series with the tail bound attached.
    pub fn to_series(&self) -> TruncatedSeries {
        TruncatedSeries::new(self.probs.clone())
            .expect("probabilities are finite")
            .with_tail_bound(Some(self.tail_mass))
    }

    /// Checks the table invariants: nonnegative entries, total mass
    /// `1 ± 1e−10` with the tail, and the mean bracket when the exact mean
    /// is known.
    pub fn check(&self) -> std::result::Result<(), String> {
        if let Some((k, p)) = self.probs.iter().enumerate().find(|(_, &p)| p < 0.0) {
            return Err(format!("p_{k} = {p:e} is negative"));
        }
        let total = self.table_sum();
        if total > 1.0 + 1e-10 || total + self.tail_mass < 1.0 - 1e-10 {
            return Err(format!(
                "table mass {total} with tail bound {:e} misses 1",
                self.tail_mass
            ));
        }
        if let Some(mean) = self.mean_exact {
            let lo = self.table_mean();
            let hi = lo + self.tail_mean;
            let slack = 1e-8 * mean;
            if mean < lo - slack || mean > hi + slack {
                return Err(format!("mean {mean} outside bracket [{lo}, {hi}]"));
            }
        }
        Ok(())
    }

    /// CSV with a `k,p_k` header row and one row per support point, 17
    /// significant digits.
    pub fn write_csv(&self, mut out: impl Write) -> io::Result<()> {
        writeln!(out, "k,p_k")?;
        for (k, &p) in self.probs.iter().enumerate() {
            if p > 0.0 {
                writeln!(out, "{k},{}", fmt17(p))?;
            }
        }
        Ok(())
    }
}

/// Scientific notation with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Coefficients of `P_p(z)` up to `order`, tail bound attached. Never fails
/// because of a large tail; see [`expand_pgf`] for the checked version.
pub fn expand_series(family: &NuFamily, param: &Param, order: usize) -> Result<TruncatedSeries> {
    let coeffs = raw_coefficients(family, param, order)?;
    let tail = tail_bounds(family, param, order).0;
    Ok(TruncatedSeries::new(coeffs)?.with_tail_bound(Some(tail)))
}

/// Probability table of `ν_p`.
///
/// With `order = None` the truncation order is the smallest one whose
/// tail bound falls below [`TAIL_LIMIT`]. An explicit order whose tail bound
/// exceeds the limit is an error carrying the bound.
pub fn expand_pgf(family: &NuFamily, param: &Param, order: Option<usize>) -> Result<Pmf> {
    let order = match order {
        Some(k) => k,
        None => auto_order(family, param)?,
    };
    let (tail_mass, tail_mean) = tail_bounds(family, param, order);
    if !(tail_mass < TAIL_LIMIT) {
        return Err(Error::TailTooLarge {
            bound: tail_mass,
            order,
            limit: TAIL_LIMIT,
        });
    }
    let mut probs = raw_coefficients(family, param, order)?;
    let mut clamped_mass = 0.0;
    for (k, p) in probs.iter_mut().enumerate() {
        if *p < 0.0 {
            if *p < -NEGATIVE_FLOOR {
                return Err(Error::NegativeCoefficient { index: k, value: *p });
            }
            clamped_mass += -*p;
            *p = 0.0;
        }
    }
    Ok(Pmf {
        probs,
        support_start: family.min_support(param),
        step: family.lattice_step(param),
        tail_mass,
        tail_mean,
        clamped_mass,
        mean_exact: Some(1.0 / param.p()),
    })
}

/// Smallest order whose Chernoff tail bound is below [`TAIL_LIMIT`],
/// starting from the geometric estimate `ρ^K / (1 − ρ) < TAIL_LIMIT`.
pub fn auto_order(family: &NuFamily, param: &Param) -> Result<usize> {
    if let Some(top) = family.max_support(param) {
        return Ok(top);
    }
    let rate = family.tail_rate(param);
    let start = family.min_support(param);
    if rate <= 0.0 {
        return Ok(start);
    }
    let guess = ((TAIL_LIMIT * (1.0 - rate)).ln() / rate.ln()).ceil();
    let mut order = start.max(if guess.is_finite() { guess as usize } else { start });
    loop {
        if order > MAX_TABLE_ORDER {
            let (bound, _) = tail_bounds(family, param, MAX_TABLE_ORDER);
            return Err(Error::TailTooLarge {
                bound,
                order: MAX_TABLE_ORDER,
                limit: TAIL_LIMIT,
            });
        }
        if tail_bounds(family, param, order).0 < TAIL_LIMIT {
            return Ok(order);
        }
        order = order + order / 4 + 1;
    }
}

/// Chernoff bounds on the tail beyond `order`:
/// `P(ν > K) ≤ P(s) s^{−(K+1)}` and, for `(K+1) ln s ≥ 1`,
/// `E[ν; ν > K] ≤ (K+1) P(s) s^{−(K+1)}`, minimised over `1 < s < R`.
pub fn tail_bounds(family: &NuFamily, param: &Param, order: usize) -> (f64, f64) {
    if let Some(top) = family.max_support(param) {
        return if order >= top {
            (0.0, 0.0)
        } else {
            (1.0, 1.0 / param.p())
        };
    }
    let y_max = family.radius(param).ln();
    let kp1 = (order + 1) as f64;
    let log_pgf = |y: f64| family.pgf(param, y.exp()).ln();
    let mass = |y: f64| log_pgf(y) - kp1 * y;
    let y_hi = y_max * (1.0 - 1e-12);
    let best_mass = minimize_convex(mass, 0.0, y_hi).exp().min(1.0);
    let y_lo = 1.0 / kp1;
    let best_mean = if y_lo < y_hi {
        (minimize_convex(mass, y_lo, y_hi) + kp1.ln()).exp()
    } else {
        f64::INFINITY
    };
    (best_mass, best_mean)
}

/// Golden-section search for the minimum value of a convex function.
fn minimize_convex(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if fc.is_nan() || fc > fd {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        } else {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        }
        if (b - a).abs() <= 1e-15 * (1.0 + a.abs()) {
            break;
        }
    }
    let ends = [f(lo), f(hi)];
    ends.into_iter()
        .chain([fc, fd])
        .filter(|v| !v.is_nan())
        .fold(f64::INFINITY, f64::min)
}

fn raw_coefficients(family: &NuFamily, param: &Param, order: usize) -> Result<Vec<f64>> {
    let p = param.p();
    let m = family.m() as usize;
    match family.kind() {
        FamilyKind::Deterministic => {
            let mut c = vec![0.0; order + 1];
            let n = family.min_support(param);
            if n <= order {
                c[n] = 1.0;
            }
            Ok(c)
        }
        FamilyKind::Geometric => {
            let denom = TruncatedSeries::polynomial(&[1.0, -(1.0 - p)], order)?;
            Ok(denom.reciprocal()?.shift(1).scale(p).into_coeffs())
        }
        FamilyKind::Melamed => {
            let mut base = vec![0.0; m + 1];
            base[0] = 1.0;
            base[m] = -(1.0 - p);
            let s = TruncatedSeries::polynomial(&base, order)?;
            Ok(s.fractional_power(-1.0 / m as f64)?
                .shift(1)
                .scale(p.powf(1.0 / m as f64))
                .into_coeffs())
        }
        FamilyKind::Chebyshev => Ok(chebyshev_product(param.n_unchecked(), order)),
        FamilyKind::ChebyshevM if m == 1 => Ok(chebyshev_product(param.n_unchecked(), order)),
        FamilyKind::ChebyshevM => Ok(chebyshev_m_product(param.n_unchecked(), family.m(), order)),
    }
}

/// Squared positive zeros `a_j² = (1 + cos((2j−1)π/n)) / 2` of `T_n`,
/// `j = 1..⌊n/2⌋`.
fn squared_positive_roots(n: u32) -> Vec<f64> {
    let n_f = n as f64;
    (1..=n / 2)
        .map(|j| (1.0 + ((2 * j - 1) as f64 * std::f64::consts::PI / n_f).cos()) / 2.0)
        .collect()
}

/// `1/T_n(1/z) = z^n / (2^{n−1} Π_j (1 − a_j² z²))`, expanded as a product
/// of geometric series in `z²`. Every partial product has nonnegative
/// coefficients, so no cancellation occurs.
fn chebyshev_product(n: u32, order: usize) -> Vec<f64> {
    let mut out = vec![0.0; order + 1];
    let n_us = n as usize;
    if n_us > order {
        return out;
    }
    let len = (order - n_us) / 2 + 1;
    let mut g = vec![0.0; len];
    g[0] = 1.0;
    for q in squared_positive_roots(n) {
        for i in 1..len {
            g[i] += q * g[i - 1];
        }
    }
    let lead = 0.5f64.powi(n as i32 - 1);
    for (i, gi) in g.into_iter().enumerate() {
        out[n_us + 2 * i] = lead * gi;
    }
    out
}

/// `T_n(1/z^m)^{−1/m} = 2^{−(n−1)/m} z^n Π_j (1 − a_j² u)^{−1/m}`,
/// `u = z^{2m}`. With `G = Π_j (1 − a_j² u)^{−1/m}`, `G'/G = Σ_i ℓ_i u^i`
/// where `ℓ_i = (1/m) Σ_j a_j^{2(i+1)} > 0`, so
/// `(k+1) G_{k+1} = Σ_{i=0}^{k} ℓ_i G_{k−i}` runs on positive terms only.
fn chebyshev_m_product(n: u32, m: u32, order: usize) -> Vec<f64> {
    let mut out = vec![0.0; order + 1];
    let (n_us, span) = (n as usize, 2 * m as usize);
    if n_us > order {
        return out;
    }
    let len = (order - n_us) / span + 1;
    let qs = squared_positive_roots(n);
    let beta = 1.0 / m as f64;
    let mut powers = qs.clone();
    let mut ell = vec![0.0; len];
    for l in ell.iter_mut() {
        *l = beta * powers.iter().sum::<f64>();
        for (pw, q) in powers.iter_mut().zip(&qs) {
            *pw *= q;
        }
    }
    let mut g = vec![0.0; len];
    g[0] = 1.0;
    for k in 0..len - 1 {
        let acc: f64 = (0..=k).map(|i| ell[i] * g[k - i]).sum();
        g[k + 1] = acc / (k + 1) as f64;
    }
    let lead = 2f64.powf(-((n - 1) as f64) / m as f64);
    for (i, gi) in g.into_iter().enumerate() {
        out[n_us + span * i] = lead * gi;
    }
    out
}

/// `1/T_n(1/z)` through exact integer coefficients and the series
/// reciprocal: `T_n(1/z) = z^{−n} Q(z)` with `Q(z) = Σ_j c_j z^{n−j}`, and
/// `P(z) = z^n / Q(z)`.
///
/// The monomial coefficients alternate in sign and grow like `(1+√2)^n`, so
/// this route loses accuracy as `n` grows. It is kept as an independent
/// cross-check of the product expansion for moderate degrees.
pub fn chebyshev_by_reciprocal(n: u32, order: usize) -> Result<TruncatedSeries> {
    let t = chebyshev::cheb_coeffs(n)?;
    let q: Vec<f64> = t.coeffs().iter().rev().map(|&c| c as f64).collect();
    let q = TruncatedSeries::polynomial(&q, order)?;
    Ok(q.reciprocal()?.shift(n as usize))
}
