use nalgebra::DMatrix;
use serde::Serialize;

use super::pmf::NEGATIVE_FLOOR;
use super::truncated::TruncatedSeries;

/// A violated hypothesis of the positivity criterion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Lemma1Failure {
    /// Coefficient of an odd power is nonzero.
    OddPower { index: usize, value: f64 },
    /// `P(1) ≠ 1`.
    NotNormalized { value: f64 },
    /// Leading coefficient is not positive.
    LeadingNotPositive { value: f64 },
    /// A zero lies outside `(−1, 1)` or off the real axis.
    ZeroOutside { re: f64, im: f64 },
    /// Polynomial is zero or has degree below `k`'s requirements.
    Degenerate(String),
}

/// Outcome of [`validate_lemma1`].
#[derive(Debug, Clone, Serialize)]
pub struct Lemma1Report {
    pub failures: Vec<Lemma1Failure>,
    /// Coefficients of `x^k / R(x)` with `R(x) = x^d P(1/x)`, when `R(0) ≠ 0`.
    #[serde(skip)]
    pub expansion: Option<TruncatedSeries>,
    pub min_coeff: f64,
    pub sum: f64,
    pub all_nonneg: bool,
}

impl Lemma1Report {
    /// Hypotheses hold and the expansion has no coefficient below the
    /// rounding floor.
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty() && self.all_nonneg
    }
}

/// Checks a polynomial `P` (coefficients ascending) against the positivity
/// criterion and expands the resulting generating function.
///
/// Hypotheses: only even powers, `P(1) = 1`, positive leading coefficient,
/// all zeros real and inside `(−1, 1)`. Zeros are located through
/// `S(w) = P(√w)`: `P` has all zeros in `(−1, 1)` iff `S` has all zeros in
/// `[0, 1)`, found as companion-matrix eigenvalues.
///
/// With `d = deg P` the generating function is `x^k / R(x)`, where
/// `R(x) = x^d P(1/x)` is the reversed polynomial. For `P = T_2` and `k = 2`
/// this is `x²/(2 − x²)`. Violations are reported, never raised.
pub fn validate_lemma1(poly: &[f64], k: usize, order: usize) -> Lemma1Report {
    let mut failures = Vec::new();
    let d = match poly.iter().rposition(|&c| c != 0.0) {
        Some(d) => d,
        None => {
            return Lemma1Report {
                failures: vec![Lemma1Failure::Degenerate("zero polynomial".into())],
                expansion: None,
                min_coeff: f64::NAN,
                sum: f64::NAN,
                all_nonneg: false,
            }
        }
    };
    let p = &poly[..=d];
    for (i, &c) in p.iter().enumerate() {
        if i % 2 == 1 && c != 0.0 {
            failures.push(Lemma1Failure::OddPower { index: i, value: c });
        }
    }
    let at_one: f64 = p.iter().sum();
    if (at_one - 1.0).abs() > 1e-12 {
        failures.push(Lemma1Failure::NotNormalized { value: at_one });
    }
    if !(p[d] > 0.0) {
        failures.push(Lemma1Failure::LeadingNotPositive { value: p[d] });
    }
    if d % 2 == 0 {
        let s: Vec<f64> = p.iter().step_by(2).copied().collect();
        for (re, im) in polynomial_roots(&s) {
            let real = im.abs() <= 1e-9 * (1.0 + re.abs());
            if !real || re < -1e-12 || re >= 1.0 {
                // report the zero in the x variable
                let (xr, xi) = complex_sqrt(re, im);
                failures.push(Lemma1Failure::ZeroOutside { re: xr, im: xi });
            }
        }
    } else {
        failures.push(Lemma1Failure::Degenerate(format!("odd degree {d}")));
    }

    let reversed: Vec<f64> = p.iter().rev().copied().collect();
    let expansion = TruncatedSeries::polynomial(&reversed, order)
        .ok()
        .and_then(|r| r.reciprocal().ok())
        .map(|t| t.shift(k));
    let (min_coeff, sum) = expansion
        .as_ref()
        .map(|e| (e.coeffs().iter().copied().fold(f64::INFINITY, f64::min), e.sum()))
        .unwrap_or((f64::NAN, f64::NAN));
    if expansion.is_none() {
        failures.push(Lemma1Failure::Degenerate("reversed polynomial vanishes at 0".into()));
    }
    Lemma1Report {
        failures,
        all_nonneg: min_coeff >= -NEGATIVE_FLOOR,
        expansion,
        min_coeff,
        sum,
    }
}

fn complex_sqrt(re: f64, im: f64) -> (f64, f64) {
    let r = re.hypot(im);
    let a = ((r + re) / 2.0).max(0.0).sqrt();
    let b = ((r - re) / 2.0).max(0.0).sqrt().copysign(if im == 0.0 { 1.0 } else { im });
    (a, b)
}

/// Zeros of `Σ c_i w^i` as eigenvalues of the companion matrix.
fn polynomial_roots(c: &[f64]) -> Vec<(f64, f64)> {
    let deg = match c.iter().rposition(|&x| x != 0.0) {
        Some(d) if d > 0 => d,
        _ => return Vec::new(),
    };
    let lead = c[deg];
    let companion = DMatrix::from_fn(deg, deg, |i, j| {
        if j == deg - 1 {
            -c[i] / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    companion
        .complex_eigenvalues()
        .iter()
        .map(|z| (z.re, z.im))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::NuFamily;
    use crate::series::expand_series;

    #[test]
    fn chebyshev_two() {
        let r = validate_lemma1(&[-1.0, 0.0, 2.0], 2, 40);
        assert!(r.is_valid(), "{:?}", r.failures);
        let f = NuFamily::chebyshev();
        let table = expand_series(&f, &f.with_n(2).unwrap(), 40).unwrap();
        for (a, b) in r.expansion.unwrap().coeffs().iter().zip(table.coeffs()) {
            assert!((a - b).abs() <= 1e-15);
        }
    }

    #[test]
    fn pure_square_is_unit_mass() {
        let r = validate_lemma1(&[0.0, 0.0, 1.0], 2, 10);
        assert!(r.is_valid(), "{:?}", r.failures);
        let e = r.expansion.unwrap();
        assert_eq!(e.coeffs()[2], 1.0);
        assert_eq!(e.sum(), 1.0);
    }

    #[test]
    fn zero_outside_is_flagged() {
        // (x² − 2.25)/(1 − 2.25): zeros at ±1.5, P(1) = 1
        let c = 1.0 / (1.0 - 2.25);
        let r = validate_lemma1(&[-2.25 * c, 0.0, c], 2, 20);
        assert!(!r.is_valid());
        assert!(r
            .failures
            .iter()
            .any(|f| matches!(f, Lemma1Failure::ZeroOutside { re, .. } if (re.abs() - 1.5).abs() < 1e-9)));
    }

    #[test]
    fn other_hypotheses_flagged() {
        let r = validate_lemma1(&[0.5, 0.5], 1, 10);
        assert!(r.failures.iter().any(|f| matches!(f, Lemma1Failure::OddPower { .. })));
        let r = validate_lemma1(&[1.0, 0.0, 1.0], 2, 10);
        assert!(r.failures.iter().any(|f| matches!(f, Lemma1Failure::NotNormalized { .. })));
        assert!(!validate_lemma1(&[0.0], 2, 10).is_valid());
    }

    #[test]
    fn even_chebyshev_polynomials_pass() {
        for n in (2..=16).step_by(2) {
            let t = crate::chebyshev::cheb_coeffs(n).unwrap().coeffs_f64();
            let r = validate_lemma1(&t, n as usize, 200);
            assert!(r.is_valid(), "T_{n}: {:?} min {}", r.failures, r.min_coeff);
        }
    }
}
