//! Chebyshev polynomials of the first kind.
//!
//! `T_n(cos θ) = cos nθ` and `T_n(cosh θ) = cosh nθ`. The composition law
//! `T_n ∘ T_m = T_{nm}` is what makes the Chebyshev generating functions
//! commute under composition.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};

/// Largest degree whose monomial coefficients are built exactly.
///
/// The biggest coefficient of `T_n` grows like `(1 + √2)^n / 2`, which stays
/// below `i128::MAX` up to this degree.
pub const MAX_DEGREE: u32 = 90;

/// Exact monomial coefficients `c_0..c_n` of `T_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChebPoly {
    degree: u32,
    coeffs: Vec<i128>,
}

impl ChebPoly {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// `coeffs()[j]` multiplies `x^j`.
    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn leading(&self) -> i128 {
        self.coeffs[self.degree as usize]
    }

    /// Coefficients converted to `f64`. Exact while every entry is below 2^53.
    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(|&c| c as f64).collect()
    }

    /// Horner evaluation in the monomial basis.
    ///
    /// Suffers from cancellation for large degrees on `[-1, 1]`; prefer
    /// [`cheb_eval`] for numerical work.
    pub fn eval_monomial(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * x + c as f64)
    }
}

/// Builds `T_n` from `T_0 = 1`, `T_1 = x`, `T_{k+1} = 2x T_k − T_{k−1}`.
pub fn cheb_coeffs(n: u32) -> Result<ChebPoly> {
    if n > MAX_DEGREE {
        return Err(Error::DegreeTooLarge {
            degree: n,
            max: MAX_DEGREE,
        });
    }
    let overflow = || Error::DegreeTooLarge {
        degree: n,
        max: MAX_DEGREE,
    };
    let mut prev = vec![1i128];
    if n == 0 {
        return Ok(ChebPoly {
            degree: 0,
            coeffs: prev,
        });
    }
    let mut cur = vec![0i128, 1];
    for _ in 1..n {
        let mut next = vec![0i128; cur.len() + 1];
        for (j, &c) in cur.iter().enumerate() {
            next[j + 1] = c.checked_mul(2).ok_or_else(overflow)?;
        }
        for (j, &c) in prev.iter().enumerate() {
            next[j] = next[j].checked_sub(c).ok_or_else(overflow)?;
        }
        prev = cur;
        cur = next;
    }
    Ok(ChebPoly {
        degree: n,
        coeffs: cur,
    })
}

/// Evaluates `T_n(x)` through its trigonometric or hyperbolic closed form.
///
/// `|x| < 1` uses `cos(n arccos x)`, `|x| ≥ 1` uses `cosh(n arccosh |x|)`
/// together with the parity `T_n(−x) = (−1)^n T_n(x)`.
pub fn cheb_eval(n: u32, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return domain(format!("T_{n} evaluated at non-finite x = {x}"));
    }
    Ok(eval(n as f64, x))
}

/// Unchecked evaluation used on hot paths; `n` may be any non-negative
/// integer-valued float.
pub(crate) fn eval(n: f64, x: f64) -> f64 {
    if x.abs() < 1.0 {
        (n * x.acos()).cos()
    } else {
        let value = (n * x.abs().acosh()).cosh();
        if x < 0.0 && (n as u64) % 2 == 1 {
            -value
        } else {
            value
        }
    }
}

/// Zeros `cos((2k−1)π/(2n))`, `k = 1..n`, in ascending order.
///
/// Computed as `sin((n − 2k + 1)π/(2n))` so that the set is exactly
/// symmetric and the middle zero of an odd degree is exactly `0`.
pub fn cheb_roots(n: u32) -> Result<Vec<f64>> {
    if n == 0 {
        return domain("T_0 has no zeros");
    }
    let n_i = n as i64;
    let mut roots: Vec<f64> = (1..=n_i)
        .map(|k| ((n_i - 2 * k + 1) as f64 * PI / (2.0 * n as f64)).sin())
        .collect();
    roots.reverse();
    Ok(roots)
}

/// Largest zero of `T_n`, `cos(π/(2n))`. It sets the geometric decay rate of
/// the Chebyshev probability tables.
pub fn largest_root(n: u32) -> f64 {
    // sin form, identical to the last entry of `cheb_roots`
    ((n as f64 - 1.0) * PI / (2.0 * n as f64)).sin()
}

/// `max |T_n(T_m(x)) − T_{nm}(x)|` over `grid`.
pub fn composition_check(n: u32, m: u32, grid: &[f64]) -> Result<f64> {
    if n == 0 || m == 0 {
        return domain("composition check needs n, m ≥ 1");
    }
    let nm = n
        .checked_mul(m)
        .ok_or_else(|| Error::Domain(format!("n·m overflows for n = {n}, m = {m}")))?;
    let mut worst = 0.0f64;
    for &x in grid {
        if !(-1.0..=1.0).contains(&x) {
            return domain(format!("grid point {x} outside [-1, 1]"));
        }
        let lhs = eval(n as f64, eval(m as f64, x));
        let rhs = eval(nm as f64, x);
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}
