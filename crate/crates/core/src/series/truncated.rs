use crate::error::{domain, Error, Result};

/// Power series `Σ_{k=0}^{K} a_k z^k` truncated at order `K`.
///
/// `tail_bound` bounds `Σ_{k>K} |a_k|` when known; `Some(0.0)` marks an
/// exact polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<f64>,
    tail_bound: Option<f64>,
}

impl TruncatedSeries {
    /// Series with an unknown tail. All coefficients must be finite.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return domain("a truncated series needs at least one coefficient");
        }
        if let Some(i) = coeffs.iter().position(|c| !c.is_finite()) {
            return domain(format!("coefficient {i} is not finite"));
        }
        Ok(Self {
            coeffs,
            tail_bound: None,
        })
    }

    /// An exact polynomial, zero-padded (or cut) to `order`.
    pub fn polynomial(coeffs: &[f64], order: usize) -> Result<Self> {
        let mut c = coeffs.to_vec();
        let exact = c.iter().skip(order + 1).all(|&x| x == 0.0);
        c.resize(order + 1, 0.0);
        let mut s = Self::new(c)?;
        s.tail_bound = exact.then_some(0.0);
        Ok(s)
    }

    /// `z^power` as an exact polynomial truncated at `order`.
    pub fn monomial(power: usize, order: usize) -> Self {
        let mut c = vec![0.0; order + 1];
        if power <= order {
            c[power] = 1.0;
        }
        Self {
            coeffs: c,
            tail_bound: Some(if power <= order { 0.0 } else { 1.0 }),
        }
    }

    pub fn with_tail_bound(mut self, bound: Option<f64>) -> Self {
        self.tail_bound = bound;
        self
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn tail_bound(&self) -> Option<f64> {
        self.tail_bound
    }

    pub fn is_exact_polynomial(&self) -> bool {
        self.tail_bound == Some(0.0)
    }

    pub fn eval(&self, z: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * z + c)
    }

    pub fn sum(&self) -> f64 {
        self.coeffs.iter().sum()
    }

    fn nonzero(&self) -> Vec<(usize, f64)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0.0)
            .map(|(j, &c)| (j, c))
            .collect()
    }

    /// Product truncated at the smaller of the two orders.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = vec![0.0; order + 1];
        let b = other.nonzero();
        for (i, &a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a == 0.0 {
                continue;
            }
            for &(j, bj) in &b {
                if i + j > order {
                    break;
                }
                out[i + j] += a * bj;
            }
        }
        Self {
            coeffs: out,
            tail_bound: if self.is_exact_polynomial()
                && other.is_exact_polynomial()
                && self.order() + other.order() <= order
            {
                Some(0.0)
            } else {
                None
            },
        }
    }

    /// Multiplies by `z^k`, keeping the order.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![0.0; n];
        if k < n {
            out[k..].copy_from_slice(&self.coeffs[..n - k]);
        }
        Self {
            coeffs: out,
            tail_bound: None,
        }
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
            tail_bound: self.tail_bound.map(|b| b * factor.abs()),
        }
    }

    /// `1/s` up to the same order:
    /// `t_0 = 1/a_0`, `t_k = −(1/a_0) Σ_{j=1}^{k} a_j t_{k−j}`.
    pub fn reciprocal(&self) -> Result<Self> {
        let a0 = self.coeffs[0];
        if a0 == 0.0 {
            return Err(Error::NonInvertible);
        }
        let order = self.order();
        let a: Vec<(usize, f64)> = self.nonzero().into_iter().filter(|&(j, _)| j > 0).collect();
        let mut t = vec![0.0; order + 1];
        t[0] = 1.0 / a0;
        for k in 1..=order {
            let mut acc = 0.0;
            for &(j, aj) in &a {
                if j > k {
                    break;
                }
                acc += aj * t[k - j];
            }
            t[k] = -acc / a0;
        }
        Self::new(t)
    }

    /// `self(inner(z))` by Horner's scheme.
    ///
    /// Needs `inner(0) = 0`, or `self` to be an exact polynomial. The result
    /// order is `inner`'s order, reduced to `self`'s when `self` is a
    /// truncated series.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let order = if self.is_exact_polynomial() {
            inner.order()
        } else if inner.coeffs[0] == 0.0 {
            inner.order().min(self.order())
        } else {
            return domain(
                "composition needs an inner series without constant term or an exact polynomial outer series",
            );
        };
        let inner = Self {
            coeffs: inner.coeffs[..=order].to_vec(),
            tail_bound: None,
        };
        // Only the first `order + 1` outer coefficients can reach z^order
        // when inner(0) = 0.
        let top = if inner.coeffs[0] == 0.0 {
            self.order().min(order)
        } else {
            self.order()
        };
        let mut acc = Self {
            coeffs: vec![0.0; order + 1],
            tail_bound: None,
        };
        for k in (0..=top).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] += self.coeffs[k];
        }
        Self::new(acc.coeffs)
    }

    /// `s(z)^exponent` through the logarithmic-derivative recurrence
    /// `b_0 = a_0^α`, `b_k = (1/(k a_0)) Σ_{j=1}^{k} ((α+1) j − k) a_j b_{k−j}`.
    pub fn fractional_power(&self, exponent: f64) -> Result<Self> {
        let a0 = self.coeffs[0];
        if !(a0 > 0.0) {
            return domain(format!(
                "fractional power needs a positive constant term, got {a0}"
            ));
        }
        let order = self.order();
        let a: Vec<(usize, f64)> = self.nonzero().into_iter().filter(|&(j, _)| j > 0).collect();
        let mut b = vec![0.0; order + 1];
        b[0] = a0.powf(exponent);
        for k in 1..=order {
            let mut acc = 0.0;
            for &(j, aj) in &a {
                if j > k {
                    break;
                }
                acc += ((exponent + 1.0) * j as f64 - k as f64) * aj * b[k - j];
            }
            b[k] = acc / (k as f64 * a0);
        }
        Self::new(b)
    }
}
