//! Gaver–Stehfest inversion of Laplace transforms on the real axis.
//!
//! `f(x) ≈ (ln 2 / x) Σ_{i=1}^{N} V_i F(i ln 2 / x)` with the Stehfest
//! weights `V_i`. The weights alternate in sign and grow like `10^{N/2}`, so
//! in `f64` the usable order tops out near 18. [`Extended`] evaluates the
//! same sum in 256-bit binary floating point and allows orders up to 40.

use std::cell::RefCell;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::OnceLock;

use astro_float::{BigFloat, Consts, RoundingMode};

use crate::error::{domain, Result};

/// Default order for `f64` inversions.
pub const DEFAULT_ORDER: usize = 14;

const WEIGHT_PRECISION: usize = 512;
const EXTENDED_PRECISION: usize = 256;
const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constants cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

fn big_to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_inf_pos() {
        return f64::INFINITY;
    }
    if x.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    x.to_string()
        .parse()
        .expect("astro-float prints parseable decimals")
}

/// Scalar type a transform can be evaluated in.
pub trait Real:
    Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    /// Highest Stehfest order that keeps cancellation below the working
    /// precision.
    const MAX_ORDER: usize;

    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn sqrt(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn cosh(&self) -> Self;
    fn powf(&self, e: &Self) -> Self;
    fn recip(&self) -> Self;

    fn weights(order: usize) -> Vec<Self>;
}

impl Real for f64 {
    const MAX_ORDER: usize = 18;

    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn cosh(&self) -> Self {
        f64::cosh(*self)
    }
    fn powf(&self, e: &Self) -> Self {
        f64::powf(*self, *e)
    }
    fn recip(&self) -> Self {
        f64::recip(*self)
    }

    fn weights(order: usize) -> Vec<Self> {
        static CACHE: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
        let table = CACHE.get_or_init(|| {
            (0..=<f64 as Real>::MAX_ORDER)
                .map(|n| {
                    if n >= 2 && n % 2 == 0 {
                        stehfest_weights(n).iter().map(big_to_f64).collect()
                    } else {
                        Vec::new()
                    }
                })
                .collect()
        });
        table[order].clone()
    }
}

/// 256-bit binary floating point, enough to run Stehfest orders up to 40
/// without losing the answer to cancellation.
#[derive(Debug, Clone)]
pub struct Extended(BigFloat);

impl Extended {
    pub fn big(&self) -> &BigFloat {
        &self.0
    }
}

impl Add for Extended {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Extended(self.0.add(&o.0, EXTENDED_PRECISION, RM))
    }
}

impl Sub for Extended {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Extended(self.0.sub(&o.0, EXTENDED_PRECISION, RM))
    }
}

impl Mul for Extended {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Extended(self.0.mul(&o.0, EXTENDED_PRECISION, RM))
    }
}

impl Div for Extended {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        Extended(self.0.div(&o.0, EXTENDED_PRECISION, RM))
    }
}

impl Neg for Extended {
    type Output = Self;
    fn neg(self) -> Self {
        Extended(self.0.neg())
    }
}

impl Real for Extended {
    const MAX_ORDER: usize = 40;

    fn from_f64(x: f64) -> Self {
        Extended(BigFloat::from_f64(x, EXTENDED_PRECISION))
    }
    fn to_f64(&self) -> f64 {
        big_to_f64(&self.0)
    }
    fn sqrt(&self) -> Self {
        Extended(self.0.sqrt(EXTENDED_PRECISION, RM))
    }
    fn exp(&self) -> Self {
        Extended(with_consts(|cc| self.0.exp(EXTENDED_PRECISION, RM, cc)))
    }
    fn ln(&self) -> Self {
        Extended(with_consts(|cc| self.0.ln(EXTENDED_PRECISION, RM, cc)))
    }
    fn cosh(&self) -> Self {
        Extended(with_consts(|cc| self.0.cosh(EXTENDED_PRECISION, RM, cc)))
    }
    fn powf(&self, e: &Self) -> Self {
        Extended(with_consts(|cc| self.0.pow(&e.0, EXTENDED_PRECISION, RM, cc)))
    }
    fn recip(&self) -> Self {
        Extended(self.0.reciprocal(EXTENDED_PRECISION, RM))
    }

    fn weights(order: usize) -> Vec<Self> {
        stehfest_weights(order)
            .into_iter()
            .map(|mut w| {
                w.set_precision(EXTENDED_PRECISION, RM)
                    .expect("precision reduction");
                Extended(w)
            })
            .collect()
    }
}

fn factorial(n: usize) -> BigFloat {
    let p = WEIGHT_PRECISION;
    (1..=n).fold(BigFloat::from_word(1, p), |acc, k| {
        acc.mul(&BigFloat::from_word(k as u64, p), p, RM)
    })
}

/// Stehfest weights `V_1..V_N` for even `N`, computed in 512-bit precision.
///
/// `V_i = (−1)^{i+N/2} Σ_{k=⌊(i+1)/2⌋}^{min(i,N/2)}
///        k^{N/2} (2k)! / ((N/2−k)! k! (k−1)! (i−k)! (2k−i)!)`.
pub fn stehfest_weights(order: usize) -> Vec<BigFloat> {
    let p = WEIGHT_PRECISION;
    let half = order / 2;
    (1..=order)
        .map(|i| {
            let mut sum = BigFloat::from_word(0, p);
            for k in (i + 1) / 2..=i.min(half) {
                let num = BigFloat::from_word(k as u64, p)
                    .powi(half, p, RM)
                    .mul(&factorial(2 * k), p, RM);
                let den = factorial(half - k)
                    .mul(&factorial(k), p, RM)
                    .mul(&factorial(k - 1), p, RM)
                    .mul(&factorial(i - k), p, RM)
                    .mul(&factorial(2 * k - i), p, RM);
                sum = sum.add(&num.div(&den, p, RM), p, RM);
            }
            if (i + half) % 2 == 1 {
                sum.neg()
            } else {
                sum
            }
        })
        .collect()
}

/// Approximates `f(x)` from its Laplace transform `F`.
///
/// `order` must be even and lie in `8..=R::MAX_ORDER`.
pub fn gaver_stehfest<R: Real>(transform: impl Fn(R) -> R, x: f64, order: usize) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("Laplace inversion needs x > 0, got {x}"));
    }
    if order % 2 == 1 || order < 8 || order > R::MAX_ORDER {
        return domain(format!(
            "Stehfest order must be even in 8..={}, got {order}",
            R::MAX_ORDER
        ));
    }
    let a = R::from_f64(2.0).ln() / R::from_f64(x);
    let mut acc = R::from_f64(0.0);
    for (i, w) in R::weights(order).into_iter().enumerate() {
        let t = a.clone() * R::from_f64((i + 1) as f64);
        acc = acc + w * transform(t);
    }
    Ok((acc * a).to_f64())
}
