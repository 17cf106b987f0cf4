//! Scalar fields the calculus is generic over.
//!
//! Everything in the crate is written once against [`Scalar`] and runs on
//! `f64`, on exact rationals ([`Exact`]) and on order-2 jets
//! ([`crate::jet::Jet`]).

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::tables::Tables;

/// Exact rational scalar.
pub type Exact = BigRational;

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True when arithmetic is exact, so residuals are compared against zero.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn ratio(num: i64, den: i64) -> Self;
    /// Exact conversion of the binary value for rationals.
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    /// Size used for pivot selection and tolerance tests.
    fn magnitude(&self) -> f64;
    fn is_zero(&self) -> bool;
    /// Constant G₂ data (projectors, pseudo-inverses, ...) in this field.
    fn tables() -> &'static Tables<Self>;

    fn square(&self) -> Self {
        self.clone() * self.clone()
    }

    fn scale_i(&self, n: i64) -> Self {
        self.clone() * Self::from_i64(n)
    }

    /// Negligible relative to `scale` in this field's arithmetic.
    fn negligible(&self, scale: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.magnitude() <= 1e-11 * scale.max(1.0)
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn tables() -> &'static Tables<Self> {
        static T: std::sync::OnceLock<Tables<f64>> = std::sync::OnceLock::new();
        T.get_or_init(Tables::build)
    }
}

impl Scalar for Exact {
    const EXACT: bool = true;

    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        BigRational::from_integer(BigInt::from(1))
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).unwrap_or_else(<BigRational as Zero>::zero)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn magnitude(&self) -> f64 {
        ToPrimitive::to_f64(&self.abs()).unwrap_or(f64::INFINITY)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn tables() -> &'static Tables<Self> {
        static T: std::sync::OnceLock<Tables<Exact>> = std::sync::OnceLock::new();
        T.get_or_init(Tables::build)
    }
}

/// Parses `"p/q"`, an integer, or a decimal literal into a scalar.
pub fn parse_scalar<S: Scalar>(text: &str) -> Option<S> {
    let text = text.trim();
    if let Some((p, q)) = text.split_once('/') {
        let p: i64 = p.trim().parse().ok()?;
        let q: i64 = q.trim().parse().ok()?;
        if q == 0 {
            return None;
        }
        return Some(S::ratio(p, q));
    }
    if let Ok(n) = text.parse::<i64>() {
        return Some(S::from_i64(n));
    }
    // Plain decimals stay exact in rational mode.
    if let Some((whole, frac)) = text.split_once('.') {
        let digits = format!("{whole}{frac}");
        if frac.len() <= 15 && frac.chars().all(|c| c.is_ascii_digit()) {
            if let Ok(n) = digits.parse::<i64>() {
                return Some(S::ratio(n, 10i64.pow(frac.len() as u32)));
            }
        }
    }
    text.parse::<f64>().ok().filter(|x| x.is_finite()).map(S::from_f64)
}

/// Maximum magnitude over a slice, zero for an empty slice.
pub fn max_magnitude<S: Scalar>(xs: &[S]) -> f64 {
    xs.iter().map(Scalar::magnitude).fold(0.0, f64::max)
}
