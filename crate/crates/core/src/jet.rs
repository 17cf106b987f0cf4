//! Second-order jets of functions of one variable.
//!
//! A [`Jet`] carries `(f, f′, f″)` at a sample point together with the
//! highest order that is still valid. Products and quotients truncate at
//! order two; differentiating shifts the components and loses one order.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::scalar::Scalar;
use crate::tables::Tables;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
    order: u8,
}

impl Jet {
    pub fn new(value: f64, d1: f64, d2: f64) -> Self {
        Jet { value, d1, d2, order: 2 }
    }

    pub fn constant(c: f64) -> Self {
        Jet::new(c, 0.0, 0.0)
    }

    /// The coordinate `t` itself.
    pub fn variable(t: f64) -> Self {
        Jet::new(t, 1.0, 0.0)
    }

    /// Highest derivative order carried reliably (0, 1 or 2).
    pub fn order(&self) -> u8 {
        self.order
    }

    /// The jet of the derivative, one order shorter.
    pub fn derivative(&self) -> Self {
        Jet { value: self.d1, d1: self.d2, d2: 0.0, order: self.order.saturating_sub(1) }
    }

    /// Composition `g ∘ self` given `g, g′, g″` at `self.value`.
    pub fn compose(&self, g: f64, dg: f64, ddg: f64) -> Self {
        Jet { value: g, d1: dg * self.d1, d2: ddg * self.d1 * self.d1 + dg * self.d2, order: self.order }
    }

    pub fn sin(&self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.compose(s, c, -s)
    }

    pub fn cos(&self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.compose(c, -s, -c)
    }

    pub fn exp(&self) -> Self {
        let e = self.value.exp();
        self.compose(e, e, e)
    }

    pub fn sinh(&self) -> Self {
        let (s, c) = (self.value.sinh(), self.value.cosh());
        self.compose(s, c, s)
    }

    pub fn cosh(&self) -> Self {
        let (s, c) = (self.value.sinh(), self.value.cosh());
        self.compose(c, s, c)
    }

    pub fn ln(&self) -> Self {
        let x = self.value;
        self.compose(x.ln(), 1.0 / x, -1.0 / (x * x))
    }

    pub fn sqrt(&self) -> Self {
        let r = self.value.sqrt();
        self.compose(r, 0.5 / r, -0.25 / (r * r * r))
    }

    pub fn atan(&self) -> Self {
        let x = self.value;
        let q = 1.0 + x * x;
        self.compose(x.atan(), 1.0 / q, -2.0 * x / (q * q))
    }

    pub fn tan(&self) -> Self {
        let t = self.value.tan();
        let sec2 = 1.0 + t * t;
        self.compose(t, sec2, 2.0 * t * sec2)
    }

    pub fn powi(&self, n: i32) -> Self {
        let x = self.value;
        let nf = n as f64;
        self.compose(x.powi(n), nf * x.powi(n - 1), nf * (nf - 1.0) * x.powi(n - 2))
    }

    pub fn recip(&self) -> Self {
        Jet::constant(1.0) / *self
    }

    fn with_order(mut self, order: u8) -> Self {
        self.order = order;
        if order < 2 {
            self.d2 = 0.0;
        }
        if order < 1 {
            self.d1 = 0.0;
        }
        self
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        Jet { value: self.value + rhs.value, d1: self.d1 + rhs.d1, d2: self.d2 + rhs.d2, order: 2 }
            .with_order(self.order.min(rhs.order))
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        self + (-rhs)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet { value: -self.value, d1: -self.d1, d2: -self.d2, order: self.order }
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        Jet {
            value: self.value * rhs.value,
            d1: self.d1 * rhs.value + self.value * rhs.d1,
            d2: self.d2 * rhs.value + 2.0 * self.d1 * rhs.d1 + self.value * rhs.d2,
            order: 2,
        }
        .with_order(self.order.min(rhs.order))
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        let inv = rhs.compose(1.0 / rhs.value, -1.0 / rhs.value.powi(2), 2.0 / rhs.value.powi(3));
        self * inv
    }
}

impl std::fmt::Display for Jet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.value, self.d1, self.d2)
    }
}

impl Scalar for Jet {
    const EXACT: bool = false;

    fn zero() -> Self {
        Jet::constant(0.0)
    }
    fn one() -> Self {
        Jet::constant(1.0)
    }
    fn from_i64(n: i64) -> Self {
        Jet::constant(n as f64)
    }
    fn ratio(num: i64, den: i64) -> Self {
        Jet::constant(num as f64 / den as f64)
    }
    fn from_f64(x: f64) -> Self {
        Jet::constant(x)
    }
    fn to_f64(&self) -> f64 {
        self.value
    }
    /// Largest component still carried by the jet.
    fn magnitude(&self) -> f64 {
        let mut m = self.value.abs();
        if self.order >= 1 {
            m = m.max(self.d1.abs());
        }
        if self.order >= 2 {
            m = m.max(self.d2.abs());
        }
        m
    }
    fn is_zero(&self) -> bool {
        self.value == 0.0 && self.d1 == 0.0 && self.d2 == 0.0
    }
    fn tables() -> &'static Tables<Self> {
        static T: std::sync::OnceLock<Tables<Jet>> = std::sync::OnceLock::new();
        T.get_or_init(Tables::build)
    }
}

/// Named one-variable functions used to describe warping data.
#[derive(Clone, Debug, PartialEq)]
pub enum FunctionDescriptor {
    Sin,
    Cos,
    Exp,
    Sinh,
    Cosh,
    /// `t ↦ t`.
    Identity,
    Constant(f64),
    /// `t ↦ scale · g(t)`.
    Scaled(f64, Box<FunctionDescriptor>),
}

impl FunctionDescriptor {
    /// Parses `sin`, `cos`, `exp`, `sinh`, `cosh`, `id`, `const` (the value 1),
    /// a number, or `k*name`.
    pub fn parse(text: &str) -> Option<Self> {
        let text = text.trim();
        if let Some((k, rest)) = text.split_once('*') {
            let k: f64 = k.trim().parse().ok()?;
            return Some(FunctionDescriptor::Scaled(k, Box::new(Self::parse(rest)?)));
        }
        Some(match text {
            "sin" => FunctionDescriptor::Sin,
            "cos" => FunctionDescriptor::Cos,
            "exp" => FunctionDescriptor::Exp,
            "sinh" => FunctionDescriptor::Sinh,
            "cosh" => FunctionDescriptor::Cosh,
            "id" | "t" => FunctionDescriptor::Identity,
            "const" => FunctionDescriptor::Constant(1.0),
            other => FunctionDescriptor::Constant(other.parse().ok().filter(|x: &f64| x.is_finite())?),
        })
    }

    /// Jet of the function at `t`.
    pub fn jet(&self, t: f64) -> Jet {
        let x = Jet::variable(t);
        match self {
            FunctionDescriptor::Sin => x.sin(),
            FunctionDescriptor::Cos => x.cos(),
            FunctionDescriptor::Exp => x.exp(),
            FunctionDescriptor::Sinh => x.sinh(),
            FunctionDescriptor::Cosh => x.cosh(),
            FunctionDescriptor::Identity => x,
            FunctionDescriptor::Constant(c) => Jet::constant(*c),
            FunctionDescriptor::Scaled(k, g) => Jet::constant(*k) * g.jet(t),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Jet, b: (f64, f64, f64)) -> bool {
        (a.value - b.0).abs() < 1e-12 && (a.d1 - b.1).abs() < 1e-12 && (a.d2 - b.2).abs() < 1e-12
    }

    #[test]
    fn product_and_quotient_rules() {
        let t = Jet::variable(0.7);
        let f = t.sin() * t.exp();
        let (s, c, e) = (0.7f64.sin(), 0.7f64.cos(), 0.7f64.exp());
        assert!(close(f, (s * e, (s + c) * e, 2.0 * c * e)));
        let q = t.sin() / t.cos();
        let tan = t.tan();
        assert!(close(q, (tan.value, tan.d1, tan.d2)));
    }

    #[test]
    fn chain_rule_functions() {
        let t = Jet::variable(0.3);
        let a = (t * t).atan();
        let h = 1e-5;
        let g = |x: f64| (x * x).atan();
        let fd1 = (g(0.3 + h) - g(0.3 - h)) / (2.0 * h);
        let fd2 = (g(0.3 + h) - 2.0 * g(0.3) + g(0.3 - h)) / (h * h);
        assert!((a.d1 - fd1).abs() < 1e-8 && (a.d2 - fd2).abs() < 1e-4);
        let r = t.sqrt() * t.sqrt();
        assert!(close(r, (0.3, 1.0, 0.0)));
        let l = t.exp().ln();
        assert!(close(l, (0.3, 1.0, 0.0)));
    }

    #[test]
    fn derivative_loses_order() {
        let f = Jet::variable(1.0).sin();
        let d = f.derivative();
        assert_eq!(d.order(), 1);
        assert_eq!(d.d1, f.d2);
        let dd = d.derivative();
        assert_eq!(dd.order(), 0);
        assert_eq!((dd * f).order(), 0);
        assert_eq!((dd * f).d1, 0.0);
    }

    #[test]
    fn descriptors() {
        assert_eq!(FunctionDescriptor::parse("sin"), Some(FunctionDescriptor::Sin));
        assert_eq!(FunctionDescriptor::parse("2.5"), Some(FunctionDescriptor::Constant(2.5)));
        assert!(FunctionDescriptor::parse("tanh").is_none());
        let f = FunctionDescriptor::parse("0.5*id").unwrap().jet(3.0);
        assert!(close(f, (1.5, 0.5, 0.0)));
    }
}
