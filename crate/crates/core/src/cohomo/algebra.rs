//! Invariant forms on `I × M*` for an SU(3)-structure fiber.
//!
//! The fiber carries 2-forms `ω₁, ω₂, ω₃` and 3-forms `ψ±` with
//! `dω_i = σψ⁺`, `dψ⁺ = 0` and `dψ⁻ = −4σ Σ_{i<j} ω_iω_j`. With `ω = Σ ω_i`
//! this is the nearly Kähler system `dω = 3σψ⁺`, `dψ⁻ = −2σω²`, and with
//! `σ = 1/2` it is the invariant algebra of `SU(3)/T²`. Ten fiber symbols
//! times `{1, dt}` close under wedge, `d` and Hodge.

use std::ops::{Add, Neg, Sub};
use std::sync::OnceLock;

use crate::exterior::{psi_minus, psi_plus, Form};
use crate::jet::Jet;
use crate::linalg::Mat;
use crate::scalar::Scalar;

pub const FIBER_SYMBOLS: usize = 10;
pub const SYMBOLS: usize = 2 * FIBER_SYMBOLS;

const ONE: usize = 0;
const PSI_PLUS: usize = 4;
const PSI_MINUS: usize = 5;
const PAIR_PRODUCTS: [usize; 3] = [6, 7, 8];

const FIBER_NAMES: [&str; FIBER_SYMBOLS] = ["1", "ω₁", "ω₂", "ω₃", "ψ⁺", "ψ⁻", "ω₂ω₃", "ω₁ω₃", "ω₁ω₂", "ω₁ω₂ω₃"];

/// Powers of `f₁, f₂, f₃` by which each fiber symbol is shrunk in the
/// orthonormal coframe `f_i e^{2i−1}, f_i e^{2i}`.
const WEIGHTS: [[i32; 3]; FIBER_SYMBOLS] =
    [[0, 0, 0], [2, 0, 0], [0, 2, 0], [0, 0, 2], [1, 1, 1], [1, 1, 1], [0, 2, 2], [2, 0, 2], [2, 2, 0], [2, 2, 2]];

pub fn symbol_name(s: usize) -> String {
    if s < FIBER_SYMBOLS {
        FIBER_NAMES[s].to_string()
    } else if s == FIBER_SYMBOLS {
        "dt".to_string()
    } else {
        format!("{}∧dt", FIBER_NAMES[s - FIBER_SYMBOLS])
    }
}

pub fn symbol_degree(s: usize) -> usize {
    let fiber = s % FIBER_SYMBOLS;
    let base = [0, 2, 2, 2, 3, 3, 4, 4, 4, 6][fiber];
    base + usize::from(s >= FIBER_SYMBOLS)
}

fn omega_i(i: usize) -> Form<f64> {
    Form::from_int_terms(2, &[(&[2 * i + 1, 2 * i + 2], 1)])
}

/// Image of a symbol at the model point `f₁ = f₂ = f₃ = 1`, with `dt ↦ e⁷`.
pub fn model_image(s: usize) -> Form<f64> {
    let fiber = match s % FIBER_SYMBOLS {
        0 => Form::scalar(1.0),
        i @ 1..=3 => omega_i(i - 1),
        4 => psi_plus(),
        5 => psi_minus(),
        i @ 6..=8 => {
            let skip = i - 6;
            let others: Vec<usize> = (0..3).filter(|&j| j != skip).collect();
            omega_i(others[0]).wedge(&omega_i(others[1]))
        }
        _ => omega_i(0).wedge(&omega_i(1)).wedge(&omega_i(2)),
    };
    if s >= FIBER_SYMBOLS {
        fiber.wedge(&Form::covector(6))
    } else {
        fiber
    }
}

/// Sparse decomposition of a model-point form over the symbol images.
fn decompose_model(form: &Form<f64>) -> Vec<(usize, f64)> {
    let mut out = Vec::new();
    let mut rest = form.clone();
    for s in (0..SYMBOLS).filter(|&s| symbol_degree(s) == form.degree()) {
        let img = model_image(s);
        let c = form.inner(&img) / img.norm2();
        if c != 0.0 {
            out.push((s, c));
            rest -= &img.scale(&c);
        }
    }
    assert!(rest.max_abs() < 1e-14, "model-point form outside the invariant algebra: {form}");
    out
}

struct Tables {
    /// `wedge[a][b]`: symbol and coefficient of the product, if nonzero.
    wedge: Vec<Vec<Option<(usize, f64)>>>,
    /// Model-point Hodge star of each symbol.
    hodge: Vec<(usize, f64)>,
}

fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(|| {
        let images: Vec<Form<f64>> = (0..SYMBOLS).map(model_image).collect();
        let wedge = (0..SYMBOLS)
            .map(|a| {
                (0..SYMBOLS)
                    .map(|b| {
                        let prod = crate::exterior::wedge(&images[a], &images[b]).ok()?;
                        let terms = decompose_model(&prod);
                        assert!(terms.len() <= 1, "product of two symbols is not a symbol");
                        terms.first().copied()
                    })
                    .collect()
            })
            .collect();
        let hodge = images
            .iter()
            .map(|img| {
                let terms = decompose_model(&img.hodge());
                assert_eq!(terms.len(), 1, "Hodge star of a symbol is not a symbol");
                terms[0]
            })
            .collect();
        Tables { wedge, hodge }
    })
}

/// A fiber scale `(f₁, f₂, f₃)` with jets, shared by warped and
/// cohomogeneity-one metrics `dt² + Σ f_i² g_i`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FiberScale(pub [Jet; 3]);

impl FiberScale {
    pub fn uniform(f: Jet) -> Self {
        FiberScale([f; 3])
    }

    /// `Π f_i^{n_i}`.
    fn power(&self, n: [i32; 3]) -> Jet {
        (0..3).fold(Jet::constant(1.0), |acc, i| if n[i] == 0 { acc } else { acc * self.0[i].powi(n[i]) })
    }

    fn values(&self) -> [f64; 3] {
        [self.0[0].value, self.0[1].value, self.0[2].value]
    }
}

/// An invariant form with jet coefficients; degrees may be mixed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InvariantForm {
    coeffs: [Jet; SYMBOLS],
}

impl Default for InvariantForm {
    fn default() -> Self {
        InvariantForm { coeffs: [Jet::constant(0.0); SYMBOLS] }
    }
}

impl InvariantForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn symbol(s: usize, c: Jet) -> Self {
        let mut out = Self::zero();
        out.coeffs[s] = c;
        out
    }

    pub fn one() -> Self {
        Self::symbol(ONE, Jet::constant(1.0))
    }

    pub fn function(c: Jet) -> Self {
        Self::symbol(ONE, c)
    }

    pub fn dt() -> Self {
        Self::symbol(FIBER_SYMBOLS, Jet::constant(1.0))
    }

    pub fn omega_i(i: usize) -> Self {
        Self::symbol(1 + i, Jet::constant(1.0))
    }

    /// `ω = ω₁ + ω₂ + ω₃`.
    pub fn omega() -> Self {
        (0..3).map(Self::omega_i).fold(Self::zero(), |a, b| a + b)
    }

    pub fn psi_plus() -> Self {
        Self::symbol(PSI_PLUS, Jet::constant(1.0))
    }

    pub fn psi_minus() -> Self {
        Self::symbol(PSI_MINUS, Jet::constant(1.0))
    }

    pub fn coeff(&self, s: usize) -> Jet {
        self.coeffs[s]
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, Jet)> + '_ {
        self.coeffs.iter().copied().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn scale(&self, c: Jet) -> Self {
        let mut out = *self;
        for x in out.coeffs.iter_mut() {
            *x = *x * c;
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Self {
        let t = tables();
        let mut out = Self::zero();
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                if let Some((s, k)) = t.wedge[a][b] {
                    out.coeffs[s] = out.coeffs[s] + ca * cb * Jet::constant(k);
                }
            }
        }
        out
    }

    /// Exterior derivative for fiber constant `σ`; each coefficient loses one jet order.
    pub fn d(&self, sigma: f64) -> Self {
        let mut out = Self::zero();
        for (s, c) in self.terms() {
            let dt_part = Self::dt().wedge(&Self::symbol(s, Jet::constant(1.0)));
            out = out + dt_part.scale(c.derivative()) + symbol_d(s, sigma).scale(c);
        }
        out
    }

    /// Hodge star of `dt² + Σ f_i² g_i` with orientation `vol_t ∧ dt`.
    pub fn hodge(&self, scale: &FiberScale) -> Self {
        let t = tables();
        let mut out = Self::zero();
        for (s, c) in self.terms() {
            let (target, k) = t.hodge[s];
            let n = WEIGHTS[s % FIBER_SYMBOLS];
            let m = WEIGHTS[target % FIBER_SYMBOLS];
            let factor = scale.power([m[0] - n[0], m[1] - n[1], m[2] - n[2]]);
            out.coeffs[target] = out.coeffs[target] + c * factor * Jet::constant(k);
        }
        out
    }

    /// Part of the given degree.
    pub fn part(&self, degree: usize) -> Self {
        let mut out = *self;
        for (s, x) in out.coeffs.iter_mut().enumerate() {
            if symbol_degree(s) != degree {
                *x = Jet::constant(0.0);
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    /// The degree-`k` part as a form in the orthonormal coframe
    /// `ê^{2i−1,2i} = f_i e^{2i−1,2i}`, `ê⁷ = dt`.
    pub fn pointwise(&self, degree: usize, scale: &FiberScale) -> Form<f64> {
        let f = scale.values();
        let mut out = Form::zero(degree);
        for (s, c) in self.terms().filter(|(s, _)| symbol_degree(*s) == degree) {
            let n = WEIGHTS[s % FIBER_SYMBOLS];
            let shrink: f64 = (0..3).map(|i| f[i].powi(-n[i])).product();
            out += &model_image(s).scale(&(c.value * shrink));
        }
        out
    }

    /// Scalar value of the degree-0 part.
    pub fn scalar_value(&self) -> Jet {
        self.coeffs[ONE]
    }

    /// Coefficient of `vol₀ ∧ dt`, the top-degree part.
    pub fn top_value(&self) -> Jet {
        self.coeffs[SYMBOLS - 1]
    }
}

/// `d` of a bare symbol.
fn symbol_d(s: usize, sigma: f64) -> InvariantForm {
    let fiber = s % FIBER_SYMBOLS;
    let sig = Jet::constant(sigma);
    let base = match fiber {
        1..=3 => InvariantForm::psi_plus().scale(sig),
        PSI_MINUS => PAIR_PRODUCTS
            .iter()
            .fold(InvariantForm::zero(), |acc, &p| acc + InvariantForm::symbol(p, Jet::constant(-4.0 * sigma))),
        _ => InvariantForm::zero(),
    };
    if s >= FIBER_SYMBOLS {
        base.wedge(&InvariantForm::dt())
    } else {
        base
    }
}

impl Add for InvariantForm {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a = *a + b;
        }
        self
    }
}

impl Sub for InvariantForm {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for InvariantForm {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(Jet::constant(-1.0))
    }
}

impl std::fmt::Display for InvariantForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (s, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{:.6}·{}", c.value, symbol_name(s))?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Coframe substitution rotating `ê¹ + iê²` by the phase `e^{iθ}`; it takes
/// `cos θ ψ⁺ − sin θ ψ⁻` to `ψ⁺` and fixes `ω` and `dt`.
pub fn phase_rotation(theta: f64) -> Mat<f64> {
    let (s, c) = theta.sin_cos();
    let mut m = Mat::identity(7);
    m[(0, 0)] = c;
    m[(0, 1)] = s;
    m[(1, 0)] = -s;
    m[(1, 1)] = c;
    m
}
