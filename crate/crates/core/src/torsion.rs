//! Torsion of a G₂ structure at a point.
//!
//! All forms are expressed in an adapted orthonormal coframe, where φ is the
//! standard three-form, and the structure equations read
//! `dφ = τ₀*φ + 3τ₁∧φ + *τ₃`, `d*φ = 4τ₁∧*φ + τ₂∧φ`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::TorsionError;
use crate::exterior::{Form, DIM};
use crate::g2::{lambda3, odot_bracket, proj, quad_a, quad_b, quad_c, sigma, MixedTensor, SIGMA_LAMBDA3_RATIO};
use crate::linalg::Mat;
use crate::report::Check;
use crate::scalar::Scalar;
use crate::tables::matrix_of;
use crate::tensor::Sym2Tensor;

/// Default relative threshold for torsion classification.
pub const DEFAULT_FG_EPS: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct TorsionComponents<S> {
    pub tau0: S,
    pub tau1: Form<S>,
    pub tau2: Form<S>,
    pub tau3: Form<S>,
}

fn within<S: Scalar>(residual: f64, scale: f64) -> bool {
    if S::EXACT {
        residual == 0.0
    } else {
        residual <= 1e-10 * scale.max(1.0)
    }
}

impl<S: Scalar> TorsionComponents<S> {
    pub fn zero() -> Self {
        TorsionComponents { tau0: S::zero(), tau1: Form::zero(1), tau2: Form::zero(2), tau3: Form::zero(3) }
    }

    /// Validates degrees and that `τ₂ ∈ Λ²₁₄`, `τ₃ ∈ Λ³₂₇`.
    pub fn new(tau0: S, tau1: Form<S>, tau2: Form<S>, tau3: Form<S>) -> Result<Self, TorsionError> {
        let t = TorsionComponents { tau0, tau1, tau2, tau3 };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<(), TorsionError> {
        for (f, k) in [(&self.tau1, 1), (&self.tau2, 2), (&self.tau3, 3)] {
            if f.degree() != k {
                return Err(crate::error::ExteriorError::Degree { expected: k, found: f.degree() }.into());
            }
        }
        let r2 = (&self.tau2 - &proj(&self.tau2, 14)).max_abs();
        if !within::<S>(r2, self.tau2.max_abs()) {
            return Err(TorsionError::Component { component: "tau2", residual: r2 });
        }
        let r3 = (&self.tau3 - &proj(&self.tau3, 27)).max_abs();
        if !within::<S>(r3, self.tau3.max_abs()) {
            return Err(TorsionError::Component { component: "tau3", residual: r3 });
        }
        Ok(())
    }

    /// Squared form norms `(τ₀², |τ₁|², |τ₂|², |τ₃|²)`.
    pub fn norms2(&self) -> [S; 4] {
        [self.tau0.square(), self.tau1.norm2(), self.tau2.norm2(), self.tau3.norm2()]
    }

    pub fn max_abs(&self) -> f64 {
        [self.tau0.magnitude(), self.tau1.max_abs(), self.tau2.max_abs(), self.tau3.max_abs()]
            .into_iter()
            .fold(0.0, f64::max)
    }

    /// Largest componentwise difference.
    pub fn distance(&self, other: &Self) -> f64 {
        [
            (self.tau0.clone() - other.tau0.clone()).magnitude(),
            (&self.tau1 - &other.tau1).max_abs(),
            (&self.tau2 - &other.tau2).max_abs(),
            (&self.tau3 - &other.tau3).max_abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn to_f64(&self) -> TorsionComponents<f64> {
        TorsionComponents {
            tau0: self.tau0.to_f64(),
            tau1: self.tau1.to_f64(),
            tau2: self.tau2.to_f64(),
            tau3: self.tau3.to_f64(),
        }
    }
}

/// `(dφ, d*φ)` from the structure equations.
pub fn recompose<S: Scalar>(t: &TorsionComponents<S>) -> Result<(Form<S>, Form<S>), TorsionError> {
    t.validate()?;
    Ok(recompose_unchecked(t))
}

fn recompose_unchecked<S: Scalar>(t: &TorsionComponents<S>) -> (Form<S>, Form<S>) {
    let tables = S::tables();
    let (phi, psi) = (&tables.phi, &tables.phi_dual);
    let dphi = &(&psi.scale(&t.tau0) + &t.tau1.wedge(phi).scale(&S::from_i64(3))) + &t.tau3.hodge();
    let dpsi = &t.tau1.wedge(psi).scale(&S::from_i64(4)) + &t.tau2.wedge(phi);
    (dphi, dpsi)
}

/// Inverts the structure equations; rejects forms outside their image.
pub fn extract_torsion<S: Scalar>(
    phi: &Form<S>,
    dphi: &Form<S>,
    dpsi: &Form<S>,
) -> Result<TorsionComponents<S>, TorsionError> {
    let tables = S::tables();
    for (f, k) in [(phi, 3), (dphi, 4), (dpsi, 5)] {
        if f.degree() != k {
            return Err(crate::error::ExteriorError::Degree { expected: k, found: f.degree() }.into());
        }
    }
    let off = (phi - &tables.phi).max_abs();
    if !within::<S>(off, 1.0) {
        return Err(TorsionError::NotStandardPhi(off));
    }
    let tau0 = dphi.inner(&tables.phi_dual) * S::ratio(1, 7);
    let tau1 = Form::from_vector(&tables.tau1_inverse.matvec(dphi.coeffs())).scale(&S::ratio(1, 3));
    let tau3 = proj(dphi, 27).hodge();
    let rest5 = dpsi - &tau1.wedge(&tables.phi_dual).scale(&S::from_i64(4));
    let tau2 = Form::new(2, tables.tau2_inverse.matvec(rest5.coeffs()))?;
    let t = TorsionComponents { tau0, tau1, tau2, tau3 };
    let (rphi, rpsi) = recompose_unchecked(&t);
    let residual = (&rphi - dphi).max_abs().max((&rpsi - dpsi).max_abs());
    if !within::<S>(residual, dphi.max_abs().max(dpsi.max_abs())) {
        return Err(TorsionError::NotInImage { residual });
    }
    Ok(t)
}

/// Fernández–Gray class: which of `τ₀ ↔ 1, τ₂ ↔ 2, τ₃ ↔ 3, τ₁ ↔ 4` are present.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FgType(u8);

impl FgType {
    pub fn from_classes(classes: &[u8]) -> Self {
        FgType(classes.iter().filter(|c| (1..=4).contains(*c)).fold(0, |m, c| m | (1 << c)))
    }

    pub fn contains(self, class: u8) -> bool {
        self.0 & (1 << class) != 0
    }

    pub fn classes(self) -> Vec<u8> {
        (1..=4).filter(|&c| self.contains(c)).collect()
    }

    pub fn is_parallel(self) -> bool {
        self.0 == 0
    }

    /// Parses `"{1,4}"`, `"1,4"`, `"14"` or `"{}"`.
    pub fn parse(text: &str) -> Option<Self> {
        let digits: Vec<u8> = text
            .chars()
            .filter(|c| !matches!(c, '{' | '}' | ',' | ' ' | '+'))
            .map(|c| c.to_digit(10).map(|d| d as u8))
            .collect::<Option<Vec<u8>>>()?;
        if digits.iter().any(|d| !(1..=4).contains(d)) {
            return None;
        }
        Some(Self::from_classes(&digits))
    }
}

impl fmt::Display for FgType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.classes().iter().map(u8::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl Serialize for FgType {
    fn serialize<Ser: serde::Serializer>(&self, s: Ser) -> Result<Ser::Ok, Ser::Error> {
        self.classes().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FgType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let classes = Vec::<u8>::deserialize(d)?;
        Ok(FgType::from_classes(&classes))
    }
}

/// Classifies by comparing each component's form norm with
/// `eps · max(‖(dφ, d*φ)‖, 1)`.
pub fn fg_type<S: Scalar>(t: &TorsionComponents<S>, eps: f64) -> FgType {
    let t = t.to_f64();
    let (dphi, dpsi) = recompose_unchecked(&t);
    let scale = (dphi.norm2() + dpsi.norm2()).sqrt().max(1.0);
    let threshold = eps * scale;
    let norms = [t.tau0.abs(), t.tau1.norm2().sqrt(), t.tau2.norm2().sqrt(), t.tau3.norm2().sqrt()];
    let classes: Vec<u8> =
        [(0, 1), (1, 4), (2, 2), (3, 3)].iter().filter(|(i, _)| norms[*i] > threshold).map(|&(_, c)| c).collect();
    FgType::from_classes(&classes)
}

/// Antisymmetric 7×7 array of a 2-form, `A_ij = β(e_i, e_j)`.
pub fn two_form_matrix<S: Scalar>(b: &Form<S>) -> Mat<S> {
    Mat::from_fn(DIM, DIM, |i, j| {
        if i == j {
            return S::zero();
        }
        let (lo, hi, sign) = if i < j { (i, j, 1) } else { (j, i, -1) };
        let idx = crate::exterior::MultiIndex::from_mask((1 << lo) | (1 << hi));
        b.coeff(idx).scale_i(sign)
    })
}

/// 2-form of the antisymmetric part of a 7×7 array.
pub fn matrix_two_form<S: Scalar>(m: &Mat<S>) -> Form<S> {
    let half = S::ratio(1, 2);
    let coeffs = crate::exterior::MultiIndex::all(2)
        .map(|idx| {
            let p = idx.positions();
            (m[(p[0], p[1])].clone() - m[(p[1], p[0])].clone()) * half.clone()
        })
        .collect();
    Form::new(2, coeffs).expect("2-form length")
}

/// Intrinsic torsion `ξ ∈ V* ⊗ Λ²₇` and its contraction `ξ̄ = ξ_ipq φ_pqj`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntrinsicTorsion<S> {
    pub xi_bar: Mat<S>,
    /// `ξ = Σ_i e^i ⊗ ξ_i` with `ξ_i` the 2-form `ξ_ijk = ξ̄_ip φ_pjk / 6`.
    pub xi: MixedTensor<S>,
}

impl<S: Scalar> IntrinsicTorsion<S> {
    pub fn from_xi_bar(xi_bar: Mat<S>) -> Self {
        let phi = &S::tables().phi;
        let a: Vec<Form<S>> = (0..DIM).map(|p| phi.interior_basis(p)).collect();
        let sixth = S::ratio(1, 6);
        let slices = (0..DIM)
            .map(|i| {
                let mut s = Form::zero(2);
                for (p, ap) in a.iter().enumerate() {
                    if !xi_bar[(i, p)].is_zero() {
                        s += &ap.scale(&(xi_bar[(i, p)].clone() * sixth.clone()));
                    }
                }
                s
            })
            .collect();
        IntrinsicTorsion { xi: MixedTensor::from_slices(slices).expect("seven 2-forms"), xi_bar }
    }

    /// `ξ_i` as the endomorphism `e_j ↦ Σ_k ξ_ijk e_k`.
    pub fn endomorphism(&self, i: usize) -> Mat<S> {
        two_form_matrix(self.xi.slice(i))
    }

    /// Contraction `ξ_ijk + ξ_jki + ξ_kij` as a 3-form.
    pub fn cyclic_sum(&self) -> Form<S> {
        let mut out = Form::zero(3);
        for i in 0..DIM {
            out += &Form::covector(i).wedge(self.xi.slice(i));
        }
        out
    }
}

/// `τ₁ ↦ *(τ₁ ∧ *φ)`, an isomorphism `Λ¹ → Λ²₇`.
fn seven_embedding<S: Scalar>() -> Mat<S> {
    let psi = &S::tables().phi_dual;
    matrix_of(1, 2, |a| a.wedge(psi).hodge())
}

/// Assembles `ξ̄ = −½τ₀ g + 2*(τ₁∧*φ) + τ₂ + σ(τ₃)`.
pub fn intrinsic_from_torsion<S: Scalar>(t: &TorsionComponents<S>) -> IntrinsicTorsion<S> {
    let psi = &S::tables().phi_dual;
    let scalar = Mat::identity(DIM).scale(&(t.tau0.clone() * S::ratio(-1, 2)));
    let seven = two_form_matrix(&t.tau1.wedge(psi).hodge().scale(&S::from_i64(2)));
    let fourteen = two_form_matrix(&t.tau2);
    let xi_bar = scalar.add(&seven).add(&fourteen).add(&sigma(&t.tau3));
    IntrinsicTorsion::from_xi_bar(xi_bar)
}

/// Recovers the torsion quadruple from `ξ̄` by projecting its pieces.
pub fn torsion_from_intrinsic<S: Scalar>(xi: &IntrinsicTorsion<S>) -> TorsionComponents<S> {
    let sym = Sym2Tensor::symmetrize(&xi.xi_bar);
    let tau0 = sym.trace() * S::ratio(-2, 7);
    let skew = matrix_two_form(&xi.xi_bar);
    let emb = seven_embedding::<S>();
    // The embedding satisfies EᵀE = 3.
    let tau1 = Form::from_vector(&emb.transpose().matvec(proj(&skew, 7).coeffs())).scale(&S::ratio(1, 6));
    let tau2 = proj(&skew, 14);
    let tau3 = lambda3(&sym.traceless()).scale(&S::ratio(1, SIGMA_LAMBDA3_RATIO));
    TorsionComponents { tau0, tau1, tau2, tau3 }
}

/// `(dφ, d*φ)` of the pointwise model `dφ = Σ e^i ∧ D_{ξ_i}φ`.
pub fn differentials_from_intrinsic<S: Scalar>(xi: &IntrinsicTorsion<S>) -> (Form<S>, Form<S>) {
    let tables = S::tables();
    let mut dphi = Form::zero(4);
    let mut dpsi = Form::zero(5);
    for i in 0..DIM {
        let a = xi.endomorphism(i);
        let e = Form::covector(i);
        dphi += &e.wedge(&tables.phi.derivation(&a));
        dpsi += &e.wedge(&tables.phi_dual.derivation(&a));
    }
    (dphi, dpsi)
}

/// `s = 21/8 τ₀² + 12 δτ₁ + 30|τ₁|² − ½|τ₂|² − ½|τ₃|²` (form norms).
pub fn scalar_from_torsion<S: Scalar>(t: &TorsionComponents<S>, delta_tau1: &S) -> S {
    let [n0, n1, n2, n3] = t.norms2();
    n0 * S::ratio(21, 8) + delta_tau1.scale_i(12) + n1.scale_i(30) - (n2 + n3) * S::ratio(1, 2)
}

/// The quadratic identities satisfied by any `τ ∈ Λ²₁₄`.
pub fn closed_identities<S: Scalar>(tau: &Form<S>) -> Result<Vec<Check>, TorsionError> {
    let r = (tau - &proj(tau, 14)).max_abs();
    if tau.degree() != 2 || !within::<S>(r, tau.max_abs()) {
        return Err(TorsionError::Component { component: "tau", residual: r });
    }
    let phi = &S::tables().phi;
    let n2 = tau.norm2();
    let tt = tau.wedge(tau);
    let scale = n2.to_f64().powi(2).max(1.0);
    Ok(vec![
        Check::values("*(t^t^phi) = -|t|^2", &(-n2.clone()), &tt.wedge(phi).hodge().top_or_scalar())
            .with_scale(n2.to_f64()),
        Check::values("|t^t|^2 = |t|^4", &n2.square(), &tt.norm2()).with_scale(scale),
        Check::values("|(t^t)_27|^2 = 6/7 |t|^4", &(n2.square() * S::ratio(6, 7)), &proj(&tt, 27).norm2())
            .with_scale(scale),
    ])
}

/// Exterior derivatives of the torsion forms at a point, taken either with
/// `d` or with the canonical `d^∇̄`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorsionDerivatives<S> {
    /// Derivative of `*(τ₁ ∧ *φ)`, a 3-form.
    pub of_tau1: Form<S>,
    /// Derivative of `τ₂`, a 3-form.
    pub of_tau2: Form<S>,
    /// Derivative of `τ₃`, a 4-form.
    pub of_tau3: Form<S>,
}

/// The 2-form `*(τ₁ ∧ *φ)`.
pub fn tau1_two_form<S: Scalar>(t: &TorsionComponents<S>) -> Form<S> {
    t.tau1.wedge(&S::tables().phi_dual).hodge()
}

fn combine<S: Scalar>(terms: &[(S, Form<S>)]) -> Form<S> {
    let mut out = Form::zero(3);
    for (c, f) in terms {
        if !c.is_zero() {
            out += &f.scale(c);
        }
    }
    proj(&out, 27)
}

/// Right-hand side of the generalized Ricci formula in terms of `d`,
/// projected to Λ³₂₇; it equals `λ₃(k₁ Ric₀^g + k₂ Ric₀^φ)`.
///
/// The leading coefficient is `−5k₁ − 4k₂`; with the opposite sign on `k₂`
/// the identity fails on non-closed examples.
pub fn generalized_ricci_rhs<S: Scalar>(t: &TorsionComponents<S>, d: &TorsionDerivatives<S>, k: (S, S)) -> Form<S> {
    let (k1, k2) = k;
    let r = |a: i64, b: i64| k1.clone() * S::from_i64(a) + k2.clone() * S::from_i64(b);
    let half = S::ratio(1, 2);
    let u = tau1_two_form(t);
    combine(&[
        (r(-5, -4), d.of_tau1.clone()),
        (r(10, 8), t.tau1.wedge(&u)),
        (-r(1, -4), d.of_tau2.clone()),
        (r(1, 2) * half.clone(), t.tau2.wedge(&t.tau2).hodge()),
        (r(1, 4), d.of_tau3.hodge()),
        (k2.clone(), quad_a(&t.tau3)),
        (k1.clone() * half.clone(), quad_b(&t.tau3)),
        (-r(1, -4) * half * t.tau0.clone(), t.tau3.clone()),
        (r(1, -4), t.tau1.wedge(&t.tau2)),
        (r(3, -4), t.tau1.wedge(&t.tau3).hodge()),
        (k2.scale_i(2), proj(&odot_bracket(&t.tau2, &t.tau3), 27)),
    ])
}

/// The same right-hand side written with the canonical derivative `d^∇̄`.
pub fn generalized_ricci_rhs_canonical<S: Scalar>(
    t: &TorsionComponents<S>,
    dbar: &TorsionDerivatives<S>,
    k: (S, S),
) -> Form<S> {
    let (k1, k2) = k;
    let r = |a: i64, b: i64, den: i64| (k1.clone() * S::from_i64(a) + k2.clone() * S::from_i64(b)) * S::ratio(1, den);
    let u = tau1_two_form(t);
    combine(&[
        (r(-5, -4, 1), dbar.of_tau1.clone()),
        (r(-10, -8, 3), t.tau1.wedge(&u)),
        (r(-1, 4, 1), dbar.of_tau2.clone()),
        (r(1, 5, 3), t.tau2.wedge(&t.tau2).hodge()),
        (r(1, 4, 1), dbar.of_tau3.hodge()),
        (r(-1, 2, 6), quad_c(&t.tau3)),
        (r(-2, 4, 3) * t.tau0.clone(), t.tau3.clone()),
        (r(-4, -8, 3), t.tau1.wedge(&t.tau2)),
        (r(2, -8, 3), t.tau1.wedge(&t.tau3).hodge()),
        (r(1, 8, 6), proj(&odot_bracket(&t.tau2, &t.tau3), 27)),
    ])
}

/// Converts canonical derivatives into exterior derivatives.
///
/// The `(τ₁ ∧ τ₂)₇` terms carry the coefficients −4/3 and −8/3; the
/// opposite signs do not reproduce `d` on non-closed examples.
pub fn exterior_from_canonical<S: Scalar>(
    t: &TorsionComponents<S>,
    dbar: &TorsionDerivatives<S>,
) -> TorsionDerivatives<S> {
    let tables = S::tables();
    let (phi, psi) = (&tables.phi, &tables.phi_dual);
    let q = |a: i64, b: i64| S::ratio(a, b);
    let u = tau1_two_form(t);
    let t12 = t.tau1.wedge(&t.tau2);
    let t13 = t.tau1.wedge(&t.tau3).hodge();
    let n1 = t.tau1.norm2();
    let of_tau1 = &dbar.of_tau1
        + &(t.tau1.wedge(phi).hodge().scale(&(t.tau0.clone() * q(1, 2))) + t.tau1.wedge(&u).scale(&q(8, 3))
            - phi.scale(&n1.scale_i(2))
            + t12.scale(&q(1, 3))
            - proj(&t12, 7).scale(&q(4, 3))
            + t13.scale(&q(2, 3))
            - proj(&t13, 7).scale(&q(4, 3)));
    let c23 = crate::g2::contract2(&t.tau2, &t.tau3);
    let of_tau2 = &dbar.of_tau2
        + &(t12.scale(&q(2, 3)) - proj(&t12, 7).scale(&q(8, 3))
            + t.tau2.wedge(&t.tau2).hodge().scale(&q(1, 6))
            + phi.scale(&(t.tau2.norm2() * q(1, 6)))
            - odot_bracket(&t.tau2, &t.tau3).scale(&q(1, 6))
            + c23.wedge(phi).hodge().scale(&q(1, 6)));
    let of_tau3 = &dbar.of_tau3
        + &(t.tau3.scale(&t.tau0).hodge().scale(&q(-1, 6)) + t.tau1.wedge(&t.tau3)
            - proj(&t13, 7).hodge().scale(&q(8, 3))
            - c23.wedge(phi).scale(&q(1, 6))
            - quad_a(&t.tau3).hodge().scale(&q(1, 6))
            - quad_b(&t.tau3).hodge().scale(&q(1, 6))
            + psi.scale(&(t.tau3.norm2() * q(1, 6))));
    TorsionDerivatives { of_tau1, of_tau2, of_tau3 }
}

/// Torsion of `e^{2f} g`, `e^{3f} φ` as forms:
/// `(e^{−f}τ₀, τ₁ + df, e^{f}τ₂, e^{2f}τ₃)`, with `exp_f = e^{f}`.
pub fn conformal_transform_with_factor<S: Scalar>(
    t: &TorsionComponents<S>,
    exp_f: &S,
    df: &Form<S>,
) -> TorsionComponents<S> {
    TorsionComponents {
        tau0: t.tau0.clone() / exp_f.clone(),
        tau1: &t.tau1 + df,
        tau2: t.tau2.scale(exp_f),
        tau3: t.tau3.scale(&exp_f.square()),
    }
}

/// [`conformal_transform_with_factor`] at the value `f0` of `f`.
pub fn conformal_transform(t: &TorsionComponents<f64>, f0: f64, df: &Form<f64>) -> TorsionComponents<f64> {
    conformal_transform_with_factor(t, &f0.exp(), df)
}

/// Components of form-level torsion in the rescaled orthonormal coframe
/// `e^f e^i`: a k-form's coefficients pick up `e^{−kf}`.
pub fn to_rescaled_frame<S: Scalar>(t: &TorsionComponents<S>, exp_f: &S) -> TorsionComponents<S> {
    let inv = S::one() / exp_f.clone();
    TorsionComponents {
        tau0: t.tau0.clone(),
        tau1: t.tau1.scale(&inv),
        tau2: t.tau2.scale(&inv.square()),
        tau3: t.tau3.scale(&(inv.square() * inv.clone())),
    }
}

/// Ric^W weights: `k = (4, −5)`.
pub const RIC_W_PARAMETERS: (i64, i64) = (4, -5);

/// Transforms torsion and its derivatives under `φ ↦ e^{3f} φ` and compares
/// `λ₃(Ric^W)` before and after, in the respective orthonormal frames.
///
/// With `k = (4, −5)` the `d(*(τ₁ ∧ *φ))` term has coefficient zero, so the
/// Hessian of `f` never enters and the derivative data can be arbitrary.
/// Returns `(before, after)`; the invariance of Ric^W as a tensor predicts
/// `after = e^{−2f} before`.
pub fn conformal_ric_w(
    t: &TorsionComponents<f64>,
    d: &TorsionDerivatives<f64>,
    f0: f64,
    df: &Form<f64>,
) -> (Form<f64>, Form<f64>) {
    let k = (RIC_W_PARAMETERS.0 as f64, RIC_W_PARAMETERS.1 as f64);
    let before = generalized_ricci_rhs(t, d, k);
    let e = f0.exp();
    let moved = conformal_transform(t, f0, df);
    // d(e^f τ₂) and d(e^{2f} τ₃) as forms in the old coframe.
    let d2 = (&df.wedge(&t.tau2) + &d.of_tau2).scale(&e);
    let d3 = (&df.wedge(&t.tau3).scale(&2.0) + &d.of_tau3).scale(&(e * e));
    let dt =
        TorsionDerivatives { of_tau1: Form::zero(3), of_tau2: d2.scale(&e.powi(-3)), of_tau3: d3.scale(&e.powi(-4)) };
    let after = generalized_ricci_rhs(&to_rescaled_frame(&moved, &e), &dt, k);
    (before, after)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::dimension;
    use crate::scalar::Exact;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_form(rng: &mut ChaCha8Rng, k: usize) -> Form<f64> {
        Form::new(k, (0..dimension(k)).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
    }

    pub(crate) fn random_torsion(rng: &mut ChaCha8Rng) -> TorsionComponents<f64> {
        TorsionComponents::new(
            rng.gen_range(-1.0..1.0),
            random_form(rng, 1),
            proj(&random_form(rng, 2), 14),
            proj(&random_form(rng, 3), 27),
        )
        .unwrap()
    }

    #[test]
    fn parallel_and_nearly_parallel() {
        let z = extract_torsion(&crate::standard_phi(), &Form::<Exact>::zero(4), &Form::zero(5)).unwrap();
        assert_eq!(z, TorsionComponents::zero());
        let psi = crate::standard_phi_dual::<Exact>();
        let t = extract_torsion(&crate::standard_phi(), &psi.scale(&Exact::from_i64(4)), &Form::zero(5)).unwrap();
        assert_eq!(t.tau0, Exact::from_i64(4));
        assert_eq!(t.tau1.max_abs() + t.tau2.max_abs() + t.tau3.max_abs(), 0.0);
    }

    #[test]
    fn recompose_examples() {
        let mut t = TorsionComponents::<Exact>::zero();
        t.tau0 = Exact::one();
        assert_eq!(recompose(&t).unwrap(), (crate::standard_phi_dual(), Form::zero(5)));
        let mut t = TorsionComponents::<Exact>::zero();
        t.tau1 = Form::covector(6);
        let (a, b) = recompose(&t).unwrap();
        let e7 = Form::<Exact>::covector(6);
        assert_eq!(a, e7.wedge(&crate::standard_phi()).scale(&Exact::from_i64(3)));
        assert_eq!(b, e7.wedge(&crate::standard_phi_dual()).scale(&Exact::from_i64(4)));
    }

    #[test]
    fn invalid_components_rejected() {
        let mut t = TorsionComponents::<f64>::zero();
        t.tau2 = crate::exterior::omega();
        assert!(matches!(recompose(&t), Err(TorsionError::Component { component: "tau2", .. })));
        let bad =
            Form::<f64>::covector(0).wedge(&Form::covector(1)).wedge(&Form::covector(2)).wedge(&Form::covector(3));
        let junk = Form::from_vector(&[1.0; 7]).wedge(&bad);
        assert!(matches!(
            extract_torsion(&crate::standard_phi(), &Form::zero(4), &junk),
            Err(TorsionError::NotInImage { .. })
        ));
    }

    #[test]
    fn round_trip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let t = random_torsion(&mut rng);
            let (a, b) = recompose(&t).unwrap();
            let back = extract_torsion(&crate::standard_phi(), &a, &b).unwrap();
            assert!(back.distance(&t) < 1e-12);
        }
    }

    #[test]
    fn intrinsic_torsion_matches_pointwise_model() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..5 {
            let xb = Mat::from_fn(7, 7, |_, _| rng.gen_range(-1.0..1.0));
            let xi = IntrinsicTorsion::from_xi_bar(xb.clone());
            let (a, b) = differentials_from_intrinsic(&xi);
            let t = extract_torsion(&crate::standard_phi(), &a, &b).unwrap();
            let rebuilt = intrinsic_from_torsion(&t);
            assert!(rebuilt.xi_bar.sub(&xb).max_abs() < 1e-12);
            assert!(torsion_from_intrinsic(&rebuilt).distance(&t) < 1e-12);
        }
    }

    #[test]
    fn intrinsic_examples() {
        let mut t = TorsionComponents::<Exact>::zero();
        t.tau0 = Exact::from_i64(3);
        let xi = intrinsic_from_torsion(&t);
        assert_eq!(xi.xi_bar, Mat::identity(7).scale(&Exact::ratio(-3, 2)));
        assert_eq!(intrinsic_from_torsion(&TorsionComponents::<Exact>::zero()).xi, MixedTensor::zero());
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mut t = TorsionComponents::<f64>::zero();
        t.tau2 = proj(&random_form(&mut rng, 2), 14);
        assert!(intrinsic_from_torsion(&t).cyclic_sum().max_abs() < 1e-14);
    }

    #[test]
    fn fg_examples() {
        let mut t = TorsionComponents::<f64>::zero();
        assert!(fg_type(&t, DEFAULT_FG_EPS).is_parallel());
        t.tau0 = 4.0;
        assert_eq!(fg_type(&t, DEFAULT_FG_EPS), FgType::from_classes(&[1]));
        let mut t = TorsionComponents::<f64>::zero();
        t.tau1 = Form::covector(6);
        assert_eq!(fg_type(&t, DEFAULT_FG_EPS).to_string(), "{4}");
        assert_eq!(FgType::parse("{1,3}"), Some(FgType::from_classes(&[3, 1])));
        assert_eq!(FgType::parse("{}"), Some(FgType::default()));
        assert_eq!(FgType::parse("5"), None);
    }

    #[test]
    fn scalar_formula() {
        let mut t = TorsionComponents::<Exact>::zero();
        t.tau0 = Exact::from_i64(4);
        assert_eq!(scalar_from_torsion(&t, &Exact::zero()), Exact::from_i64(42));
        assert_eq!(scalar_from_torsion(&TorsionComponents::<Exact>::zero(), &Exact::zero()), Exact::zero());
        let tau: Form<Exact> = Form::from_int_terms(2, &[(&[1, 2], 1), (&[3, 4], -1)]);
        let mut t = TorsionComponents::<Exact>::zero();
        t.tau2 = tau.clone();
        assert_eq!(scalar_from_torsion(&t, &Exact::zero()), -tau.norm2() * Exact::ratio(1, 2));
    }

    #[test]
    fn closed_identity_values() {
        let tau: Form<Exact> = Form::from_int_terms(2, &[(&[1, 2], 1), (&[3, 4], -1)]);
        let phi = crate::standard_phi::<Exact>();
        assert_eq!(tau.wedge(&tau).wedge(&phi).hodge().top_or_scalar(), Exact::from_i64(-2));
        for c in closed_identities(&tau).unwrap() {
            assert!(c.passed(0.0), "{c:?}");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..10 {
            let tau = proj(&random_form(&mut rng, 2), 14);
            for c in closed_identities(&tau).unwrap() {
                assert!(c.passed(1e-12), "{c:?}");
            }
        }
        for c in closed_identities(&Form::<f64>::zero(2)).unwrap() {
            assert_eq!(c.residual, 0.0);
        }
        assert!(closed_identities(&crate::exterior::omega::<f64>()).is_err());
    }

    #[test]
    fn ric_w_is_conformally_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for _ in 0..10 {
            let t = random_torsion(&mut rng);
            let d = TorsionDerivatives {
                of_tau1: random_form(&mut rng, 3),
                of_tau2: random_form(&mut rng, 3),
                of_tau3: random_form(&mut rng, 4),
            };
            let f0: f64 = rng.gen_range(-1.0..1.0);
            let (before, after) = conformal_ric_w(&t, &d, f0, &random_form(&mut rng, 1));
            let expected = before.scale(&(-2.0 * f0).exp());
            assert!((&after - &expected).max_abs() < 1e-12 * before.max_abs().max(1.0), "{f0}");
        }
    }

    #[test]
    fn conformal_rule() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let t = random_torsion(&mut rng);
        let same = conformal_transform(&t, 0.0, &Form::zero(1));
        assert!(same.distance(&t) < 1e-15);
        let mut t0 = TorsionComponents::<f64>::zero();
        t0.tau0 = 2.0;
        let c = conformal_transform(&t0, 0.5, &Form::zero(1));
        assert!((c.tau0 - 2.0 * (-0.5f64).exp()).abs() < 1e-15);
        let df = random_form(&mut rng, 1);
        let c = conformal_transform(&TorsionComponents::zero(), 0.3, &df);
        assert_eq!(fg_type(&c, DEFAULT_FG_EPS), FgType::from_classes(&[4]));
    }
}
