//! Warped products over nearly Kähler fibers and cohomogeneity-one metrics
//! over `SU(3)/T²`, sampled as jets at a point `t`.

use serde::{Deserialize, Serialize};

use crate::error::CohomError;
use crate::exterior::Form;
use crate::jet::{FunctionDescriptor, Jet};
use crate::linalg::{solve, Mat};
use crate::report::Check;
use crate::scalar::Scalar;
use crate::torsion::{
    extract_torsion, generalized_ricci_rhs, scalar_from_torsion, TorsionComponents, TorsionDerivatives,
};

use super::algebra::{phase_rotation, FiberScale, InvariantForm};

/// Pass threshold for the comparison of the two torsion routes.
pub const ROUTE_TOLERANCE: f64 = 1e-9;

fn c(x: f64) -> Jet {
    Jet::constant(x)
}

/// `g = dt² + f² g*` over a nearly Kähler fiber with constant `σ`, and
/// `φ = f²ω∧dt + f³(cos θ ψ⁺ − sin θ ψ⁻)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WarpSpec {
    pub f: Jet,
    pub theta: Jet,
    pub sigma: f64,
}

impl WarpSpec {
    pub fn new(f: Jet, theta: Jet, sigma: f64) -> Result<Self, CohomError> {
        if f.value.is_nan() || f.value <= 0.0 {
            return Err(CohomError::NonPositiveWarp(f.value));
        }
        if sigma.is_nan() || sigma < 0.0 {
            return Err(CohomError::BadDescriptor(format!("σ = {sigma} must be non-negative")));
        }
        Ok(WarpSpec { f, theta, sigma })
    }

    pub fn from_descriptors(
        f: &FunctionDescriptor,
        theta: &FunctionDescriptor,
        sigma: f64,
        t: f64,
    ) -> Result<Self, CohomError> {
        Self::new(f.jet(t), theta.jet(t), sigma)
    }

    fn profile(&self) -> Profile {
        Profile { scale: FiberScale::uniform(self.f), theta: self.theta, sigma: self.sigma }
    }
}

/// `g = dt² + Σ f_i² g_i` over `SU(3)/T²` with
/// `φ = Σ f_i² ω_i ∧ dt + f₁f₂f₃(cos θ ψ⁺ − sin θ ψ⁻)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CohomSpec {
    pub f: [Jet; 3],
    pub theta: Jet,
}

impl CohomSpec {
    pub fn new(f: [Jet; 3], theta: Jet) -> Result<Self, CohomError> {
        if let Some(bad) = f.iter().find(|x| x.value.is_nan() || x.value <= 0.0) {
            return Err(CohomError::NonPositiveWarp(bad.value));
        }
        Ok(CohomSpec { f, theta })
    }

    /// Triple with the given values whose derivatives satisfy `(f_if_j)′ = f_k`.
    pub fn with_holonomy(values: [f64; 3], theta: Jet) -> Result<Self, CohomError> {
        Self::new(holonomy_profile(values)?, theta)
    }

    fn profile(&self) -> Profile {
        Profile { scale: FiberScale(self.f), theta: self.theta, sigma: 0.5 }
    }
}

/// Shared data of both families: the `SU(3)/T²` algebra is the `σ = 1/2` case.
#[derive(Clone, Copy, Debug)]
struct Profile {
    scale: FiberScale,
    theta: Jet,
    sigma: f64,
}

impl Profile {
    fn volume_factor(&self) -> Jet {
        let [a, b, d] = self.scale.0;
        a * b * d
    }

    fn omega_i_t(&self, i: usize) -> InvariantForm {
        InvariantForm::omega_i(i).scale(self.scale.0[i] * self.scale.0[i])
    }

    fn omega_t(&self) -> InvariantForm {
        (0..3).fold(InvariantForm::zero(), |acc, i| acc + self.omega_i_t(i))
    }

    fn psi_t_plus(&self) -> InvariantForm {
        let (s, co) = (self.theta.sin(), self.theta.cos());
        (InvariantForm::psi_plus().scale(co) - InvariantForm::psi_minus().scale(s)).scale(self.volume_factor())
    }

    fn psi_t_minus(&self) -> InvariantForm {
        let (s, co) = (self.theta.sin(), self.theta.cos());
        (InvariantForm::psi_plus().scale(s) + InvariantForm::psi_minus().scale(co)).scale(self.volume_factor())
    }

    fn phi(&self) -> InvariantForm {
        self.omega_t().wedge(&InvariantForm::dt()) + self.psi_t_plus()
    }

    fn phi_dual(&self) -> InvariantForm {
        let w = self.omega_t();
        w.wedge(&w).scale(c(0.5)) + self.psi_t_minus().wedge(&InvariantForm::dt())
    }

    /// Pointwise form in the coframe where `φ` is standard.
    fn adapted(&self, form: &InvariantForm, degree: usize) -> Form<f64> {
        form.pointwise(degree, &self.scale).pullback(&phase_rotation(self.theta.value))
    }

    fn adapted_torsion(&self, t: &SymbolicTorsion) -> TorsionComponents<f64> {
        TorsionComponents {
            tau0: t.tau0.value,
            tau1: self.adapted(&t.tau1, 1),
            tau2: self.adapted(&t.tau2, 2),
            tau3: self.adapted(&t.tau3, 3),
        }
    }

    /// Torsion from the invariant `d` and the generic extraction.
    fn generic_torsion(&self) -> Result<TorsionComponents<f64>, CohomError> {
        let phi = self.phi();
        let dphi = phi.d(self.sigma);
        let dpsi = self.phi_dual().d(self.sigma);
        Ok(extract_torsion(&self.adapted(&phi, 3), &self.adapted(&dphi, 4), &self.adapted(&dpsi, 5))?)
    }

    /// Codifferential `δα = −*d*α` of a 1-form.
    fn codifferential_1(&self, a: &InvariantForm) -> Jet {
        -a.hodge(&self.scale).d(self.sigma).hodge(&self.scale).scalar_value()
    }
}

/// Torsion forms with jet coefficients, in the invariant algebra.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymbolicTorsion {
    pub tau0: Jet,
    pub tau1: InvariantForm,
    pub tau2: InvariantForm,
    pub tau3: InvariantForm,
}

/// Closed-form warped torsion:
/// `τ₀ = 4/7(θ′ + 6σ sin θ/f)`, `τ₁ = (f′ − σ cos θ)/f dt`, `τ₂ = 0`,
/// `τ₃ = −1/7(θ′ − σ sin θ/f)(4ω_t∧dt − 3ψ_t⁺)`.
pub fn warped_torsion_formula(spec: &WarpSpec) -> SymbolicTorsion {
    let p = spec.profile();
    let (f, th) = (spec.f, spec.theta);
    let dth = th.derivative();
    let sig = c(spec.sigma);
    let s_over_f = sig * th.sin() / f;
    let tau3_shape = p.omega_t().wedge(&InvariantForm::dt()).scale(c(4.0)) - p.psi_t_plus().scale(c(3.0));
    SymbolicTorsion {
        tau0: c(4.0 / 7.0) * (dth + c(6.0) * s_over_f),
        tau1: InvariantForm::dt().scale((f.derivative() - sig * th.cos()) / f),
        tau2: InvariantForm::zero(),
        tau3: tau3_shape.scale(c(-1.0 / 7.0) * (dth - s_over_f)),
    }
}

/// Closed-form cohomogeneity-one torsion, valid when `(f_if_j)′ = f_k`.
pub fn cohom_torsion_formula(spec: &CohomSpec) -> SymbolicTorsion {
    let p = spec.profile();
    let f = spec.f;
    let vol = p.volume_factor();
    let sq: Vec<Jet> = f.iter().map(|x| *x * *x).collect();
    let h = (sq[0] + sq[1] + sq[2]) / (c(2.0) * vol);
    let th = spec.theta;
    let dth = th.derivative();
    let (s, co) = (th.sin(), th.cos());
    let one_minus_cos = c(1.0) - co;
    let mut tau2 = InvariantForm::zero();
    let mut tau3 = p.psi_t_plus().scale(c(3.0 / 7.0) * (dth - c(1.0 / 3.0) * h * s));
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let w = p.omega_i_t(i);
        tau2 = tau2 + w.scale(c(2.0) * sq[i] - sq[j] - sq[k]);
        let coeff = dth - (c(5.0) * sq[i] - c(2.0) * (sq[j] + sq[k])) / (c(2.0) * vol) * s;
        tau3 = tau3 - w.wedge(&InvariantForm::dt()).scale(c(4.0 / 7.0) * coeff);
    }
    SymbolicTorsion {
        tau0: c(4.0 / 7.0) * (dth + c(2.0) * h * s),
        tau1: InvariantForm::dt().scale(c(1.0 / 3.0) * h * one_minus_cos),
        tau2: tau2.scale(c(-2.0) * one_minus_cos / (c(3.0) * vol)),
        tau3,
    }
}

/// The two torsion computations at one sample point.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoRouteTorsion {
    /// Closed-form expressions, in the adapted orthonormal coframe.
    pub closed_form: TorsionComponents<f64>,
    /// Invariant `d` followed by generic extraction.
    pub generic: TorsionComponents<f64>,
    pub residual: f64,
}

impl TwoRouteTorsion {
    fn new(closed_form: TorsionComponents<f64>, generic: TorsionComponents<f64>) -> Self {
        let residual = closed_form.distance(&generic);
        TwoRouteTorsion { closed_form, generic, residual }
    }

    pub fn agree(&self, tol: f64) -> bool {
        self.residual <= tol * self.generic.max_abs().max(1.0)
    }

    fn checked(self) -> Result<Self, CohomError> {
        if self.agree(ROUTE_TOLERANCE) {
            Ok(self)
        } else {
            Err(CohomError::RouteMismatch(self.residual))
        }
    }
}

/// `φ` and `*φ` of a warped spec, symbolic and at the sample point in the
/// coframe `f e¹, …, f e⁶, dt`.
#[derive(Clone, Debug, PartialEq)]
pub struct WarpedPhi {
    pub phi: InvariantForm,
    pub phi_dual: InvariantForm,
    pub pointwise: Form<f64>,
    pub pointwise_dual: Form<f64>,
}

pub fn warped_phi(spec: &WarpSpec) -> Result<WarpedPhi, CohomError> {
    let spec = WarpSpec::new(spec.f, spec.theta, spec.sigma)?;
    let p = spec.profile();
    let (phi, phi_dual) = (p.phi(), p.phi_dual());
    Ok(WarpedPhi {
        pointwise: phi.pointwise(3, &p.scale),
        pointwise_dual: phi_dual.pointwise(4, &p.scale),
        phi,
        phi_dual,
    })
}

/// Both routes for a warped spec; fails if they disagree.
pub fn warped_torsion(spec: &WarpSpec) -> Result<TwoRouteTorsion, CohomError> {
    compare_warped_routes(spec)?.checked()
}

/// Both routes without the agreement requirement.
pub fn compare_warped_routes(spec: &WarpSpec) -> Result<TwoRouteTorsion, CohomError> {
    let spec = WarpSpec::new(spec.f, spec.theta, spec.sigma)?;
    let p = spec.profile();
    Ok(TwoRouteTorsion::new(p.adapted_torsion(&warped_torsion_formula(&spec)), p.generic_torsion()?))
}

/// Both routes for a cohomogeneity-one spec; fails if they disagree.
pub fn cohom_torsion(spec: &CohomSpec) -> Result<TwoRouteTorsion, CohomError> {
    compare_cohom_routes(spec)?.checked()
}

pub fn compare_cohom_routes(spec: &CohomSpec) -> Result<TwoRouteTorsion, CohomError> {
    let spec = CohomSpec::new(spec.f, spec.theta)?;
    let p = spec.profile();
    Ok(TwoRouteTorsion::new(p.adapted_torsion(&cohom_torsion_formula(&spec)), p.generic_torsion()?))
}

/// `(f_if_j)′ − f_k` for the pairs `(1,2), (1,3), (2,3)`.
pub fn holonomy_residual(f: &[Jet; 3]) -> [f64; 3] {
    [(0, 1, 2), (0, 2, 1), (1, 2, 0)].map(|(i, j, k)| (f[i] * f[j]).derivative().value - f[k].value)
}

/// Completes positive values to jets solving `(f_if_j)′ = f_k` to second order.
pub fn holonomy_profile(values: [f64; 3]) -> Result<[Jet; 3], CohomError> {
    if let Some(bad) = values.iter().find(|x| x.is_nan() || **x <= 0.0) {
        return Err(CohomError::NonPositiveWarp(*bad));
    }
    let pairs = [(0, 1, 2), (0, 2, 1), (1, 2, 0)];
    let m = Mat::from_fn(3, 3, |row, col| {
        let (i, j, _) = pairs[row];
        if col == i {
            values[j]
        } else if col == j {
            values[i]
        } else {
            0.0
        }
    });
    // The determinant is −2f₁f₂f₃, nonzero for positive values.
    let rhs1: Vec<f64> = pairs.iter().map(|&(_, _, k)| values[k]).collect();
    let d1 = solve(&m, &rhs1).expect("holonomy system is invertible");
    // Differentiating once more: f_i″f_j + 2f_i′f_j′ + f_if_j″ = f_k′.
    let rhs2: Vec<f64> = pairs.iter().map(|&(i, j, k)| d1[k] - 2.0 * d1[i] * d1[j]).collect();
    let d2 = solve(&m, &rhs2).expect("holonomy system is invertible");
    Ok([0, 1, 2].map(|i| Jet::new(values[i], d1[i], d2[i])))
}

/// The two families of solutions of `θ′ = b sin θ`, given `a = exp ∫ b`
/// as a jet: `sin θ = 0 = θ′`, or `θ = ±2 arctan a`, so that
/// `cos θ = (1 − a²)/(1 + a²)` and `sin θ = ±2a/(1 + a²)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaBranches {
    pub stationary: [Jet; 2],
    pub moving: [Jet; 2],
}

pub fn theta_family(a: Jet) -> ThetaBranches {
    let up = a.atan().scale_i(2);
    ThetaBranches { stationary: [c(0.0), c(std::f64::consts::PI)], moving: [up, -up] }
}

/// The moving solution of `θ′ = b sin θ` with `ln a(t) = log_a`.
pub fn theta_solving(b: Jet, log_a: f64) -> Jet {
    theta_family(Jet::new(log_a, b.value, b.d1).exp()).moving[0]
}

/// Norm of `λ₃(Ric^W)` from the generalized Ricci formula with `k = (4, −5)`,
/// evaluated on the closed-form warped torsion.
pub fn ric_w_vanishes(spec: &WarpSpec) -> Result<f64, CohomError> {
    let spec = WarpSpec::new(spec.f, spec.theta, spec.sigma)?;
    let p = spec.profile();
    let t = warped_torsion_formula(&spec);
    let u = t.tau1.wedge(&p.phi_dual()).hodge(&p.scale);
    let d = TorsionDerivatives {
        of_tau1: p.adapted(&u.d(p.sigma), 3),
        of_tau2: p.adapted(&t.tau2.d(p.sigma), 3),
        of_tau3: p.adapted(&t.tau3.d(p.sigma), 4),
    };
    let rhs = generalized_ricci_rhs(&p.adapted_torsion(&t), &d, (4.0, -5.0));
    Ok(rhs.max_abs())
}

/// Scalar curvature of a warped spec from its torsion.
pub fn warped_scalar_curvature(spec: &WarpSpec) -> Result<f64, CohomError> {
    let spec = WarpSpec::new(spec.f, spec.theta, spec.sigma)?;
    let p = spec.profile();
    let t = warped_torsion_formula(&spec);
    let delta = p.codifferential_1(&t.tau1);
    Ok(scalar_from_torsion(&p.adapted_torsion(&t), &delta.value))
}

/// Residuals of `(f′)² + ρf² = ρ*` and `f″ + ρf = 0`.
pub fn einstein_warp_check(f: Jet, rho: f64, rho_star: f64) -> [f64; 2] {
    [f.d1 * f.d1 + rho * f.value * f.value - rho_star, f.d2 + rho * f.value]
}

/// Differentials of the fundamental forms as displayed in closed form, against
/// the invariant `d`.
pub fn displayed_derivative_checks(spec: &WarpSpec) -> Result<Vec<Check>, CohomError> {
    let spec = WarpSpec::new(spec.f, spec.theta, spec.sigma)?;
    let p = spec.profile();
    let (f, th, sig) = (spec.f, spec.theta, c(spec.sigma));
    let (s, co) = (th.sin(), th.cos());
    let dt = InvariantForm::dt();
    let (w, pp, pm) = (p.omega_t(), p.psi_t_plus(), p.psi_t_minus());
    let w2 = w.wedge(&w);
    let log_f = f.derivative() / f;
    let dtheta = th.derivative();
    let sigma_f = sig / f;
    let expected_dw = dt.wedge(&w).scale(c(2.0) * log_f) + (pp.scale(co) + pm.scale(s)).scale(c(3.0) * sigma_f);
    let expected_dpp =
        dt.wedge(&pp).scale(c(3.0) * log_f) - dt.wedge(&pm).scale(dtheta) + w2.scale(c(2.0) * sigma_f * s);
    let expected_dpm =
        dt.wedge(&pm).scale(c(3.0) * log_f) + dt.wedge(&pp).scale(dtheta) - w2.scale(c(2.0) * sigma_f * co);
    let expected_dphi = pp.wedge(&dt).scale(c(-3.0) * (f.derivative() - sig * co) / f)
        + pm.wedge(&dt).scale(dtheta + c(3.0) * sigma_f * s)
        + w2.scale(c(2.0) * sigma_f * s);
    let expected_dpsi = dt.wedge(&w2).scale(c(2.0) * (f.derivative() - sig * co) / f);
    let scale = spec.f.value.max(1.0).powi(3);
    let check = |name: &str, expected: InvariantForm, actual: InvariantForm| {
        Check::residual(name, (expected - actual).max_abs(), false).with_scale(scale)
    };
    Ok(vec![
        check("dω_t", expected_dw, w.d(p.sigma)),
        check("dψ_t⁺", expected_dpp, pp.d(p.sigma)),
        check("dψ_t⁻", expected_dpm, pm.d(p.sigma)),
        check("dφ", expected_dphi, p.phi().d(p.sigma)),
        check("d*φ", expected_dpsi, p.phi_dual().d(p.sigma)),
        check("*φ is the Hodge dual of φ", p.phi_dual(), p.phi().hodge(&p.scale)),
    ])
}

/// Serializable description of a sampled spec, used in sweep tables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JetTriple {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl From<Jet> for JetTriple {
    fn from(j: Jet) -> Self {
        JetTriple { value: j.value, d1: j.d1, d2: j.d2 }
    }
}

impl From<&JetTriple> for Jet {
    fn from(j: &JetTriple) -> Self {
        Jet::new(j.value, j.d1, j.d2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::standard_phi;
    use crate::torsion::{fg_type, FgType, DEFAULT_FG_EPS};
    use rand::{Rng, SeedableRng};
    use std::f64::consts::PI;

    fn t(x: f64) -> Jet {
        Jet::variable(x)
    }

    #[test]
    fn flat_and_nearly_parallel() {
        let flat = warped_torsion(&WarpSpec::new(t(1.3), c(0.0), 1.0).unwrap()).unwrap();
        assert!(flat.generic.max_abs() < 1e-12);
        for x in [0.4, 1.0, 2.5] {
            let np = warped_torsion(&WarpSpec::new(t(x).sin(), t(x), 1.0).unwrap()).unwrap();
            assert!((np.generic.tau0 - 4.0).abs() < 1e-12);
            assert!(np.generic.tau1.max_abs() + np.generic.tau2.max_abs() + np.generic.tau3.max_abs() < 1e-12);
        }
    }

    #[test]
    fn sphere_with_constant_phase_is_type_four() {
        for x in [0.3, 0.9, 1.5, 2.2, 2.9] {
            let r = warped_torsion(&WarpSpec::new(t(x).sin(), c(0.0), 1.0).unwrap()).unwrap();
            let mut expected = Form::zero(1);
            expected += &Form::covector(6).scale(&-(x / 2.0).tan());
            assert!((&r.generic.tau1 - &expected).max_abs() < 1e-12);
            assert_eq!(fg_type(&r.generic, DEFAULT_FG_EPS), FgType::from_classes(&[4]));
        }
    }

    #[test]
    fn unit_phi_at_equator() {
        let spec = WarpSpec::new(t(PI / 2.0).sin(), t(PI / 2.0), 1.0).unwrap();
        let w = warped_phi(&spec).unwrap();
        assert!((w.pointwise.norm2() - 7.0).abs() < 1e-12);
        let flat = warped_phi(&WarpSpec::new(c(1.0), c(0.0), 0.0).unwrap()).unwrap();
        assert_eq!(flat.pointwise, standard_phi());
    }

    #[test]
    fn random_specs_agree_and_have_vanishing_ric_w() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let f = Jet::new(rng.gen_range(0.3..2.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let th = Jet::new(rng.gen_range(-3.0..3.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let spec = WarpSpec::new(f, th, rng.gen_range(0.0..1.5)).unwrap();
            let r = compare_warped_routes(&spec).unwrap();
            assert!(r.agree(ROUTE_TOLERANCE), "{r:?}");
            assert!(ric_w_vanishes(&spec).unwrap() < 1e-9);
            for check in displayed_derivative_checks(&spec).unwrap() {
                assert!(check.passed(1e-12), "{check:?}");
            }
        }
    }

    #[test]
    fn cohom_routes_agree() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let values = [rng.gen_range(0.3..2.0), rng.gen_range(0.3..2.0), rng.gen_range(0.3..2.0)];
            let th = Jet::new(rng.gen_range(-3.0..3.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let spec = CohomSpec::with_holonomy(values, th).unwrap();
            assert!(holonomy_residual(&spec.f).iter().all(|r| r.abs() < 1e-12));
            let r = compare_cohom_routes(&spec).unwrap();
            assert!(r.agree(ROUTE_TOLERANCE), "{r:?}");
        }
    }

    #[test]
    fn einstein_warps() {
        let x = 0.7;
        assert!(einstein_warp_check(t(x).sin(), 1.0, 1.0).iter().all(|r| r.abs() < 1e-15));
        assert!(einstein_warp_check(t(x), 0.0, 1.0).iter().all(|r| r.abs() < 1e-15));
        assert!(einstein_warp_check(t(x).sinh(), -1.0, 1.0).iter().all(|r| r.abs() < 1e-14));
        for (f, s) in [(t(x).sin(), 42.0), (t(x), 0.0), (t(x).sinh(), -42.0)] {
            for th in [c(0.0), t(x), Jet::new(0.4, -1.3, 0.2)] {
                let got = warped_scalar_curvature(&WarpSpec::new(f, th, 1.0).unwrap()).unwrap();
                assert!((got - s).abs() < 1e-10, "{got} vs {s}");
            }
        }
    }

    #[test]
    fn theta_branches_solve_the_equation() {
        let b = Jet::new(0.8, -0.3, 0.5);
        let th = theta_solving(b, 0.2);
        assert!((th.d1 - b.value * th.value.sin()).abs() < 1e-12);
        let a1 = theta_family(c(1.0));
        assert!(a1.moving[0].value.cos().abs() < 1e-15);
        assert!((a1.moving[0].value.sin() - 1.0).abs() < 1e-15);
        for th in a1.stationary {
            assert!(th.value.sin().abs() < 1e-15 && th.d1 == 0.0);
        }
    }
}
