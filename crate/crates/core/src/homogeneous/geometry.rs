//! Left-invariant Riemannian geometry and the canonical G₂ connection.

use crate::curvature::CurvatureTensor;
use crate::error::GeometryError;
use crate::exterior::{dimension, Form, DIM};
use crate::g2::{proj, MixedTensor};
use crate::linalg::Mat;
use crate::report::Check;
use crate::scalar::Scalar;
use crate::tables::matrix_of;
use crate::torsion::{extract_torsion, matrix_two_form, two_form_matrix, IntrinsicTorsion, TorsionComponents};

use super::spec::LieAlgebraSpec;

/// Invariant exterior derivative: `d(e^I) = Σ_p (−1)^p e^{I<p} ∧ de^{i_p} ∧ e^{I>p}`.
pub fn invariant_d<S: Scalar>(spec: &LieAlgebraSpec<S>, a: &Form<S>) -> Form<S> {
    let k = a.degree();
    let mut out = Form::zero(k + 1);
    if k >= DIM {
        return out;
    }
    let de: Vec<Form<S>> = (0..DIM).map(|m| spec.structure_equation(m)).collect();
    for (idx, coeff) in a.terms() {
        if coeff.is_zero() {
            continue;
        }
        let positions = idx.positions();
        for (p, &ip) in positions.iter().enumerate() {
            let mut term = Form::scalar(S::one());
            for &q in &positions[..p] {
                term = term.wedge(&Form::covector(q));
            }
            term = term.wedge(&de[ip]);
            for &q in &positions[p + 1..] {
                term = term.wedge(&Form::covector(q));
            }
            let sign = if p % 2 == 0 { coeff.clone() } else { -coeff.clone() };
            out += &term.scale(&sign);
        }
    }
    out
}

/// Codifferential `δ = (−1)^k * d *` on invariant k-forms.
///
/// This is the Riemannian codifferential of the left-invariant form. It is
/// the transpose of `d` only when the algebra is unimodular.
pub fn invariant_delta<S: Scalar>(spec: &LieAlgebraSpec<S>, a: &Form<S>) -> Form<S> {
    if a.degree() == 0 {
        return Form::zero(0);
    }
    let out = invariant_d(spec, &a.hodge()).hodge();
    if a.degree().is_multiple_of(2) {
        out
    } else {
        -out
    }
}

/// Levi-Civita coefficients `Γ_ijk = ½(C_ijk − C_jki + C_kij)` with
/// `C_ijk = g([e_i, e_j], e_k)`; entry `[i][(j, k)]` is `g(∇_{e_i} e_j, e_k)`.
pub fn levi_civita<S: Scalar>(spec: &LieAlgebraSpec<S>) -> Vec<Mat<S>> {
    let c = |i: usize, j: usize, k: usize| spec.constant(k, i, j).clone();
    let half = S::ratio(1, 2);
    (0..DIM).map(|i| Mat::from_fn(DIM, DIM, |j, k| (c(i, j, k) - c(j, k, i) + c(k, i, j)) * half.clone())).collect()
}

/// `R(x,y,z,w) = g(∇_x∇_y z − ∇_y∇_x z − ∇_{[x,y]} z, w)`.
pub fn riemann<S: Scalar>(spec: &LieAlgebraSpec<S>, gamma: &[Mat<S>]) -> Result<CurvatureTensor<S>, GeometryError> {
    let component = |x: usize, y: usize, z: usize, w: usize| {
        let mut v = S::zero();
        for m in 0..DIM {
            v = v + gamma[y][(z, m)].clone() * gamma[x][(m, w)].clone()
                - gamma[x][(z, m)].clone() * gamma[y][(m, w)].clone()
                - spec.constant(m, x, y).clone() * gamma[m][(z, w)].clone();
        }
        v
    };
    let pairs: Vec<(usize, usize)> = crate::exterior::MultiIndex::all(2)
        .map(|idx| {
            let p = idx.positions();
            (p[0], p[1])
        })
        .collect();
    let m = Mat::from_fn(pairs.len(), pairs.len(), |a, b| component(pairs[a].0, pairs[a].1, pairs[b].0, pairs[b].1));
    CurvatureTensor::from_matrix(m).map_err(|e| match e {
        crate::error::CurvatureError::NotSymmetric(r) | crate::error::CurvatureError::NotAlgebraic(r) => {
            GeometryError::Jacobi(r)
        }
    })
}

/// Connection, curvature and exterior derivative of a metric Lie algebra.
#[derive(Clone, Debug)]
pub struct InvariantGeometry<S> {
    pub spec: LieAlgebraSpec<S>,
    pub gamma: Vec<Mat<S>>,
    pub curvature: CurvatureTensor<S>,
    /// Matrix of `d` from degree k to k+1, for k = 0..=6.
    pub d_matrices: Vec<Mat<S>>,
}

impl<S: Scalar> InvariantGeometry<S> {
    pub fn new(spec: LieAlgebraSpec<S>) -> Result<Self, GeometryError> {
        let gamma = levi_civita(&spec);
        let curvature = riemann(&spec, &gamma)?;
        let d_matrices = (0..DIM).map(|k| matrix_of(k, k + 1, |a| invariant_d(&spec, a))).collect();
        Ok(InvariantGeometry { spec, gamma, curvature, d_matrices })
    }

    pub fn d(&self, a: &Form<S>) -> Form<S> {
        if a.degree() >= DIM {
            return Form::zero(DIM);
        }
        Form::new(a.degree() + 1, self.d_matrices[a.degree()].matvec(a.coeffs())).expect("degree fits")
    }

    pub fn delta(&self, a: &Form<S>) -> Form<S> {
        if a.degree() == 0 {
            return Form::zero(0);
        }
        let out = self.d(&a.hodge()).hodge();
        if a.degree().is_multiple_of(2) {
            out
        } else {
            -out
        }
    }

    /// Formal adjoint of `d` on invariant forms (matrix transpose).
    pub fn d_transpose(&self, a: &Form<S>) -> Form<S> {
        let k = a.degree();
        if k == 0 {
            return Form::zero(0);
        }
        Form::new(k - 1, self.d_matrices[k - 1].transpose().matvec(a.coeffs())).expect("degree fits")
    }

    /// `∇^g_{e_i}` applied to an invariant form.
    pub fn covariant(&self, i: usize, a: &Form<S>) -> Form<S> {
        a.derivation(&self.gamma[i])
    }

    /// Structural self-tests: d² = 0, metric compatibility, zero torsion,
    /// first Bianchi, and the relation between δ and the transpose of d.
    pub fn checks(&self) -> Vec<Check> {
        let exact = S::EXACT;
        let scale = self.spec.max_abs().powi(2).max(1.0);
        let mut dd: f64 = 0.0;
        for k in 0..DIM - 1 {
            dd = dd.max(self.d_matrices[k + 1].matmul(&self.d_matrices[k]).max_abs());
        }
        let mut metric: f64 = 0.0;
        let mut torsion: f64 = 0.0;
        for i in 0..DIM {
            metric = metric.max(self.gamma[i].add(&self.gamma[i].transpose()).max_abs());
            for j in 0..DIM {
                for k in 0..DIM {
                    let t = self.gamma[i][(j, k)].clone()
                        - self.gamma[j][(i, k)].clone()
                        - self.spec.constant(k, i, j).clone();
                    torsion = torsion.max(t.magnitude());
                }
            }
        }
        // δ agrees with the transpose of d exactly when tr ad = 0.
        let mut adjoint_gap: f64 = 0.0;
        for k in 1..=DIM {
            for idx in crate::exterior::MultiIndex::all(k) {
                let a = Form::monomial(idx);
                adjoint_gap = adjoint_gap.max((&self.delta(&a) - &self.d_transpose(&a)).max_abs());
            }
        }
        let unimodular = self.spec.is_unimodular();
        let mut checks = vec![
            Check::residual("Jacobi identity", self.spec.jacobi_residual(), exact).with_scale(scale),
            Check::residual("d∘d = 0", dd, exact).with_scale(scale),
            Check::residual("Levi-Civita is metric", metric, exact).with_scale(scale),
            Check::residual("Levi-Civita is torsion-free", torsion, exact).with_scale(scale),
            Check::residual("first Bianchi identity for R", self.curvature.bianchi_residual(), exact)
                .with_scale(self.curvature.max_abs()),
        ];
        if unimodular {
            checks.push(Check::residual("codifferential is the transpose of d", adjoint_gap, exact).with_scale(scale));
        }
        checks
    }
}

/// Canonical G₂ connection of the standard φ in an adapted orthonormal frame.
#[derive(Clone, Debug)]
pub struct CanonicalConnection<S> {
    /// Intrinsic torsion read off from the Λ²₇ part of the Levi-Civita connection.
    pub xi: IntrinsicTorsion<S>,
    /// `∇̄ = ∇^g − ξ`, one endomorphism per direction.
    pub nabla_bar: Vec<Mat<S>>,
}

impl<S: Scalar> CanonicalConnection<S> {
    /// `∇̄_{e_i} a`.
    pub fn apply(&self, i: usize, a: &Form<S>) -> Form<S> {
        a.derivation(&self.nabla_bar[i])
    }

    /// `∇̄a` for a 2-form, as an element of `V* ⊗ Λ²`.
    pub fn nabla_two_form(&self, a: &Form<S>) -> MixedTensor<S> {
        MixedTensor::from_slices((0..DIM).map(|i| self.apply(i, a)).collect()).expect("2-form slices")
    }

    /// `d^∇̄ β = dβ − Σ_p e^p ∧ ξ_p·β`.
    pub fn d_nabla_bar(&self, geometry: &InvariantGeometry<S>, b: &Form<S>) -> Form<S> {
        let mut out = geometry.d(b);
        for p in 0..DIM {
            let action = two_form_matrix(self.xi.xi.slice(p));
            out -= &Form::covector(p).wedge(&b.derivation(&action));
        }
        out
    }

    /// `Σ_p e^p ∧ ∇̄_p β`, which must agree with [`Self::d_nabla_bar`].
    pub fn wedge_of_nabla(&self, b: &Form<S>) -> Form<S> {
        let mut out = Form::zero((b.degree() + 1).min(DIM));
        if b.degree() >= DIM {
            return out;
        }
        for p in 0..DIM {
            out += &Form::covector(p).wedge(&self.apply(p, b));
        }
        out
    }
}

/// Splits the Levi-Civita connection into `∇̄ + ξ`, assuming φ is standard
/// in the orthonormal basis of `geometry`.
pub fn canonical_connection<S: Scalar>(
    geometry: &InvariantGeometry<S>,
) -> Result<CanonicalConnection<S>, GeometryError> {
    let slices: Vec<Form<S>> = geometry.gamma.iter().map(|g| proj(&matrix_two_form(g), 7)).collect();
    let phi = &S::tables().phi;
    // ξ̄_ij = Σ_pq ξ_ipq φ_pqj = 2⟨ξ_i, e_j ⌟ φ⟩.
    let xi_bar = Mat::from_fn(DIM, DIM, |i, j| slices[i].inner(&phi.interior_basis(j)).scale_i(2));
    let xi = IntrinsicTorsion::from_xi_bar(xi_bar);
    let nabla_bar: Vec<Mat<S>> = (0..DIM).map(|i| geometry.gamma[i].sub(&two_form_matrix(xi.xi.slice(i)))).collect();
    let connection = CanonicalConnection { xi, nabla_bar };
    let residual = (0..DIM).map(|i| connection.apply(i, phi).max_abs()).fold(0.0, f64::max);
    if !residual_ok::<S>(residual, geometry.spec.max_abs()) {
        return Err(GeometryError::NotParallel(residual));
    }
    Ok(connection)
}

fn residual_ok<S: Scalar>(residual: f64, scale: f64) -> bool {
    if S::EXACT {
        residual == 0.0
    } else {
        residual <= 1e-10 * scale.max(1.0)
    }
}

/// Orthonormal frame adapted to a G₂ form compatible with the identity metric.
///
/// Rows of the result are the new basis vectors in old coordinates. Uses the
/// cross product `⟨x × y, z⟩ = φ(x, y, z)` and the multiplication table of
/// the standard form. Rows of the frame matrix are the new basis vectors.
pub fn adapted_frame(phi: &Form<f64>) -> Result<Mat<f64>, GeometryError> {
    let cross = |x: &[f64], y: &[f64]| -> Vec<f64> { phi.interior(x).interior(y).coeffs().to_vec() };
    let unit = |v: Vec<f64>| -> Option<Vec<f64>> {
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        (n > 1e-8).then(|| v.into_iter().map(|x| x / n).collect())
    };
    let orthogonal_unit = |against: &[&Vec<f64>]| -> Option<Vec<f64>> {
        (0..DIM).find_map(|s| {
            let mut v = vec![0.0; DIM];
            v[s] = 1.0;
            for a in against {
                let d: f64 = v.iter().zip(a.iter()).map(|(x, y)| x * y).sum();
                v.iter_mut().zip(a.iter()).for_each(|(x, y)| *x -= d * y);
            }
            unit(v)
        })
    };
    let fail = || GeometryError::IncompatiblePhi(f64::INFINITY);
    let f1 = orthogonal_unit(&[]).ok_or_else(fail)?;
    let f2 = orthogonal_unit(&[&f1]).ok_or_else(fail)?;
    // Standard products: e₁×e₂ = e₇, e₁×e₃ = e₅, e₂×e₃ = −e₆, e₇×e₃ = e₄.
    let f7 = cross(&f1, &f2);
    let f3 = orthogonal_unit(&[&f1, &f2, &f7]).ok_or_else(fail)?;
    let f5 = cross(&f1, &f3);
    let f6: Vec<f64> = cross(&f2, &f3).into_iter().map(|x| -x).collect();
    let f4 = cross(&f7, &f3);
    let rows = [f1, f2, f3, f4, f5, f6, f7];
    let frame = Mat::from_fn(DIM, DIM, |a, i| rows[a][i]);
    let rebased = phi.pullback(&frame.transpose());
    let residual = (&rebased - &crate::exterior::standard_phi()).max_abs();
    if residual > 1e-9 {
        return Err(GeometryError::IncompatiblePhi(residual));
    }
    Ok(frame)
}

/// Everything needed to analyze an invariant G₂ structure in an adapted frame.
#[derive(Clone, Debug)]
pub struct HomogeneousG2<S> {
    pub geometry: InvariantGeometry<S>,
    /// Adapted frame in the coordinates of the input spec (identity when φ is standard).
    pub frame: Mat<S>,
    pub dphi: Form<S>,
    pub dpsi: Form<S>,
    pub torsion: TorsionComponents<S>,
    pub connection: CanonicalConnection<S>,
}

impl<S: Scalar> HomogeneousG2<S> {
    /// Uses the standard φ in the spec's basis.
    pub fn standard(spec: LieAlgebraSpec<S>) -> Result<Self, GeometryError> {
        Self::in_frame(spec, Mat::identity(DIM))
    }

    fn in_frame(spec: LieAlgebraSpec<S>, frame: Mat<S>) -> Result<Self, GeometryError> {
        let geometry = InvariantGeometry::new(spec)?;
        let tables = S::tables();
        let dphi = geometry.d(&tables.phi);
        let dpsi = geometry.d(&tables.phi_dual);
        let torsion = extract_torsion(&tables.phi, &dphi, &dpsi)?;
        let connection = canonical_connection(&geometry)?;
        Ok(HomogeneousG2 { geometry, frame, dphi, dpsi, torsion, connection })
    }

    pub fn is_closed(&self) -> bool {
        let scale = self.geometry.spec.max_abs();
        self.dphi.coeffs().iter().all(|c| c.negligible(scale))
    }

    /// `δτ₁`, needed by the scalar curvature formula.
    pub fn delta_tau1(&self) -> S {
        self.geometry.delta(&self.torsion.tau1).top_or_scalar()
    }
}

impl HomogeneousG2<f64> {
    /// Accepts any G₂ form inducing the spec's metric; the algebra is rewritten
    /// in an adapted frame first.
    pub fn with_phi(spec: LieAlgebraSpec<f64>, phi: &Form<f64>) -> Result<Self, GeometryError> {
        let frame = adapted_frame(phi)?;
        Self::in_frame(spec.rebase(&frame)?, frame)
    }
}

/// Picks the frame for a possibly custom φ; exact arithmetic needs the standard form.
pub fn build_structure<S: Scalar>(
    spec: LieAlgebraSpec<S>,
    phi: Option<&Form<S>>,
) -> Result<HomogeneousG2<S>, GeometryError> {
    match phi {
        None => HomogeneousG2::standard(spec),
        Some(p) if (p - &S::tables().phi).max_abs() == 0.0 => HomogeneousG2::standard(spec),
        Some(_) if S::EXACT => Err(GeometryError::ExactCustomPhi),
        Some(p) => {
            let frame = adapted_frame(&p.to_f64())?;
            let frame_s = Mat::from_fn(DIM, DIM, |a, i| S::from_f64(frame[(a, i)]));
            HomogeneousG2::in_frame(spec.rebase(&frame_s)?, frame_s)
        }
    }
}

/// Dimension check used by tests: every invariant d-matrix has the right shape.
pub fn d_shapes<S: Scalar>(geometry: &InvariantGeometry<S>) -> bool {
    geometry.d_matrices.iter().enumerate().all(|(k, m)| m.rows() == dimension(k + 1) && m.cols() == dimension(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{decompose, ricci};
    use crate::homogeneous::examples::{bryant, hyperbolic, nilpotent};
    use crate::scalar::Exact;

    #[test]
    fn abelian_is_flat() {
        let g = InvariantGeometry::<Exact>::new(LieAlgebraSpec::abelian("flat")).unwrap();
        assert!(g.gamma.iter().all(|m| m.max_abs() == 0.0));
        assert_eq!(g.curvature.max_abs(), 0.0);
        assert!(d_shapes(&g));
        let c = canonical_connection(&g).unwrap();
        assert_eq!(c.xi.xi_bar.max_abs(), 0.0);
        assert_eq!(g.d(&crate::standard_phi()).max_abs(), 0.0);
    }

    #[test]
    fn hyperbolic_constant_curvature() {
        let g = InvariantGeometry::<Exact>::new(hyperbolic()).unwrap();
        for c in g.checks() {
            assert!(c.passed(0.0), "{c:?}");
        }
        // Sectional curvature −1: R(x,y,y,x) = −1 for x ≠ y.
        assert_eq!(g.curvature.get(0, 6, 6, 0), Exact::from_i64(-1));
        assert_eq!(g.curvature.get(1, 3, 3, 1), Exact::from_i64(-1));
        let d = decompose(&g.curvature).unwrap();
        assert_eq!(d.scalar, Exact::from_i64(-42));
        assert_eq!(ricci(&g.curvature).traceless().max_abs(), 0.0);
        for (name, block) in d.blocks() {
            if name != "S" {
                assert_eq!(block.max_abs(), 0.0, "{name}");
            }
        }
    }

    #[test]
    fn bryant_closed_with_codifferential_torsion() {
        let h = HomogeneousG2::<Exact>::standard(bryant()).unwrap();
        assert!(h.is_closed());
        assert!(!h.geometry.spec.is_unimodular());
        let t = &h.torsion;
        assert_eq!(t.tau1.max_abs() + t.tau3.max_abs() + t.tau0.magnitude(), 0.0);
        let tau = &t.tau2;
        // δφ = τ uses the Riemannian codifferential.
        assert_eq!(&h.geometry.delta(&crate::standard_phi()), tau);
        assert_ne!(&h.geometry.d_transpose(&crate::standard_phi()), tau);
        assert_eq!(tau.norm2(), Exact::from_i64(72));
        for c in h.geometry.checks() {
            assert!(c.passed(0.0), "{c:?}");
        }
    }

    #[test]
    fn canonical_connection_is_g2() {
        for spec in [bryant::<f64>(), hyperbolic(), nilpotent()] {
            let h = HomogeneousG2::standard(spec).unwrap();
            let c = &h.connection;
            for i in 0..7 {
                assert!(c.nabla_bar[i].add(&c.nabla_bar[i].transpose()).max_abs() < 1e-14);
                assert!(c.apply(i, &crate::standard_phi_dual()).max_abs() < 1e-12);
            }
            let from_torsion = crate::torsion::intrinsic_from_torsion(&h.torsion);
            assert!(from_torsion.xi.sub(&c.xi.xi).max_abs() < 1e-12);
            let tau = &h.torsion.tau2;
            assert!((&c.d_nabla_bar(&h.geometry, tau) - &c.wedge_of_nabla(tau)).max_abs() < 1e-12);
        }
    }

    #[test]
    fn hyperbolic_torsion_is_type_four() {
        let h = HomogeneousG2::<Exact>::standard(hyperbolic()).unwrap();
        assert_eq!(h.torsion.tau1, Form::covector(6));
        assert_eq!(h.torsion.tau0, Exact::from_i64(0));
        assert_eq!(h.torsion.tau2.max_abs() + h.torsion.tau3.max_abs(), 0.0);
    }

    #[test]
    fn custom_phi_is_rebased() {
        // A rotation of the standard form in the (e1,e2) and (e3,e4) planes.
        let (c, s) = (0.6f64, 0.8f64);
        let mut rot = Mat::identity(7);
        rot[(0, 0)] = c;
        rot[(0, 1)] = s;
        rot[(1, 0)] = -s;
        rot[(1, 1)] = c;
        rot[(2, 3)] = 1.0;
        rot[(3, 2)] = -1.0;
        rot[(2, 2)] = 0.0;
        rot[(3, 3)] = 0.0;
        let phi = crate::standard_phi::<f64>().pullback(&rot);
        let frame = adapted_frame(&phi).unwrap();
        assert!((&phi.pullback(&frame.transpose()) - &crate::standard_phi()).max_abs() < 1e-12);
        let spec = bryant::<f64>();
        let h = HomogeneousG2::with_phi(spec.clone(), &crate::standard_phi()).unwrap();
        assert!(h.is_closed());
        assert!(adapted_frame(&crate::exterior::psi_plus()).is_err());
        assert!(matches!(
            build_structure::<Exact>(bryant(), Some(&crate::exterior::psi_plus())),
            Err(GeometryError::ExactCustomPhi)
        ));
    }
}
