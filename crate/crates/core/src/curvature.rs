//! Algebraic curvature tensors and their G₂ decomposition.
//!
//! A curvature tensor is stored as a symmetric 21×21 matrix over the pair
//! basis `e^{ij}`, `i<j`, so `R(x,y,z,w) = M[xy][zw]` up to the signs of
//! reordering. Norms are full component sums over all four indices, which
//! is four times the Frobenius norm of the matrix.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::CurvatureError;
use crate::exterior::{dimension, sort_sign, Form, MultiIndex, DIM};
use crate::g2::IrredLabel;
use crate::linalg::{rank, Mat};
use crate::report::Check;
use crate::scalar::{Exact, Scalar};
use crate::tensor::Sym2Tensor;

const PAIRS: usize = 21;

/// Pair-basis position and sign of `e^x ∧ e^y`.
fn pair(x: usize, y: usize) -> Option<(usize, i64)> {
    let (sign, mask) = sort_sign(&[x, y])?;
    Some((MultiIndex::from_mask(mask).rank(), sign))
}

fn pair_indices(p: usize) -> (usize, usize) {
    let pos = MultiIndex::nth(2, p).positions();
    (pos[0], pos[1])
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureTensor<S> {
    m: Mat<S>,
}

impl<S: Scalar> CurvatureTensor<S> {
    pub fn zero() -> Self {
        CurvatureTensor { m: Mat::zeros(PAIRS, PAIRS) }
    }

    /// Wraps a symmetric 21×21 array; pair symmetry is required, Bianchi is not.
    pub fn from_matrix(m: Mat<S>) -> Result<Self, CurvatureError> {
        if m.rows() != PAIRS || m.cols() != PAIRS {
            return Err(CurvatureError::NotSymmetric(f64::INFINITY));
        }
        let dev = m.sub(&m.transpose()).max_abs();
        let ok = if S::EXACT { dev == 0.0 } else { dev <= 1e-12 * m.max_abs().max(1.0) };
        if !ok {
            return Err(CurvatureError::NotSymmetric(dev));
        }
        Ok(CurvatureTensor { m })
    }

    /// Builds from a component function evaluated on `x<y`, `z<w`.
    pub fn from_components(f: impl Fn(usize, usize, usize, usize) -> S) -> Self {
        let m = Mat::from_fn(PAIRS, PAIRS, |a, b| {
            let (x, y) = pair_indices(a);
            let (z, w) = pair_indices(b);
            f(x, y, z, w)
        });
        CurvatureTensor { m }
    }

    pub fn matrix(&self) -> &Mat<S> {
        &self.m
    }

    /// Component `R(e_x, e_y, e_z, e_w)`.
    pub fn get(&self, x: usize, y: usize, z: usize, w: usize) -> S {
        match (pair(x, y), pair(z, w)) {
            (Some((a, s1)), Some((b, s2))) => self.m[(a, b)].scale_i(s1 * s2),
            _ => S::zero(),
        }
    }

    /// `R(α, β)` for 2-forms.
    pub fn on_forms(&self, a: &Form<S>, b: &Form<S>) -> S {
        let mb = self.m.matvec(b.coeffs());
        a.coeffs().iter().zip(&mb).fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        CurvatureTensor { m: self.m.add(&other.m) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        CurvatureTensor { m: self.m.sub(&other.m) }
    }

    pub fn scale(&self, c: &S) -> Self {
        CurvatureTensor { m: self.m.scale(c) }
    }

    /// Full four-index inner product.
    pub fn inner(&self, other: &Self) -> S {
        self.m.dot(&other.m).scale_i(4)
    }

    pub fn norm2(&self) -> S {
        self.inner(self)
    }

    pub fn max_abs(&self) -> f64 {
        self.m.max_abs()
    }

    pub fn bianchi_residual(&self) -> f64 {
        bianchi_b(self).max_abs()
    }

    /// Conjugates both pair slots by a 21×21 matrix, `Q M Q'`.
    fn sandwich(&self, left: &Mat<S>, right: &Mat<S>) -> Self {
        CurvatureTensor { m: left.matmul(&self.m).matmul(right) }
    }

    pub fn to_f64(&self) -> CurvatureTensor<f64> {
        CurvatureTensor { m: self.m.to_f64() }
    }
}

/// First Bianchi map `b(R)(x,y,z,w) = R(x,y,z,w) + R(y,z,x,w) + R(z,x,y,w)`.
///
/// On pair-symmetric tensors the image is totally antisymmetric, so it is
/// returned as a 4-form.
pub fn bianchi_b<S: Scalar>(r: &CurvatureTensor<S>) -> Form<S> {
    let coeffs = MultiIndex::all(4)
        .map(|index| {
            let p = index.positions();
            let (x, y, z, w) = (p[0], p[1], p[2], p[3]);
            r.get(x, y, z, w) + r.get(y, z, x, w) + r.get(z, x, y, w)
        })
        .collect();
    Form::new(4, coeffs).expect("4-form length")
}

/// Orthogonal projection of a pair-symmetric tensor onto the kernel of `b`.
pub fn bianchi_project<S: Scalar>(r: &CurvatureTensor<S>) -> CurvatureTensor<S> {
    let b = bianchi_b(r);
    let third = S::ratio(1, 3);
    let correction = CurvatureTensor::from_components(|x, y, z, w| match sort_sign(&[x, y, z, w]) {
        Some((sign, mask)) => b.coeff(MultiIndex::from_mask(mask)).scale_i(sign) * third.clone(),
        None => S::zero(),
    });
    r.sub(&correction)
}

/// Rank of `b` on the 231-dimensional space of pair-symmetric tensors.
pub fn bianchi_rank<S: Scalar>() -> usize {
    let mut columns = Vec::new();
    for a in 0..PAIRS {
        for b in a..PAIRS {
            let mut m = Mat::zeros(PAIRS, PAIRS);
            m[(a, b)] = S::one();
            m[(b, a)] = S::one();
            columns.push(bianchi_b(&CurvatureTensor { m }).into_coeffs());
        }
    }
    rank(&Mat::from_columns(dimension(4), &columns))
}

/// `c^g(R)(u,v) = Σ_i R(u, e_i, e_i, v)`.
pub fn ricci<S: Scalar>(r: &CurvatureTensor<S>) -> Sym2Tensor<S> {
    let m = Mat::from_fn(DIM, DIM, |u, v| (0..DIM).fold(S::zero(), |acc, i| acc + r.get(u, i, i, v)));
    Sym2Tensor::symmetrize(&m)
}

pub fn scalar<S: Scalar>(r: &CurvatureTensor<S>) -> S {
    ricci(r).trace()
}

/// `c^φ(R)(u,v) = 4 R(u⌟φ, v⌟φ)`.
pub fn phi_ricci<S: Scalar>(r: &CurvatureTensor<S>) -> Sym2Tensor<S> {
    let phi = &S::tables().phi;
    let a: Vec<Form<S>> = (0..DIM).map(|u| phi.interior_basis(u)).collect();
    let m = Mat::from_fn(DIM, DIM, |u, v| r.on_forms(&a[u], &a[v]).scale_i(4));
    Sym2Tensor::symmetrize(&m)
}

/// `Ric₀^k = k₁ Ric₀^g + k₂ Ric₀^φ`.
pub fn generalized_ricci<S: Scalar>(r: &CurvatureTensor<S>, k: (S, S)) -> Sym2Tensor<S> {
    &ricci(r).traceless().scale(&k.0) + &phi_ricci(r).traceless().scale(&k.1)
}

/// `Ric^W = (4 Ric₀^g − 5 Ric₀^φ)/20`.
pub fn ric_w<S: Scalar>(r: &CurvatureTensor<S>) -> Sym2Tensor<S> {
    generalized_ricci(r, (S::from_i64(4), S::from_i64(-5))).scale(&S::ratio(1, 20))
}

/// Kulkarni–Nomizu product with the metric:
/// `r_g(h)(x,y,z,w) = h(y,z)g(x,w) − h(x,z)g(y,w) + h(x,w)g(y,z) − h(y,w)g(x,z)`.
pub fn kn_product<S: Scalar>(h: &Sym2Tensor<S>) -> CurvatureTensor<S> {
    let d = |i: usize, j: usize| if i == j { S::one() } else { S::zero() };
    CurvatureTensor::from_components(|x, y, z, w| {
        h.get(y, z).clone() * d(x, w) - h.get(x, z).clone() * d(y, w) + h.get(x, w).clone() * d(y, z)
            - h.get(y, w).clone() * d(x, z)
    })
}

/// `r_φ(h) = X − b(X)/3` with `X_abcd = Σ h_ij φ_iab φ_jcd`.
pub fn phi_product<S: Scalar>(h: &Sym2Tensor<S>) -> CurvatureTensor<S> {
    let phi = &S::tables().phi;
    let a: Vec<Form<S>> = (0..DIM).map(|u| phi.interior_basis(u)).collect();
    let mut x = Mat::zeros(PAIRS, PAIRS);
    for i in 0..DIM {
        for j in 0..DIM {
            let hij = h.get(i, j);
            if hij.is_zero() {
                continue;
            }
            let outer =
                Mat::from_fn(PAIRS, PAIRS, |p, q| a[i].coeffs()[p].clone() * a[j].coeffs()[q].clone() * hij.clone());
            x = x.add(&outer);
        }
    }
    bianchi_project(&CurvatureTensor { m: x })
}

/// The five G₂-invariant blocks of an algebraic curvature tensor.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureDecomposition<S> {
    pub w77: CurvatureTensor<S>,
    pub w64: CurvatureTensor<S>,
    pub w27: CurvatureTensor<S>,
    /// `R₀ = r_g(Ric₀)/5`.
    pub traceless_ricci_part: CurvatureTensor<S>,
    /// `S = s r_g(g)/84`.
    pub scalar_part: CurvatureTensor<S>,
    pub ric0: Sym2Tensor<S>,
    pub ric_w: Sym2Tensor<S>,
    pub scalar: S,
}

impl<S: Scalar> CurvatureDecomposition<S> {
    pub fn blocks(&self) -> [(&'static str, &CurvatureTensor<S>); 5] {
        [
            ("W77", &self.w77),
            ("W64", &self.w64),
            ("W27", &self.w27),
            ("R0", &self.traceless_ricci_part),
            ("S", &self.scalar_part),
        ]
    }

    pub fn reassemble(&self) -> CurvatureTensor<S> {
        self.blocks().iter().skip(1).fold(self.w77.clone(), |acc, (_, b)| acc.add(b))
    }

    /// `‖W₇₇‖² + ‖W₆₄‖² + 15/28‖Ric^W‖² + 4/5‖Ric₀‖² + s²/21`.
    pub fn norm_from_blocks(&self) -> S {
        self.w77.norm2()
            + self.w64.norm2()
            + self.ric_w.norm2() * S::ratio(15, 28)
            + self.ric0.norm2() * S::ratio(4, 5)
            + self.scalar.square() * S::ratio(1, 21)
    }
}

/// Splits an algebraic curvature tensor into `W₇₇ + W₆₄ + W₂₇ + R₀ + S`.
pub fn decompose<S: Scalar>(r: &CurvatureTensor<S>) -> Result<CurvatureDecomposition<S>, CurvatureError> {
    let residual = r.bianchi_residual();
    let ok = if S::EXACT { residual == 0.0 } else { residual <= 1e-10 * r.max_abs().max(1.0) };
    if !ok {
        return Err(CurvatureError::NotAlgebraic(residual));
    }
    let ric = ricci(r);
    let s = ric.trace();
    let ric0 = ric.traceless();
    let rw = ric_w(r);
    let g = Sym2Tensor::metric();
    let scalar_part = kn_product(&g).scale(&(s.clone() * S::ratio(1, 84)));
    let traceless_ricci_part = kn_product(&ric0).scale(&S::ratio(1, 5));
    let w27 = kn_product(&rw).sub(&phi_product(&rw).scale(&S::from_i64(5))).scale(&S::ratio(3, 112));
    let rest = r.sub(&scalar_part).sub(&traceless_ricci_part).sub(&w27);
    let tables = S::tables();
    let q7 = tables.projector(IrredLabel::new(2, 7).expect("valid"));
    let q14 = tables.projector(IrredLabel::new(2, 14).expect("valid"));
    let w77 = rest.sandwich(q14, q14);
    let w64 = rest.sandwich(q7, q14).add(&rest.sandwich(q14, q7));
    Ok(CurvatureDecomposition { w77, w64, w27, traceless_ricci_part, scalar_part, ric0, ric_w: rw, scalar: s })
}

/// Random algebraic curvature tensor: a uniform symmetric array projected
/// onto the kernel of `b`.
pub fn random_algebraic_curvature(seed: u64) -> CurvatureTensor<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = Mat::zeros(PAIRS, PAIRS);
    for a in 0..PAIRS {
        for b in a..PAIRS {
            let v = rng.gen_range(-1.0..1.0);
            m[(a, b)] = v;
            m[(b, a)] = v;
        }
    }
    bianchi_project(&CurvatureTensor { m })
}

/// The nearly parallel curvature `W + τ₀² r_g(g)/32` with `W` in the W₇₇ block.
pub fn nearly_parallel_curvature<S: Scalar>(w77: &CurvatureTensor<S>, tau0: &S) -> CurvatureTensor<S> {
    let g = Sym2Tensor::metric();
    w77.add(&kn_product(&g).scale(&(tau0.square() * S::ratio(1, 32))))
}

/// Contraction and norm constants of `r_g` and `r_φ` on `g` and a traceless `h`.
pub fn kn_constant_checks<S: Scalar>(h: &Sym2Tensor<S>) -> Vec<Check> {
    let h = h.traceless();
    let g = Sym2Tensor::metric();
    let rgg = kn_product(&g);
    let rgh = kn_product(&h);
    let rph = phi_product(&h);
    let hn = h.norm2();
    let tensor_check = |name: &str, actual: Sym2Tensor<S>, expected: Sym2Tensor<S>| {
        Check::residual(name, (&actual - &expected).max_abs(), S::EXACT)
    };
    vec![
        tensor_check("c^g r_g(g) = 12 g", ricci(&rgg), g.scale(&S::from_i64(12))),
        tensor_check("c^g r_g(h) = 5 h", ricci(&rgh), h.scale(&S::from_i64(5))),
        tensor_check("c^g r_phi(h) = h", ricci(&rph), h.clone()),
        tensor_check("c^phi r_g(g) = -24 g", phi_ricci(&rgg), g.scale(&S::from_i64(-24))),
        tensor_check("c^phi r_g(h) = 4 h", phi_ricci(&rgh), h.scale(&S::from_i64(4))),
        tensor_check("c^phi r_phi(h) = 92/3 h", phi_ricci(&rph), h.scale(&S::ratio(92, 3))),
        Check::values("|r_g(h)|^2 = 20|h|^2", &hn.scale_i(20), &rgh.norm2()),
        Check::values("|r_phi(h)|^2 = 92/3 |h|^2", &(hn.clone() * S::ratio(92, 3)), &rph.norm2()),
        Check::values("<r_phi(h), r_g(h)> = 4|h|^2", &hn.scale_i(4), &rph.inner(&rgh)),
        Check::values("|r_g(g)|^2 = 336", &S::from_i64(336), &rgg.norm2()),
        Check::residual("b(r_g(h)) = 0", rgh.bianchi_residual(), S::EXACT),
        Check::residual("b(r_phi(h)) = 0", rph.bianchi_residual(), S::EXACT),
    ]
}

/// Block coefficients of the decomposition re-derived from the measured
/// contraction constants, compared with the stated values
/// (3/112, 15/28, 4/5, 1/21).
pub fn block_constant_checks() -> Vec<Check> {
    let mut d = vec![Exact::zero(); DIM];
    d[0] = Exact::one();
    d[1] = Exact::from_i64(-1);
    let h = Sym2Tensor::diagonal(&d);
    let g = Sym2Tensor::<Exact>::metric();
    let measure = |t: Sym2Tensor<Exact>| t.get(0, 0).clone() / h.get(0, 0).clone();
    let cg_rg = measure(ricci(&kn_product(&h)));
    let cg_rp = measure(ricci(&phi_product(&h)));
    let cp_rg = measure(phi_ricci(&kn_product(&h)));
    let cp_rp = measure(phi_ricci(&phi_product(&h)));
    let hn = h.norm2();
    let n_rg = kn_product(&h).norm2() / hn.clone();
    let n_rp = phi_product(&h).norm2() / hn.clone();
    let n_mix = phi_product(&h).inner(&kn_product(&h)) / hn;
    let five = Exact::from_i64(5);
    // Ric^W of (r_g − 5 r_φ)(h) as a multiple of h.
    let ricw_factor = (Exact::from_i64(4) * (cg_rg - five.clone() * cg_rp)
        - five.clone() * (cp_rg - five.clone() * cp_rp))
        / Exact::from_i64(20);
    let w27_coeff = Exact::one() / ricw_factor;
    let w27_norm = w27_coeff.square() * (n_rg.clone() - Exact::from_i64(10) * n_mix + Exact::from_i64(25) * n_rp);
    let r0_norm = n_rg / Exact::from_i64(25);
    let rgg = kn_product(&g);
    let s_rgg = scalar(&rgg);
    let s_norm = rgg.norm2() / s_rgg.square();
    vec![
        Check::values("derived W27 coefficient 3/112", &Exact::ratio(3, 112), &w27_coeff),
        Check::values("derived |W27| weight 15/28", &Exact::ratio(15, 28), &w27_norm),
        Check::values("derived |R0| weight 4/5", &Exact::ratio(4, 5), &r0_norm),
        Check::values("derived |S| weight 1/21", &Exact::ratio(1, 21), &s_norm),
    ]
}

/// Reassembly, orthogonality, norm identity and Ricci-flatness of the Weyl
/// blocks for one tensor.
pub fn decomposition_checks<S: Scalar>(r: &CurvatureTensor<S>) -> Result<Vec<Check>, CurvatureError> {
    let d = decompose(r)?;
    let scale = r.norm2().to_f64().max(1.0);
    let mut out =
        vec![Check::residual("decomposition reassembles", d.reassemble().sub(r).max_abs(), S::EXACT)
            .with_scale(r.max_abs())];
    let blocks = d.blocks();
    let mut orth = 0.0f64;
    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            orth = orth.max(blocks[i].1.inner(blocks[j].1).magnitude());
        }
    }
    out.push(Check::residual("decomposition blocks orthogonal", orth, S::EXACT).with_scale(scale));
    out.push(Check::values("decomposition norm identity", &r.norm2(), &d.norm_from_blocks()).with_scale(scale));
    let mut flat = 0.0f64;
    for w in [&d.w77, &d.w64] {
        flat = flat.max(ricci(w).max_abs()).max(phi_ricci(w).max_abs());
    }
    flat = flat.max(ricci(&d.w27).max_abs());
    out.push(Check::residual("Weyl blocks Ricci-flat", flat, S::EXACT).with_scale(r.max_abs()));
    out.push(
        Check::values("tr Ric^phi = -2 s", &(-d.scalar.scale_i(2)), &phi_ricci(r).trace()).with_scale(r.max_abs()),
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_traceless(seed: u64) -> Sym2Tensor<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = Mat::from_fn(7, 7, |_, _| rng.gen_range(-1.0..1.0));
        let h = Sym2Tensor::symmetrize(&m).traceless();
        let n = h.norm2().sqrt();
        h.scale(&(1.0 / n))
    }

    #[test]
    fn kn_constants_exact() {
        let d: Vec<Exact> = [2, -1, 0, 3, -4, 1, -1].iter().map(|&x| Exact::from_i64(x)).collect();
        let mut m = Sym2Tensor::diagonal(&d).as_mat().clone();
        m[(0, 3)] = Exact::from_i64(1);
        m[(3, 0)] = Exact::from_i64(1);
        for c in kn_constant_checks(&Sym2Tensor::new(m).unwrap()) {
            assert!(c.passed(0.0), "{c:?}");
        }
    }

    #[test]
    fn kn_constants_float() {
        for c in kn_constant_checks(&random_traceless(1)) {
            assert!(c.passed(1e-12), "{c:?}");
        }
    }

    #[test]
    fn block_constants_match() {
        for c in block_constant_checks() {
            assert!(c.passed(0.0), "{c:?}");
        }
    }

    #[test]
    fn sectional_value_of_rgg() {
        let r = kn_product(&Sym2Tensor::<Exact>::metric());
        assert_eq!(r.get(0, 1, 1, 0), Exact::from_i64(2));
        assert_eq!(kn_product(&Sym2Tensor::<f64>::zero()), CurvatureTensor::zero());
    }

    #[test]
    fn bianchi_kernel_dimension() {
        assert_eq!(bianchi_rank::<f64>(), 35);
        assert_eq!(231 - bianchi_rank::<Exact>(), 196);
    }

    #[test]
    fn random_symmetric_fails_bianchi() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut m = Mat::zeros(21, 21);
        for a in 0..21 {
            for b in a..21 {
                let v = rng.gen_range(-1.0..1.0);
                m[(a, b)] = v;
                m[(b, a)] = v;
            }
        }
        let r = CurvatureTensor::from_matrix(m).unwrap();
        assert!(r.bianchi_residual() > 1e-3);
        assert!(matches!(decompose(&r), Err(CurvatureError::NotAlgebraic(_))));
    }

    #[test]
    fn random_decompositions() {
        for seed in 0..10 {
            let r = random_algebraic_curvature(seed);
            assert!(r.bianchi_residual() < 1e-12);
            for c in decomposition_checks(&r).unwrap() {
                assert!(c.passed(1e-10), "{c:?}");
            }
        }
    }

    #[test]
    fn blocks_are_idempotent() {
        let d = decompose(&random_algebraic_curvature(42)).unwrap();
        let again = decompose(&d.w77).unwrap();
        assert!(again.w77.sub(&d.w77).max_abs() < 1e-12);
        assert!(again.w64.max_abs() < 1e-12 && again.w27.max_abs() < 1e-12);
        let again = decompose(&d.w64).unwrap();
        assert!(again.w64.sub(&d.w64).max_abs() < 1e-12 && again.w77.max_abs() < 1e-12);
        let again = decompose(&d.w27).unwrap();
        assert!(again.w27.sub(&d.w27).max_abs() < 1e-12 && again.scalar.abs() < 1e-12);
    }

    #[test]
    fn pure_blocks() {
        let g = Sym2Tensor::<Exact>::metric();
        let d = decompose(&kn_product(&g)).unwrap();
        assert_eq!(d.scalar, Exact::from_i64(84));
        assert_eq!(d.w77.max_abs() + d.w64.max_abs() + d.w27.max_abs(), 0.0);
        let h = random_traceless(5);
        let w = kn_product(&h).sub(&phi_product(&h).scale(&5.0));
        let d = decompose(&w).unwrap();
        assert!(d.ric0.max_abs() < 1e-12);
        assert!(d.w27.sub(&w).max_abs() < 1e-12);
        let expected = (4.0 * 0.0 - 5.0 * (4.0 - 5.0 * 92.0 / 3.0)) / 20.0;
        assert!((&d.ric_w - &h.scale(&expected)).max_abs() < 1e-12);
    }

    #[test]
    fn nearly_parallel_tensor() {
        let w = decompose(&random_algebraic_curvature(7)).unwrap().w77;
        let tau0 = 1.7;
        let d = decompose(&nearly_parallel_curvature(&w, &tau0)).unwrap();
        assert!((d.scalar - 21.0 / 8.0 * tau0 * tau0).abs() < 1e-12);
        assert!(d.ric0.max_abs() < 1e-12 && d.w27.max_abs() < 1e-12 && d.w64.max_abs() < 1e-12);
        assert!(d.w77.sub(&w).max_abs() < 1e-12);
    }

    #[test]
    fn generalized_ricci_special_cases() {
        let r = random_algebraic_curvature(9);
        let a = generalized_ricci(&r, (1.0, 0.0));
        assert!((&a - &ricci(&r).traceless()).max_abs() < 1e-14);
        let w = generalized_ricci(&r, (4.0, -5.0)).scale(&(1.0 / 20.0));
        assert!((&w - &ric_w(&r)).max_abs() < 1e-14);
        let h = random_traceless(2);
        assert!(ric_w(&kn_product(&h)).max_abs() < 1e-12);
    }
}
