//! G₂-irreducible pieces of the exterior algebra and the maps between them.

use std::fmt;

use crate::error::{ExteriorError, G2Error};
use crate::exterior::{dimension, Form, DIM};
use crate::linalg::{column_basis, nullspace, span_projector, Mat};
use crate::report::Check;
use crate::scalar::Scalar;
use crate::tables::Tables;
use crate::tensor::Sym2Tensor;

/// `σ(λ₃(h)) = 2h` for traceless symmetric `h`.
pub const SIGMA_LAMBDA3_RATIO: i64 = 2;

/// A summand `Λʳ_d` of the exterior algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IrredLabel {
    degree: usize,
    dim: usize,
}

const LABELS: [(usize, usize); 10] =
    [(2, 7), (2, 14), (3, 1), (3, 7), (3, 27), (4, 1), (4, 7), (4, 27), (5, 7), (5, 14)];

impl IrredLabel {
    pub fn new(degree: usize, dim: usize) -> Result<Self, G2Error> {
        if LABELS.contains(&(degree, dim)) {
            Ok(IrredLabel { degree, dim })
        } else {
            Err(G2Error::InvalidLabel { degree, dim })
        }
    }

    pub fn all() -> impl Iterator<Item = IrredLabel> {
        LABELS.iter().map(|&(degree, dim)| IrredLabel { degree, dim })
    }

    /// Labels of one degree; their projectors sum to the identity.
    pub fn of_degree(degree: usize) -> impl Iterator<Item = IrredLabel> {
        Self::all().filter(move |l| l.degree == degree)
    }

    pub fn degree(self) -> usize {
        self.degree
    }

    pub fn dim(self) -> usize {
        self.dim
    }
}

impl fmt::Display for IrredLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{}_{}", self.degree, self.dim)
    }
}

/// Closed formulas the projector tables are generated from.
pub(crate) fn projection_formula<S: Scalar>(a: &Form<S>, label: IrredLabel, phi: &Form<S>) -> Form<S> {
    let third = S::ratio(1, 3);
    match (label.degree, label.dim) {
        (2, 7) => (a + &a.wedge(phi).hodge()).scale(&third),
        (2, 14) => (&a.scale(&S::from_i64(2)) - &a.wedge(phi).hodge()).scale(&third),
        (3, 1) => phi.scale(&(a.inner(phi) * S::ratio(1, 7))),
        (3, 7) => phi.wedge(a).hodge().wedge(phi).hodge().scale(&S::ratio(1, 4)),
        (3, 27) => {
            let one = projection_formula(a, IrredLabel { degree: 3, dim: 1 }, phi);
            let seven = projection_formula(a, IrredLabel { degree: 3, dim: 7 }, phi);
            &(a - &one) - &seven
        }
        (4 | 5, dim) => {
            let dual = IrredLabel { degree: DIM - label.degree, dim };
            projection_formula(&a.hodge(), dual, phi).hodge()
        }
        _ => unreachable!("labels are validated on construction"),
    }
}

/// Orthogonal projection onto `Λʳ_d`.
pub fn project<S: Scalar>(a: &Form<S>, label: IrredLabel) -> Result<Form<S>, G2Error> {
    if a.degree() != label.degree {
        return Err(ExteriorError::Degree { expected: label.degree, found: a.degree() }.into());
    }
    Ok(proj(a, label.dim))
}

/// Projection of `a` onto the summand of dimension `dim` in its own degree.
///
/// # Panics
/// If `(a.degree(), dim)` is not a valid label.
pub fn proj<S: Scalar>(a: &Form<S>, dim: usize) -> Form<S> {
    let label = IrredLabel::new(a.degree(), dim).expect("valid summand");
    let m = S::tables().projector(label);
    Form::new(a.degree(), m.matvec(a.coeffs())).expect("projector preserves degree")
}

pub fn projector_matrix<S: Scalar>(label: IrredLabel) -> &'static Mat<S> {
    S::tables().projector(label)
}

/// `λ₃(h) = Σ h_ij e^i ∧ (e_j ⌟ φ)`.
pub fn lambda3<S: Scalar>(h: &Sym2Tensor<S>) -> Form<S> {
    let phi = &S::tables().phi;
    let mut out = Form::zero(3);
    for j in 0..DIM {
        let column: Vec<S> = (0..DIM).map(|i| h.get(i, j).clone()).collect();
        if column.iter().all(Scalar::is_zero) {
            continue;
        }
        out += &Form::from_vector(&column).wedge(&phi.interior_basis(j));
    }
    out
}

/// `σ(α)(u,v) = ⟨i_u φ, i_v α⟩` in the form inner product.
pub fn sigma<S: Scalar>(a: &Form<S>) -> Mat<S> {
    let phi = &S::tables().phi;
    let left: Vec<Form<S>> = (0..DIM).map(|i| phi.interior_basis(i)).collect();
    let right: Vec<Form<S>> = (0..DIM).map(|i| a.interior_basis(i)).collect();
    Mat::from_fn(DIM, DIM, |u, v| left[u].inner(&right[v]))
}

/// Inverse of `λ₃` on Λ³₂₇, landing in traceless symmetric tensors.
pub fn sym2_from_27<S: Scalar>(a: &Form<S>) -> Result<Sym2Tensor<S>, G2Error> {
    if a.degree() != 3 {
        return Err(ExteriorError::Degree { expected: 3, found: a.degree() }.into());
    }
    let residual = (a - &proj(a, 27)).max_abs();
    let ok = if S::EXACT { residual == 0.0 } else { residual <= 1e-10 * a.max_abs().max(1.0) };
    if !ok {
        return Err(G2Error::NotInSummand { residual });
    }
    let h = Sym2Tensor::symmetrize(&sigma(a)).traceless();
    Ok(h.scale(&S::ratio(1, SIGMA_LAMBDA3_RATIO)))
}

/// `Σ_{i<j} a_ij i_{e_j} i_{e_i} b` for a 2-form `a`.
pub fn contract2<S: Scalar>(a: &Form<S>, b: &Form<S>) -> Form<S> {
    let mut out = Form::zero(b.degree().saturating_sub(2));
    for (index, c) in a.terms() {
        let p = index.positions();
        out += &b.interior_basis(p[0]).interior_basis(p[1]).scale(c);
    }
    out
}

/// `[β²]^A = Σ_k *(i_k β ∧ i_k β)`.
pub fn quad_a<S: Scalar>(b: &Form<S>) -> Form<S> {
    let mut out = Form::zero(3);
    for k in 0..DIM {
        let ib = b.interior_basis(k);
        out += &ib.wedge(&ib).hodge();
    }
    out
}

/// `[β²]^B = Σ_k ((i_k φ) ⌟ β) ∧ i_k β`.
pub fn quad_b<S: Scalar>(b: &Form<S>) -> Form<S> {
    let phi = &S::tables().phi;
    let mut out = Form::zero(3);
    for k in 0..DIM {
        out += &contract2(&phi.interior_basis(k), b).wedge(&b.interior_basis(k));
    }
    out
}

/// `[β²]^C = [β²]^A − 2[β²]^B`.
pub fn quad_c<S: Scalar>(b: &Form<S>) -> Form<S> {
    &quad_a(b) - &quad_b(b).scale(&S::from_i64(2))
}

/// `[α ⊙ β] = Σ_k i_k α ∧ i_k β`.
pub fn odot_bracket<S: Scalar>(a: &Form<S>, b: &Form<S>) -> Form<S> {
    let mut out = Form::zero(a.degree() + b.degree() - 2);
    for k in 0..DIM {
        out += &a.interior_basis(k).wedge(&b.interior_basis(k));
    }
    out
}

/// Element `Σ_p e^p ⊗ γ_p` of `V* ⊗ Λ²`.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedTensor<S> {
    slices: Vec<Form<S>>,
}

impl<S: Scalar> MixedTensor<S> {
    pub fn zero() -> Self {
        MixedTensor { slices: vec![Form::zero(2); DIM] }
    }

    pub fn from_slices(slices: Vec<Form<S>>) -> Result<Self, ExteriorError> {
        if slices.len() != DIM {
            return Err(ExteriorError::Length { degree: 2, expected: DIM, found: slices.len() });
        }
        if let Some(bad) = slices.iter().find(|s| s.degree() != 2) {
            return Err(ExteriorError::Degree { expected: 2, found: bad.degree() });
        }
        Ok(MixedTensor { slices })
    }

    /// `e^p ⊗ β`.
    pub fn pure(p: usize, beta: Form<S>) -> Self {
        let mut out = Self::zero();
        out.slices[p] = beta;
        out
    }

    /// Inclusion `Λ³ → V* ⊗ Λ²`, `β ↦ Σ_p e^p ⊗ i_{e_p} β`.
    pub fn inclusion(beta: &Form<S>) -> Self {
        MixedTensor { slices: (0..DIM).map(|p| beta.interior_basis(p)).collect() }
    }

    pub fn slice(&self, p: usize) -> &Form<S> {
        &self.slices[p]
    }

    pub fn slices(&self) -> &[Form<S>] {
        &self.slices
    }

    /// Skew-symmetrization `∧₃γ = Σ_p e^p ∧ γ_p`.
    pub fn wedge3(&self) -> Form<S> {
        let mut out = Form::zero(3);
        for (p, s) in self.slices.iter().enumerate() {
            out += &Form::covector(p).wedge(s);
        }
        out
    }

    /// Tensor inner product (full component sum).
    pub fn inner(&self, other: &Self) -> S {
        let form: S = self.slices.iter().zip(&other.slices).fold(S::zero(), |acc, (a, b)| acc + a.inner(b));
        form.scale_i(2)
    }

    pub fn norm2(&self) -> S {
        self.inner(self)
    }

    pub fn map_slices(&self, f: impl Fn(&Form<S>) -> Form<S>) -> Self {
        MixedTensor { slices: self.slices.iter().map(f).collect() }
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map_slices(|s| s.scale(c))
    }

    pub fn add(&self, other: &Self) -> Self {
        MixedTensor { slices: self.slices.iter().zip(&other.slices).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        MixedTensor { slices: self.slices.iter().zip(&other.slices).map(|(a, b)| a - b).collect() }
    }

    /// Λ²₁₄-projection of every slice.
    pub fn project14(&self) -> Self {
        self.map_slices(|s| proj(s, 14))
    }

    pub fn max_abs(&self) -> f64 {
        self.slices.iter().map(Form::max_abs).fold(0.0, f64::max)
    }

    fn coords(&self) -> Vec<S> {
        self.slices.iter().flat_map(|s| s.coeffs().iter().cloned()).collect()
    }

    fn from_coords(c: &[S]) -> Self {
        let n = dimension(2);
        MixedTensor {
            slices: (0..DIM).map(|p| Form::new(2, c[p * n..(p + 1) * n].to_vec()).expect("slice length")).collect(),
        }
    }
}

/// A mixed tensor whose slices all lie in Λ²₁₄.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedTensorV14<S>(MixedTensor<S>);

impl<S: Scalar> MixedTensorV14<S> {
    pub fn new(t: MixedTensor<S>) -> Result<Self, G2Error> {
        let residual = t.sub(&t.project14()).max_abs();
        let ok = if S::EXACT { residual == 0.0 } else { residual <= 1e-10 * t.max_abs().max(1.0) };
        if !ok {
            return Err(G2Error::NotInSummand { residual });
        }
        Ok(MixedTensorV14(t))
    }

    pub fn tensor(&self) -> &MixedTensor<S> {
        &self.0
    }
}

/// The decomposition `V* ⊗ Λ²₁₄ = V₆₄ ⊕ V₂₇ ⊕ V₇`.
#[derive(Clone, Debug, PartialEq)]
pub struct V14Split<S> {
    pub part64: MixedTensor<S>,
    pub part27: MixedTensor<S>,
    pub part7: MixedTensor<S>,
}

pub(crate) struct SplitTables<S> {
    p64: Mat<S>,
    p27: Mat<S>,
    p7: Mat<S>,
}

impl<S: Scalar> SplitTables<S> {
    pub(crate) fn build(tables: &Tables<S>) -> Self {
        let n2 = dimension(2);
        let b14 = &tables.basis_14;
        let mut cols = Vec::new();
        for p in 0..DIM {
            for q in 0..b14.cols() {
                let mut c = vec![S::zero(); DIM * n2];
                for r in 0..n2 {
                    c[p * n2 + r] = b14[(r, q)].clone();
                }
                cols.push(c);
            }
        }
        let full = Mat::from_columns(DIM * n2, &cols);
        let wedge3 = Mat::from_columns(
            dimension(3),
            &(0..DIM * n2)
                .map(|i| {
                    let mut c = vec![S::zero(); DIM * n2];
                    c[i] = S::one();
                    MixedTensor::from_coords(&c).wedge3().into_coeffs()
                })
                .collect::<Vec<_>>(),
        );
        let preimage = |m: &Mat<S>, basis: &Mat<S>| {
            let coeffs = nullspace(&m.matmul(basis));
            Mat::from_columns(basis.cols(), &coeffs)
        };
        let x64 = full.matmul(&preimage(&wedge3, &full));
        let p64 = span_projector(&x64).expect("V64 basis is independent");
        let complement = column_basis(&span_projector(&full).expect("independent").sub(&p64));
        let p37 = tables.projector(IrredLabel { degree: 3, dim: 7 });
        let p327 = tables.projector(IrredLabel { degree: 3, dim: 27 });
        let x27 = complement.matmul(&preimage(&p37.matmul(&wedge3), &complement));
        let x7 = complement.matmul(&preimage(&p327.matmul(&wedge3), &complement));
        debug_assert_eq!((x64.cols(), x27.cols(), x7.cols()), (64, 27, 7));
        SplitTables {
            p64,
            p27: span_projector(&x27).expect("V27 basis is independent"),
            p7: span_projector(&x7).expect("V7 basis is independent"),
        }
    }

    pub(crate) fn dims(&self) -> (S, S, S) {
        (self.p64.trace(), self.p27.trace(), self.p7.trace())
    }
}

/// Splits `γ ∈ V* ⊗ Λ²₁₄` into its three irreducible parts.
pub fn split_v14<S: Scalar>(gamma: &MixedTensorV14<S>) -> V14Split<S> {
    let t = S::tables().split();
    let c = gamma.0.coords();
    V14Split {
        part64: MixedTensor::from_coords(&t.p64.matvec(&c)),
        part27: MixedTensor::from_coords(&t.p27.matvec(&c)),
        part7: MixedTensor::from_coords(&t.p7.matvec(&c)),
    }
}

/// Dimensions (traces) of the three split projectors.
pub fn split_dimensions<S: Scalar>() -> (S, S, S) {
    S::tables().split().dims()
}

/// The test elements `γ′ = e⁷ ⊗ (e¹² − e³⁴)` and
/// `γ″ = p₁₄(i(∧₃γ′)) − γ′`.
pub fn v14_test_elements<S: Scalar>() -> (MixedTensor<S>, MixedTensor<S>) {
    let beta = Form::from_int_terms(2, &[(&[1, 2], 1), (&[3, 4], -1)]);
    let g1 = MixedTensor::pure(6, beta);
    let g2 = MixedTensor::inclusion(&g1.wedge3()).project14().sub(&g1);
    (g1, g2)
}

/// Norm constants of the V* ⊗ Λ²₁₄ test elements, all in tensor norm.
pub fn v14_checks<S: Scalar>() -> Vec<Check> {
    let (g1, g2) = v14_test_elements::<S>();
    let w1 = g1.wedge3();
    let w2 = g2.wedge3();
    let expected_w1 = Form::from_int_terms(3, &[(&[1, 2, 7], 1), (&[3, 4, 7], -1)]);
    let diff = |a: &Form<S>, b: &Form<S>| (a - b).max_abs();
    let mut out = vec![
        Check::residual("V14 wedge3(g1) = e127 - e347", diff(&w1, &expected_w1), S::EXACT),
        Check::residual("V14 wedge3(g1) in L3_27", diff(&w1, &proj(&w1, 27)), S::EXACT),
        Check::values("V14 <g2,g1> = 0", &S::zero(), &g2.inner(&g1)),
        Check::values("V14 |g2|^2 = 16/3", &S::ratio(16, 3), &g2.norm2()),
        Check::values("V14 |g1|^2 = 4", &S::from_i64(4), &g1.norm2()),
        Check::residual("V14 wedge3(g2) = 4/3 wedge3(g1)", diff(&w2, &w1.scale(&S::ratio(4, 3))), S::EXACT),
        Check::residual(
            "V14 3 g2 - 4 g1 in kernel of wedge3",
            g2.scale(&S::from_i64(3)).sub(&g1.scale(&S::from_i64(4))).wedge3().max_abs(),
            S::EXACT,
        ),
    ];
    let g = g1.add(&g2);
    let wg = g.wedge3();
    out.push(Check::values("V14 7|g|^2 = |wedge3 g|^2 on g1 + g2", &g.norm2().scale_i(7), &wg.norm2().scale_i(6)));
    out
}

/// `λ₃` norm identity and the `λ₃`/`σ` constants.
pub fn lambda_sigma_checks<S: Scalar>(h: &Sym2Tensor<S>) -> Vec<Check> {
    let h0 = h.traceless();
    let l = lambda3(&h0);
    let phi = &S::tables().phi;
    let g = Sym2Tensor::<S>::metric();
    let sig = Sym2Tensor::symmetrize(&sigma(&l)).traceless();
    vec![
        Check::values("lambda3 |l(h)|^2 = 2|h|^2", &h0.norm2().scale_i(2), &l.norm2()),
        Check::residual("lambda3(g) = 3 phi", (&lambda3(&g) - &phi.scale(&S::from_i64(3))).max_abs(), S::EXACT),
        Check::residual("sigma(phi) = 3 g", sigma(phi).sub(&g.as_mat().scale(&S::from_i64(3))).max_abs(), S::EXACT),
        Check::residual(
            "sigma(lambda3 h)_0 = 2h",
            (&sig - &h0.scale(&S::from_i64(SIGMA_LAMBDA3_RATIO))).max_abs(),
            S::EXACT,
        ),
    ]
}
