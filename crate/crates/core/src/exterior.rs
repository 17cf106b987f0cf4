//! Dense exterior forms on ℝ⁷.
//!
//! A degree-k form stores one coefficient per sorted multi-index, ordered
//! lexicographically. Sorted monomials are orthonormal, so the form inner
//! product is the plain dot product of coefficient vectors. The orientation
//! is `e¹²³⁴⁵⁶⁷` and the Hodge star satisfies `a ∧ *b = ⟨a,b⟩ vol`.
//!
//! Multi-index labels are 1-based (`e¹²⁷` is `[1, 2, 7]`); vector and array
//! positions everywhere else are 0-based.

use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::sync::OnceLock;

use crate::error::ExteriorError;
use crate::linalg::Mat;
use crate::report::Check;
use crate::scalar::{max_magnitude, Scalar};

pub const DIM: usize = 7;

struct Basis {
    by_degree: Vec<Vec<u8>>,
    position: [usize; 128],
}

fn basis() -> &'static Basis {
    static B: OnceLock<Basis> = OnceLock::new();
    B.get_or_init(|| {
        let mut by_degree = vec![Vec::new(); DIM + 1];
        let mut position = [0; 128];
        for (k, list) in by_degree.iter_mut().enumerate() {
            combinations(0, k, 0, list);
            for (p, &m) in list.iter().enumerate() {
                position[m as usize] = p;
            }
        }
        Basis { by_degree, position }
    })
}

fn combinations(start: usize, left: usize, mask: u8, out: &mut Vec<u8>) {
    if left == 0 {
        out.push(mask);
        return;
    }
    for i in start..=DIM - left {
        combinations(i + 1, left - 1, mask | (1 << i), out);
    }
}

/// Number of sorted multi-indices of length `k`.
pub fn dimension(k: usize) -> usize {
    basis().by_degree.get(k).map_or(0, Vec::len)
}

/// Sign of `e^a ∧ e^b` relative to the sorted monomial, `None` on overlap.
pub(crate) fn wedge_sign(a: u8, b: u8) -> Option<i64> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0;
    for i in bits(a) {
        swaps += (b & ((1u8 << i) - 1)).count_ones();
    }
    Some(if swaps % 2 == 0 { 1 } else { -1 })
}

fn bits(mask: u8) -> impl Iterator<Item = usize> {
    (0..DIM).filter(move |i| mask & (1 << i) != 0)
}

/// Permutation sign that sorts `seq` (0-based), `None` on repeats.
pub(crate) fn sort_sign(seq: &[usize]) -> Option<(i64, u8)> {
    let mut mask = 0u8;
    let mut sign = 1;
    for (p, &i) in seq.iter().enumerate() {
        if i >= DIM || mask & (1 << i) != 0 {
            return None;
        }
        mask |= 1 << i;
        for &j in &seq[p + 1..] {
            if i > j {
                sign = -sign;
            }
        }
    }
    Some((sign, mask))
}

/// A strictly increasing set of basis labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex(u8);

impl MultiIndex {
    /// Builds from 1-based labels, which must be strictly increasing.
    pub fn new(labels: &[usize]) -> Result<Self, ExteriorError> {
        let ok = labels.iter().all(|&l| (1..=DIM).contains(&l)) && labels.windows(2).all(|w| w[0] < w[1]);
        if !ok {
            return Err(ExteriorError::BadIndex(labels.to_vec()));
        }
        Ok(MultiIndex(labels.iter().fold(0, |m, &l| m | (1 << (l - 1)))))
    }

    pub fn from_mask(mask: u8) -> Self {
        MultiIndex(mask & 0x7f)
    }

    pub fn mask(self) -> u8 {
        self.0
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    /// 1-based labels in increasing order.
    pub fn labels(self) -> Vec<usize> {
        bits(self.0).map(|i| i + 1).collect()
    }

    /// 0-based positions in increasing order.
    pub fn positions(self) -> Vec<usize> {
        bits(self.0).collect()
    }

    /// Index of this monomial in the lexicographic basis of its degree.
    pub fn rank(self) -> usize {
        basis().position[self.0 as usize]
    }

    pub fn complement(self) -> Self {
        MultiIndex(!self.0 & 0x7f)
    }

    /// All multi-indices of length `k` in storage order.
    pub fn all(k: usize) -> impl Iterator<Item = MultiIndex> {
        basis().by_degree[k].iter().map(|&m| MultiIndex(m))
    }

    pub fn nth(k: usize, rank: usize) -> Self {
        MultiIndex(basis().by_degree[k][rank])
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        write!(f, "e")?;
        for l in self.labels() {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// A degree-k form with `C(7,k)` dense coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Form<S> {
    degree: usize,
    coeffs: Vec<S>,
}

impl<S: Scalar> Form<S> {
    /// # Panics
    /// If `degree > 7`.
    pub fn zero(degree: usize) -> Self {
        assert!(degree <= DIM, "form degree {degree} exceeds 7");
        Form { degree, coeffs: vec![S::zero(); dimension(degree)] }
    }

    pub fn new(degree: usize, coeffs: Vec<S>) -> Result<Self, ExteriorError> {
        if degree > DIM {
            return Err(ExteriorError::DegreeOverflow(degree));
        }
        if coeffs.len() != dimension(degree) {
            return Err(ExteriorError::Length { degree, expected: dimension(degree), found: coeffs.len() });
        }
        Ok(Form { degree, coeffs })
    }

    /// Sum of monomials given by 1-based labels in any order; the permutation
    /// sign is applied, repeated labels contribute zero.
    pub fn from_terms(degree: usize, terms: &[(&[usize], S)]) -> Result<Self, ExteriorError> {
        let mut out = Self::zero(degree);
        for (labels, c) in terms {
            if labels.len() != degree || labels.contains(&0) {
                return Err(ExteriorError::BadIndex(labels.to_vec()));
            }
            let zero_based: Vec<usize> = labels.iter().map(|l| l - 1).collect();
            let (sign, mask) = sort_sign(&zero_based).ok_or_else(|| ExteriorError::BadIndex(labels.to_vec()))?;
            let slot = &mut out.coeffs[basis().position[mask as usize]];
            *slot = slot.clone() + c.scale_i(sign);
        }
        Ok(out)
    }

    /// Integer-coefficient shorthand for constant forms.
    pub(crate) fn from_int_terms(degree: usize, terms: &[(&[usize], i64)]) -> Self {
        let terms: Vec<(&[usize], S)> = terms.iter().map(|(l, c)| (*l, S::from_i64(*c))).collect();
        Self::from_terms(degree, &terms).expect("constant form table is well formed")
    }

    pub fn scalar(c: S) -> Self {
        Form { degree: 0, coeffs: vec![c] }
    }

    /// The monomial `e^I`.
    pub fn monomial(index: MultiIndex) -> Self {
        let mut out = Self::zero(index.degree());
        out.coeffs[index.rank()] = S::one();
        out
    }

    /// The covector `e^{i+1}` for 0-based `i`.
    pub fn covector(i: usize) -> Self {
        Self::monomial(MultiIndex(1 << i))
    }

    /// 1-form with the given components.
    pub fn from_vector(v: &[S]) -> Self {
        Form { degree: 1, coeffs: v.to_vec() }
    }

    pub fn volume() -> Self {
        Form { degree: DIM, coeffs: vec![S::one()] }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    pub fn coeff(&self, index: MultiIndex) -> &S {
        &self.coeffs[index.rank()]
    }

    /// Nonzero terms in storage order.
    pub fn terms(&self) -> impl Iterator<Item = (MultiIndex, &S)> {
        let k = self.degree;
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(p, c)| (MultiIndex::nth(k, p), c))
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        Form { degree: self.degree, coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Form<T> {
        Form { degree: self.degree, coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn to_f64(&self) -> Form<f64> {
        self.map_scalar(Scalar::to_f64)
    }

    /// Form inner product: sorted monomials are orthonormal.
    pub fn inner(&self, other: &Form<S>) -> S {
        assert_eq!(self.degree, other.degree, "inner product of forms of different degree");
        self.coeffs.iter().zip(&other.coeffs).fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    /// Squared form norm.
    pub fn norm2(&self) -> S {
        self.inner(self)
    }

    pub fn max_abs(&self) -> f64 {
        max_magnitude(&self.coeffs)
    }

    /// The value of a 0-form or the `vol` coefficient of a 7-form.
    pub fn top_or_scalar(&self) -> S {
        assert!(self.degree == 0 || self.degree == DIM, "not a scalar or top form");
        self.coeffs[0].clone()
    }

    /// # Panics
    /// If the degrees add up to more than 7; see [`wedge`] for a checked version.
    pub fn wedge(&self, other: &Form<S>) -> Self {
        wedge(self, other).expect("wedge degree exceeds 7")
    }

    pub fn hodge(&self) -> Self {
        let mut out = Self::zero(DIM - self.degree);
        for (p, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let m = basis().by_degree[self.degree][p];
            let comp = !m & 0x7f;
            let sign = wedge_sign(m, comp).expect("complement is disjoint");
            out.coeffs[basis().position[comp as usize]] = c.scale_i(sign);
        }
        out
    }

    /// `i_v a`; a 0-form maps to the zero 0-form.
    pub fn interior(&self, v: &[S]) -> Self {
        if self.degree == 0 {
            return Self::zero(0);
        }
        let mut out = Self::zero(self.degree - 1);
        for (p, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let m = basis().by_degree[self.degree][p];
            for (slot, i) in bits(m).enumerate() {
                if v[i].is_zero() {
                    continue;
                }
                let rest = basis().position[(m & !(1 << i)) as usize];
                let term = c.clone() * v[i].clone();
                let cell = &mut out.coeffs[rest];
                *cell = if slot % 2 == 0 { cell.clone() + term } else { cell.clone() - term };
            }
        }
        out
    }

    /// `i_{e_i} a` for 0-based `i`.
    pub fn interior_basis(&self, i: usize) -> Self {
        let mut v = vec![S::zero(); DIM];
        v[i] = S::one();
        self.interior(&v)
    }

    /// Pullback under the coframe substitution `e^i ↦ Σ_j m[i][j] e^j`.
    pub fn pullback(&self, m: &Mat<S>) -> Self {
        let images: Vec<Form<S>> = (0..DIM).map(|i| Form::from_vector(m.row(i))).collect();
        let mut out = Self::zero(self.degree);
        for (index, c) in self.terms() {
            let mut term = Form::scalar(c.clone());
            for i in index.positions() {
                term = term.wedge(&images[i]);
            }
            out += &term;
        }
        out
    }

    /// Action of the endomorphism `e_j ↦ Σ_k a[j][k] e_k` extended to forms
    /// as a derivation, so that `e^k ↦ −Σ_j a[j][k] e^j`.
    pub fn derivation(&self, a: &Mat<S>) -> Self {
        let mut out = Self::zero(self.degree);
        for (p, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let m = basis().by_degree[self.degree][p];
            for (slot, k) in bits(m).enumerate() {
                let rest = m & !(1 << k);
                for j in 0..DIM {
                    let ajk = &a[(j, k)];
                    if ajk.is_zero() {
                        continue;
                    }
                    let Some(sign) = wedge_sign(1 << j, rest) else { continue };
                    let sign = if slot % 2 == 0 { -sign } else { sign };
                    let cell = &mut out.coeffs[basis().position[(rest | (1 << j)) as usize]];
                    *cell = cell.clone() + (c.clone() * ajk.clone()).scale_i(sign);
                }
            }
        }
        out
    }
}

/// Checked wedge product.
pub fn wedge<S: Scalar>(a: &Form<S>, b: &Form<S>) -> Result<Form<S>, ExteriorError> {
    let k = a.degree + b.degree;
    if k > DIM {
        return Err(ExteriorError::DegreeOverflow(k));
    }
    let mut out: Form<S> = Form::zero(k);
    let bb = basis();
    for (p, x) in a.coeffs.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let ma = bb.by_degree[a.degree][p];
        for (q, y) in b.coeffs.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            let mb = bb.by_degree[b.degree][q];
            if let Some(sign) = wedge_sign(ma, mb) {
                let cell = &mut out.coeffs[bb.position[(ma | mb) as usize]];
                let prod = x.clone() * y.clone();
                *cell = if sign > 0 { cell.clone() + prod } else { cell.clone() - prod };
            }
        }
    }
    Ok(out)
}

impl<S: Scalar> AddAssign<&Form<S>> for Form<S> {
    fn add_assign(&mut self, rhs: &Form<S>) {
        assert_eq!(self.degree, rhs.degree, "adding forms of different degree");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            if !b.is_zero() {
                *a = a.clone() + b.clone();
            }
        }
    }
}

impl<S: Scalar> SubAssign<&Form<S>> for Form<S> {
    fn sub_assign(&mut self, rhs: &Form<S>) {
        assert_eq!(self.degree, rhs.degree, "subtracting forms of different degree");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            if !b.is_zero() {
                *a = a.clone() - b.clone();
            }
        }
    }
}

impl<S: Scalar> Add<&Form<S>> for &Form<S> {
    type Output = Form<S>;
    fn add(self, rhs: &Form<S>) -> Form<S> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<S: Scalar> Sub<&Form<S>> for &Form<S> {
    type Output = Form<S>;
    fn sub(self, rhs: &Form<S>) -> Form<S> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<S: Scalar> Add for Form<S> {
    type Output = Form<S>;
    fn add(mut self, rhs: Form<S>) -> Form<S> {
        self += &rhs;
        self
    }
}

impl<S: Scalar> Sub for Form<S> {
    type Output = Form<S>;
    fn sub(mut self, rhs: Form<S>) -> Form<S> {
        self -= &rhs;
        self
    }
}

impl<S: Scalar> Neg for Form<S> {
    type Output = Form<S>;
    fn neg(self) -> Form<S> {
        self.map(|x| -x.clone())
    }
}

impl<S: Scalar> Neg for &Form<S> {
    type Output = Form<S>;
    fn neg(self) -> Form<S> {
        self.map(|x| -x.clone())
    }
}

impl<S: Scalar> fmt::Display for Form<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (index, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}·{}", c.to_f64(), index)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// The G₂ three-form `e¹²⁷ + e³⁴⁷ + e⁵⁶⁷ + e¹³⁵ − e²⁴⁵ − e¹⁴⁶ − e²³⁶`.
pub fn standard_phi<S: Scalar>() -> Form<S> {
    Form::from_int_terms(
        3,
        &[
            (&[1, 2, 7], 1),
            (&[3, 4, 7], 1),
            (&[5, 6, 7], 1),
            (&[1, 3, 5], 1),
            (&[2, 4, 5], -1),
            (&[1, 4, 6], -1),
            (&[2, 3, 6], -1),
        ],
    )
}

/// `*φ = e¹²³⁴ + e³⁴⁵⁶ + e⁵⁶¹² − e²⁴⁶⁷ + e¹³⁶⁷ + e²³⁵⁷ + e¹⁴⁵⁷`.
pub fn standard_phi_dual<S: Scalar>() -> Form<S> {
    Form::from_int_terms(
        4,
        &[
            (&[1, 2, 3, 4], 1),
            (&[3, 4, 5, 6], 1),
            (&[5, 6, 1, 2], 1),
            (&[2, 4, 6, 7], -1),
            (&[1, 3, 6, 7], 1),
            (&[2, 3, 5, 7], 1),
            (&[1, 4, 5, 7], 1),
        ],
    )
}

/// Kähler form `e¹² + e³⁴ + e⁵⁶` of the SU(3) reduction along `e⁷`.
pub fn omega<S: Scalar>() -> Form<S> {
    Form::from_int_terms(2, &[(&[1, 2], 1), (&[3, 4], 1), (&[5, 6], 1)])
}

/// Real part of `(e¹ + ie²)(e³ + ie⁴)(e⁵ + ie⁶)`.
pub fn psi_plus<S: Scalar>() -> Form<S> {
    Form::from_int_terms(3, &[(&[1, 3, 5], 1), (&[2, 4, 5], -1), (&[1, 4, 6], -1), (&[2, 3, 6], -1)])
}

/// Imaginary part of `(e¹ + ie²)(e³ + ie⁴)(e⁵ + ie⁶)`.
pub fn psi_minus<S: Scalar>() -> Form<S> {
    Form::from_int_terms(3, &[(&[2, 4, 6], -1), (&[1, 3, 6], 1), (&[2, 3, 5], 1), (&[1, 4, 5], 1)])
}

/// Full component array of a form, `A[i₁..i_k]`, totally antisymmetric.
#[derive(Clone, Debug, PartialEq)]
pub struct AntisymArray<S> {
    degree: usize,
    data: Vec<S>,
}

fn permutations(k: usize) -> Vec<(Vec<usize>, i64)> {
    fn rec(prefix: &mut Vec<usize>, k: usize, out: &mut Vec<(Vec<usize>, i64)>) {
        if prefix.len() == k {
            let (sign, _) = sort_sign(prefix).expect("distinct entries");
            out.push((prefix.clone(), sign));
            return;
        }
        for i in 0..k {
            if !prefix.contains(&i) {
                prefix.push(i);
                rec(prefix, k, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), k, &mut out);
    out
}

fn flat_index(indices: &[usize]) -> usize {
    indices.iter().fold(0, |acc, &i| acc * DIM + i)
}

impl<S: Scalar> AntisymArray<S> {
    pub fn from_form(form: &Form<S>) -> Self {
        let k = form.degree;
        let mut data = vec![S::zero(); DIM.pow(k as u32)];
        let perms = permutations(k);
        for (index, c) in form.terms() {
            let pos = index.positions();
            for (perm, sign) in &perms {
                let idx: Vec<usize> = perm.iter().map(|&q| pos[q]).collect();
                data[flat_index(&idx)] = c.scale_i(*sign);
            }
        }
        AntisymArray { degree: k, data }
    }

    /// Builds from a full `7^k` array, rejecting non-antisymmetric input.
    pub fn from_components(degree: usize, data: Vec<S>) -> Result<Self, ExteriorError> {
        if degree > DIM {
            return Err(ExteriorError::DegreeOverflow(degree));
        }
        let expected = DIM.pow(degree as u32);
        if data.len() != expected {
            return Err(ExteriorError::Length { degree, expected, found: data.len() });
        }
        let array = AntisymArray { degree, data };
        let rebuilt = AntisymArray::from_form(&array.to_form_unchecked());
        let deviation =
            array.data.iter().zip(&rebuilt.data).map(|(a, b)| (a.clone() - b.clone()).magnitude()).fold(0.0, f64::max);
        let exact = deviation == 0.0;
        if !(exact || (!S::EXACT && deviation <= 1e-12 * array.max_abs().max(1.0))) {
            return Err(ExteriorError::NotAntisymmetric(deviation));
        }
        Ok(array)
    }

    fn to_form_unchecked(&self) -> Form<S> {
        let coeffs =
            MultiIndex::all(self.degree).map(|index| self.data[flat_index(&index.positions())].clone()).collect();
        Form { degree: self.degree, coeffs }
    }

    pub fn to_form(&self) -> Form<S> {
        self.to_form_unchecked()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Component at 0-based indices.
    pub fn get(&self, indices: &[usize]) -> &S {
        &self.data[flat_index(indices)]
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    /// Sum of squares over all index tuples (`k!` times the form norm).
    pub fn tensor_norm2(&self) -> S {
        self.data.iter().fold(S::zero(), |acc, x| acc + x.square())
    }

    pub fn max_abs(&self) -> f64 {
        max_magnitude(&self.data)
    }
}

fn delta<S: Scalar>(i: usize, j: usize) -> S {
    if i == j {
        S::one()
    } else {
        S::zero()
    }
}

/// Componentwise residuals of the five quadratic φ identities and the full
/// contraction of `*φ` with itself, in an orthonormal frame.
pub fn check_contraction_identities<S: Scalar>() -> Vec<Check> {
    let phi = AntisymArray::from_form(&standard_phi::<S>());
    let psi = AntisymArray::from_form(&standard_phi_dual::<S>());
    let p3 = |i, j, k| phi.get(&[i, j, k]).clone();
    let p4 = |i, j, k, l| psi.get(&[i, j, k, l]).clone();
    let n = DIM;
    let sum = |f: &dyn Fn(usize) -> S| (0..n).fold(S::zero(), |acc, p| acc + f(p));
    let mut out = Vec::new();

    let mut r = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let lhs = sum(&|p| sum(&|q| p3(i, p, q) * p3(p, q, j)));
            r = r.max((lhs - delta::<S>(i, j).scale_i(6)).magnitude());
        }
    }
    out.push(Check::residual("contraction phi.phi = 6 delta", r, S::EXACT));

    let (mut r7, mut r8) = (0.0f64, 0.0f64);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let dd = delta::<S>(i, k) * delta(j, l) - delta::<S>(j, k) * delta(i, l);
                    let lhs7 = sum(&|p| p3(i, j, p) * p3(p, k, l));
                    r7 = r7.max((lhs7 - dd.clone() - p4(i, j, k, l)).magnitude());
                    let lhs8 = sum(&|p| sum(&|q| p4(i, j, p, q) * p4(p, q, k, l)));
                    let rhs8 = dd.scale_i(4) + p4(i, j, k, l).scale_i(2);
                    r8 = r8.max((lhs8 - rhs8).magnitude());
                }
            }
        }
    }
    out.push(Check::residual("contraction phi.phi single index", r7, S::EXACT));
    out.push(Check::residual("contraction psi.psi double index", r8, S::EXACT));

    let mut r9 = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let lhs = sum(&|p| sum(&|q| p3(i, p, q) * p4(p, q, j, k)));
                r9 = r9.max((lhs - p3(i, j, k).scale_i(4)).magnitude());
            }
        }
    }
    out.push(Check::residual("contraction phi.psi double index", r9, S::EXACT));

    let mut r10 = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    for m in 0..n {
                        let lhs = sum(&|p| p3(i, j, p) * p4(p, k, l, m));
                        let rhs = delta::<S>(i, k) * p3(j, l, m) - delta::<S>(j, k) * p3(i, l, m)
                            + delta::<S>(i, l) * p3(j, m, k)
                            - delta::<S>(j, l) * p3(i, m, k)
                            + delta::<S>(i, m) * p3(j, k, l)
                            - delta::<S>(j, m) * p3(i, k, l);
                        r10 = r10.max((lhs - rhs).magnitude());
                    }
                }
            }
        }
    }
    out.push(Check::residual("contraction phi.psi single index", r10, S::EXACT));

    let mut rf = 0.0f64;
    for p in 0..n {
        for q in 0..n {
            let lhs = sum(&|a| sum(&|b| sum(&|c| p4(p, a, b, c) * p4(q, a, b, c))));
            rf = rf.max((lhs - delta::<S>(p, q).scale_i(24)).magnitude());
        }
    }
    out.push(Check::residual("contraction psi.psi triple index = 24 delta", rf, S::EXACT));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_form(rng: &mut ChaCha8Rng, k: usize) -> Form<f64> {
        Form::new(k, (0..dimension(k)).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
    }

    fn e(labels: &[usize]) -> Form<Exact> {
        Form::monomial(MultiIndex::new(labels).unwrap())
    }

    #[test]
    fn basis_sizes_and_order() {
        let sizes: Vec<usize> = (0..=7).map(dimension).collect();
        assert_eq!(sizes, vec![1, 7, 21, 35, 35, 21, 7, 1]);
        let first: Vec<String> = MultiIndex::all(2).take(3).map(|m| m.to_string()).collect();
        assert_eq!(first, vec!["e12", "e13", "e14"]);
        assert_eq!(MultiIndex::nth(3, 34).labels(), vec![5, 6, 7]);
    }

    #[test]
    fn multi_index_rejects_unsorted() {
        assert!(MultiIndex::new(&[2, 1]).is_err());
        assert!(MultiIndex::new(&[0, 1]).is_err());
        assert!(MultiIndex::new(&[8]).is_err());
    }

    #[test]
    fn wedge_of_covectors() {
        assert_eq!(e(&[1]).wedge(&e(&[2])), e(&[1, 2]));
        assert_eq!(e(&[2]).wedge(&e(&[1])), -e(&[1, 2]));
    }

    #[test]
    fn omega_cubed() {
        let w = omega::<Exact>();
        let w3 = w.wedge(&w).wedge(&w);
        assert_eq!(w3, e(&[1, 2, 3, 4, 5, 6]).scale(&Exact::from_i64(6)));
    }

    #[test]
    fn wedge_overflow_is_rejected() {
        let a = standard_phi::<f64>();
        let b = standard_phi_dual::<f64>();
        assert_eq!(wedge(&b, &b), Err(ExteriorError::DegreeOverflow(8)));
        assert!(wedge(&a, &b).is_ok());
    }

    #[test]
    fn graded_anticommutativity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for ka in 0..=7 {
            for kb in 0..=7 - ka {
                let a = random_form(&mut rng, ka);
                let b = random_form(&mut rng, kb);
                let sign = if ka * kb % 2 == 0 { 1.0 } else { -1.0 };
                let diff = &a.wedge(&b) - &b.wedge(&a).scale(&sign);
                assert!(diff.max_abs() < 1e-14);
            }
        }
    }

    #[test]
    fn hodge_examples() {
        assert_eq!(e(&[1, 2, 7]).hodge(), e(&[3, 4, 5, 6]));
        assert_eq!(standard_phi::<Exact>().hodge(), standard_phi_dual());
        for k in 0..=7 {
            for index in MultiIndex::all(k) {
                assert_eq!(Form::<Exact>::monomial(index).hodge().hodge(), Form::monomial(index));
            }
        }
    }

    #[test]
    fn hodge_pairing_matches_inner_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for k in 0..=7 {
            for _ in 0..100 {
                let a = random_form(&mut rng, k);
                let b = random_form(&mut rng, k);
                let top = a.wedge(&b.hodge()).top_or_scalar();
                assert!((top - a.inner(&b)).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn interior_examples() {
        let e1 =
            [Exact::one(), Exact::zero(), Exact::zero(), Exact::zero(), Exact::zero(), Exact::zero(), Exact::zero()];
        assert_eq!(e(&[1, 2]).interior(&e1), e(&[2]));
        let expected = &(&-e(&[1, 7]) - &e(&[3, 6])) - &e(&[4, 5]);
        assert_eq!(standard_phi::<Exact>().interior_basis(1), expected);
        assert_eq!(Form::<f64>::scalar(3.0).interior(&[1.0; 7]), Form::zero(0));
    }

    #[test]
    fn interior_is_adjoint_to_wedge() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in 1..=7 {
            let a = random_form(&mut rng, k);
            let b = random_form(&mut rng, k - 1);
            let v: Vec<f64> = (0..7).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let lhs = a.interior(&v).inner(&b);
            let rhs = a.inner(&Form::from_vector(&v).wedge(&b));
            assert!((lhs - rhs).abs() < 1e-13);
        }
    }

    #[test]
    fn metric_from_phi() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let phi = standard_phi::<f64>();
        for _ in 0..20 {
            let u: Vec<f64> = (0..7).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let v: Vec<f64> = (0..7).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let top = phi.interior(&u).wedge(&phi.interior(&v)).wedge(&phi).top_or_scalar();
            let uv: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
            assert!((top - 6.0 * uv).abs() < 1e-12);
        }
    }

    #[test]
    fn phi_constants() {
        let phi = standard_phi::<Exact>();
        assert_eq!(*phi.coeff(MultiIndex::new(&[1, 2, 7]).unwrap()), Exact::one());
        assert_eq!(*phi.coeff(MultiIndex::new(&[2, 4, 5]).unwrap()), -Exact::one());
        assert_eq!(phi.norm2(), Exact::from_i64(7));
        assert_eq!(phi.wedge(&standard_phi_dual()), Form::volume().scale(&Exact::from_i64(7)));
    }

    #[test]
    fn antisym_round_trip() {
        let phi = standard_phi::<Exact>();
        let arr = AntisymArray::from_form(&phi);
        assert_eq!(*arr.get(&[0, 1, 6]), Exact::one());
        assert_eq!(*arr.get(&[6, 1, 0]), -Exact::one());
        assert_eq!(arr.tensor_norm2(), Exact::from_i64(42));
        assert_eq!(arr.to_form(), phi);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for k in 0..=4 {
            let a = random_form(&mut rng, k);
            let arr = AntisymArray::from_form(&a);
            assert_eq!(arr.to_form(), a);
            let fact: f64 = (1..=k).map(|x| x as f64).product();
            assert!((arr.tensor_norm2() - fact * a.norm2()).abs() < 1e-12);
        }
    }

    #[test]
    fn non_antisymmetric_array_is_rejected() {
        let mut data = vec![0.0; 49];
        data[1] = 1.0;
        assert!(matches!(AntisymArray::from_components(2, data), Err(ExteriorError::NotAntisymmetric(_))));
        let ok = AntisymArray::from_form(&omega::<f64>());
        assert!(AntisymArray::from_components(2, ok.data().to_vec()).is_ok());
    }

    #[test]
    fn pullback_and_derivation_agree_to_first_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let a = Mat::from_fn(7, 7, |_, _| rng.gen_range(-1.0..1.0));
        let h = 1e-6;
        let m = Mat::from_fn(7, 7, |i, j| if i == j { 1.0 } else { 0.0 }).sub(&a.transpose().scale(&h));
        let phi = standard_phi::<f64>();
        let finite = (&phi.pullback(&m) - &phi).scale(&(1.0 / h));
        assert!((&finite - &phi.derivation(&a)).max_abs() < 1e-5);
    }

    #[test]
    fn contraction_identities_exact() {
        for check in check_contraction_identities::<Exact>() {
            assert_eq!(check.residual, 0.0, "{}", check.name);
        }
    }
}
