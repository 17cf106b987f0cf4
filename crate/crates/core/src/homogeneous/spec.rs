//! Structure constants of seven-dimensional metric Lie algebras.

use serde::{Deserialize, Serialize};

use crate::error::GeometryError;
use crate::exterior::{dimension, Form, DIM};
use crate::linalg::{inverse, Mat};
use crate::scalar::{parse_scalar, Scalar};

/// Coframe equations `(k, [(i, j, coeff)])` meaning `de^k = Σ coeff · e^{ij}`.
pub type StructureEquations<S> = [(usize, Vec<(usize, usize, S)>)];

type IntTerms<'a> = &'a [(usize, usize, i64)];

/// A Lie algebra with an orthonormal basis `e_1..e_7`.
///
/// Stored as `[e_i, e_j] = Σ_k c^k_ij e_k`, so that the dual coframe obeys
/// `de^k = −Σ_{i<j} c^k_ij e^{ij}`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebraSpec<S> {
    name: String,
    c: Vec<S>,
}

fn at(k: usize, i: usize, j: usize) -> usize {
    (k * DIM + i) * DIM + j
}

impl<S: Scalar> LieAlgebraSpec<S> {
    /// Validates antisymmetry and the Jacobi identity.
    pub fn from_constants(name: impl Into<String>, c: Vec<S>) -> Result<Self, GeometryError> {
        if c.len() != DIM * DIM * DIM {
            return Err(GeometryError::Index(c.len()));
        }
        for k in 0..DIM {
            for i in 0..DIM {
                for j in 0..DIM {
                    let sum = c[at(k, i, j)].clone() + c[at(k, j, i)].clone();
                    if !sum.negligible(c[at(k, i, j)].magnitude()) {
                        return Err(GeometryError::NotAntisymmetric { i: i + 1, j: j + 1, k: k + 1 });
                    }
                }
            }
        }
        let spec = LieAlgebraSpec { name: name.into(), c };
        let residual = spec.jacobi_residual();
        let scale = spec.max_abs().powi(2).max(1.0);
        let ok = if S::EXACT { residual == 0.0 } else { residual <= 1e-12 * scale };
        if !ok {
            return Err(GeometryError::Jacobi(residual));
        }
        Ok(spec)
    }

    /// Builds from the coframe equations `de^k = Σ coeff · e^{ij}`, labels
    /// 1-based as written in structure equations.
    pub fn from_structure_equations(
        name: impl Into<String>,
        equations: &StructureEquations<S>,
    ) -> Result<Self, GeometryError> {
        let mut c = vec![S::zero(); DIM * DIM * DIM];
        for (k, terms) in equations {
            let k = label(*k)?;
            for (i, j, coeff) in terms {
                let (i, j) = (label(*i)?, label(*j)?);
                if i == j {
                    return Err(GeometryError::NotAntisymmetric { i: i + 1, j: j + 1, k: k + 1 });
                }
                c[at(k, i, j)] = c[at(k, i, j)].clone() - coeff.clone();
                c[at(k, j, i)] = c[at(k, j, i)].clone() + coeff.clone();
            }
        }
        Self::from_constants(name, c)
    }

    /// Integer structure equations, used by the built-in examples.
    pub(crate) fn from_int_equations(name: &str, equations: &[(usize, IntTerms<'_>)]) -> Self {
        let eqs: Vec<_> =
            equations.iter().map(|(k, t)| (*k, t.iter().map(|&(i, j, v)| (i, j, S::from_i64(v))).collect())).collect();
        Self::from_structure_equations(name, &eqs).expect("built-in structure constants are valid")
    }

    pub fn abelian(name: impl Into<String>) -> Self {
        LieAlgebraSpec { name: name.into(), c: vec![S::zero(); DIM * DIM * DIM] }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// `c^k_ij` with 0-based positions.
    pub fn constant(&self, k: usize, i: usize, j: usize) -> &S {
        &self.c[at(k, i, j)]
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    /// `de^k` as a 2-form.
    pub fn structure_equation(&self, k: usize) -> Form<S> {
        let coeffs = crate::exterior::MultiIndex::all(2)
            .map(|idx| {
                let p = idx.positions();
                -self.constant(k, p[0], p[1]).clone()
            })
            .collect();
        Form::new(2, coeffs).expect("2-form length")
    }

    /// Largest component of the Jacobiator `Σ_cyc [[e_i, e_j], e_l]`.
    pub fn jacobi_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..DIM {
            for j in i + 1..DIM {
                for l in j + 1..DIM {
                    for m in 0..DIM {
                        let mut sum = S::zero();
                        for k in 0..DIM {
                            sum = sum
                                + self.constant(k, i, j).clone() * self.constant(m, k, l).clone()
                                + self.constant(k, j, l).clone() * self.constant(m, k, i).clone()
                                + self.constant(k, l, i).clone() * self.constant(m, k, j).clone();
                        }
                        worst = worst.max(sum.magnitude());
                    }
                }
            }
        }
        worst
    }

    /// `tr ad(e_i)` for each basis vector.
    pub fn trace_form(&self) -> Vec<S> {
        (0..DIM).map(|i| (0..DIM).fold(S::zero(), |acc, k| acc + self.constant(k, i, k).clone())).collect()
    }

    pub fn is_unimodular(&self) -> bool {
        self.trace_form().iter().all(|t| t.negligible(self.max_abs()))
    }

    /// The same algebra in the basis `f_a = Σ_i p[a][i] e_i`, declared orthonormal.
    pub fn rebase(&self, p: &Mat<S>) -> Result<Self, GeometryError> {
        let q = inverse(p).map_err(|_| GeometryError::SingularFrame)?;
        let mut c = vec![S::zero(); DIM * DIM * DIM];
        for a in 0..DIM {
            for b in 0..DIM {
                // [f_a, f_b] expanded in e_k, then in f_m via the inverse.
                let mut v = vec![S::zero(); DIM];
                for i in 0..DIM {
                    if p[(a, i)].is_zero() {
                        continue;
                    }
                    for j in 0..DIM {
                        if p[(b, j)].is_zero() {
                            continue;
                        }
                        let w = p[(a, i)].clone() * p[(b, j)].clone();
                        for (k, vk) in v.iter_mut().enumerate() {
                            *vk = vk.clone() + w.clone() * self.constant(k, i, j).clone();
                        }
                    }
                }
                for m in 0..DIM {
                    let coeff = (0..DIM).fold(S::zero(), |acc, k| acc + v[k].clone() * q[(k, m)].clone());
                    c[at(m, a, b)] = coeff;
                }
            }
        }
        Ok(LieAlgebraSpec { name: self.name.clone(), c })
    }

    pub fn to_f64(&self) -> LieAlgebraSpec<f64> {
        LieAlgebraSpec { name: self.name.clone(), c: self.c.iter().map(Scalar::to_f64).collect() }
    }
}

fn label(l: usize) -> Result<usize, GeometryError> {
    if (1..=DIM).contains(&l) {
        Ok(l - 1)
    } else {
        Err(GeometryError::Index(l))
    }
}

/// A coefficient written either as a JSON number or as a string such as `"-3/2"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Number(serde_json::Number),
    Text(String),
}

impl Coefficient {
    pub fn to_scalar<S: Scalar>(&self) -> Option<S> {
        match self {
            Coefficient::Number(n) => parse_scalar(&n.to_string()).or_else(|| n.as_f64().map(S::from_f64)),
            Coefficient::Text(t) => parse_scalar(t),
        }
    }
}

impl From<i64> for Coefficient {
    fn from(n: i64) -> Self {
        Coefficient::Number(n.into())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoframeTerm {
    pub i: usize,
    pub j: usize,
    pub coeff: Coefficient,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoframeEquation {
    pub k: usize,
    pub terms: Vec<CoframeTerm>,
}

/// On-disk description of a left-invariant G₂ structure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    pub dim: usize,
    #[serde(default)]
    pub name: Option<String>,
    pub coframe_d: Vec<CoframeEquation>,
    /// Coefficients of φ in the lexicographic basis of 3-forms.
    #[serde(default)]
    pub phi: Option<Vec<Coefficient>>,
}

/// Why a spec document could not be used.
#[derive(Debug, thiserror::Error)]
pub enum SpecParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("dimension must be 7, found {0}")]
    Dimension(usize),
    #[error("equation for de{k}: unreadable coefficient {text:?}")]
    Coefficient { k: usize, text: String },
    #[error("phi must have 35 coefficients, found {0}")]
    PhiLength(usize),
    #[error("phi: unreadable coefficient {0:?}")]
    PhiCoefficient(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

impl SpecDocument {
    pub fn parse(text: &str) -> Result<Self, SpecParseError> {
        serde_json::from_str(text).map_err(|e| SpecParseError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    /// Converts to structure constants and an optional custom φ.
    pub fn build<S: Scalar>(
        &self,
        fallback_name: &str,
    ) -> Result<(LieAlgebraSpec<S>, Option<Form<S>>), SpecParseError> {
        if self.dim != DIM {
            return Err(SpecParseError::Dimension(self.dim));
        }
        let mut equations = Vec::new();
        for eq in &self.coframe_d {
            let terms = eq
                .terms
                .iter()
                .map(|t| {
                    t.coeff
                        .to_scalar::<S>()
                        .map(|c| (t.i, t.j, c))
                        .ok_or_else(|| SpecParseError::Coefficient { k: eq.k, text: format!("{:?}", t.coeff) })
                })
                .collect::<Result<Vec<_>, _>>()?;
            equations.push((eq.k, terms));
        }
        let name = self.name.clone().unwrap_or_else(|| fallback_name.to_string());
        let spec = LieAlgebraSpec::from_structure_equations(name, &equations)?;
        let phi = match &self.phi {
            None => None,
            Some(list) if list.len() != dimension(3) => return Err(SpecParseError::PhiLength(list.len())),
            Some(list) => {
                let coeffs = list
                    .iter()
                    .map(|c| c.to_scalar::<S>().ok_or_else(|| SpecParseError::PhiCoefficient(format!("{c:?}"))))
                    .collect::<Result<Vec<S>, _>>()?;
                Some(Form::new(3, coeffs).expect("35 coefficients"))
            }
        };
        Ok((spec, phi))
    }

    /// Document describing the given structure constants.
    pub fn from_spec<S: Scalar>(spec: &LieAlgebraSpec<S>) -> Self {
        let coframe_d = (0..DIM)
            .map(|k| CoframeEquation {
                k: k + 1,
                terms: spec
                    .structure_equation(k)
                    .terms()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(idx, c)| {
                        let l = idx.labels();
                        CoframeTerm { i: l[0], j: l[1], coeff: Coefficient::Text(format!("{c}")) }
                    })
                    .collect(),
            })
            .filter(|e| !e.terms.is_empty())
            .collect();
        SpecDocument { dim: DIM, name: Some(spec.name().to_string()), coframe_d, phi: None }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    #[test]
    fn coframe_convention() {
        let s = LieAlgebraSpec::<Exact>::from_int_equations("h", &[(1, &[(1, 7, -1)])]);
        // de¹ = −e¹⁷ means [e₁, e₇] = e₁.
        assert_eq!(*s.constant(0, 0, 6), Exact::from_i64(1));
        assert_eq!(*s.constant(0, 6, 0), Exact::from_i64(-1));
        assert_eq!(s.structure_equation(0), Form::from_int_terms(2, &[(&[1, 7], -1)]));
        assert_eq!(s.trace_form()[6], Exact::from_i64(-1));
        assert!(!s.is_unimodular());
    }

    #[test]
    fn jacobi_failure_rejected() {
        // [e1,e2]=e3, [e3,e4]=e1, [e2,e4]=e5 violates Jacobi on (e1,e2,e4).
        let eqs = vec![(3, vec![(1, 2, -1.0)]), (1, vec![(3, 4, -1.0)]), (5, vec![(2, 4, -1.0)])];
        let bad = LieAlgebraSpec::<f64>::from_structure_equations("bad", &eqs);
        assert!(matches!(bad, Err(GeometryError::Jacobi(_))));
        let eqs = vec![(8, vec![(1, 2, 1.0)])];
        assert!(matches!(LieAlgebraSpec::<f64>::from_structure_equations("x", &eqs), Err(GeometryError::Index(8))));
    }

    #[test]
    fn document_round_trip() {
        let text = r#"{"dim":7,"coframe_d":[{"k":3,"terms":[{"i":1,"j":2,"coeff":-1},{"i":4,"j":5,"coeff":"-2/3"}]}]}"#;
        let doc = SpecDocument::parse(text).unwrap();
        let (spec, phi) = doc.build::<Exact>("doc").unwrap();
        assert!(phi.is_none());
        assert_eq!(spec.name(), "doc");
        let again = SpecDocument::from_spec(&spec).build::<Exact>("doc").unwrap().0;
        assert_eq!(again, spec);
        let err = SpecDocument::parse("{\"dim\":7,\n \"coframe_d\": [}").unwrap_err();
        assert!(matches!(err, SpecParseError::Syntax { line: 2, .. }));
    }

    #[test]
    fn rebase_by_permutation() {
        let s = LieAlgebraSpec::<Exact>::from_int_equations("h", &[(1, &[(1, 7, -1)])]);
        let mut p = Mat::zeros(7, 7);
        for a in 0..7 {
            p[(a, (a + 1) % 7)] = Exact::from_i64(1);
        }
        // f_7 = e_1, f_6 = e_7.
        let r = s.rebase(&p).unwrap();
        assert_eq!(*r.constant(6, 6, 5), Exact::from_i64(1));
    }
}
