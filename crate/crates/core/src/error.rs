use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix is singular")]
    Singular,
    #[error("linear system is inconsistent (residual {residual:e})")]
    Inconsistent { residual: f64 },
    #[error("shape mismatch: expected {expected:?}, found {found}")]
    Shape { expected: (usize, usize), found: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExteriorError {
    #[error("degree {0} exceeds 7")]
    DegreeOverflow(usize),
    #[error("expected {expected} coefficients for degree {degree}, found {found}")]
    Length { degree: usize, expected: usize, found: usize },
    #[error("invalid multi-index {0:?}: entries must be strictly increasing in 1..=7")]
    BadIndex(Vec<usize>),
    #[error("component array is not totally antisymmetric (deviation {0:e})")]
    NotAntisymmetric(f64),
    #[error("expected a form of degree {expected}, found degree {found}")]
    Degree { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum G2Error {
    #[error("({degree},{dim}) is not a G2-irreducible summand of the exterior algebra")]
    InvalidLabel { degree: usize, dim: usize },
    #[error("form is not in the requested summand (residual {residual:e})")]
    NotInSummand { residual: f64 },
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurvatureError {
    #[error("tensor fails the first Bianchi identity (residual {0:e})")]
    NotAlgebraic(f64),
    #[error("array is not symmetric (deviation {0:e})")]
    NotSymmetric(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TorsionError {
    #[error("forms are not the differentials of any torsion quadruple (residual {residual:e})")]
    NotInImage { residual: f64 },
    #[error("three-form is not the standard phi of an adapted frame (deviation {0:e})")]
    NotStandardPhi(f64),
    #[error("{component} is outside its summand (residual {residual:e})")]
    Component { component: &'static str, residual: f64 },
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("structure constants fail the Jacobi identity (residual {0:e})")]
    Jacobi(f64),
    #[error("structure constants are not antisymmetric at ({i},{j},{k})")]
    NotAntisymmetric { i: usize, j: usize, k: usize },
    #[error("index {0} out of range 1..=7")]
    Index(usize),
    #[error("three-form is not a positive G2 form compatible with the metric (residual {0:e})")]
    IncompatiblePhi(f64),
    #[error("canonical connection does not preserve phi (residual {0:e})")]
    NotParallel(f64),
    #[error("frame matrix is singular")]
    SingularFrame,
    #[error("custom phi is only supported in floating-point mode")]
    ExactCustomPhi,
    #[error(transparent)]
    Torsion(#[from] TorsionError),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CohomError {
    #[error("warping function must be positive, got {0}")]
    NonPositiveWarp(f64),
    #[error("form is not in the invariant algebra (residual {0:e})")]
    NotInvariant(f64),
    #[error("closed-form and generic torsion disagree (residual {0:e})")]
    RouteMismatch(f64),
    #[error("unknown function descriptor {0:?}")]
    BadDescriptor(String),
    #[error(transparent)]
    Torsion(#[from] TorsionError),
}
