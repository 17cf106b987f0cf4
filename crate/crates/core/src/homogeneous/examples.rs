//! Built-in left-invariant examples with their expected values.

use serde::{Deserialize, Serialize};

use crate::exterior::Form;
use crate::scalar::Scalar;
use crate::torsion::FgType;

use super::spec::LieAlgebraSpec;

/// Rank-one solvable extension of the complex Heisenberg group carrying
/// Bryant's closed structure with extremally pinched Ricci curvature.
pub fn bryant<S: Scalar>() -> LieAlgebraSpec<S> {
    LieAlgebraSpec::from_int_equations(
        "bryant",
        &[
            (1, &[(1, 7, -1), (3, 6, -2), (4, 5, -2)]),
            (2, &[(2, 7, -1), (3, 5, -2), (6, 4, -2)]),
            (3, &[(3, 7, 1)]),
            (4, &[(4, 7, 1)]),
            (5, &[(5, 7, -2)]),
            (6, &[(6, 7, -2)]),
        ],
    )
}

/// Real hyperbolic space as the solvable group `de^i = −e^{i7}`.
pub fn hyperbolic<S: Scalar>() -> LieAlgebraSpec<S> {
    let eqs: Vec<_> = (1..=6).map(|i| (i, vec![(i, 7, S::from_i64(-1))])).collect();
    LieAlgebraSpec::from_structure_equations("hyperbolic", &eqs).expect("valid")
}

/// A 3-step nilpotent algebra on which the standard φ is closed but not
/// extremally pinched, so its W₆₄ block is nonzero.
pub fn nilpotent<S: Scalar>() -> LieAlgebraSpec<S> {
    LieAlgebraSpec::from_int_equations(
        "nilpotent",
        &[(3, &[(1, 2, 1)]), (4, &[(1, 5, 1)]), (6, &[(1, 3, 1), (2, 7, -1)])],
    )
}

pub fn flat<S: Scalar>() -> LieAlgebraSpec<S> {
    LieAlgebraSpec::abelian("flat")
}

/// What a built-in example is known to satisfy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectedValues {
    pub fg_type: FgType,
    pub scalar_curvature: f64,
    pub closed: bool,
    #[serde(default)]
    pub extremally_pinched: Option<bool>,
    #[serde(default)]
    pub w64_vanishes: Option<bool>,
    #[serde(default)]
    pub torsion_parallel: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct BuiltinExample<S> {
    pub name: &'static str,
    pub spec: LieAlgebraSpec<S>,
    pub phi: Form<S>,
    pub expected: ExpectedValues,
}

pub fn builtin_examples<S: Scalar>() -> Vec<BuiltinExample<S>> {
    let phi = crate::standard_phi::<S>();
    vec![
        BuiltinExample {
            name: "flat",
            spec: flat(),
            phi: phi.clone(),
            expected: ExpectedValues {
                fg_type: FgType::default(),
                scalar_curvature: 0.0,
                closed: true,
                extremally_pinched: Some(true),
                w64_vanishes: Some(true),
                torsion_parallel: Some(true),
            },
        },
        BuiltinExample {
            name: "hyperbolic",
            spec: hyperbolic(),
            phi: phi.clone(),
            expected: ExpectedValues {
                fg_type: FgType::from_classes(&[4]),
                scalar_curvature: -42.0,
                closed: false,
                extremally_pinched: None,
                w64_vanishes: Some(true),
                torsion_parallel: None,
            },
        },
        BuiltinExample {
            name: "bryant",
            spec: bryant(),
            phi: phi.clone(),
            expected: ExpectedValues {
                fg_type: FgType::from_classes(&[2]),
                scalar_curvature: -36.0,
                closed: true,
                extremally_pinched: Some(true),
                w64_vanishes: Some(true),
                torsion_parallel: Some(true),
            },
        },
        BuiltinExample {
            name: "nilpotent",
            spec: nilpotent(),
            phi,
            expected: ExpectedValues {
                fg_type: FgType::from_classes(&[2]),
                scalar_curvature: -2.0,
                closed: true,
                extremally_pinched: Some(false),
                w64_vanishes: Some(false),
                torsion_parallel: Some(false),
            },
        },
    ]
}

pub fn builtin_example<S: Scalar>(name: &str) -> Option<BuiltinExample<S>> {
    builtin_examples().into_iter().find(|e| e.name == name)
}
