//! The algebraic identity and projector suites, runnable in either field.

use crate::curvature::{block_constant_checks, kn_constant_checks};
use crate::exterior::{check_contraction_identities, dimension, Form, MultiIndex};
use crate::g2::{lambda_sigma_checks, proj, projector_matrix, v14_checks, IrredLabel};
use crate::linalg::Mat;
use crate::report::Check;
use crate::scalar::Scalar;
use crate::tensor::Sym2Tensor;
use crate::torsion::closed_identities;

/// A fixed symmetric test tensor with no special alignment to φ.
pub fn test_tensor<S: Scalar>() -> Sym2Tensor<S> {
    const ROWS: [[i64; 7]; 7] = [
        [3, 1, 0, -2, 1, 0, 4],
        [1, -1, 2, 0, 0, 1, -1],
        [0, 2, 5, 1, -3, 0, 0],
        [-2, 0, 1, 0, 2, -1, 1],
        [1, 0, -3, 2, -4, 1, 0],
        [0, 1, 0, -1, 1, 2, 3],
        [4, -1, 0, 1, 0, 3, -2],
    ];
    let m = Mat::from_fn(7, 7, |i, j| S::from_i64(ROWS[i][j]));
    Sym2Tensor::new(m).expect("test tensor is symmetric")
}

/// A fixed element of Λ²₁₄.
fn test_two_form<S: Scalar>() -> Form<S> {
    proj(&Form::from_int_terms(2, &[(&[1, 2], 1), (&[3, 4], -2), (&[1, 5], 3), (&[2, 7], 1)]), 14)
}

/// Quadratic φ identities, the `λ₃` norm, the V* ⊗ Λ²₁₄ constants, the
/// `r_g`/`r_φ` contraction and norm constants, and the closed-structure
/// relations for two-forms in Λ²₁₄.
pub fn identity_suite<S: Scalar>() -> Vec<Check> {
    let h = test_tensor::<S>();
    let mut out = check_contraction_identities::<S>();
    out.extend(lambda_sigma_checks(&h));
    out.extend(v14_checks::<S>());
    out.extend(kn_constant_checks(&h));
    out.extend(closed_identities(&test_two_form::<S>()).expect("test form lies in L2_14"));
    if S::EXACT {
        out.extend(block_constant_checks());
    }
    out
}

/// Hodge star on degree `k` as a matrix in the monomial basis.
pub fn hodge_matrix<S: Scalar>(k: usize) -> Mat<S> {
    let columns: Vec<Vec<S>> = MultiIndex::all(k).map(|m| Form::<S>::monomial(m).hodge().into_coeffs()).collect();
    Mat::from_columns(dimension(7 - k), &columns)
}

/// Idempotency, symmetry, mutual orthogonality, completeness and traces of
/// the projectors in degrees 2 to 5, and their compatibility with `*`.
pub fn projector_suite<S: Scalar>() -> Vec<Check> {
    let mut out = Vec::new();
    for degree in 2..=5 {
        let n = dimension(degree);
        let labels: Vec<IrredLabel> = IrredLabel::of_degree(degree).collect();
        let mut sum = Mat::<S>::zeros(n, n);
        let mut orth = 0.0f64;
        for &a in &labels {
            let pa = projector_matrix::<S>(a);
            let tag = format!("L{}_{}", degree, a.dim());
            out.push(Check::residual(format!("projector {tag} idempotent"), pa.matmul(pa).sub(pa).max_abs(), S::EXACT));
            out.push(Check::residual(format!("projector {tag} symmetric"), pa.transpose().sub(pa).max_abs(), S::EXACT));
            out.push(Check::values(format!("projector {tag} trace"), &S::from_i64(a.dim() as i64), &pa.trace()));
            for &b in &labels {
                if a != b {
                    orth = orth.max(pa.matmul(projector_matrix::<S>(b)).max_abs());
                }
            }
            sum = sum.add(pa);
        }
        out.push(Check::residual(format!("projectors of degree {degree} orthogonal"), orth, S::EXACT));
        out.push(Check::residual(
            format!("projectors of degree {degree} complete"),
            sum.sub(&Mat::identity(n)).max_abs(),
            S::EXACT,
        ));
        let star = hodge_matrix::<S>(degree);
        let star_back = hodge_matrix::<S>(7 - degree);
        for &a in &labels {
            let dual = IrredLabel::new(7 - degree, a.dim()).expect("Hodge dual summand exists");
            let conj = star.matmul(projector_matrix::<S>(a)).matmul(&star_back);
            out.push(Check::residual(
                format!("projector L{}_{} = * L{}_{} *", 7 - degree, a.dim(), degree, a.dim()),
                conj.sub(projector_matrix::<S>(dual)).max_abs(),
                S::EXACT,
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    #[test]
    fn identity_suite_passes_in_both_fields() {
        for c in identity_suite::<Exact>() {
            assert!(c.passed(0.0) && c.residual == 0.0, "{c:?}");
        }
        for c in identity_suite::<f64>() {
            assert!(c.residual < 1e-12 * c.scale, "{c:?}");
        }
    }

    #[test]
    fn projector_suite_passes_in_both_fields() {
        let exact = projector_suite::<Exact>();
        assert_eq!(exact.len(), 10 * 4 + 4 * 2);
        for c in exact {
            assert_eq!(c.residual, 0.0, "{c:?}");
        }
        for c in projector_suite::<f64>() {
            assert!(c.residual < 1e-12, "{c:?}");
        }
    }

    #[test]
    fn hodge_matrix_squares_to_identity() {
        for k in 0..=7 {
            let s = hodge_matrix::<Exact>(7 - k).matmul(&hodge_matrix::<Exact>(k));
            assert_eq!(s, Mat::identity(dimension(k)));
        }
    }
}
