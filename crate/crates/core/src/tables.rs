//! Constant G₂ data, built once per scalar field.

use std::sync::OnceLock;

use crate::exterior::{dimension, standard_phi, standard_phi_dual, AntisymArray, Form};
use crate::g2::{projection_formula, IrredLabel, SplitTables};
use crate::linalg::{column_basis, restricted_pseudo_inverse, Mat};
use crate::scalar::Scalar;

pub struct Tables<S> {
    pub phi: Form<S>,
    pub phi_dual: Form<S>,
    pub phi_array: AntisymArray<S>,
    pub phi_dual_array: AntisymArray<S>,
    projectors: Vec<(IrredLabel, Mat<S>)>,
    /// Basis of Λ²₁₄ as columns.
    pub(crate) basis_14: Mat<S>,
    /// Left inverse of `α ↦ α ∧ φ` on 1-forms.
    pub(crate) tau1_inverse: Mat<S>,
    /// Left inverse of `β ↦ β ∧ φ` on Λ²₁₄.
    pub(crate) tau2_inverse: Mat<S>,
    split: OnceLock<SplitTables<S>>,
}

/// Matrix of a linear map between form degrees, one column per basis form.
pub fn matrix_of<S: Scalar>(from: usize, to: usize, f: impl Fn(&Form<S>) -> Form<S>) -> Mat<S> {
    let columns: Vec<Vec<S>> = (0..dimension(from))
        .map(|p| {
            let mut c = vec![S::zero(); dimension(from)];
            c[p] = S::one();
            f(&Form::new(from, c).expect("basis vector")).into_coeffs()
        })
        .collect();
    Mat::from_columns(dimension(to), &columns)
}

impl<S: Scalar> Tables<S> {
    pub(crate) fn build() -> Self {
        let phi = standard_phi::<S>();
        let phi_dual = standard_phi_dual::<S>();
        let projectors: Vec<(IrredLabel, Mat<S>)> = IrredLabel::all()
            .map(|label| {
                let k = label.degree();
                (label, matrix_of(k, k, |a| projection_formula(a, label, &phi)))
            })
            .collect();
        let find = |degree, dim| {
            projectors
                .iter()
                .find(|(l, _)| l.degree() == degree && l.dim() == dim)
                .map(|(_, m)| m.clone())
                .expect("projector table is complete")
        };
        let basis_14 = column_basis(&find(2, 14));
        let wedge1 = matrix_of(1, 4, |a| a.wedge(&phi));
        let wedge2 = matrix_of(2, 5, |a| a.wedge(&phi));
        let tau1_inverse = restricted_pseudo_inverse(&wedge1, &Mat::identity(7)).expect("α ↦ α∧φ is injective");
        let tau2_inverse = restricted_pseudo_inverse(&wedge2, &basis_14).expect("β ↦ β∧φ is injective on Λ²₁₄");
        Tables {
            phi_array: AntisymArray::from_form(&phi),
            phi_dual_array: AntisymArray::from_form(&phi_dual),
            phi,
            phi_dual,
            projectors,
            basis_14,
            tau1_inverse,
            tau2_inverse,
            split: OnceLock::new(),
        }
    }

    pub fn projector(&self, label: IrredLabel) -> &Mat<S> {
        &self.projectors.iter().find(|(l, _)| *l == label).expect("every valid label has a projector").1
    }

    pub(crate) fn split(&self) -> &SplitTables<S> {
        self.split.get_or_init(|| SplitTables::build(self))
    }
}
