//! G₂ structures on seven-dimensional spaces: exterior calculus on ℝ⁷,
//! irreducible projections, torsion, curvature decomposition, and
//! verification of the pointwise curvature–torsion identities on
//! left-invariant and cohomogeneity-one examples.

pub mod cohomo;
pub mod curvature;
pub mod error;
pub mod exterior;
pub mod g2;
pub mod homogeneous;
pub mod identities;
pub mod jet;
pub mod linalg;
pub mod report;
pub mod scalar;
pub mod tables;
pub mod tensor;
pub mod torsion;

pub use error::*;
pub use exterior::{standard_phi, standard_phi_dual, AntisymArray, Form, MultiIndex};
pub use scalar::{Exact, Scalar};
pub use tensor::Sym2Tensor;
