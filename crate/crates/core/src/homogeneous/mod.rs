//! Left-invariant G₂ structures on seven-dimensional Lie groups.

pub mod analyze;
pub mod examples;
pub mod geometry;
pub mod spec;

pub use analyze::{analyze, analyze_structure, AnalysisReport};
pub use examples::{builtin_example, builtin_examples, BuiltinExample, ExpectedValues};
pub use geometry::{
    adapted_frame, build_structure, canonical_connection, invariant_d, invariant_delta, levi_civita, riemann,
    CanonicalConnection, HomogeneousG2, InvariantGeometry,
};
pub use spec::{LieAlgebraSpec, SpecDocument, SpecParseError, StructureEquations};
