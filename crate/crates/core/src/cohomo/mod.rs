//! Torsion of warped-product and cohomogeneity-one G₂ structures.

pub mod algebra;
pub mod sweep;
pub mod warp;

pub use algebra::{FiberScale, InvariantForm};
pub use sweep::{default_config, run_sweep, type_sweep, SweepConfig, SweepEntry, SweepReport};
pub use warp::{
    cohom_torsion, compare_cohom_routes, compare_warped_routes, displayed_derivative_checks, einstein_warp_check,
    holonomy_profile, holonomy_residual, ric_w_vanishes, theta_family, warped_phi, warped_scalar_curvature,
    warped_torsion, CohomSpec, ThetaBranches, TwoRouteTorsion, WarpSpec,
};
