//! Isometries between Hilbert geometries and numeric probes for them.

pub(crate) mod checks;
pub(crate) mod classify;
mod projective;
mod simplex;
mod vinberg;

pub use checks::{
    focusing_probe, projectivity_check, sampled_isometry_check, FocusVerdict, IsometryReport, MetricSpace, PointMap,
    ProjectivityReport, VariationSpace, DEFAULT_HORIZON, FOCUS_EPS,
};
pub use classify::{classify_2d, is_cone_3d, Classification, Verdict};
pub use projective::{fit_projective, fit_projective_in, Chart, ProjectiveMap};
pub use simplex::{gamma_reciprocal, lambda_n, lambda_n_inverse, t_n, t_n_inverse, w_norm, WPoint};
pub use vinberg::{vinberg_star, ConeKind};
