//! Hilbert geometry of convex domains: distances, faces, rigidity, cone metrics
//! and explicit isometries, with seeded property suites.

pub mod cone;
pub mod convex;
pub mod error;
pub mod experiments;
pub mod io;
pub mod isometry;
pub mod linalg;
pub mod metric;
pub mod svg;
