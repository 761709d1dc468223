use thiserror::Error;

/// Errors raised by geometric constructions and metric queries.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("non-finite coordinate in input")]
    NonFinite,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("point is not on the boundary (distance {distance:.3e})")]
    NotOnBoundary { distance: f64 },
    #[error("points coincide")]
    CoincidentPoints,
    #[error("point is not in the interior of the domain")]
    PointNotInterior,
    #[error("point does not lie in the affine hull (residual {residual:.3e})")]
    NotInAffineHull { residual: f64 },
    #[error("faces are not opposite")]
    NotOpposite,
    #[error("affine subspace does not meet the domain in an open set")]
    EmptyIntersection,
    #[error("subspace dimension {got} outside the admissible range {min}..={max}")]
    DimensionOutOfRange { got: usize, min: usize, max: usize },
    #[error("origin is not an interior point of the body")]
    OriginNotInterior,
    #[error("points are not collinear (residual {residual:.3e})")]
    NotCollinear { residual: f64 },
    #[error("cross ratio denominator vanishes")]
    DegenerateDenominator,
    #[error("reference point is not in the interior of the cone")]
    NotInteriorOfCone,
    #[error("cone is not proper: {0}")]
    ImproperCone(String),
    #[error("image point lies at infinity")]
    PointAtInfinity,
    #[error("points do not form a projective basis")]
    DegenerateBasis,
    #[error("point correspondence is not projective (residual {residual:.3e})")]
    InconsistentCorrespondence { residual: f64 },
    #[error("matrix is singular")]
    SingularMap,
    #[error("point is not in the open simplex")]
    NotInSimplex,
    #[error("image point escaped the target domain")]
    ImageEscapedDomain,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, GeometryError>;
