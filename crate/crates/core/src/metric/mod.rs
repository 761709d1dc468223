//! The Hilbert metric of a convex domain.

mod asymptotic;
mod rigidity;

pub use asymptotic::{asymptotic_profile, AsymptoticProfile, Matching, DEFAULT_STEPS, DIVERGENCE_BOUND};
pub use rigidity::{is_rigid_chord, Rigidity, RigidityWitness};

use crate::convex::{ConvexDomain, EPS_GEO};
use crate::error::{GeometryError, Result};
use crate::linalg::{distance_to_line, Point};

/// `CR(α,x,y,β) = (|α−y|/|α−x|)(|β−x|/|β−y|)` for four collinear points.
pub fn cross_ratio(alpha: &Point, x: &Point, y: &Point, beta: &Point) -> Result<f64> {
    cross_ratio_eps(alpha, x, y, beta, EPS_GEO)
}

pub fn cross_ratio_eps(alpha: &Point, x: &Point, y: &Point, beta: &Point, eps: f64) -> Result<f64> {
    let pts = [alpha, x, y, beta];
    if pts.iter().any(|p| p.iter().any(|c| !c.is_finite())) {
        return Err(GeometryError::NonFinite);
    }
    // Measure collinearity against the two points farthest apart.
    let (mut i, mut j, mut far) = (0, 0, 0.0);
    for a in 0..4 {
        for b in a + 1..4 {
            let d = (pts[a] - pts[b]).norm();
            if d > far {
                (i, j, far) = (a, b, d);
            }
        }
    }
    if far > 0.0 {
        let residual = pts.iter().map(|p| distance_to_line(p, pts[i], pts[j])).fold(0.0, f64::max);
        if residual > eps {
            return Err(GeometryError::NotCollinear { residual });
        }
    }
    let ax = (alpha - x).norm();
    let by = (beta - y).norm();
    if ax == 0.0 || by == 0.0 {
        return Err(GeometryError::DegenerateDenominator);
    }
    Ok(((alpha - y).norm() / ax) * ((beta - x).norm() / by))
}

/// `d_Ω(x,y) = ln CR(α,x,y,β)` in natural-log units.
pub fn distance(domain: &ConvexDomain, x: &Point, y: &Point) -> Result<f64> {
    domain.require_interior(x)?;
    domain.require_interior(y)?;
    let u = y - x;
    if u.iter().all(|&c| c == 0.0) {
        return Ok(0.0);
    }
    // Each endpoint gap is measured from the nearer point, which avoids the
    // cancellation in hi − 1 and makes the result symmetric in x and y.
    let (lo, _) = domain.chord_params(x, &u);
    let (_, beyond_y) = domain.chord_params(y, &u);
    Ok(((-1.0 / lo).ln_1p() + (1.0 / beyond_y).ln_1p()).max(0.0))
}

/// `(x,y)_b = ½(d(x,b) + d(y,b) − d(x,y))`.
pub fn gromov_product(domain: &ConvexDomain, b: &Point, x: &Point, y: &Point) -> Result<f64> {
    let xb = distance(domain, x, b)?;
    let yb = distance(domain, y, b)?;
    let xy = distance(domain, x, y)?;
    Ok(0.5 * (xb + yb - xy))
}
