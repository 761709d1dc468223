use nalgebra::{Cholesky, DMatrix, Dyn};

use crate::error::{GeometryError, Result};
use crate::linalg::Point;

/// Open ellipsoid `{p : (p - c)ᵀ Q (p - c) < 1}` with `Q` positive definite.
#[derive(Debug, Clone)]
pub struct Ellipsoid {
    center: Point,
    shape: DMatrix<f64>,
    chol: Cholesky<f64, Dyn>,
    eps: f64,
}

impl Ellipsoid {
    pub fn new(center: Point, shape: DMatrix<f64>, eps: f64) -> Result<Self> {
        let n = center.len();
        if shape.nrows() != n || shape.ncols() != n {
            return Err(GeometryError::DimensionMismatch { expected: n, got: shape.nrows() });
        }
        if center.iter().chain(shape.iter()).any(|c| !c.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        if (&shape - shape.transpose()).abs().max() > 1e-12 * shape.abs().max().max(1.0) {
            return Err(GeometryError::DegenerateInput("shape matrix is not symmetric".into()));
        }
        if n < 1 {
            return Err(GeometryError::DegenerateInput("zero-dimensional ellipsoid".into()));
        }
        let chol = Cholesky::new(shape.clone())
            .ok_or_else(|| GeometryError::DegenerateInput("shape matrix is not positive definite".into()))?;
        Ok(Self { center, shape, chol, eps })
    }

    pub fn unit_ball(dim: usize) -> Self {
        Self::new(Point::zeros(dim), DMatrix::identity(dim, dim), super::EPS_GEO).expect("identity is PD")
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn shape(&self) -> &DMatrix<f64> {
        &self.shape
    }

    /// Lower-triangular `L` with `Q = L Lᵀ`.
    pub fn cholesky_factor(&self) -> DMatrix<f64> {
        self.chol.l()
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub(crate) fn set_eps(&mut self, eps: f64) {
        self.eps = eps;
    }

    pub fn quadratic(&self, p: &Point) -> f64 {
        let w = p - &self.center;
        w.dot(&(&self.shape * &w))
    }

    pub fn contains_interior(&self, p: &Point) -> bool {
        p.len() == self.dim() && self.quadratic(p) < 1.0
    }

    /// Smallest positive `t` (and largest negative) where `x + t u` meets the boundary.
    pub fn chord_params(&self, x: &Point, u: &Point) -> (f64, f64) {
        let w = x - &self.center;
        let qu = &self.shape * u;
        let a = u.dot(&qu);
        let b = w.dot(&qu);
        let c = self.quadratic(x) - 1.0;
        if a == 0.0 {
            return (f64::NEG_INFINITY, f64::INFINITY);
        }
        let disc = (b * b - a * c).max(0.0).sqrt();
        let q = -(b + b.signum() * disc);
        if q == 0.0 {
            let r = (-c / a).sqrt();
            return (-r, r);
        }
        let (t1, t2) = (q / a, c / q);
        (t1.min(t2), t1.max(t2))
    }

    /// Radial projection of `p` onto the boundary, from the center.
    pub fn project_to_boundary(&self, p: &Point) -> Point {
        let q = self.quadratic(p);
        if q <= 0.0 {
            return p.clone();
        }
        &self.center + (p - &self.center) / q.sqrt()
    }

    /// Signed boundary defect `sqrt(q(p)) - 1` scaled to a Euclidean length.
    pub fn boundary_distance(&self, p: &Point) -> f64 {
        let b = self.project_to_boundary(p);
        (p - b).norm()
    }

    /// Outward unit normal at a boundary point.
    pub fn normal_at(&self, p: &Point) -> Point {
        (&self.shape * (p - &self.center)).normalize()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pt;

    #[test]
    fn unit_disk_chord_on_axis() {
        let e = Ellipsoid::unit_ball(2);
        let (lo, hi) = e.chord_params(&pt(&[0.0, 0.0]), &pt(&[0.5, 0.0]));
        assert!((lo + 2.0).abs() < 1e-15 && (hi - 2.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_indefinite_shape() {
        let q = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(Ellipsoid::new(pt(&[0.0, 0.0]), q, 1e-9).is_err());
    }
}
