//! Closed forms of Vinberg's map `x* = −∇ log φ(x)` for two homogeneous cones.

use crate::error::{GeometryError, Result};
use crate::linalg::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeKind {
    Orthant,
    Lorentz,
}

/// `x*` for the orthant (`φ = Π xᵢ⁻¹`) or the Lorentz cone (`φ ∝ q(x)^{−n/2}`).
pub fn vinberg_star(kind: ConeKind, x: &Point) -> Result<Point> {
    if x.iter().any(|c| !c.is_finite()) {
        return Err(GeometryError::NonFinite);
    }
    match kind {
        ConeKind::Orthant => {
            if x.iter().any(|&c| c <= 0.0) {
                return Err(GeometryError::NotInteriorOfCone);
            }
            Ok(x.map(|c| 1.0 / c))
        }
        ConeKind::Lorentz => {
            let n = x.len();
            let q = x[0] * x[0] - x.rows(1, n - 1).norm_squared();
            if n < 2 || x[0] <= 0.0 || q <= 0.0 {
                return Err(GeometryError::NotInteriorOfCone);
            }
            let mut s = x * (n as f64 / q);
            for i in 1..n {
                s[i] = -s[i];
            }
            Ok(s)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pt;

    fn proportional(a: &Point, b: &Point) -> bool {
        let s = a.dot(b) / b.dot(b);
        s > 0.0 && (a - b * s).amax() < 1e-12 * a.amax()
    }

    /// Central-difference gradient.
    fn numeric_gradient(f: impl Fn(&Point) -> f64, x: &Point) -> Point {
        let h = 1e-6;
        Point::from_iterator(
            x.len(),
            (0..x.len()).map(|i| {
                let mut a = x.clone();
                let mut b = x.clone();
                a[i] += h;
                b[i] -= h;
                (f(&a) - f(&b)) / (2.0 * h)
            }),
        )
    }

    #[test]
    fn orthant_examples() {
        assert!(proportional(&vinberg_star(ConeKind::Orthant, &pt(&[1.0, 2.0, 4.0])).unwrap(), &pt(&[1.0, 0.5, 0.25])));
        assert!(proportional(&vinberg_star(ConeKind::Orthant, &pt(&[1.0, 1.0, 1.0])).unwrap(), &pt(&[1.0, 1.0, 1.0])));
        assert_eq!(
            vinberg_star(ConeKind::Orthant, &pt(&[1.0, 0.0, 1.0])).unwrap_err(),
            GeometryError::NotInteriorOfCone
        );
    }

    #[test]
    fn lorentz_examples() {
        assert!(proportional(&vinberg_star(ConeKind::Lorentz, &pt(&[2.0, 1.0, 0.0])).unwrap(), &pt(&[2.0, -1.0, 0.0])));
        assert_eq!(
            vinberg_star(ConeKind::Lorentz, &pt(&[1.0, 1.0, 1.0])).unwrap_err(),
            GeometryError::NotInteriorOfCone
        );
    }

    #[test]
    fn lorentz_matches_numeric_gradient() {
        let x = pt(&[3.0, 0.5, -1.2]);
        let n = x.len() as f64;
        let log_phi = |p: &Point| -(n / 2.0) * (p[0] * p[0] - p[1] * p[1] - p[2] * p[2]).ln();
        let g = -numeric_gradient(log_phi, &x);
        assert!((vinberg_star(ConeKind::Lorentz, &x).unwrap() - g).amax() < 1e-6);
    }
}
