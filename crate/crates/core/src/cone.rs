//! Birkhoff's projective metric on proper cones.
//!
//! Order convention: `y ≤ λx` iff `λx − y` lies in the closed cone, so that
//! `M(y/x)` is the largest facet ratio.

use std::collections::BTreeSet;

use nalgebra::DMatrix;

use crate::convex::{for_each_combination, ConvexDomain};
use crate::error::{GeometryError, Result};
use crate::linalg::{centroid, columns, nullspace, rank_of, Point};

#[derive(Debug, Clone)]
pub enum Cone {
    /// Finitely generated cone with its facet functionals `ℓᵢ ≥ 0`.
    Polyhedral { generators: Vec<Point>, functionals: Vec<Point> },
    /// `{x : xᵀ G x > 0}` on the sheet containing `axis`, for `G` of signature `(1, n−1)`.
    Quadric { form: DMatrix<f64>, axis: Point },
}

impl Cone {
    pub fn from_generators(generators: &[Point]) -> Result<Self> {
        let Some(first) = generators.first() else {
            return Err(GeometryError::ImproperCone("no generators".into()));
        };
        let n = first.len();
        if generators.iter().any(|g| g.len() != n) {
            return Err(GeometryError::DimensionMismatch {
                expected: n,
                got: generators.iter().map(|g| g.len()).find(|&l| l != n).unwrap_or(n),
            });
        }
        if generators.iter().any(|g| g.iter().any(|c| !c.is_finite())) {
            return Err(GeometryError::NonFinite);
        }
        if rank_of(generators, n, 1e-12) < n {
            return Err(GeometryError::ImproperCone("generators do not span the space".into()));
        }
        let unit: Vec<Point> = generators.iter().map(|g| g.normalize()).collect();
        let mut functionals: Vec<Point> = Vec::new();
        let mut seen: Vec<BTreeSet<usize>> = Vec::new();
        for_each_combination(unit.len(), n - 1, |combo| {
            if seen.iter().any(|s| combo.iter().all(|i| s.contains(i))) {
                return;
            }
            let rows: Vec<Point> = combo.iter().map(|&i| unit[i].clone()).collect();
            let m = if rows.is_empty() { DMatrix::zeros(0, n) } else { columns(&rows, n).transpose() };
            let ns = nullspace(&m, 1e-12);
            if ns.len() != 1 {
                return;
            }
            let mut l = ns[0].clone();
            let values: Vec<f64> = unit.iter().map(|g| l.dot(g)).collect();
            if values.iter().all(|&v| v <= 1e-12) {
                l = -l;
            } else if !values.iter().all(|&v| v >= -1e-12) {
                return;
            }
            let tight: BTreeSet<usize> =
                unit.iter().enumerate().filter(|(_, g)| l.dot(g).abs() <= 1e-12).map(|(i, _)| i).collect();
            functionals.push(l);
            seen.push(tight);
        });
        if rank_of(&functionals, n, 1e-12) < n {
            return Err(GeometryError::ImproperCone("cone contains a line".into()));
        }
        let c = centroid(&unit);
        for l in &mut functionals {
            let v = l.dot(&c);
            *l /= v;
        }
        Ok(Self::Polyhedral { generators: generators.to_vec(), functionals })
    }

    pub fn orthant(n: usize) -> Self {
        let gens: Vec<Point> = (0..n)
            .map(|i| {
                let mut e = Point::zeros(n);
                e[i] = 1.0;
                e
            })
            .collect();
        Self::from_generators(&gens).expect("orthant is proper")
    }

    /// `{x ∈ ℝⁿ : x₁² > x₂² + … + xₙ², x₁ > 0}`.
    pub fn lorentz(n: usize) -> Self {
        let mut form = -DMatrix::identity(n, n);
        form[(0, 0)] = 1.0;
        let mut axis = Point::zeros(n);
        axis[0] = 1.0;
        Self::Quadric { form, axis }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Polyhedral { functionals, .. } => functionals[0].len(),
            Self::Quadric { axis, .. } => axis.len(),
        }
    }

    pub fn contains_interior(&self, x: &Point) -> bool {
        if x.len() != self.dim() {
            return false;
        }
        match self {
            Self::Polyhedral { functionals, .. } => functionals.iter().all(|l| l.dot(x) > 0.0),
            Self::Quadric { form, axis } => quad(form, x, x) > 0.0 && quad(form, x, axis) > 0.0,
        }
    }

    /// Whether `x` is in the closed cone up to `tol` (relative to |x|).
    pub fn contains_closed(&self, x: &Point, tol: f64) -> bool {
        let scale = x.norm().max(1.0);
        match self {
            Self::Polyhedral { functionals, .. } => functionals.iter().all(|l| l.dot(x) >= -tol * scale),
            Self::Quadric { form, axis } => {
                quad(form, x, x) >= -tol * scale * scale && quad(form, x, axis) >= -tol * scale
            }
        }
    }

    fn require_interior(&self, x: &Point) -> Result<()> {
        if x.len() != self.dim() {
            return Err(GeometryError::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        if self.contains_interior(x) {
            Ok(())
        } else {
            Err(GeometryError::NotInteriorOfCone)
        }
    }
}

fn quad(form: &DMatrix<f64>, a: &Point, b: &Point) -> f64 {
    a.dot(&(form * b))
}

/// Cone over a domain: vertices become extreme rays after lifting to height 1.
///
/// A polytope lying in an affine hyperplane that misses the origin (such as the
/// standard simplex) is already a cross section of a cone and is used as is.
pub fn cone_over(domain: &ConvexDomain) -> Result<Cone> {
    match domain {
        ConvexDomain::Polytope(poly) => {
            let gens: Vec<Point> = poly.vertices().iter().map(|v| lift(domain, v)).collect();
            Cone::from_generators(&gens)
        }
        ConvexDomain::Ellipsoid(ell) => {
            // (p − s c)ᵀ Q (p − s c) < s² on the sheet s > 0.
            let n = ell.dim();
            let c = ell.center();
            let q = ell.shape();
            let mut form = DMatrix::zeros(n + 1, n + 1);
            let qc = q * c;
            form.view_mut((0, 0), (n, n)).copy_from(&(-q));
            for i in 0..n {
                form[(i, n)] = qc[i];
                form[(n, i)] = qc[i];
            }
            form[(n, n)] = 1.0 - c.dot(&qc);
            let axis = c.clone().insert_row(n, 1.0);
            Ok(Cone::Quadric { form, axis })
        }
    }
}

/// Point of the cone over `domain` representing `p`.
pub fn lift(domain: &ConvexDomain, p: &Point) -> Point {
    if section_is_projective(domain) {
        p.clone()
    } else {
        p.clone().insert_row(p.len(), 1.0)
    }
}

fn section_is_projective(domain: &ConvexDomain) -> bool {
    match domain {
        ConvexDomain::Polytope(poly) => {
            let frame = poly.frame();
            frame.dim() + 1 == frame.ambient_dim() && frame.residual(&Point::zeros(frame.ambient_dim())) > 1e-9
        }
        ConvexDomain::Ellipsoid(_) => false,
    }
}

/// `M(y/x) = inf{λ > 0 : y ≤ λx}`.
pub fn birkhoff_m(cone: &Cone, y: &Point, x: &Point) -> Result<f64> {
    cone.require_interior(x)?;
    if y.len() != cone.dim() {
        return Err(GeometryError::DimensionMismatch { expected: cone.dim(), got: y.len() });
    }
    Ok(match cone {
        Cone::Polyhedral { functionals, .. } => functionals.iter().map(|l| l.dot(y) / l.dot(x)).fold(0.0, f64::max),
        Cone::Quadric { form, .. } => {
            let qx = quad(form, x, x);
            let qy = quad(form, y, y);
            let b = quad(form, x, y);
            let disc = (b * b - qx * qy).max(0.0).sqrt();
            // Larger root of λ² q(x) − 2λ B + q(y) = 0.
            let root = if b >= 0.0 { (b + disc) / qx } else { qy / (b - disc) };
            root.max(0.0)
        }
    })
}

/// `d_C(x,y) = ln M(y/x) + ln M(x/y)`.
pub fn cone_distance(cone: &Cone, x: &Point, y: &Point) -> Result<f64> {
    cone.require_interior(y)?;
    let a = birkhoff_m(cone, y, x)?;
    let b = birkhoff_m(cone, x, y)?;
    Ok((a.ln() + b.ln()).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pt;
    use crate::metric::distance;

    #[test]
    fn simplex_lifts_to_the_orthant() {
        let c = cone_over(&ConvexDomain::standard_simplex(2)).unwrap();
        let Cone::Polyhedral { functionals, .. } = &c else { panic!("polyhedral") };
        assert_eq!(functionals.len(), 3);
        for l in functionals {
            assert_eq!(l.iter().filter(|v| v.abs() > 1e-12).count(), 1);
        }
    }

    #[test]
    fn square_cone_has_four_generators() {
        let sq = ConvexDomain::axis_box(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let Cone::Polyhedral { generators, functionals } = cone_over(&sq).unwrap() else { panic!() };
        assert_eq!(generators.len(), 4);
        assert_eq!(functionals.len(), 4);
        assert!(generators.iter().all(|g| g[2] == 1.0));
    }

    #[test]
    fn disk_cone_is_quadric() {
        let c = cone_over(&ConvexDomain::unit_ball(2)).unwrap();
        assert!(matches!(c, Cone::Quadric { .. }));
        assert!(c.contains_interior(&pt(&[0.5, 0.0, 1.0])));
        assert!(!c.contains_interior(&pt(&[1.5, 0.0, 1.0])));
    }

    #[test]
    fn orthant_m_values() {
        let o = Cone::orthant(3);
        assert!((birkhoff_m(&o, &pt(&[2.0, 1.0, 1.0]), &pt(&[1.0, 1.0, 1.0])).unwrap() - 2.0).abs() < 1e-12);
        let x = pt(&[0.3, 1.2, 0.7]);
        assert!((birkhoff_m(&o, &x, &x).unwrap() - 1.0).abs() < 1e-12);
        assert!((birkhoff_m(&o, &pt(&[1.0, 1.0, 1.0]), &pt(&[1.0, 2.0, 4.0])).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(birkhoff_m(&o, &x, &pt(&[1.0, 0.0, 1.0])).unwrap_err(), GeometryError::NotInteriorOfCone);
    }

    #[test]
    fn orthant_distances() {
        let o = Cone::orthant(3);
        let d = cone_distance(&o, &pt(&[1.0, 1.0, 1.0]), &pt(&[2.0, 1.0, 1.0])).unwrap();
        assert!((d - 2f64.ln()).abs() < 1e-12);
        let y = pt(&[0.2, 0.5, 0.9]);
        assert!(cone_distance(&o, &(&y * 5.0), &y).unwrap().abs() < 1e-12);
        let (x, y) = (pt(&[0.5, 0.25, 0.25]), pt(&[0.25, 0.5, 0.25]));
        let d = cone_distance(&o, &x, &y).unwrap();
        let h = distance(&ConvexDomain::standard_simplex(2), &x, &y).unwrap();
        assert!((d - 4f64.ln()).abs() < 1e-12);
        assert!((d - h).abs() < 1e-12);
    }

    #[test]
    fn lorentz_matches_disk() {
        let disk = ConvexDomain::unit_ball(2);
        let c = cone_over(&disk).unwrap();
        let (x, y) = (pt(&[0.1, -0.3]), pt(&[0.6, 0.2]));
        let d = cone_distance(&c, &lift(&disk, &x), &lift(&disk, &y)).unwrap();
        assert!((d - distance(&disk, &x, &y).unwrap()).abs() < 1e-12);
        let l = Cone::lorentz(3);
        assert!(l.contains_interior(&pt(&[1.0, 0.5, 0.5])));
        assert!(!l.contains_interior(&pt(&[-1.0, 0.1, 0.1])));
    }

    #[test]
    fn improper_generators_are_rejected() {
        let e = Cone::from_generators(&[pt(&[1.0, 0.0]), pt(&[-1.0, 0.0]), pt(&[0.0, 1.0])]);
        assert!(matches!(e, Err(GeometryError::ImproperCone(_))));
        let e = Cone::from_generators(&[pt(&[1.0, 0.0, 0.0]), pt(&[0.0, 1.0, 0.0])]);
        assert!(matches!(e, Err(GeometryError::ImproperCone(_))));
    }
}
