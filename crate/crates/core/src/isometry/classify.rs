//! Isometry classification of planar domains and the cone test for 3-polytopes.

use nalgebra::DMatrix;

use super::projective::{fit_projective_in, Chart, ProjectiveMap};
use crate::convex::{ConvexDomain, Face, Polytope};
use crate::error::{GeometryError, Result};
use crate::linalg::{centroid, nullspace, Point};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    ProjectivelyEquivalent,
    /// Part of the verdict vocabulary; planar domains never produce it, since
    /// planar Hilbert geometries are isometric only when projectively equivalent.
    IsometricNonProjective,
    NotIsometric,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::ProjectivelyEquivalent => "projectively-equivalent",
            Self::IsometricNonProjective => "isometric-non-projective",
            Self::NotIsometric => "not-isometric",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Classification {
    pub verdict: Verdict,
    /// A projective map from the first domain onto the second, when one exists.
    pub map: Option<ProjectiveMap>,
    /// Whether the domains also admit isometries that are not projective
    /// (true exactly for triangles, via the reciprocal map).
    pub non_projective_isometries: bool,
    pub reason: String,
}

impl Classification {
    fn not_isometric(reason: &str) -> Self {
        Self { verdict: Verdict::NotIsometric, map: None, non_projective_isometries: false, reason: reason.into() }
    }
}

/// Chart in which a planar polygon's ambient points are homogeneous coordinates.
fn planar_chart(poly: &Polytope) -> Result<Chart> {
    let frame = poly.frame();
    match frame.ambient_dim() {
        2 => Ok(Chart::Affine),
        3 => {
            let normal = &nullspace(&DMatrix::from_columns(frame.basis()).transpose(), 1e-12)[0];
            let c = normal.dot(frame.origin());
            if c.abs() <= 1e-9 {
                return Err(GeometryError::Unsupported("polygon plane passes through the origin".into()));
            }
            Ok(Chart::Hyperplane((normal / c).iter().copied().collect()))
        }
        n => Err(GeometryError::Unsupported(format!("planar polygon in ambient dimension {n}"))),
    }
}

/// Vertices in cyclic order around the centroid.
pub(crate) fn cyclic_vertices(poly: &Polytope) -> Vec<Point> {
    let frame = poly.frame();
    let c = frame.to_local(&poly.centroid());
    let mut with_angle: Vec<(f64, Point)> = poly
        .vertices()
        .iter()
        .map(|v| {
            let l = frame.to_local(v) - &c;
            (l[1].atan2(l[0]), v.clone())
        })
        .collect();
    with_angle.sort_by(|a, b| a.0.total_cmp(&b.0));
    with_angle.into_iter().map(|(_, v)| v).collect()
}

fn match_polygons(p: &Polytope, q: &Polytope) -> Result<Option<ProjectiveMap>> {
    let (pc, qc) = (planar_chart(p)?, planar_chart(q)?);
    let pv = cyclic_vertices(p);
    let qv = cyclic_vertices(q);
    let m = pv.len();
    let scale = qv.iter().map(|v| v.amax()).fold(1.0, f64::max);
    // Three vertices and the centroid, or four consecutive vertices.
    let basis = |v: &[Point]| {
        if m == 3 {
            vec![v[0].clone(), v[1].clone(), v[2].clone(), centroid(v)]
        } else {
            v[..4].to_vec()
        }
    };
    let src = basis(&pv);
    for orientation in [1isize, -1] {
        for shift in 0..m as isize {
            let sigma = |i: usize| (shift + orientation * i as isize).rem_euclid(m as isize) as usize;
            let image: Vec<Point> = (0..m).map(|i| qv[sigma(i)].clone()).collect();
            let dst = basis(&image);
            let Ok(map) = fit_projective_in(&src, &pc, &dst, &qc, 2) else { continue };
            let weights: Vec<f64> = pv.iter().map(|v| qc.weight(&map.apply_homogeneous(&pc.homogenize(v)))).collect();
            let same_side = weights.iter().all(|&w| w > 0.0) || weights.iter().all(|&w| w < 0.0);
            let hits = pv.iter().zip(&image).all(|(v, w)| match map.apply(v) {
                Ok(img) => (img - w).norm() <= 1e-7 * scale,
                Err(_) => false,
            });
            if same_side && hits {
                return Ok(Some(map));
            }
        }
    }
    Ok(None)
}

/// Affine map carrying one ellipse onto another.
fn match_ellipses(p: &ConvexDomain, q: &ConvexDomain) -> Result<ProjectiveMap> {
    let (ConvexDomain::Ellipsoid(a), ConvexDomain::Ellipsoid(b)) = (p, q) else { unreachable!("called with ellipses") };
    // (x − c)ᵀ L Lᵀ (x − c) < 1 is the unit disk in u = Lᵀ (x − c).
    let to_disk = a.cholesky_factor().transpose();
    let from_disk = b.cholesky_factor().transpose().try_inverse().ok_or(GeometryError::SingularMap)?;
    let lin = &from_disk * &to_disk;
    let shift = b.center() - &lin * a.center();
    let mut m = DMatrix::identity(3, 3);
    m.view_mut((0, 0), (2, 2)).copy_from(&lin);
    m.view_mut((0, 2), (2, 1)).copy_from(&shift);
    ProjectiveMap::new(m)
}

/// Decides whether two planar domains are isometric, and if so how.
pub fn classify_2d(p: &ConvexDomain, q: &ConvexDomain) -> Result<Classification> {
    for d in [p, q] {
        if d.intrinsic_dim() != 2 {
            return Err(GeometryError::DimensionMismatch { expected: 2, got: d.intrinsic_dim() });
        }
    }
    match (p, q) {
        (ConvexDomain::Ellipsoid(_), ConvexDomain::Ellipsoid(_)) => Ok(Classification {
            verdict: Verdict::ProjectivelyEquivalent,
            map: Some(match_ellipses(p, q)?),
            non_projective_isometries: false,
            reason: "ellipses are affinely equivalent".into(),
        }),
        (ConvexDomain::Ellipsoid(_), _) | (_, ConvexDomain::Ellipsoid(_)) => {
            Ok(Classification::not_isometric("an ellipse has infinitely many extreme points, a polygon finitely many"))
        }
        (ConvexDomain::Polytope(a), ConvexDomain::Polytope(b)) => {
            let (ma, mb) = (a.vertices().len(), b.vertices().len());
            if (ma == 3) != (mb == 3) {
                return Ok(Classification::not_isometric(
                    "exactly one domain is a triangle, which has no extreme line",
                ));
            }
            if ma != mb {
                return Ok(Classification::not_isometric("vertex counts differ"));
            }
            match match_polygons(a, b)? {
                Some(map) => Ok(Classification {
                    verdict: Verdict::ProjectivelyEquivalent,
                    map: Some(map),
                    non_projective_isometries: ma == 3,
                    reason: if ma == 3 {
                        "any two triangles are projectively equivalent".into()
                    } else {
                        "a projective map matches the vertices".into()
                    },
                }),
                None => Ok(Classification::not_isometric("no vertex correspondence extends to a projective map")),
            }
        }
    }
}

/// A vertex `v` and a facet `B` with the polytope equal to the join of `v` and `B`.
pub fn is_cone_3d(domain: &ConvexDomain) -> Result<Option<(Point, Face)>> {
    if domain.intrinsic_dim() != 3 {
        return Err(GeometryError::DimensionMismatch { expected: 3, got: domain.intrinsic_dim() });
    }
    let Some(poly) = domain.as_polytope() else { return Ok(None) };
    let nv = poly.vertices().len();
    for i in 0..nv {
        for f in poly.faces().iter().filter(|f| f.dim == 2) {
            if !f.vertices.contains(&i) && f.vertices.len() == nv - 1 {
                return Ok(Some((poly.vertices()[i].clone(), f.clone())));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pt;

    fn poly(pts: &[[f64; 2]]) -> ConvexDomain {
        ConvexDomain::polytope(&pts.iter().map(|p| pt(p)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn triangles_are_equivalent() {
        let s = ConvexDomain::standard_simplex(2);
        let t = poly(&[[0.0, 0.0], [3.0, 0.5], [1.0, 2.0]]);
        let c = classify_2d(&s, &t).unwrap();
        assert_eq!(c.verdict, Verdict::ProjectivelyEquivalent);
        assert!(c.non_projective_isometries);
        let m = c.map.unwrap();
        let img = m.apply(&pt(&[1.0 / 3.0; 3])).unwrap();
        assert!(t.contains_interior(&img));
    }

    #[test]
    fn square_vs_triangle() {
        let c = classify_2d(
            &poly(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]),
            &poly(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]),
        )
        .unwrap();
        assert_eq!(c.verdict, Verdict::NotIsometric);
    }

    #[test]
    fn square_vs_trapezoid() {
        let sq = poly(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]);
        let tr = poly(&[[0.0, 0.0], [2.0, 0.0], [1.0, 1.0], [0.0, 1.0]]);
        let c = classify_2d(&sq, &tr).unwrap();
        assert_eq!(c.verdict, Verdict::ProjectivelyEquivalent);
        let m = c.map.unwrap();
        for v in sq.as_polytope().unwrap().vertices() {
            let img = m.apply(v).unwrap();
            assert!(tr.as_polytope().unwrap().vertices().iter().any(|w| (w - &img).norm() < 1e-9));
        }
        assert!(tr.contains_interior(&m.apply(&pt(&[0.5, 0.5])).unwrap()));
    }

    #[test]
    fn regular_pentagon_vs_irregular_pentagon() {
        let reg: Vec<[f64; 2]> = (0..5)
            .map(|k| {
                let a = 2.0 * std::f64::consts::PI * k as f64 / 5.0;
                [a.cos(), a.sin()]
            })
            .collect();
        let irregular = poly(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.5, 1.5], [0.0, 1.0]]);
        let c = classify_2d(&poly(&reg), &irregular).unwrap();
        assert_eq!(c.verdict, Verdict::NotIsometric);
        let c = classify_2d(&irregular, &irregular).unwrap();
        assert_eq!(c.verdict, Verdict::ProjectivelyEquivalent);
    }

    #[test]
    fn ellipses() {
        let disk = ConvexDomain::unit_ball(2);
        let e = ConvexDomain::ellipsoid(pt(&[1.0, 2.0]), DMatrix::from_row_slice(2, 2, &[4.0, 1.0, 1.0, 1.0])).unwrap();
        let c = classify_2d(&disk, &e).unwrap();
        assert_eq!(c.verdict, Verdict::ProjectivelyEquivalent);
        let ConvexDomain::Ellipsoid(ell) = &e else { unreachable!() };
        let m = c.map.unwrap();
        let img = m.apply(&pt(&[0.6, 0.8])).unwrap();
        assert!((ell.quadratic(&img) - 1.0).abs() < 1e-12);
        let sq = poly(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]);
        assert_eq!(classify_2d(&disk, &sq).unwrap().verdict, Verdict::NotIsometric);
    }

    #[test]
    fn dimension_is_checked() {
        let cube = ConvexDomain::axis_box(&[0.0; 3], &[1.0; 3]).unwrap();
        assert!(matches!(classify_2d(&cube, &cube), Err(GeometryError::DimensionMismatch { .. })));
    }

    #[test]
    fn cones_in_three_dimensions() {
        let s = ConvexDomain::standard_simplex(3);
        assert!(is_cone_3d(&s).unwrap().is_some());
        let pyr = ConvexDomain::polytope(&[
            pt(&[0.0, 0.0, 0.0]),
            pt(&[1.0, 0.0, 0.0]),
            pt(&[1.0, 1.0, 0.0]),
            pt(&[0.0, 1.0, 0.0]),
            pt(&[0.5, 0.5, 1.0]),
        ])
        .unwrap();
        let (apex, base) = is_cone_3d(&pyr).unwrap().unwrap();
        assert_eq!(apex, pt(&[0.5, 0.5, 1.0]));
        assert_eq!(base.points.len(), 4);
        let cube = ConvexDomain::axis_box(&[0.0; 3], &[1.0; 3]).unwrap();
        assert!(is_cone_3d(&cube).unwrap().is_none());
    }
}
