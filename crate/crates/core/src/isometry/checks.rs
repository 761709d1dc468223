//! Numeric probes: isometry by sampling, projectivity, focusing points.

use rand::Rng;

use super::simplex::{w_norm, WPoint};
use crate::convex::{ConvexDomain, Polytope};
use crate::error::{GeometryError, Result};
use crate::linalg::{centroid, distance_to_line, Point};
use crate::metric::distance;

/// Separation below which image limits count as one focus point.
pub const FOCUS_EPS: f64 = 1e-3;
pub const DEFAULT_HORIZON: usize = 30;

/// A point function treated as an opaque map between domains.
pub type PointMap<'a> = dyn Fn(&Point) -> Result<Point> + 'a;

pub trait MetricSpace {
    fn dist(&self, a: &Point, b: &Point) -> Result<f64>;
    fn contains(&self, p: &Point) -> bool;
}

impl MetricSpace for ConvexDomain {
    fn dist(&self, a: &Point, b: &Point) -> Result<f64> {
        distance(self, a, b)
    }

    fn contains(&self, p: &Point) -> bool {
        self.contains_interior(p)
    }
}

/// `Wₙ` with the variation norm `max − min`.
#[derive(Debug, Clone, Copy)]
pub struct VariationSpace {
    pub n: usize,
}

impl MetricSpace for VariationSpace {
    fn dist(&self, a: &Point, b: &Point) -> Result<f64> {
        Ok(w_norm(&WPoint::new(a - b)?))
    }

    fn contains(&self, p: &Point) -> bool {
        p.len() == self.n + 1 && WPoint::new(p.clone()).is_ok()
    }
}

/// Interior point spread between the bulk and the boundary.
pub(crate) fn sample_spread<R: Rng + ?Sized>(domain: &ConvexDomain, rng: &mut R) -> Point {
    let c = domain.sample_interior(rng);
    if rng.random_bool(0.5) {
        return c;
    }
    let q = domain.sample_boundary(rng);
    let t = rng.random_range(0.0..0.98);
    let p = &c + (q - &c) * t;
    if domain.contains_interior(&p) {
        p
    } else {
        c
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IsometryReport {
    pub passed: bool,
    pub max_deviation: f64,
    pub pairs: usize,
}

/// Compares `d_B(f x, f y)` with `d_A(x, y)` over random pairs.
pub fn sampled_isometry_check<R: Rng + ?Sized>(
    a: &ConvexDomain,
    b: &dyn MetricSpace,
    map: &PointMap,
    samples: usize,
    tol: f64,
    rng: &mut R,
) -> Result<IsometryReport> {
    let mut max_deviation = 0.0f64;
    for _ in 0..samples {
        let x = sample_spread(a, rng);
        let y = sample_spread(a, rng);
        let fx = map(&x).map_err(|_| GeometryError::ImageEscapedDomain)?;
        let fy = map(&y).map_err(|_| GeometryError::ImageEscapedDomain)?;
        if !b.contains(&fx) || !b.contains(&fy) {
            return Err(GeometryError::ImageEscapedDomain);
        }
        let dev = (b.dist(&fx, &fy)? - a.dist(&x, &y)?).abs();
        max_deviation = max_deviation.max(dev);
    }
    Ok(IsometryReport { passed: max_deviation <= tol, max_deviation, pairs: samples })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectivityReport {
    pub passed: bool,
    pub max_collinearity_residual: f64,
    pub max_cross_ratio_deviation: f64,
}

fn ratio_along(a: &Point, x: &Point, y: &Point, b: &Point) -> f64 {
    ((a - y).norm() / (a - x).norm()) * ((b - x).norm() / (b - y).norm())
}

/// Samples collinear quadruples and checks that their images stay collinear
/// with the same cross ratio.
pub fn projectivity_check<R: Rng + ?Sized>(
    domain: &ConvexDomain,
    map: &PointMap,
    samples: usize,
    rng: &mut R,
) -> ProjectivityReport {
    let mut residual = 0.0f64;
    let mut cr_dev = 0.0f64;
    let mut failed = false;
    for _ in 0..samples {
        let x = sample_spread(domain, rng);
        let y = sample_spread(domain, rng);
        if (&x - &y).norm() < 1e-6 {
            continue;
        }
        let mut ts: Vec<f64> = (0..4).map(|_| rng.random_range(0.0..1.0)).collect();
        ts.sort_by(f64::total_cmp);
        if ts.windows(2).any(|w| w[1] - w[0] < 1e-3) {
            continue;
        }
        let pts: Vec<Point> = ts.iter().map(|&t| &x + (&y - &x) * t).collect();
        let imgs: Option<Vec<Point>> = pts.iter().map(|p| map(p).ok()).collect();
        let Some(imgs) = imgs else {
            failed = true;
            continue;
        };
        let scale = (&imgs[3] - &imgs[0]).norm().max(1e-300);
        for mid in &imgs[1..3] {
            residual = residual.max(distance_to_line(mid, &imgs[0], &imgs[3]) / scale.max(1.0));
        }
        let before = ratio_along(&pts[0], &pts[1], &pts[2], &pts[3]);
        let after = ratio_along(&imgs[0], &imgs[1], &imgs[2], &imgs[3]);
        cr_dev = cr_dev.max((after - before).abs() / before);
    }
    ProjectivityReport {
        passed: !failed && residual < 1e-7 && cr_dev < 1e-7,
        max_collinearity_residual: residual,
        max_cross_ratio_deviation: cr_dev,
    }
}

#[derive(Debug, Clone)]
pub struct FocusVerdict {
    pub extreme_point: Point,
    pub limits: Vec<Point>,
    pub focusing: bool,
    /// Mean of the limits when focusing.
    pub focus: Option<Point>,
    /// Largest pairwise distance between limits.
    pub separation: f64,
}

fn probe_starts<R: Rng + ?Sized>(domain: &ConvexDomain, e: &Point, rays: usize, rng: &mut R) -> Vec<Point> {
    let c = domain.centroid();
    let mut anchors: Vec<Point> = Vec::new();
    if let Some(poly) = domain.as_polytope() {
        anchors.extend(poly.vertices().iter().filter(|v| (*v - e).norm() > poly.eps()).cloned());
        anchors.extend(poly.facets().iter().map(|f| facet_centroid(poly, &f.vertices)));
    }
    let mut starts: Vec<Point> =
        anchors.iter().map(|a| &c + (a - &c) * 0.6).filter(|s| domain.contains_interior(s)).collect();
    starts.insert(0, c);
    starts.truncate(rays);
    while starts.len() < rays {
        starts.push(domain.sample_interior(rng));
    }
    starts
}

fn facet_centroid(poly: &Polytope, idx: &[usize]) -> Point {
    centroid(idx.iter().map(|&i| &poly.vertices()[i]))
}

/// Traces rays into the extreme point `e` and compares where their images end up.
pub fn focusing_probe<R: Rng + ?Sized>(
    a: &ConvexDomain,
    b: &ConvexDomain,
    map: &PointMap,
    e: &Point,
    rays: usize,
    horizon: usize,
    rng: &mut R,
) -> Result<FocusVerdict> {
    if !a.is_extreme_point(e) {
        return Err(GeometryError::DegenerateInput("probe point is not an extreme point".into()));
    }
    let horizon = horizon.max(1);
    let mut limits = Vec::with_capacity(rays);
    for s in probe_starts(a, e, rays.max(2), rng) {
        let mut prev: Option<Point> = None;
        let mut last: Option<Point> = None;
        for m in 0..=horizon {
            let p = e + (&s - e) * 0.5f64.powi(m as i32);
            let q = map(&p).map_err(|_| GeometryError::ImageEscapedDomain)?;
            if !b.contains_interior(&q) {
                return Err(GeometryError::ImageEscapedDomain);
            }
            prev = last.replace(q);
        }
        let (q_prev, q_last) = (prev.expect("horizon ≥ 1"), last.expect("horizon ≥ 1"));
        let dir = &q_last - &q_prev;
        let limit = if dir.norm() == 0.0 {
            q_last
        } else {
            let (_, t) = b.chord_params(&q_last, &dir);
            if t.is_finite() {
                &q_last + dir * t
            } else {
                q_last
            }
        };
        limits.push(limit);
    }
    let mut separation = 0.0f64;
    for i in 0..limits.len() {
        for j in i + 1..limits.len() {
            separation = separation.max((&limits[i] - &limits[j]).norm());
        }
    }
    let focusing = separation < FOCUS_EPS;
    let focus = focusing.then(|| centroid(&limits));
    Ok(FocusVerdict { extreme_point: e.clone(), limits, focusing, focus, separation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isometry::{fit_projective, gamma_reciprocal, lambda_n};
    use crate::linalg::pt;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn square() -> ConvexDomain {
        ConvexDomain::axis_box(&[0.0, 0.0], &[1.0, 1.0]).unwrap()
    }

    #[test]
    fn identity_is_an_isometry() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let sq = square();
        let r = sampled_isometry_check(&sq, &sq, &|p| Ok(p.clone()), 200, 1e-12, &mut rng).unwrap();
        assert!(r.passed);
        assert_eq!(r.max_deviation, 0.0);
    }

    #[test]
    fn lambda_two_is_an_isometry() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s = ConvexDomain::standard_simplex(2);
        let map = |p: &Point| lambda_n(p).map(WPoint::into_inner);
        let r = sampled_isometry_check(&s, &VariationSpace { n: 2 }, &map, 500, 1e-9, &mut rng).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn halving_is_not_an_isometry() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let sq = square();
        let r = sampled_isometry_check(&sq, &sq, &|p| Ok(p / 2.0), 50, 1e-9, &mut rng).unwrap();
        assert!(!r.passed);
    }

    #[test]
    fn escaping_image_is_reported() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let sq = square();
        let e = sampled_isometry_check(&sq, &sq, &|p| Ok(p * 3.0), 50, 1e-9, &mut rng);
        assert_eq!(e.unwrap_err(), GeometryError::ImageEscapedDomain);
    }

    #[test]
    fn projectivity_of_known_maps() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let sq = square();
        let rot = |p: &Point| Ok(pt(&[1.0 - p[1], p[0]]));
        assert!(projectivity_check(&sq, &rot, 200, &mut rng).passed);
        let s = ConvexDomain::standard_simplex(2);
        let g = projectivity_check(&s, &|p| gamma_reciprocal(p), 200, &mut rng);
        assert!(!g.passed);
        assert!(g.max_collinearity_residual > 1e-3);
        let gg = |p: &Point| gamma_reciprocal(&gamma_reciprocal(p)?);
        assert!(projectivity_check(&s, &gg, 200, &mut rng).passed);
    }

    #[test]
    fn focusing_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let sq = square();
        let id = |p: &Point| Ok(p.clone());
        let v = focusing_probe(&sq, &sq, &id, &pt(&[1.0, 1.0]), 6, DEFAULT_HORIZON, &mut rng).unwrap();
        assert!(v.focusing);
        assert!((v.focus.unwrap() - pt(&[1.0, 1.0])).norm() < 1e-6);

        let s = ConvexDomain::standard_simplex(2);
        let g = |p: &Point| gamma_reciprocal(p);
        let v = focusing_probe(&s, &s, &g, &pt(&[1.0, 0.0, 0.0]), 6, DEFAULT_HORIZON, &mut rng).unwrap();
        assert!(!v.focusing);
        // the vertex is blown up onto the opposite edge
        assert!(v.limits.iter().all(|l| l[0].abs() < 1e-6));

        let trap =
            ConvexDomain::polytope(&[pt(&[0.0, 0.0]), pt(&[2.0, 0.0]), pt(&[1.0, 1.0]), pt(&[0.0, 1.0])]).unwrap();
        let src = [pt(&[0.0, 0.0]), pt(&[1.0, 0.0]), pt(&[1.0, 1.0]), pt(&[0.0, 1.0]), pt(&[0.5, 0.5])];
        let dst = [pt(&[0.0, 0.0]), pt(&[2.0, 0.0]), pt(&[1.0, 1.0]), pt(&[0.0, 1.0]), pt(&[2.0 / 3.0, 2.0 / 3.0])];
        let m = fit_projective(&src, &dst).unwrap();
        let f = |p: &Point| m.apply(p);
        for (v, w) in src[..4].iter().zip(&dst) {
            let r = focusing_probe(&sq, &trap, &f, v, 6, DEFAULT_HORIZON, &mut rng).unwrap();
            assert!(r.focusing);
            assert!((r.focus.unwrap() - w).norm() < 1e-6);
        }
    }
}
