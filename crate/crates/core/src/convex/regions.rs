//! Derived regions of a convex domain: joins, minimal cones, cross sections.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use super::polytope::Polytope;
use super::{dirichlet_combination, for_each_combination, Chord, ConvexDomain, Face};
use crate::error::{GeometryError, Result};
use crate::linalg::{centroid, columns, nullspace, rank_of, Point};

/// Whether some open segment from the relative interior of `f1` to that of
/// `f2` lies in the domain. One pair of representatives decides it.
pub fn opposite_faces(domain: &ConvexDomain, f1: &Face, f2: &Face) -> bool {
    let mid = (f1.representative() + f2.representative()) / 2.0;
    domain.contains_interior_strictly(&mid)
}

/// Union of the open segments joining the relative interiors of two opposite faces.
///
/// Equivalently the relative interior of the convex hull of both faces.
#[derive(Debug, Clone)]
pub struct JoinRegion {
    first: Face,
    second: Face,
    hull: Polytope,
}

impl JoinRegion {
    pub fn contains(&self, p: &Point) -> bool {
        self.hull.contains_interior(p)
    }

    pub fn faces(&self) -> (&Face, &Face) {
        (&self.first, &self.second)
    }

    /// Closure of the region as a polytope of its own.
    pub fn hull(&self) -> &Polytope {
        &self.hull
    }

    pub fn dim(&self) -> usize {
        self.hull.dim()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        loop {
            let p = dirichlet_combination(self.hull.vertices(), rng);
            if self.contains(&p) {
                return p;
            }
        }
    }

    /// Random point of the relative boundary of the region.
    pub fn sample_relative_boundary<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        let facets = self.hull.facets();
        let f = &facets[rng.random_range(0..facets.len())];
        let pts: Vec<Point> = f.vertices.iter().map(|&i| self.hull.vertices()[i].clone()).collect();
        dirichlet_combination(&pts, rng)
    }
}

pub fn join_region(domain: &ConvexDomain, f1: &Face, f2: &Face) -> Result<JoinRegion> {
    if !opposite_faces(domain, f1, f2) {
        return Err(GeometryError::NotOpposite);
    }
    let points: Vec<Point> = f1.points.iter().chain(&f2.points).cloned().collect();
    let hull = Polytope::from_points(&points, domain.eps(), 1)?;
    Ok(JoinRegion { first: f1.clone(), second: f2.clone(), hull })
}

/// A cone `C_e(I)` whose relative boundary lies in the boundary of the domain.
#[derive(Debug, Clone)]
pub struct MinimalCone {
    pub apex: Point,
    pub base: Face,
    pub region: JoinRegion,
}

/// Minimal cone with vertex `e`, found by descending through faces opposite to `e`.
pub fn minimal_cone_at(domain: &ConvexDomain, e: &Point) -> Result<MinimalCone> {
    let apex_face = domain.boundary_face_of(e)?;
    if apex_face.dim != 0 {
        return Err(GeometryError::DegenerateInput("cone apex must be an extreme point".into()));
    }
    let apex = apex_face.points[0].clone();
    let base = match domain {
        ConvexDomain::Ellipsoid(ell) => {
            let c = ell.center();
            let (_, t) = ell.chord_params(c, &(c - &apex));
            domain.boundary_face_of(&(c + (c - &apex) * t))?
        }
        ConvexDomain::Polytope(poly) => {
            let e_idx = apex_face.vertices[0];
            let start = poly
                .faces()
                .iter()
                .rev()
                .find(|f| f.dim + 1 == poly.dim() && !f.vertices.contains(&e_idx))
                .ok_or_else(|| GeometryError::DegenerateInput("no facet avoids the apex".into()))?;
            let mut current = start.clone();
            'descent: loop {
                for h in poly.subfacets(&current) {
                    let c = centroid(std::iter::once(&apex).chain(&h.points));
                    if domain.contains_interior_strictly(&c) {
                        current = h.clone();
                        continue 'descent;
                    }
                }
                break current;
            }
        }
    };
    let region = join_region(domain, &apex_face, &base)?;
    Ok(MinimalCone { apex, base, region })
}

/// A line through the domain whose endpoints are both extreme points.
pub fn find_extreme_line(domain: &ConvexDomain) -> Option<Chord> {
    match domain {
        ConvexDomain::Ellipsoid(ell) => {
            let c = ell.center();
            let mut u = Point::zeros(ell.dim());
            u[0] = 1.0;
            let (lo, hi) = ell.chord_params(c, &u);
            let x = c + &u * (lo / 3.0);
            let y = c + &u * (hi / 3.0);
            domain.chord_through(&x, &y).ok()
        }
        ConvexDomain::Polytope(poly) => {
            let vs = poly.vertices();
            for i in 0..vs.len() {
                for j in i + 1..vs.len() {
                    let mid = (&vs[i] + &vs[j]) / 2.0;
                    if !domain.contains_interior_strictly(&mid) {
                        continue;
                    }
                    let d = &vs[j] - &vs[i];
                    let x = &vs[i] + &d / 3.0;
                    let y = &vs[i] + &d * (2.0 / 3.0);
                    let (Some(fa), Some(fb)) = (poly.face_by_vertices(&[i]), poly.face_by_vertices(&[j])) else {
                        continue;
                    };
                    return Some(Chord {
                        x,
                        y,
                        alpha: vs[i].clone(),
                        beta: vs[j].clone(),
                        face_alpha: fa.clone(),
                        face_beta: fb.clone(),
                        t_alpha: -0.5,
                        t_beta: 2.0,
                    });
                }
            }
            None
        }
    }
}

/// Intersection of a domain with an affine subspace, in the subspace's coordinates.
#[derive(Debug, Clone)]
pub struct CrossSection {
    pub domain: ConvexDomain,
    pub base: Point,
    pub spanning: Vec<Point>,
}

impl CrossSection {
    /// Ambient point with subspace coordinates `s`.
    pub fn embed(&self, s: &Point) -> Point {
        self.spanning.iter().zip(s.iter()).fold(self.base.clone(), |acc, (v, &c)| acc + v * c)
    }
}

/// `D = P ∩ Ω` for `P = base + span(spanning)`, as a domain in `ℝ^m`.
pub fn cross_section(domain: &ConvexDomain, base: &Point, spanning: &[Point]) -> Result<CrossSection> {
    let n = domain.ambient_dim();
    let m = spanning.len();
    if m < 2 || m > n {
        return Err(GeometryError::DimensionOutOfRange { got: m, min: 2, max: n });
    }
    if base.len() != n || spanning.iter().any(|v| v.len() != n) {
        return Err(GeometryError::DimensionMismatch { expected: n, got: base.len() });
    }
    if rank_of(spanning, n, 1e-12) < m {
        return Err(GeometryError::DegenerateInput("spanning vectors are dependent".into()));
    }
    let v = columns(spanning, n);
    let inner = match domain {
        ConvexDomain::Ellipsoid(ell) => {
            let q = ell.shape();
            let qs = v.transpose() * q * &v;
            let lin = v.transpose() * q * (base - ell.center());
            let chol = qs.clone().cholesky().expect("restriction of a PD form is PD");
            let sc = -chol.solve(&lin);
            let r0 = ell.quadratic(&(base + &v * &sc));
            if r0 >= 1.0 {
                return Err(GeometryError::EmptyIntersection);
            }
            ConvexDomain::ellipsoid(sc, qs / (1.0 - r0))?.with_eps(domain.eps())
        }
        ConvexDomain::Polytope(poly) => polytope_section(poly, base, &v)?,
    };
    Ok(CrossSection { domain: inner, base: base.clone(), spanning: spanning.to_vec() })
}

fn polytope_section(poly: &Polytope, base: &Point, v: &DMatrix<f64>) -> Result<ConvexDomain> {
    let eps = poly.eps();
    let m = v.ncols();
    let frame = poly.frame();
    // Coordinates s with base + V s inside the affine hull: s = s0 + W r.
    let (s0, w) = if frame.dim() == frame.ambient_dim() {
        (DVector::zeros(m), DMatrix::identity(m, m))
    } else {
        let normals = nullspace(&columns(frame.basis(), frame.ambient_dim()).transpose(), 1e-12);
        let a = columns(&normals, frame.ambient_dim()).transpose();
        let av = &a * v;
        let rhs = &a * (frame.origin() - base);
        let svd = av.clone().svd(true, true);
        let s0 = svd.solve(&rhs, 1e-12).map_err(|_| GeometryError::EmptyIntersection)?;
        if (&av * &s0 - &rhs).norm() > eps {
            return Err(GeometryError::EmptyIntersection);
        }
        let ns = nullspace(&av, 1e-12);
        if ns.is_empty() {
            return Err(GeometryError::EmptyIntersection);
        }
        (s0, columns(&ns, m))
    };
    let k = w.ncols();
    let origin = base + v * &s0;
    let vw = v * &w;
    let rows: Vec<(DVector<f64>, f64)> =
        poly.facets().iter().map(|f| ((vw.transpose() * &f.normal), f.slack(&origin))).collect();

    let mut vertices: Vec<Point> = Vec::new();
    for_each_combination(rows.len(), k, |combo| {
        let mut a = DMatrix::zeros(k, k);
        let mut b = DVector::zeros(k);
        for (r, &i) in combo.iter().enumerate() {
            a.set_row(r, &rows[i].0.transpose());
            b[r] = rows[i].1;
        }
        let Some(r) = a.lu().solve(&b) else { return };
        if !r.iter().all(|c| c.is_finite()) {
            return;
        }
        if rows.iter().all(|(a, c)| a.dot(&r) <= c + eps) {
            vertices.push(&s0 + &w * r);
        }
    });
    if vertices.is_empty() {
        return Err(GeometryError::EmptyIntersection);
    }
    let section = Polytope::from_points(&vertices, eps, 1).map_err(|_| GeometryError::EmptyIntersection)?;
    if section.dim() < k || !poly.contains_interior(&(base + v * section.centroid())) {
        return Err(GeometryError::EmptyIntersection);
    }
    Ok(ConvexDomain::Polytope(section))
}

/// `n + 1` affinely independent vertices, chosen greedily in vertex order.
pub fn find_extreme_simplex(domain: &ConvexDomain) -> Result<Vec<Point>> {
    let poly = domain
        .as_polytope()
        .ok_or_else(|| GeometryError::Unsupported("extreme simplex search needs a polytope".into()))?;
    let mut chosen: Vec<Point> = vec![poly.vertices()[0].clone()];
    for v in &poly.vertices()[1..] {
        if chosen.len() == poly.dim() + 1 {
            break;
        }
        let mut diffs: Vec<Point> = chosen[1..].iter().map(|p| p - &chosen[0]).collect();
        diffs.push(v - &chosen[0]);
        if rank_of(&diffs, poly.ambient_dim(), 1e-9) == diffs.len() {
            chosen.push(v.clone());
        }
    }
    Ok(chosen)
}

/// Gauge `inf{λ > 0 : v ∈ λK}` of a body with the origin in its interior.
pub fn minkowski_functional(body: &ConvexDomain, v: &Point) -> Result<f64> {
    let origin = Point::zeros(body.ambient_dim());
    if !body.contains_interior(&origin) {
        return Err(GeometryError::OriginNotInterior);
    }
    if v.len() != body.ambient_dim() {
        return Err(GeometryError::DimensionMismatch { expected: body.ambient_dim(), got: v.len() });
    }
    if v.iter().all(|&c| c == 0.0) {
        return Ok(0.0);
    }
    match body {
        ConvexDomain::Polytope(poly) => {
            let residual = poly.frame().residual(&(v + poly.frame().origin()));
            if residual > poly.eps() * v.norm().max(1.0) {
                return Err(GeometryError::NotInAffineHull { residual });
            }
            Ok(poly.facets().iter().map(|f| f.normal.dot(v) / f.offset).fold(0.0, f64::max))
        }
        ConvexDomain::Ellipsoid(ell) => {
            let (_, t) = ell.chord_params(&origin, v);
            Ok(1.0 / t)
        }
    }
}
