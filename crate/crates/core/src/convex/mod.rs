//! Convex domains: polytopes and ellipsoids, their faces, chords and rays.
//!
//! A polytope is stored by its extreme points (V-representation). Facet
//! inequalities and the face lattice are derived once at construction. A
//! polytope may sit in a proper affine subspace of its ambient space (the
//! standard simplex `{x > 0, Σx = 1}` in `ℝ^{n+1}` is the usual example); all
//! interior and boundary notions are then relative to the affine hull.
//!
//! Ellipsoids are full-dimensional and answer every query analytically. Every
//! boundary point of an ellipsoid is a 0-face, so no lattice is materialized.

mod ellipsoid;
mod polytope;
mod regions;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Exp1, StandardNormal};

pub use ellipsoid::Ellipsoid;
pub use polytope::{AffineFrame, Facet, Polytope};
pub use regions::{
    cross_section, find_extreme_line, find_extreme_simplex, join_region, minimal_cone_at, minkowski_functional,
    opposite_faces, CrossSection, JoinRegion, MinimalCone,
};

pub(crate) use polytope::for_each_combination;

use crate::error::{GeometryError, Result};
use crate::linalg::{centroid, Point};

/// Default tolerance for on-boundary and on-hyperplane predicates.
pub const EPS_GEO: f64 = 1e-9;

/// Affine hyperplane `normal · p = offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperplane {
    pub normal: Point,
    pub offset: f64,
}

/// A proper face of a convex domain.
///
/// For polytopes `vertices` indexes the owning polytope's vertex list and
/// `facets` lists the facets containing the face; `witness` is a supporting
/// hyperplane meeting the closure exactly in this face. An ellipsoid boundary
/// point is reported as a 0-face with no indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    pub vertices: Vec<usize>,
    pub points: Vec<Point>,
    pub dim: usize,
    pub facets: Vec<usize>,
    pub witness: Hyperplane,
}

impl Face {
    /// Relative-interior representative: the mean of the face's vertices.
    pub fn representative(&self) -> Point {
        centroid(&self.points)
    }

    pub fn is_vertex(&self) -> bool {
        self.dim == 0
    }
}

/// Maximal open segment of a line inside the domain.
///
/// `x + t (y - x)` reaches `alpha` at `t_alpha < 0` and `beta` at `t_beta > 1`,
/// so `alpha` is on the side of `x` and `beta` on the side of `y`.
#[derive(Debug, Clone)]
pub struct Chord {
    pub x: Point,
    pub y: Point,
    pub alpha: Point,
    pub beta: Point,
    pub face_alpha: Face,
    pub face_beta: Face,
    pub t_alpha: f64,
    pub t_beta: f64,
}

/// A ray starting inside the domain together with its boundary accumulation point.
#[derive(Debug, Clone)]
pub struct Ray {
    pub start: Point,
    pub direction: Point,
    pub accumulation: Point,
    pub t_max: f64,
}

impl Ray {
    pub fn at(&self, t: f64) -> Point {
        &self.start + &self.direction * t
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainKind {
    Polytope,
    Ellipsoid,
}

/// An open bounded convex set.
#[derive(Debug, Clone)]
pub enum ConvexDomain {
    Polytope(Polytope),
    Ellipsoid(Ellipsoid),
}

impl ConvexDomain {
    /// Convex hull of `points`, reduced to its extreme points.
    pub fn polytope(points: &[Point]) -> Result<Self> {
        Self::polytope_eps(points, EPS_GEO)
    }

    /// As [`ConvexDomain::polytope`] with tolerance `eps` for deduplication and facet tests.
    pub fn polytope_eps(points: &[Point], eps: f64) -> Result<Self> {
        let ambient = points.first().map(|p| p.len()).unwrap_or(0);
        let min_dim = if ambient >= 2 { 2 } else { 1 };
        Polytope::from_points(points, eps, min_dim).map(Self::Polytope)
    }

    pub fn ellipsoid(center: Point, shape: DMatrix<f64>) -> Result<Self> {
        Ellipsoid::new(center, shape, EPS_GEO).map(Self::Ellipsoid)
    }

    pub fn unit_ball(dim: usize) -> Self {
        Self::Ellipsoid(Ellipsoid::unit_ball(dim))
    }

    /// Open standard simplex `{x ∈ ℝ^{n+1} : x > 0, Σx = 1}`.
    pub fn standard_simplex(n: usize) -> Self {
        Self::standard_simplex_eps(n, EPS_GEO)
    }

    pub fn standard_simplex_eps(n: usize, eps: f64) -> Self {
        let vertices: Vec<Point> = (0..=n)
            .map(|i| {
                let mut e = Point::zeros(n + 1);
                e[i] = 1.0;
                e
            })
            .collect();
        Self::polytope_eps(&vertices, eps).expect("standard simplex is nondegenerate")
    }

    /// Open axis-aligned box with the given corner bounds.
    pub fn axis_box(lo: &[f64], hi: &[f64]) -> Result<Self> {
        let n = lo.len();
        let mut pts = Vec::with_capacity(1 << n);
        for mask in 0..(1usize << n) {
            let p = Point::from_iterator(n, (0..n).map(|i| if mask >> i & 1 == 1 { hi[i] } else { lo[i] }));
            pts.push(p);
        }
        Self::polytope(&pts)
    }

    /// Same domain with a different geometric tolerance.
    pub fn with_eps(mut self, eps: f64) -> Self {
        match &mut self {
            Self::Polytope(p) => p.set_eps(eps),
            Self::Ellipsoid(e) => e.set_eps(eps),
        }
        self
    }

    pub fn kind(&self) -> DomainKind {
        match self {
            Self::Polytope(_) => DomainKind::Polytope,
            Self::Ellipsoid(_) => DomainKind::Ellipsoid,
        }
    }

    pub fn as_polytope(&self) -> Option<&Polytope> {
        match self {
            Self::Polytope(p) => Some(p),
            Self::Ellipsoid(_) => None,
        }
    }

    pub fn eps(&self) -> f64 {
        match self {
            Self::Polytope(p) => p.eps(),
            Self::Ellipsoid(e) => e.eps(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            Self::Polytope(p) => p.ambient_dim(),
            Self::Ellipsoid(e) => e.dim(),
        }
    }

    pub fn intrinsic_dim(&self) -> usize {
        match self {
            Self::Polytope(p) => p.dim(),
            Self::Ellipsoid(e) => e.dim(),
        }
    }

    /// Affine frame of the domain's affine hull.
    pub fn frame(&self) -> AffineFrame {
        match self {
            Self::Polytope(p) => p.frame().clone(),
            Self::Ellipsoid(e) => AffineFrame::identity(e.dim()),
        }
    }

    pub fn centroid(&self) -> Point {
        match self {
            Self::Polytope(p) => p.centroid(),
            Self::Ellipsoid(e) => e.center().clone(),
        }
    }

    /// Proper faces graded by dimension.
    pub fn face_lattice(&self) -> Result<&[Face]> {
        match self {
            Self::Polytope(p) => Ok(p.faces()),
            Self::Ellipsoid(_) => Err(GeometryError::Unsupported(
                "ellipsoid faces are its boundary points; no lattice is materialized".into(),
            )),
        }
    }

    pub fn contains_interior(&self, p: &Point) -> bool {
        match self {
            Self::Polytope(poly) => poly.contains_interior(p),
            Self::Ellipsoid(e) => e.contains_interior(p),
        }
    }

    /// Interior membership with a margin of `eps` from the boundary, for
    /// combinatorial decisions made on exactly constructed points.
    pub fn contains_interior_strictly(&self, p: &Point) -> bool {
        self.contains_interior(p) && self.boundary_distance(p) > self.eps()
    }

    pub fn require_interior(&self, p: &Point) -> Result<()> {
        if p.len() != self.ambient_dim() {
            return Err(GeometryError::DimensionMismatch { expected: self.ambient_dim(), got: p.len() });
        }
        if p.iter().any(|c| !c.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        if self.contains_interior(p) {
            Ok(())
        } else {
            Err(GeometryError::PointNotInterior)
        }
    }

    /// Exit parameters of the line `x + t u` (`x` interior).
    pub fn chord_params(&self, x: &Point, u: &Point) -> (f64, f64) {
        match self {
            Self::Polytope(p) => p.chord_params(x, u),
            Self::Ellipsoid(e) => e.chord_params(x, u),
        }
    }

    /// Euclidean distance to the boundary for points of the closed domain
    /// (for polytopes outside points report their largest facet violation).
    pub fn boundary_distance(&self, p: &Point) -> f64 {
        match self {
            Self::Polytope(poly) => poly.min_slack(p).abs().max(poly.frame().residual(p)),
            Self::Ellipsoid(e) => e.boundary_distance(p),
        }
    }

    pub fn is_on_boundary(&self, p: &Point) -> bool {
        self.boundary_distance(p) <= self.eps()
    }

    /// The unique face whose relative interior contains the boundary point `p`.
    pub fn boundary_face_of(&self, p: &Point) -> Result<Face> {
        match self {
            Self::Polytope(poly) => poly.boundary_face_of(p),
            Self::Ellipsoid(e) => {
                let distance = e.boundary_distance(p);
                if distance > e.eps() {
                    return Err(GeometryError::NotOnBoundary { distance });
                }
                let q = e.project_to_boundary(p);
                let normal = e.normal_at(&q);
                let offset = normal.dot(&q);
                Ok(Face {
                    vertices: Vec::new(),
                    points: vec![q],
                    dim: 0,
                    facets: Vec::new(),
                    witness: Hyperplane { normal, offset },
                })
            }
        }
    }

    /// Whether `p` is an extreme point of the closure.
    pub fn is_extreme_point(&self, p: &Point) -> bool {
        match self {
            Self::Polytope(poly) => poly.vertices().iter().any(|v| (v - p).norm() <= poly.eps()),
            Self::Ellipsoid(e) => e.boundary_distance(p) <= e.eps(),
        }
    }

    /// The chord through two distinct interior points.
    pub fn chord_through(&self, x: &Point, y: &Point) -> Result<Chord> {
        self.require_interior(x)?;
        self.require_interior(y)?;
        let u = y - x;
        if u.norm() == 0.0 {
            return Err(GeometryError::CoincidentPoints);
        }
        let (t_alpha, t_beta) = self.chord_params(x, &u);
        if !(t_alpha.is_finite() && t_beta.is_finite()) {
            return Err(GeometryError::DegenerateInput("line does not leave the domain".into()));
        }
        let alpha = x + &u * t_alpha;
        let beta = x + &u * t_beta;
        let face_alpha = self.boundary_face_of(&alpha)?;
        let face_beta = self.boundary_face_of(&beta)?;
        Ok(Chord { x: x.clone(), y: y.clone(), alpha, beta, face_alpha, face_beta, t_alpha, t_beta })
    }

    /// Ray from an interior point along `direction`.
    pub fn ray(&self, start: &Point, direction: &Point) -> Result<Ray> {
        self.require_interior(start)?;
        let norm = direction.norm();
        if norm == 0.0 {
            return Err(GeometryError::CoincidentPoints);
        }
        let direction = direction / norm;
        let (_, t_max) = self.chord_params(start, &direction);
        let accumulation = start + &direction * t_max;
        Ok(Ray { start: start.clone(), direction, accumulation, t_max })
    }

    /// Ray from `start` aimed at the boundary point `target`.
    pub fn ray_towards(&self, start: &Point, target: &Point) -> Result<Ray> {
        let mut r = self.ray(start, &(target - start))?;
        if (&r.accumulation - target).norm() <= self.eps().max(1e-12) * 10.0 {
            r.accumulation = target.clone();
        }
        Ok(r)
    }

    /// Random interior point (Dirichlet weights on vertices, or uniform in the ellipsoid).
    pub fn sample_interior<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        match self {
            Self::Polytope(p) => loop {
                let q = dirichlet_combination(p.vertices(), rng);
                if p.contains_interior(&q) {
                    return q;
                }
            },
            Self::Ellipsoid(e) => {
                let n = e.dim();
                let g = Point::from_iterator(n, (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)));
                let r: f64 = rng.random::<f64>().powf(1.0 / n as f64) * 0.999;
                let u = g.normalize() * r;
                // (p - c)ᵀ L Lᵀ (p - c) = |u|²  ⇔  p = c + L^{-T} u
                let l = e.cholesky_factor();
                let w = l.transpose().solve_upper_triangular(&u).expect("Cholesky factor is invertible");
                e.center() + w
            }
        }
    }

    /// Random boundary point.
    pub fn sample_boundary<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        match self {
            Self::Polytope(p) => {
                let f = &p.facets()[rng.random_range(0..p.facets().len())];
                let pts: Vec<Point> = f.vertices.iter().map(|&i| p.vertices()[i].clone()).collect();
                dirichlet_combination(&pts, rng)
            }
            Self::Ellipsoid(e) => {
                let n = e.dim();
                let g = Point::from_iterator(n, (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)));
                e.project_to_boundary(&(e.center() + g))
            }
        }
    }
}

pub(crate) fn dirichlet_combination<R: Rng + ?Sized>(points: &[Point], rng: &mut R) -> Point {
    let weights: Vec<f64> = points.iter().map(|_| rng.sample::<f64, _>(Exp1) + 1e-12).collect();
    let total: f64 = weights.iter().sum();
    points.iter().zip(&weights).fold(Point::zeros(points[0].len()), |acc, (p, w)| acc + p * (w / total))
}
