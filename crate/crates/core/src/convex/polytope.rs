//! V-represented polytopes with a derived H-representation and face lattice.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};

use super::{Face, Hyperplane};
use crate::error::{GeometryError, Result};
use crate::linalg::{affine_rank, centroid, lex_cmp, nullspace, rank_of, span_basis, Point};

/// Origin and orthonormal basis of an affine subspace of the ambient space.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineFrame {
    origin: Point,
    basis: Vec<Point>,
}

impl AffineFrame {
    /// Frame spanned by a point set. Full-dimensional sets get the identity frame.
    pub fn of_points(points: &[Point], eps: f64) -> Self {
        let ambient = points[0].len();
        let diffs: Vec<Point> = points[1..].iter().map(|p| p - &points[0]).collect();
        let basis = span_basis(&diffs, ambient, eps);
        if basis.len() == ambient {
            return Self::identity(ambient);
        }
        Self { origin: centroid(points), basis }
    }

    pub fn identity(ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| {
                let mut e = DVector::zeros(ambient);
                e[i] = 1.0;
                e
            })
            .collect();
        Self { origin: DVector::zeros(ambient), basis }
    }

    pub fn new(origin: Point, basis: Vec<Point>) -> Self {
        Self { origin, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.origin.len()
    }

    pub fn origin(&self) -> &Point {
        &self.origin
    }

    pub fn basis(&self) -> &[Point] {
        &self.basis
    }

    pub fn is_identity(&self) -> bool {
        self.dim() == self.ambient_dim() && self.origin.iter().all(|&c| c == 0.0)
    }

    pub fn to_local(&self, p: &Point) -> DVector<f64> {
        let w = p - &self.origin;
        DVector::from_iterator(self.dim(), self.basis.iter().map(|b| b.dot(&w)))
    }

    pub fn vector_to_local(&self, v: &Point) -> DVector<f64> {
        DVector::from_iterator(self.dim(), self.basis.iter().map(|b| b.dot(v)))
    }

    pub fn from_local(&self, s: &DVector<f64>) -> Point {
        self.basis.iter().zip(s.iter()).fold(self.origin.clone(), |acc, (b, &c)| acc + b * c)
    }

    pub fn vector_from_local(&self, s: &DVector<f64>) -> Point {
        self.basis.iter().zip(s.iter()).fold(DVector::zeros(self.ambient_dim()), |acc, (b, &c)| acc + b * c)
    }

    /// Euclidean distance from `p` to the affine subspace.
    pub fn residual(&self, p: &Point) -> f64 {
        (p - self.from_local(&self.to_local(p))).norm()
    }
}

/// A facet inequality `normal · p <= offset` with unit normal, plus the vertices it contains.
#[derive(Debug, Clone, PartialEq)]
pub struct Facet {
    pub normal: Point,
    pub offset: f64,
    pub vertices: Vec<usize>,
}

impl Facet {
    /// Nonnegative inside the polytope, zero on the facet.
    pub fn slack(&self, p: &Point) -> f64 {
        self.offset - self.normal.dot(p)
    }
}

/// Bounded convex polytope, stored by its extreme points.
#[derive(Debug, Clone)]
pub struct Polytope {
    vertices: Vec<Point>,
    frame: AffineFrame,
    facets: Vec<Facet>,
    faces: Vec<Face>,
    eps: f64,
}

pub(crate) fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Supporting hyperplanes of a full-dimensional point set in local coordinates.
/// Each entry is (unit normal, offset, tight point indices).
fn enumerate_facets(local: &[DVector<f64>], d: usize, eps: f64) -> Vec<(DVector<f64>, f64, Vec<usize>)> {
    let mut out: Vec<(DVector<f64>, f64, Vec<usize>)> = Vec::new();
    let mut seen: Vec<BTreeSet<usize>> = Vec::new();
    if d == 0 {
        return out;
    }
    for_each_combination(local.len(), d, |combo| {
        if seen.iter().any(|s| combo.iter().all(|i| s.contains(i))) {
            return;
        }
        let normal = if d == 1 {
            DVector::from_element(1, 1.0)
        } else {
            let mut m = DMatrix::zeros(d - 1, d);
            for (r, &i) in combo[1..].iter().enumerate() {
                m.set_row(r, &(&local[i] - &local[combo[0]]).transpose());
            }
            let ns = nullspace(&m, 1e-12);
            if ns.len() != 1 {
                return;
            }
            let n = &ns[0];
            n / n.norm()
        };
        let c = normal.dot(&local[combo[0]]);
        let values: Vec<f64> = local.iter().map(|p| normal.dot(p) - c).collect();
        let (normal, c, values) = if values.iter().all(|&v| v <= eps) {
            (normal, c, values)
        } else if values.iter().all(|&v| v >= -eps) {
            (-normal, -c, values.iter().map(|v| -v).collect())
        } else {
            return;
        };
        let tight: BTreeSet<usize> =
            values.iter().enumerate().filter(|(_, v)| v.abs() <= eps).map(|(i, _)| i).collect();
        out.push((normal, c, tight.iter().copied().collect()));
        seen.push(tight);
    });
    out
}

impl Polytope {
    /// Builds the convex hull of `points`; `min_dim` is the smallest accepted affine dimension.
    pub(crate) fn from_points(points: &[Point], eps: f64, min_dim: usize) -> Result<Self> {
        if points.is_empty() {
            return Err(GeometryError::DegenerateInput("no points".into()));
        }
        let ambient = points[0].len();
        if points.iter().any(|p| p.len() != ambient) {
            return Err(GeometryError::DimensionMismatch {
                expected: ambient,
                got: points.iter().map(|p| p.len()).find(|&l| l != ambient).unwrap_or(ambient),
            });
        }
        if points.iter().any(|p| p.iter().any(|c| !c.is_finite())) {
            return Err(GeometryError::NonFinite);
        }
        let mut unique: Vec<Point> = Vec::new();
        for p in points {
            if !unique.iter().any(|q| (q - p).norm() <= eps) {
                unique.push(p.clone());
            }
        }
        unique.sort_by(lex_cmp);

        let frame = AffineFrame::of_points(&unique, eps);
        let d = frame.dim();
        if d < min_dim {
            return Err(GeometryError::DegenerateInput(format!(
                "affine hull has dimension {d} in ambient dimension {ambient}"
            )));
        }
        let local: Vec<DVector<f64>> = unique.iter().map(|p| frame.to_local(p)).collect();
        let raw = enumerate_facets(&local, d, eps);

        // A point is extreme iff the normals of the facets through it span the space.
        let keep: Vec<usize> = (0..unique.len())
            .filter(|&i| {
                if d == 0 {
                    return true;
                }
                let normals: Vec<Point> = raw.iter().filter(|f| f.2.contains(&i)).map(|f| f.0.clone()).collect();
                rank_of(&normals, d, 1e-9) == d
            })
            .collect();
        let vertices: Vec<Point> = keep.iter().map(|&i| unique[i].clone()).collect();
        let local: Vec<DVector<f64>> = keep.iter().map(|&i| local[i].clone()).collect();
        let raw = if keep.len() == unique.len() { raw } else { enumerate_facets(&local, d, eps) };

        let facets: Vec<Facet> = raw
            .into_iter()
            .map(|(n, _, tight)| {
                let normal = frame.vector_from_local(&n);
                let offset = tight.iter().map(|&i| normal.dot(&vertices[i])).sum::<f64>() / tight.len() as f64;
                Facet { normal, offset, vertices: tight }
            })
            .collect();

        let mut poly = Self { vertices, frame, facets, faces: Vec::new(), eps };
        poly.faces = poly.compute_faces();
        Ok(poly)
    }

    fn compute_faces(&self) -> Vec<Face> {
        let mut sets: BTreeSet<Vec<usize>> = self.facets.iter().map(|f| f.vertices.clone()).collect();
        let mut frontier: Vec<Vec<usize>> = sets.iter().cloned().collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for a in &frontier {
                for f in &self.facets {
                    let meet: Vec<usize> = a.iter().copied().filter(|i| f.vertices.contains(i)).collect();
                    if !meet.is_empty() && sets.insert(meet.clone()) {
                        next.push(meet);
                    }
                }
            }
            frontier = next;
        }
        if self.dim() == 0 {
            sets.clear();
        }
        let mut faces: Vec<Face> = sets.into_iter().map(|vs| self.face_from_vertices(vs)).collect();
        faces.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.vertices.cmp(&b.vertices)));
        faces
    }

    fn face_from_vertices(&self, vertices: Vec<usize>) -> Face {
        let points: Vec<Point> = vertices.iter().map(|&i| self.vertices[i].clone()).collect();
        let refs: Vec<&Point> = points.iter().collect();
        let dim = affine_rank(&refs, 1e-9);
        let facets: Vec<usize> = self
            .facets
            .iter()
            .enumerate()
            .filter(|(_, f)| vertices.iter().all(|i| f.vertices.contains(i)))
            .map(|(k, _)| k)
            .collect();
        let sum = facets.iter().fold(DVector::zeros(self.ambient_dim()), |acc, &k| acc + &self.facets[k].normal);
        let normal = sum.normalize();
        let offset = normal.dot(&points[0]);
        Face { vertices, points, dim, facets, witness: Hyperplane { normal, offset } }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// All proper faces, graded by dimension.
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn frame(&self) -> &AffineFrame {
        &self.frame
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.frame.ambient_dim()
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub(crate) fn set_eps(&mut self, eps: f64) {
        self.eps = eps;
    }

    pub fn centroid(&self) -> Point {
        centroid(&self.vertices)
    }

    /// Smallest facet slack; positive inside, zero on the boundary, negative outside.
    pub fn min_slack(&self, p: &Point) -> f64 {
        self.facets.iter().map(|f| f.slack(p)).fold(f64::INFINITY, f64::min)
    }

    /// Open relative interior membership.
    pub fn contains_interior(&self, p: &Point) -> bool {
        if p.len() != self.ambient_dim() || self.frame.residual(p) > self.eps {
            return false;
        }
        if self.dim() == 0 {
            return (p - &self.vertices[0]).norm() <= self.eps;
        }
        self.facets.iter().all(|f| f.slack(p) > 0.0)
    }

    /// Closed membership with tolerance.
    pub fn contains_closed(&self, p: &Point) -> bool {
        p.len() == self.ambient_dim()
            && self.frame.residual(p) <= self.eps
            && self.facets.iter().all(|f| f.slack(p) >= -self.eps)
    }

    /// Parameters `t_min < 0 < t_max` where `x + t u` leaves the polytope.
    pub fn chord_params(&self, x: &Point, u: &Point) -> (f64, f64) {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for f in &self.facets {
            let rate = f.normal.dot(u);
            if rate == 0.0 {
                continue;
            }
            let t = f.slack(x) / rate;
            if rate > 0.0 {
                hi = hi.min(t);
            } else {
                lo = lo.max(t);
            }
        }
        (lo, hi)
    }

    /// Face whose relative interior contains the boundary point `p`.
    pub fn boundary_face_of(&self, p: &Point) -> Result<Face> {
        let residual = self.frame.residual(p);
        if residual > self.eps {
            return Err(GeometryError::NotOnBoundary { distance: residual });
        }
        let slack = self.min_slack(p);
        if slack.abs() > self.eps {
            return Err(GeometryError::NotOnBoundary { distance: slack.abs() });
        }
        let tight: Vec<usize> = (0..self.facets.len()).filter(|&k| self.facets[k].slack(p) <= self.eps).collect();
        let vertices: Vec<usize> =
            (0..self.vertices.len()).filter(|i| tight.iter().all(|&k| self.facets[k].vertices.contains(i))).collect();
        self.face_by_vertices(&vertices).cloned().ok_or_else(|| GeometryError::NotOnBoundary { distance: slack.abs() })
    }

    pub fn face_by_vertices(&self, vertices: &[usize]) -> Option<&Face> {
        self.faces.iter().find(|f| f.vertices == vertices)
    }

    /// Faces of `face` of one dimension lower (its facets as a polytope).
    pub fn subfacets(&self, face: &Face) -> Vec<&Face> {
        self.faces
            .iter()
            .filter(|g| g.dim + 1 == face.dim && g.vertices.iter().all(|i| face.vertices.contains(i)))
            .collect()
    }

    /// Whether `inner` ⊆ `outer` as faces.
    pub fn is_subface(inner: &Face, outer: &Face) -> bool {
        inner.vertices.iter().all(|i| outer.vertices.contains(i))
    }
}
