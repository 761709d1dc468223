//! Small dense linear-algebra helpers shared by the geometric modules.

use nalgebra::{DMatrix, DVector};

/// A point (or vector) of an ambient Euclidean space.
pub type Point = DVector<f64>;

/// Builds a point from a slice of coordinates.
pub fn pt(coords: &[f64]) -> Point {
    DVector::from_column_slice(coords)
}

/// Matrix whose columns are the given vectors.
pub fn columns(vectors: &[Point], rows: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(rows, vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        m.set_column(j, v);
    }
    m
}

/// Singular values of `m` in descending order.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Numerical rank with a tolerance relative to the largest singular value.
pub fn rank(m: &DMatrix<f64>, tol: f64) -> usize {
    let s = singular_values(m);
    let scale = s.first().copied().unwrap_or(0.0).max(1.0);
    s.iter().filter(|&&v| v > tol * scale).count()
}

/// Rank of the span of a family of vectors.
pub fn rank_of(vectors: &[Point], dim: usize, tol: f64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    rank(&columns(vectors, dim), tol)
}

/// Affine rank (dimension of the affine hull) of a point set.
pub fn affine_rank(points: &[&Point], tol: f64) -> usize {
    let Some(first) = points.first() else { return 0 };
    let diffs: Vec<Point> = points[1..].iter().map(|p| *p - *first).collect();
    rank_of(&diffs, first.len(), tol)
}

/// Orthonormal basis of the null space of `m` (vectors `v` with `m v = 0`).
pub fn nullspace(m: &DMatrix<f64>, tol: f64) -> Vec<Point> {
    let n = m.ncols();
    if n == 0 {
        return Vec::new();
    }
    // Pad to a square (or tall) matrix so the SVD yields a full right basis.
    let rows = m.nrows().max(n);
    let mut padded = DMatrix::zeros(rows, n);
    padded.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let scale = svd.singular_values.iter().fold(0.0f64, |a, &b| a.max(b)).max(1.0);
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= tol * scale)
        .map(|(i, _)| vt.row(i).transpose())
        .collect()
}

/// Orthonormal basis of the column span of the given vectors.
pub fn span_basis(vectors: &[Point], dim: usize, tol: f64) -> Vec<Point> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = columns(vectors, dim);
    let svd = m.svd(true, false);
    let u = svd.u.expect("requested U");
    let scale = svd.singular_values.iter().fold(0.0f64, |a, &b| a.max(b)).max(1.0);
    let mut picked: Vec<(f64, Point)> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > tol * scale)
        .map(|(i, &s)| (s, u.column(i).into_owned()))
        .collect();
    picked.sort_by(|a, b| b.0.total_cmp(&a.0));
    picked.into_iter().map(|(_, v)| v).collect()
}

/// Lexicographic comparison of coordinate vectors.
pub fn lex_cmp(a: &Point, b: &Point) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

/// Arithmetic mean of a nonempty set of points.
pub fn centroid<'a>(points: impl IntoIterator<Item = &'a Point>) -> Point {
    let mut it = points.into_iter();
    let first = it.next().expect("centroid of an empty set").clone();
    let (sum, count) = it.fold((first, 1usize), |(s, c), p| (s + p, c + 1));
    sum / count as f64
}

/// Distance of `p` from the line through `a` and `b`.
pub fn distance_to_line(p: &Point, a: &Point, b: &Point) -> f64 {
    let d = b - a;
    let len2 = d.norm_squared();
    let w = p - a;
    if len2 == 0.0 {
        return w.norm();
    }
    let t = w.dot(&d) / len2;
    (w - d * t).norm()
}
