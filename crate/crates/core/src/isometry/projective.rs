use nalgebra::{DMatrix, DVector};

use crate::error::{GeometryError, Result};
use crate::linalg::{rank, Point};

/// How points of an ambient space are read as homogeneous coordinates.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum Chart {
    /// `p ∈ ℝⁿ ↦ [p : 1]`.
    #[default]
    Affine,
    /// Points of the hyperplane `{ℓ·p = 1}` are their own homogeneous coordinates;
    /// `ℓ = (1,…,1)` is the chart of the standard simplex.
    Hyperplane(Vec<f64>),
}

impl Chart {
    pub fn simplex(ambient: usize) -> Self {
        Self::Hyperplane(vec![1.0; ambient])
    }

    pub fn homogeneous_dim(&self, ambient: usize) -> usize {
        match self {
            Self::Affine => ambient + 1,
            Self::Hyperplane(_) => ambient,
        }
    }

    pub fn homogenize(&self, p: &Point) -> DVector<f64> {
        match self {
            Self::Affine => p.clone().insert_row(p.len(), 1.0),
            Self::Hyperplane(_) => p.clone(),
        }
    }

    /// Point of the chart represented by `h`; `None` if `h` is at infinity.
    pub fn dehomogenize(&self, h: &DVector<f64>) -> Option<Point> {
        let scale = h.amax();
        if scale == 0.0 {
            return None;
        }
        let h = h / scale;
        let w = match self {
            Self::Affine => h[h.len() - 1],
            Self::Hyperplane(l) => l.iter().zip(h.iter()).map(|(a, b)| a * b).sum(),
        };
        if w.abs() <= 1e-12 {
            return None;
        }
        Some(match self {
            Self::Affine => h.rows(0, h.len() - 1) / w,
            Self::Hyperplane(_) => h / w,
        })
    }

    /// Sign of the dehomogenizing coordinate of `h`.
    pub(crate) fn weight(&self, h: &DVector<f64>) -> f64 {
        match self {
            Self::Affine => h[h.len() - 1],
            Self::Hyperplane(l) => l.iter().zip(h.iter()).map(|(a, b)| a * b).sum(),
        }
    }
}

/// An element of `PGL`, stored with its largest entry scaled to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveMap {
    matrix: DMatrix<f64>,
    source: Chart,
    target: Chart,
}

impl ProjectiveMap {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        Self::with_charts(matrix, Chart::Affine, Chart::Affine)
    }

    pub fn with_charts(matrix: DMatrix<f64>, source: Chart, target: Chart) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() < 2 {
            return Err(GeometryError::DimensionMismatch { expected: matrix.nrows(), got: matrix.ncols() });
        }
        if matrix.iter().any(|c| !c.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        let scale = matrix.amax();
        if scale == 0.0 {
            return Err(GeometryError::SingularMap);
        }
        let matrix = matrix / scale;
        if matrix.determinant().abs() <= 1e-12 {
            return Err(GeometryError::SingularMap);
        }
        Ok(Self { matrix, source, target })
    }

    pub fn identity(n: usize) -> Self {
        Self::new(DMatrix::identity(n + 1, n + 1)).expect("identity is invertible")
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn source_chart(&self) -> &Chart {
        &self.source
    }

    pub fn target_chart(&self) -> &Chart {
        &self.target
    }

    pub fn apply(&self, p: &Point) -> Result<Point> {
        let hd = self.source.homogeneous_dim(p.len());
        if hd != self.matrix.ncols() {
            return Err(GeometryError::DimensionMismatch { expected: self.matrix.ncols(), got: hd });
        }
        let h = &self.matrix * self.source.homogenize(p);
        self.target.dehomogenize(&h).ok_or(GeometryError::PointAtInfinity)
    }

    pub fn apply_homogeneous(&self, h: &DVector<f64>) -> DVector<f64> {
        &self.matrix * h
    }

    pub fn inverse(&self) -> Self {
        let inv = self.matrix.clone().try_inverse().expect("stored maps are invertible");
        Self::with_charts(inv, self.target.clone(), self.source.clone()).expect("inverse of invertible")
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self::with_charts(&self.matrix * &other.matrix, other.source.clone(), self.target.clone())
            .expect("product of invertible maps")
    }

    /// Whether the matrix is a nonzero multiple of `other`'s.
    pub fn same_as(&self, other: &Self, tol: f64) -> bool {
        let (a, b) = (&self.matrix, &other.matrix);
        if a.shape() != b.shape() {
            return false;
        }
        let (i, _) =
            a.iter().enumerate().fold((0, 0.0), |acc, (i, v)| if v.abs() > acc.1 { (i, v.abs()) } else { acc });
        let s = a.as_slice()[i] / b.as_slice()[i];
        (a - b * s).amax() <= tol
    }
}

/// Columns of `basis[..k]` scaled so that they sum to `basis[k]`.
fn scaled_frame(basis: &[DVector<f64>]) -> Result<DMatrix<f64>> {
    let k = basis.len() - 1;
    let m = DMatrix::from_columns(&basis[..k]);
    if rank(&m, 1e-12) < k {
        return Err(GeometryError::DegenerateBasis);
    }
    let lambda = m.clone().lu().solve(&basis[k]).ok_or(GeometryError::DegenerateBasis)?;
    // Every k-subset is independent iff no coefficient vanishes.
    if lambda.iter().any(|l| l.abs() <= 1e-12 * lambda.amax()) {
        return Err(GeometryError::DegenerateBasis);
    }
    let mut out = m;
    for (j, l) in lambda.iter().enumerate() {
        out.column_mut(j).scale_mut(*l);
    }
    Ok(out)
}

/// The projective map sending `src[i] ↦ dst[i]`.
///
/// The first `n + 2` points must form a projective basis; any further
/// correspondences are checked against the fitted map.
pub fn fit_projective(src: &[Point], dst: &[Point]) -> Result<ProjectiveMap> {
    let n = src.first().map(|p| p.len()).unwrap_or(0);
    fit_projective_in(src, &Chart::Affine, dst, &Chart::Affine, n)
}

/// As [`fit_projective`], with explicit charts; `n` is the projective dimension.
pub fn fit_projective_in(src: &[Point], sc: &Chart, dst: &[Point], dc: &Chart, n: usize) -> Result<ProjectiveMap> {
    if src.len() < n + 2 || dst.len() != src.len() {
        return Err(GeometryError::DegenerateBasis);
    }
    let hs: Vec<DVector<f64>> = src.iter().map(|p| sc.homogenize(p)).collect();
    let hd: Vec<DVector<f64>> = dst.iter().map(|p| dc.homogenize(p)).collect();
    if hs.iter().chain(&hd).any(|h| h.len() != n + 1) {
        return Err(GeometryError::DimensionMismatch {
            expected: n + 1,
            got: hs.iter().chain(&hd).map(|h| h.len()).find(|&l| l != n + 1).unwrap_or(n + 1),
        });
    }
    let a = scaled_frame(&hs[..n + 2])?;
    let b = scaled_frame(&hd[..n + 2])?;
    let inv = a.try_inverse().ok_or(GeometryError::DegenerateBasis)?;
    let map = ProjectiveMap::with_charts(b * inv, sc.clone(), dc.clone())?;
    let scale = dst.iter().map(|p| p.amax()).fold(1.0, f64::max);
    for (p, q) in src.iter().zip(dst).skip(n + 2) {
        let residual = map.apply(p).map(|img| (img - q).norm()).unwrap_or(f64::INFINITY);
        if residual > 1e-9 * scale {
            return Err(GeometryError::InconsistentCorrespondence { residual });
        }
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pt;

    fn square_basis() -> Vec<Point> {
        vec![pt(&[0.0, 0.0]), pt(&[1.0, 0.0]), pt(&[1.0, 1.0]), pt(&[0.0, 1.0]), pt(&[0.5, 0.5])]
    }

    #[test]
    fn apply_examples() {
        let id = ProjectiveMap::identity(2);
        let p = pt(&[0.3, -2.0]);
        assert_eq!(id.apply(&p).unwrap(), p);
        let m = ProjectiveMap::new(DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 1.0, 1.0]))).unwrap();
        assert!((m.apply(&pt(&[1.0, 1.0])).unwrap() - pt(&[2.0, 1.0])).norm() < 1e-15);
        // w = 1 - x vanishes at x = 1
        let m =
            ProjectiveMap::new(DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, -1.0, 0.0, 1.0])).unwrap();
        assert_eq!(m.apply(&pt(&[1.0, 0.5])).unwrap_err(), GeometryError::PointAtInfinity);
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let m = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0, 0.0, 0.0, 1.0]);
        assert_eq!(ProjectiveMap::new(m).unwrap_err(), GeometryError::SingularMap);
    }

    #[test]
    fn fit_identity() {
        let b = square_basis();
        let m = fit_projective(&b, &b).unwrap();
        assert!(m.same_as(&ProjectiveMap::identity(2), 1e-12));
    }

    #[test]
    fn fit_rotation() {
        let src = square_basis();
        let rot = |p: &Point| pt(&[1.0 - p[1], p[0]]);
        let dst: Vec<Point> = src.iter().map(rot).collect();
        let m = fit_projective(&src, &dst).unwrap();
        let expect =
            ProjectiveMap::new(DMatrix::from_row_slice(3, 3, &[0.0, -1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0])).unwrap();
        assert!(m.same_as(&expect, 1e-12));
        for (s, d) in src.iter().zip(&dst) {
            assert!((m.apply(s).unwrap() - d).norm() < 1e-9);
        }
    }

    #[test]
    fn fit_trapezoid_is_not_affine() {
        let src = square_basis();
        let mut dst = vec![pt(&[0.0, 0.0]), pt(&[2.0, 0.0]), pt(&[1.0, 1.0]), pt(&[0.0, 1.0])];
        // diagonals (0,0)-(1,1) and (2,0)-(0,1) meet at (2/3, 2/3)
        dst.push(pt(&[2.0 / 3.0, 2.0 / 3.0]));
        let m = fit_projective(&src, &dst).unwrap();
        for (s, d) in src.iter().zip(&dst) {
            assert!((m.apply(s).unwrap() - d).norm() < 1e-9);
        }
        let bottom = m.matrix().row(2);
        assert!(bottom[0].abs().max(bottom[1].abs()) > 1e-3);
    }

    #[test]
    fn inconsistent_extra_point() {
        let mut dst = square_basis();
        dst[4] = pt(&[0.4, 0.5]);
        assert!(matches!(fit_projective(&square_basis(), &dst), Err(GeometryError::InconsistentCorrespondence { .. })));
    }

    #[test]
    fn degenerate_basis() {
        let src = vec![pt(&[0.0, 0.0]), pt(&[1.0, 0.0]), pt(&[2.0, 0.0]), pt(&[0.0, 1.0]), pt(&[0.5, 0.5])];
        assert_eq!(fit_projective(&src, &square_basis()).unwrap_err(), GeometryError::DegenerateBasis);
    }

    #[test]
    fn simplex_chart_maps() {
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 2.0, 4.0]));
        let m = ProjectiveMap::with_charts(d, Chart::simplex(3), Chart::simplex(3)).unwrap();
        let y = m.apply(&pt(&[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0])).unwrap();
        assert!((y - pt(&[1.0 / 7.0, 2.0 / 7.0, 4.0 / 7.0])).norm() < 1e-15);
        let back = m.inverse().apply(&pt(&[1.0 / 7.0, 2.0 / 7.0, 4.0 / 7.0])).unwrap();
        assert!((back - pt(&[1.0 / 3.0; 3])).norm() < 1e-15);
    }
}
