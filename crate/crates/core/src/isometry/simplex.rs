//! The simplex `Δₙ` as a normed space: `Λₙ`, the variation norm on `Wₙ`, `Tₙ` and `γ`.

use crate::error::{GeometryError, Result};
use crate::linalg::Point;

/// Coordinates below this are treated as the boundary of the simplex.
const FLOOR: f64 = 1e-300;

/// A point of `Wₙ = {θ ∈ ℝ^{n+1} : Σθᵢ = 0}`.
#[derive(Debug, Clone, PartialEq)]
pub struct WPoint(Point);

impl WPoint {
    pub fn new(coords: Point) -> Result<Self> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        let residual = coords.sum().abs();
        if residual >= 1e-12 * coords.amax().max(1.0) {
            return Err(GeometryError::NotInAffineHull { residual });
        }
        Ok(Self(coords))
    }

    /// Orthogonal projection onto `Wₙ` (subtract the mean).
    pub fn project(coords: &Point) -> Self {
        let mean = coords.mean();
        Self(coords.map(|c| c - mean))
    }

    pub fn zero(n: usize) -> Self {
        Self(Point::zeros(n + 1))
    }

    pub fn coords(&self) -> &Point {
        &self.0
    }

    pub fn into_inner(self) -> Point {
        self.0
    }

    /// `n`, one less than the number of coordinates.
    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn minus(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }
}

fn check_simplex(x: &Point) -> Result<()> {
    if x.iter().any(|c| !c.is_finite()) {
        return Err(GeometryError::NonFinite);
    }
    if x.len() < 2 || x.iter().any(|&c| c < FLOOR) || (x.sum() - 1.0).abs() > 1e-9 {
        return Err(GeometryError::NotInSimplex);
    }
    Ok(())
}

/// `θᵢ = ln xᵢ − (1/(n+1)) Σⱼ ln xⱼ`.
pub fn lambda_n(x: &Point) -> Result<WPoint> {
    check_simplex(x)?;
    Ok(WPoint::project(&x.map(f64::ln)))
}

/// `xᵢ = e^{θᵢ} / Σⱼ e^{θⱼ}`.
pub fn lambda_n_inverse(theta: &WPoint) -> Point {
    let t = theta.coords();
    let top = t.max();
    let e = t.map(|c| (c - top).exp());
    let s = e.sum();
    e / s
}

/// `maxᵢ vᵢ − minᵢ vᵢ`, the norm whose unit ball is the `Λₙ` image of the Hilbert ball.
pub fn w_norm(v: &WPoint) -> f64 {
    v.coords().max() - v.coords().min()
}

/// Linear map `Wₙ → ℝⁿ` with `vᵢ ↦ eᵢ`, where `vᵢ` has `−n` in slot `i` and `1` elsewhere.
pub fn t_n(v: &WPoint) -> Point {
    let c = v.coords();
    let n = c.len() - 1;
    Point::from_iterator(n, (0..n).map(|k| (c[n] - c[k]) / (n + 1) as f64))
}

pub fn t_n_inverse(a: &Point) -> WPoint {
    let n = a.len();
    let s = a.sum();
    let mut v = Point::from_element(n + 1, s);
    for k in 0..n {
        v[k] -= (n + 1) as f64 * a[k];
    }
    WPoint(v)
}

/// `[x₁ : … : x_{n+1}] ↦ [x₁⁻¹ : … : x_{n+1}⁻¹]`, normalized to the simplex.
pub fn gamma_reciprocal(x: &Point) -> Result<Point> {
    check_simplex(x)?;
    let r = x.map(|c| 1.0 / c);
    let s = r.sum();
    Ok(r / s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pt;
    use nalgebra::DMatrix;

    #[test]
    fn lambda_values() {
        let b = pt(&[1.0 / 3.0; 3]);
        assert!(lambda_n(&b).unwrap().coords().amax() < 1e-15);
        let l = lambda_n(&pt(&[0.5, 0.25, 0.25])).unwrap();
        let ln2 = 2f64.ln();
        let expect = pt(&[2.0 / 3.0 * ln2, -ln2 / 3.0, -ln2 / 3.0]);
        assert!((l.coords() - expect).amax() < 1e-15);
        assert!(l.coords().sum().abs() < 1e-15);
        assert!((lambda_n_inverse(&WPoint::zero(2)) - b).amax() < 1e-15);
    }

    #[test]
    fn lambda_rejects_outside() {
        assert_eq!(lambda_n(&pt(&[0.5, 0.5, 0.0])).unwrap_err(), GeometryError::NotInSimplex);
        assert_eq!(lambda_n(&pt(&[0.5, 0.6, 0.1])).unwrap_err(), GeometryError::NotInSimplex);
    }

    #[test]
    fn norm_values() {
        assert_eq!(w_norm(&WPoint::new(pt(&[1.0, -1.0, 0.0])).unwrap()), 2.0);
        assert_eq!(w_norm(&WPoint::zero(2)), 0.0);
        let ln2 = 2f64.ln();
        assert!((w_norm(&WPoint::new(pt(&[ln2, -ln2, 0.0])).unwrap()) - 2.0 * ln2).abs() < 1e-15);
        let x = lambda_n(&pt(&[0.5, 0.25, 0.25])).unwrap();
        let y = lambda_n(&pt(&[0.25, 0.5, 0.25])).unwrap();
        assert!((w_norm(&x.minus(&y)) - 4f64.ln()).abs() < 1e-12);
    }

    fn basis_vector(n: usize, i: usize) -> Point {
        let mut v = Point::from_element(n + 1, 1.0);
        v[i] = -(n as f64);
        v
    }

    #[test]
    fn t_n_values() {
        let v1 = WPoint::new(pt(&[-2.0, 1.0, 1.0])).unwrap();
        assert!((t_n(&v1) - pt(&[1.0, 0.0])).amax() < 1e-15);
        assert_eq!(t_n(&WPoint::zero(2)), pt(&[0.0, 0.0]));
        let v12 = WPoint::new(pt(&[-1.0, -1.0, 2.0])).unwrap();
        assert!((t_n(&v12) - pt(&[1.0, 1.0])).amax() < 1e-15);
        // the last axis direction goes to the diagonal
        let last = t_n(&WPoint::new(basis_vector(3, 3)).unwrap());
        assert!((last - pt(&[-1.0, -1.0, -1.0])).amax() < 1e-15);
    }

    #[test]
    fn t_n_agrees_with_coordinate_solve() {
        let n = 3;
        let basis = DMatrix::from_columns(&(0..n).map(|i| basis_vector(n, i)).collect::<Vec<_>>());
        let v = WPoint::project(&pt(&[0.3, -1.1, 2.0, 0.4]));
        let coords = basis.clone().svd(true, true).solve(v.coords(), 1e-14).unwrap();
        assert!((t_n(&v) - coords).amax() < 1e-12);
        assert!((t_n_inverse(&t_n(&v)).coords() - v.coords()).amax() < 1e-12);
    }

    #[test]
    fn gamma_values() {
        let b = pt(&[1.0 / 3.0; 3]);
        assert!((gamma_reciprocal(&b).unwrap() - &b).amax() < 1e-15);
        let g = gamma_reciprocal(&pt(&[0.5, 0.25, 0.25])).unwrap();
        assert!((g - pt(&[0.2, 0.4, 0.4])).amax() < 1e-15);
        let x = pt(&[0.1, 0.6, 0.3]);
        assert!((gamma_reciprocal(&gamma_reciprocal(&x).unwrap()).unwrap() - &x).amax() < 1e-15);
    }
}
