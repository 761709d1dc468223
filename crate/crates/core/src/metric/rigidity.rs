use nalgebra::DMatrix;

use crate::convex::{Chord, ConvexDomain, Face};
use crate::error::Result;
use crate::linalg::{nullspace, rank_of, span_basis, Point};

/// Outcome of the rigidity test for the line through two interior points.
#[derive(Debug, Clone)]
pub struct Rigidity {
    pub rigid: bool,
    pub chord: Chord,
    pub witness: Option<RigidityWitness>,
}

/// Off-chord point `z` on a bent geodesic from `x` to `y`.
///
/// `direction_alpha` and `direction_beta` are directions of boundary segments
/// through the chord endpoints that span a plane with the chord.
#[derive(Debug, Clone)]
pub struct RigidityWitness {
    pub z: Point,
    pub direction_alpha: Point,
    pub direction_beta: Point,
}

fn direction_basis(face: &Face) -> Vec<Point> {
    let Some(first) = face.points.first() else { return Vec::new() };
    let diffs: Vec<Point> = face.points[1..].iter().map(|p| p - first).collect();
    span_basis(&diffs, first.len(), 1e-9)
}

/// Whether the closed face contains `p` (all of its facet equations hold).
fn face_contains(domain: &ConvexDomain, face: &Face, p: &Point, tol: f64) -> bool {
    match domain {
        ConvexDomain::Polytope(poly) => {
            poly.contains_closed(p) && face.facets.iter().all(|&k| poly.facets()[k].slack(p).abs() <= tol)
        }
        ConvexDomain::Ellipsoid(_) => false,
    }
}

/// The line through `x` and `y` is non-rigid exactly when the faces at its
/// endpoints contain segments through the endpoints that are coplanar with it.
pub fn is_rigid_chord(domain: &ConvexDomain, x: &Point, y: &Point) -> Result<Rigidity> {
    let chord = domain.chord_through(x, y)?;
    if chord.face_alpha.dim == 0 || chord.face_beta.dim == 0 || domain.as_polytope().is_none() {
        return Ok(Rigidity { rigid: true, chord, witness: None });
    }
    let n = domain.ambient_dim();
    let da = direction_basis(&chord.face_alpha);
    let db = direction_basis(&chord.face_beta);
    let u = y - x;
    let mut cols: Vec<Point> = da.clone();
    cols.extend(db.iter().map(|b| -b));
    cols.push(u.normalize());
    let k = cols.len();
    if rank_of(&cols, n, 1e-9) == k {
        return Ok(Rigidity { rigid: true, chord, witness: None });
    }
    let mut m = DMatrix::zeros(n, k);
    for (j, c) in cols.iter().enumerate() {
        m.set_column(j, c);
    }
    let ns = nullspace(&m, 1e-9);
    let w = &ns[0];
    let a: Point = da.iter().enumerate().fold(Point::zeros(n), |acc, (i, v)| acc + v * w[i]);
    let b: Point = db.iter().enumerate().fold(Point::zeros(n), |acc, (i, v)| acc + v * w[da.len() + i]);
    let (a, b) = (a.normalize(), b.normalize());
    let witness =
        bent_geodesic_point(domain, &chord, &a).map(|z| RigidityWitness { z, direction_alpha: a, direction_beta: b });
    Ok(Rigidity { rigid: false, chord, witness })
}

/// Moves the chord midpoint along `a` until both broken lines `xz` and `zy`
/// end on the closed faces at α and β.
fn bent_geodesic_point(domain: &ConvexDomain, chord: &Chord, a: &Point) -> Option<Point> {
    let (x, y) = (&chord.x, &chord.y);
    let mid = (x + y) / 2.0;
    let (_, reach) = domain.chord_params(&mid, a);
    let tol = domain.eps() * 10.0;
    let mut h = 0.5 * reach;
    for _ in 0..60 {
        let z = &mid + a * h;
        if domain.contains_interior(&z) {
            let ok = [(x, &z), (&z, y)].iter().all(|(p, q)| {
                let v = *q - *p;
                let (lo, hi) = domain.chord_params(p, &v);
                face_contains(domain, &chord.face_alpha, &(*p + &v * lo), tol)
                    && face_contains(domain, &chord.face_beta, &(*p + &v * hi), tol)
            });
            if ok {
                return Some(z);
            }
        }
        h *= 0.5;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pt;
    use crate::metric::distance;

    #[test]
    fn square_horizontal_chord_is_not_rigid() {
        let sq = ConvexDomain::axis_box(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let (x, y) = (pt(&[0.3, 0.4]), pt(&[0.7, 0.4]));
        let r = is_rigid_chord(&sq, &x, &y).unwrap();
        assert!(!r.rigid);
        let z = r.witness.unwrap().z;
        assert!(crate::linalg::distance_to_line(&z, &x, &y) > 1e-3);
        let lhs = distance(&sq, &x, &y).unwrap();
        let rhs = distance(&sq, &x, &z).unwrap() + distance(&sq, &z, &y).unwrap();
        assert!((lhs - rhs).abs() < 1e-9);
    }

    #[test]
    fn chord_to_a_vertex_is_rigid() {
        let sq = ConvexDomain::axis_box(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let r = is_rigid_chord(&sq, &pt(&[0.25, 0.25]), &pt(&[0.75, 0.75])).unwrap();
        assert!(r.rigid);
        assert!(r.witness.is_none());
    }

    #[test]
    fn skew_edge_chord_is_rigid() {
        let s = ConvexDomain::standard_simplex(3);
        let p = pt(&[0.5, 0.5, 0.0, 0.0]);
        let q = pt(&[0.0, 0.0, 0.5, 0.5]);
        let x = &p * 0.7 + &q * 0.3;
        let y = &p * 0.3 + &q * 0.7;
        let r = is_rigid_chord(&s, &x, &y).unwrap();
        assert_eq!((r.chord.face_alpha.dim, r.chord.face_beta.dim), (1, 1));
        assert!(r.rigid);
    }

    #[test]
    fn ellipsoid_chords_are_rigid() {
        let disk = ConvexDomain::unit_ball(2);
        assert!(is_rigid_chord(&disk, &pt(&[0.0, 0.0]), &pt(&[0.3, 0.2])).unwrap().rigid);
    }

    #[test]
    fn cube_chord_between_parallel_faces_is_not_rigid() {
        let cube = ConvexDomain::axis_box(&[0.0; 3], &[1.0; 3]).unwrap();
        let (x, y) = (pt(&[0.2, 0.4, 0.5]), pt(&[0.8, 0.6, 0.45]));
        let r = is_rigid_chord(&cube, &x, &y).unwrap();
        assert!(!r.rigid);
        let z = r.witness.unwrap().z;
        let lhs = distance(&cube, &x, &y).unwrap();
        let rhs = distance(&cube, &x, &z).unwrap() + distance(&cube, &z, &y).unwrap();
        assert!((lhs - rhs).abs() < 1e-7);
    }
}
