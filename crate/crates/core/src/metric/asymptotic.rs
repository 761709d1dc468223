use crate::convex::{ConvexDomain, Ray};
use crate::linalg::{rank_of, Point};

use super::distance;

/// Reported divergence threshold: a profile "diverges" once a distance exceeds it.
pub const DIVERGENCE_BOUND: f64 = 10.0;
pub const DEFAULT_STEPS: usize = 40;

/// How the points on the second ray are paired with those on the first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Matching {
    /// Both rays accumulate at one point; `yₙ` is the projection of `xₙ` onto `r₂`.
    SameEndpoint,
    /// Accumulation points share an open face and the rays are coplanar;
    /// `yₙ − xₙ` is parallel to the segment between the accumulation points.
    Parallel,
    /// Both sequences halve their distance to the accumulation point each step.
    Geometric,
}

#[derive(Debug, Clone)]
pub struct AsymptoticProfile {
    pub r1: Ray,
    pub r2: Ray,
    pub matching: Matching,
    pub xs: Vec<Point>,
    pub ys: Vec<Point>,
    pub distances: Vec<f64>,
}

impl AsymptoticProfile {
    pub fn sup(&self) -> f64 {
        self.distances.iter().copied().fold(0.0, f64::max)
    }

    pub fn last(&self) -> f64 {
        self.distances.last().copied().unwrap_or(0.0)
    }

    pub fn exceeds(&self, bound: f64) -> bool {
        self.distances.iter().any(|&d| d > bound)
    }

    pub fn diverges(&self) -> bool {
        self.exceeds(DIVERGENCE_BOUND)
    }
}

fn approach(r: &Ray, n: usize) -> Point {
    let scale = 0.5f64.powi(n as i32);
    &r.accumulation - (&r.accumulation - &r.start) * scale
}

/// Point of `r` at parameter `t`, kept strictly before the accumulation point.
fn on_ray(r: &Ray, t: f64, n: usize) -> Point {
    let cap = r.t_max * (1.0 - 0.5f64.powi(n as i32 + 1));
    r.at(t.clamp(0.0, cap))
}

fn choose_matching(domain: &ConvexDomain, r1: &Ray, r2: &Ray) -> Matching {
    let eps = domain.eps();
    let s = &r2.accumulation - &r1.accumulation;
    if s.norm() <= eps {
        return Matching::SameEndpoint;
    }
    let (Ok(f1), Ok(f2)) = (domain.boundary_face_of(&r1.accumulation), domain.boundary_face_of(&r2.accumulation))
    else {
        return Matching::Geometric;
    };
    let same_face = f1.dim >= 1 && f1.vertices == f2.vertices && domain.as_polytope().is_some();
    let coplanar =
        rank_of(&[r1.direction.clone(), r2.direction.clone(), s.clone(), &r2.start - &r1.start], s.len(), 1e-9) <= 2;
    if same_face && coplanar {
        Matching::Parallel
    } else {
        Matching::Geometric
    }
}

/// Matched sequences `xₙ → a(r₁)`, `yₙ → a(r₂)` and their Hilbert distances.
pub fn asymptotic_profile(domain: &ConvexDomain, r1: &Ray, r2: &Ray, steps: usize) -> AsymptoticProfile {
    let matching = choose_matching(domain, r1, r2);
    let s = &r2.accumulation - &r1.accumulation;
    let mut xs = Vec::with_capacity(steps);
    let mut ys = Vec::with_capacity(steps);
    let mut distances = Vec::with_capacity(steps);
    for n in 0..steps {
        let x = approach(r1, n);
        let y = match matching {
            Matching::SameEndpoint => on_ray(r2, (&x - &r2.start).dot(&r2.direction), n),
            Matching::Geometric => approach(r2, n),
            Matching::Parallel => {
                // Solve start₂ + t·dir₂ = x + σ·s in least squares.
                let m = nalgebra::DMatrix::from_columns(&[r2.direction.clone(), -s.clone()]);
                let rhs = &x - &r2.start;
                match m.clone().svd(true, true).solve(&rhs, 1e-14) {
                    Ok(sol) => on_ray(r2, sol[0], n),
                    Err(_) => approach(r2, n),
                }
            }
        };
        let Ok(d) = distance(domain, &x, &y) else { break };
        xs.push(x);
        ys.push(y);
        distances.push(d);
    }
    AsymptoticProfile { r1: r1.clone(), r2: r2.clone(), matching, xs, ys, distances }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pt;

    fn big_square() -> ConvexDomain {
        ConvexDomain::axis_box(&[-1.0, -1.0], &[1.0, 1.0]).unwrap()
    }

    #[test]
    fn same_vertex_is_bounded() {
        let sq = big_square();
        let a = pt(&[1.0, 1.0]);
        let r1 = sq.ray_towards(&pt(&[-0.5, 0.2]), &a).unwrap();
        let r2 = sq.ray_towards(&pt(&[0.3, -0.6]), &a).unwrap();
        let p = asymptotic_profile(&sq, &r1, &r2, DEFAULT_STEPS);
        assert_eq!(p.matching, Matching::SameEndpoint);
        assert_eq!(p.distances.len(), DEFAULT_STEPS);
        assert!(p.sup() < DIVERGENCE_BOUND);
    }

    #[test]
    fn parallel_matching_on_top_edge() {
        let sq = big_square();
        let r1 = sq.ray_towards(&pt(&[-0.5, 0.0]), &pt(&[-0.5, 1.0])).unwrap();
        let r2 = sq.ray_towards(&pt(&[0.5, 0.0]), &pt(&[0.5, 1.0])).unwrap();
        let p = asymptotic_profile(&sq, &r1, &r2, DEFAULT_STEPS);
        assert_eq!(p.matching, Matching::Parallel);
        assert!((p.last() - 9f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn vertex_against_edge_diverges() {
        let sq = big_square();
        let r1 = sq.ray_towards(&pt(&[0.0, 0.0]), &pt(&[1.0, 1.0])).unwrap();
        let r2 = sq.ray_towards(&pt(&[0.0, 0.0]), &pt(&[0.0, 1.0])).unwrap();
        let p = asymptotic_profile(&sq, &r1, &r2, DEFAULT_STEPS);
        assert_eq!(p.matching, Matching::Geometric);
        assert!(p.diverges());
    }
}
