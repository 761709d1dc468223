//! Seeded property suites behind `hg check`, one per acceptance criterion.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cone::{cone_distance, cone_over, lift, Cone};
use crate::convex::{minkowski_functional, ConvexDomain};
use crate::error::{GeometryError, Result};
use crate::io::truncate_sig12;
use crate::isometry::checks::sample_spread;
use crate::isometry::{
    classify_2d, fit_projective, focusing_probe, gamma_reciprocal, lambda_n, lambda_n_inverse, projectivity_check,
    sampled_isometry_check, t_n, t_n_inverse, vinberg_star, w_norm, Chart, ConeKind, ProjectiveMap, VariationSpace,
    Verdict, WPoint, DEFAULT_HORIZON,
};
use crate::linalg::{pt, Point};
use crate::metric::{asymptotic_profile, distance, is_rigid_chord, DEFAULT_STEPS, DIVERGENCE_BOUND};

pub const SUITES: &[&str] = &[
    "metric-axioms",
    "known-values",
    "projective-invariance",
    "lambda-isometry",
    "gamma",
    "cone-slice",
    "rigidity",
    "asymptotics",
    "index2",
    "classify2d",
    "vinberg",
    "conjugation",
    "focusing",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    /// One of `<`, `<=`, `>`, `>=`.
    pub relation: &'static str,
    pub bound: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub id: String,
    pub criteria: Vec<u32>,
    pub seed: u64,
    pub samples: usize,
    pub tolerances: BTreeMap<String, f64>,
    pub passed: bool,
    pub metrics: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
}

impl ExperimentReport {
    fn new(id: &str, criteria: &[u32], seed: u64, samples: usize) -> Self {
        Self {
            id: id.into(),
            criteria: criteria.to_vec(),
            seed,
            samples,
            tolerances: BTreeMap::new(),
            passed: true,
            metrics: BTreeMap::new(),
            checks: Vec::new(),
        }
    }

    fn tolerance(&mut self, name: &str, v: f64) {
        self.tolerances.insert(name.into(), v);
    }

    fn metric(&mut self, name: &str, v: f64) {
        self.metrics.insert(name.into(), truncate_sig12(v));
    }

    fn check(&mut self, name: &str, value: f64, relation: &'static str, bound: f64) {
        let passed = match relation {
            "<" => value < bound,
            "<=" => value <= bound,
            ">" => value > bound,
            ">=" => value >= bound,
            _ => unreachable!("unknown relation {relation}"),
        };
        self.passed &= passed;
        self.checks.push(Check { name: name.into(), value: truncate_sig12(value), relation, bound, passed });
    }

    /// Records a boolean property as `value 1 >= 1`.
    fn holds(&mut self, name: &str, ok: bool) {
        self.check(name, if ok { 1.0 } else { 0.0 }, ">=", 1.0);
    }

    fn error(&mut self, name: &str, e: GeometryError) {
        self.passed = false;
        self.checks.push(Check {
            name: format!("{name}: {e}"),
            value: f64::NAN,
            relation: ">=",
            bound: 1.0,
            passed: false,
        });
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Runs a named suite; `samples` overrides the suite's main sample count.
pub fn run_suite(name: &str, seed: u64, samples: Option<usize>) -> Result<ExperimentReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rng = &mut rng;
    let r = match name {
        "metric-axioms" => metric_axioms(seed, samples.unwrap_or(1000), rng),
        "known-values" => known_values(seed),
        "projective-invariance" => projective_invariance(seed, samples.unwrap_or(200), rng),
        "lambda-isometry" => lambda_isometry(seed, samples.unwrap_or(1000), rng),
        "gamma" => gamma(seed, samples.unwrap_or(1000), rng),
        "cone-slice" => cone_slice(seed, samples.unwrap_or(1000), rng),
        "rigidity" => rigidity(seed, samples.unwrap_or(50), rng),
        "asymptotics" => asymptotics(seed, samples.unwrap_or(DEFAULT_STEPS)),
        "index2" => index2(seed, samples.unwrap_or(50), rng),
        "classify2d" => classify(seed, samples.unwrap_or(20), rng),
        "vinberg" => vinberg(seed, samples.unwrap_or(1000), rng),
        "conjugation" => conjugation(seed, samples.unwrap_or(20), rng),
        "focusing" => focusing(seed, samples.unwrap_or(6), rng),
        other => return Err(GeometryError::Unsupported(format!("unknown suite {other:?}"))),
    };
    Ok(r)
}

fn square() -> ConvexDomain {
    ConvexDomain::axis_box(&[-1.0, -1.0], &[1.0, 1.0]).expect("square")
}

fn pentagon() -> ConvexDomain {
    let pts = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.5, 1.5], [0.0, 1.0]];
    ConvexDomain::polytope(&pts.iter().map(|p| pt(p)).collect::<Vec<_>>()).expect("pentagon")
}

fn simplex2() -> ConvexDomain {
    ConvexDomain::standard_simplex(2)
}

fn metric_axioms(seed: u64, n: usize, rng: &mut ChaCha8Rng) -> ExperimentReport {
    let mut r = ExperimentReport::new("metric-axioms", &[1], seed, n);
    r.tolerance("symmetry", 1e-12);
    r.tolerance("triangle_slack", -1e-9);
    r.tolerance("identity", 1e-12);
    let fixtures =
        [("square", square()), ("simplex", simplex2()), ("pentagon", pentagon()), ("disk", ConvexDomain::unit_ball(2))];
    for (label, d) in &fixtures {
        let (mut sym, mut slack, mut ident, mut min_sep) = (0.0f64, f64::INFINITY, 0.0f64, f64::INFINITY);
        for _ in 0..n {
            let x = sample_spread(d, rng);
            let y = sample_spread(d, rng);
            let z = sample_spread(d, rng);
            let res = (|| -> Result<()> {
                let dxy = distance(d, &x, &y)?;
                sym = sym.max((dxy - distance(d, &y, &x)?).abs());
                slack = slack.min(dxy + distance(d, &y, &z)? - distance(d, &x, &z)?);
                ident = ident.max(distance(d, &x, &x)?);
                if (&x - &y).norm() > 1e-9 {
                    min_sep = min_sep.min(dxy);
                }
                Ok(())
            })();
            if let Err(e) = res {
                r.error(label, e);
                break;
            }
        }
        r.check(&format!("{label}.symmetry"), sym, "<=", 1e-12);
        r.check(&format!("{label}.triangle_slack"), slack, ">=", -1e-9);
        r.check(&format!("{label}.self_distance"), ident, "<=", 1e-12);
        r.check(&format!("{label}.distinct_positive"), min_sep, ">", 0.0);
    }
    r
}

fn known_values(seed: u64) -> ExperimentReport {
    let mut r = ExperimentReport::new("known-values", &[2], seed, 3);
    r.tolerance("absolute", 1e-12);
    let cases = [
        ("disk", ConvexDomain::unit_ball(2), pt(&[0.0, 0.0]), pt(&[0.5, 0.0]), 3f64.ln()),
        ("square", square(), pt(&[-0.5, 0.0]), pt(&[0.5, 0.0]), 9f64.ln()),
        ("simplex", simplex2(), pt(&[0.5, 0.25, 0.25]), pt(&[0.25, 0.5, 0.25]), 4f64.ln()),
    ];
    for (label, d, x, y, expected) in cases {
        match distance(&d, &x, &y) {
            Ok(v) => {
                r.metric(label, v);
                r.check(&format!("{label}.error"), (v - expected).abs(), "<=", 1e-12);
            }
            Err(e) => r.error(label, e),
        }
    }
    r
}

/// Random element of PGL(Δ₂): positive diagonal scaling after a vertex permutation.
fn random_simplex_map(rng: &mut ChaCha8Rng) -> ProjectiveMap {
    let mut perm = [0usize, 1, 2];
    perm.shuffle(rng);
    let mut m = DMatrix::zeros(3, 3);
    for (i, &j) in perm.iter().enumerate() {
        m[(i, j)] = rng.random_range(-2.0f64..2.0).exp();
    }
    ProjectiveMap::with_charts(m, Chart::simplex(3), Chart::simplex(3)).expect("invertible")
}

/// Random symmetry of the square `[−1,1]²`.
fn random_square_map(rng: &mut ChaCha8Rng) -> ProjectiveMap {
    let mut m = DMatrix::<f64>::identity(3, 3);
    if rng.random_bool(0.5) {
        m.swap_rows(0, 1);
    }
    for i in 0..2 {
        if rng.random_bool(0.5) {
            m[(i, i)] = -m[(i, i)];
            m[(i, 1 - i)] = -m[(i, 1 - i)];
        }
    }
    ProjectiveMap::new(m).expect("invertible")
}

/// Random projective automorphism of the unit disk: a boost followed by a rotation.
fn random_disk_map(rng: &mut ChaCha8Rng) -> ProjectiveMap {
    let phi: f64 = rng.random_range(-1.5..1.5);
    let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let boost =
        DMatrix::from_row_slice(3, 3, &[phi.cosh(), 0.0, phi.sinh(), 0.0, 1.0, 0.0, phi.sinh(), 0.0, phi.cosh()]);
    let (s, c) = theta.sin_cos();
    let rot = DMatrix::from_row_slice(3, 3, &[c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0]);
    ProjectiveMap::new(rot * boost).expect("invertible")
}

fn invariance_deviation(d: &ConvexDomain, map: &ProjectiveMap, pairs: usize, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut dev = 0.0f64;
    for _ in 0..pairs {
        let x = sample_spread(d, rng);
        let y = sample_spread(d, rng);
        let (fx, fy) = (map.apply(&x)?, map.apply(&y)?);
        dev = dev.max((distance(d, &fx, &fy)? - distance(d, &x, &y)?).abs());
    }
    Ok(dev)
}

fn projective_invariance(seed: u64, n: usize, rng: &mut ChaCha8Rng) -> ExperimentReport {
    const PAIRS: usize = 5;
    let mut r = ExperimentReport::new("projective-invariance", &[3], seed, n);
    r.tolerance("distance", 1e-9);
    let fixtures = [simplex2(), square(), ConvexDomain::unit_ball(2)];
    let mut dev = [0.0f64; 3];
    for k in 0..n {
        let which = k % 3;
        let map = match which {
            0 => random_simplex_map(rng),
            1 => random_square_map(rng),
            _ => random_disk_map(rng),
        };
        match invariance_deviation(&fixtures[which], &map, PAIRS, rng) {
            Ok(v) => dev[which] = dev[which].max(v),
            Err(e) => {
                r.error("invariance", e);
                return r;
            }
        }
    }
    r.check("simplex.max_deviation", dev[0], "<=", 1e-9);
    r.check("square.max_deviation", dev[1], "<=", 1e-9);
    r.check("disk.max_deviation", dev[2], "<=", 1e-9);

    // Transport to a projective image: distances agree across the fitted map.
    let src: Vec<Point> = [[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]].iter().map(|p| pt(p)).collect();
    let dst: Vec<Point> = [[0.0, 0.0], [2.0, 0.0], [1.0, 1.0], [0.0, 1.0]].iter().map(|p| pt(p)).collect();
    let res = (|| -> Result<f64> {
        let map = fit_projective(&src, &dst)?;
        let trap = ConvexDomain::polytope(&dst)?;
        let sq = square();
        let mut dev = 0.0f64;
        for _ in 0..n * PAIRS / 3 {
            let x = sample_spread(&sq, rng);
            let y = sample_spread(&sq, rng);
            dev = dev.max((distance(&trap, &map.apply(&x)?, &map.apply(&y)?)? - distance(&sq, &x, &y)?).abs());
        }
        Ok(dev)
    })();
    match res {
        Ok(v) => r.check("square_to_trapezoid.max_deviation", v, "<=", 1e-9),
        Err(e) => r.error("square_to_trapezoid", e),
    }
    r
}

/// Vertices of the hexagon `{|x−y| ≤ 1, |x−z| ≤ 1, |y−z| ≤ 1}` in `W₂`.
fn hexagon() -> ConvexDomain {
    let mut pts = Vec::new();
    for i in 0..3 {
        for sign in [1.0, -1.0] {
            let mut v = pt(&[-1.0 / 3.0; 3]);
            v[i] = 2.0 / 3.0;
            pts.push(v * sign);
        }
    }
    ConvexDomain::polytope(&pts).expect("hexagon")
}

fn lambda_isometry(seed: u64, n: usize, rng: &mut ChaCha8Rng) -> ExperimentReport {
    let mut r = ExperimentReport::new("lambda-isometry", &[4], seed, n);
    r.tolerance("isometry", 1e-9);
    r.tolerance("hexagon_norm", 1e-12);
    let lambda = |p: &Point| lambda_n(p).map(WPoint::into_inner);
    for dim in [2, 3] {
        let s = ConvexDomain::standard_simplex(dim);
        match sampled_isometry_check(&s, &VariationSpace { n: dim }, &lambda, n, 1e-9, rng) {
            Ok(rep) => r.check(&format!("n{dim}.max_deviation"), rep.max_deviation, "<", 1e-9),
            Err(e) => r.error(&format!("n{dim}"), e),
        }
    }
    let hex = hexagon();
    let mut dev = 0.0f64;
    for _ in 0..n {
        let v = WPoint::project(&Point::from_fn(3, |_, _| rng.random_range(-3.0..3.0)));
        match minkowski_functional(&hex, v.coords()) {
            Ok(p) => dev = dev.max((p - w_norm(&v)).abs()),
            Err(e) => {
                r.error("hexagon", e);
                return r;
            }
        }
    }
    r.check("hexagon.max_norm_deviation", dev, "<=", 1e-12);
    r
}

fn gamma(seed: u64, n: usize, rng: &mut ChaCha8Rng) -> ExperimentReport {
    let mut r = ExperimentReport::new("gamma", &[5], seed, n);
    r.tolerance("involution", 1e-12);
    r.tolerance("isometry", 1e-9);
    r.tolerance("collinearity_residual_min", 1e-3);
    r.tolerance("separation_min", 0.1);
    let s = simplex2();
    let mut inv = 0.0f64;
    for _ in 0..n {
        let x = sample_spread(&s, rng);
        match gamma_reciprocal(&x).and_then(|y| gamma_reciprocal(&y)) {
            Ok(back) => inv = inv.max((back - x).amax()),
            Err(e) => {
                r.error("involution", e);
                return r;
            }
        }
    }
    r.check("involution.max_error", inv, "<=", 1e-12);
    match sampled_isometry_check(&s, &s, &gamma_reciprocal, n, 1e-9, rng) {
        Ok(rep) => r.check("isometry.max_deviation", rep.max_deviation, "<=", 1e-9),
        Err(e) => r.error("isometry", e),
    }
    let proj = projectivity_check(&s, &gamma_reciprocal, n, rng);
    r.holds("projectivity.fails", !proj.passed);
    r.check("projectivity.max_collinearity_residual", proj.max_collinearity_residual, ">", 1e-3);
    focusing_at_vertices(&mut r, "vertex", &s, &s, &gamma_reciprocal, false, rng);

    // Lines into a vertex come back out of it: images of points marching to v move away.
    let mut monotone = true;
    for _ in 0..20 {
        let k = rng.random_range(0..3);
        let v = Point::from_fn(3, |i, _| if i == k { 1.0 } else { 0.0 });
        let t: f64 = rng.random_range(0.05..0.95);
        let mut q = Point::from_element(3, 0.0);
        q[(k + 1) % 3] = t;
        q[(k + 2) % 3] = 1.0 - t;
        let mut last = f64::NEG_INFINITY;
        for m in 1..30 {
            let p = &v + (&q - &v) * 0.5f64.powi(m);
            let Ok(g) = gamma_reciprocal(&p) else { continue };
            let d = (g - &v).norm();
            monotone &= d > last;
            last = d;
        }
    }
    r.holds("orientation_reversal", monotone);
    r
}

fn focusing_at_vertices(
    r: &mut ExperimentReport,
    label: &str,
    a: &ConvexDomain,
    b: &ConvexDomain,
    map: &dyn Fn(&Point) -> Result<Point>,
    expect_focusing: bool,
    rng: &mut ChaCha8Rng,
) {
    let Some(poly) = a.as_polytope() else { return };
    let mut sep_extreme = if expect_focusing { 0.0f64 } else { f64::INFINITY };
    let mut all = true;
    for e in poly.vertices().to_vec() {
        match focusing_probe(a, b, map, &e, 6, DEFAULT_HORIZON, rng) {
            Ok(v) => {
                all &= v.focusing == expect_focusing;
                sep_extreme =
                    if expect_focusing { sep_extreme.max(v.separation) } else { sep_extreme.min(v.separation) };
            }
            Err(err) => {
                r.error(label, err);
                return;
            }
        }
    }
    if expect_focusing {
        r.holds(&format!("{label}.all_focusing"), all);
        r.check(&format!("{label}.max_separation"), sep_extreme, "<", crate::isometry::FOCUS_EPS);
    } else {
        r.holds(&format!("{label}.none_focusing"), all);
        r.check(&format!("{label}.min_separation"), sep_extreme, ">", 0.1);
    }
}

fn cone_slice(seed: u64, n: usize, rng: &mut ChaCha8Rng) -> ExperimentReport {
    let mut r = ExperimentReport::new("cone-slice", &[6], seed, n);
    r.tolerance("agreement", 1e-9);
    let cases: [(&str, ConvexDomain, Result<Cone>); 2] =
        [("orthant_simplex", simplex2(), Ok(Cone::orthant(3))), ("square_cone", square(), cone_over(&square()))];
    for (label, d, cone) in cases {
        let cone = match cone {
            Ok(c) => c,
            Err(e) => {
                r.error(label, e);
                continue;
            }
        };
        let mut dev = 0.0f64;
        let res = (|| -> Result<()> {
            for _ in 0..n {
                let x = sample_spread(&d, rng);
                let y = sample_spread(&d, rng);
                // the cone metric ignores positive scalings of either argument
                let sx: f64 = rng.random_range(0.1..10.0);
                let sy: f64 = rng.random_range(0.1..10.0);
                let dc = cone_distance(&cone, &(lift(&d, &x) * sx), &(lift(&d, &y) * sy))?;
                dev = dev.max((dc - distance(&d, &x, &y)?).abs());
            }
            Ok(())
        })();
        match res {
            Ok(()) => r.check(&format!("{label}.max_deviation"), dev, "<=", 1e-9),
            Err(e) => r.error(label, e),
        }
    }
    r
}

fn rigidity(seed: u64, n: usize, rng: &mut ChaCha8Rng) -> ExperimentReport {
    let mut r = ExperimentReport::new("rigidity", &[7], seed, n);
    r.tolerance("additivity", 1e-7);
    let sq = square();
    let res = (|| -> Result<()> {
        // edge-to-edge chords: not rigid, with a bent geodesic through z
        let (mut additivity, mut offset, mut rigid_edge) = (0.0f64, f64::INFINITY, false);
        for _ in 0..n {
            let (a, b) = (rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5));
            let x = pt(&[-0.5, b]);
            let y = pt(&[0.5, a]);
            let rig = is_rigid_chord(&sq, &x, &y)?;
            rigid_edge |= rig.rigid;
            if let Some(w) = rig.witness {
                additivity = additivity
                    .max((distance(&sq, &x, &w.z)? + distance(&sq, &w.z, &y)? - distance(&sq, &x, &y)?).abs());
                offset = offset.min(crate::linalg::distance_to_line(&w.z, &x, &y));
            } else {
                additivity = f64::INFINITY;
            }
        }
        r.holds("edge_chords.non_rigid", !rigid_edge);
        r.check("edge_chords.witness_additivity", additivity, "<=", 1e-7);
        r.check("edge_chords.witness_offset", offset, ">", 1e-9);

        // chords ending at a vertex
        let mut all_rigid = true;
        let corners = [[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]];
        for _ in 0..n {
            let v = pt(&corners[rng.random_range(0..4)]);
            let target = sample_spread(&sq, rng);
            if (&target - &v).norm() < 0.1 {
                continue;
            }
            let x = &v + (&target - &v) * 0.3;
            let y = &v + (&target - &v) * 0.7;
            all_rigid &= is_rigid_chord(&sq, &x, &y)?.rigid;
        }
        r.holds("vertex_chords.rigid", all_rigid);

        // lines joining interior points of skew edges of the 3-simplex
        let s3 = ConvexDomain::standard_simplex(3);
        let e = |i: usize| Point::from_fn(4, |k, _| if k == i { 1.0 } else { 0.0 });
        let mut skew_rigid = true;
        for _ in 0..n {
            let (i, j, k, l) = [(0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2)][rng.random_range(0..3)];
            let (s, t): (f64, f64) = (rng.random_range(0.1..0.9), rng.random_range(0.1..0.9));
            let p = e(i) * s + e(j) * (1.0 - s);
            let q = e(k) * t + e(l) * (1.0 - t);
            let x = &p + (&q - &p) * 0.25;
            let y = &p + (&q - &p) * 0.75;
            skew_rigid &= is_rigid_chord(&s3, &x, &y)?.rigid;
        }
        r.holds("skew_edge_chords.rigid", skew_rigid);
        Ok(())
    })();
    if let Err(e) = res {
        r.error("rigidity", e);
    }
    r
}

fn asymptotics(seed: u64, steps: usize) -> ExperimentReport {
    let mut r = ExperimentReport::new("asymptotics", &[8], seed, steps);
    r.tolerance("divergence_bound", DIVERGENCE_BOUND);
    r.tolerance("parallel_limit", 1e-6);
    let sq = square();
    let res = (|| -> Result<()> {
        let a = pt(&[1.0, 1.0]);
        let r1 = sq.ray_towards(&pt(&[-0.5, 0.2]), &a)?;
        let r2 = sq.ray_towards(&pt(&[0.3, -0.6]), &a)?;
        let p = asymptotic_profile(&sq, &r1, &r2, steps);
        r.check("same_vertex.sup", p.sup(), "<", DIVERGENCE_BOUND);

        let r1 = sq.ray_towards(&pt(&[-0.5, 0.0]), &pt(&[-0.5, 1.0]))?;
        let r2 = sq.ray_towards(&pt(&[0.5, 0.0]), &pt(&[0.5, 1.0]))?;
        let p = asymptotic_profile(&sq, &r1, &r2, steps);
        r.metric("parallel.last", p.last());
        r.check("parallel.limit_error", (p.last() - 9f64.ln()).abs(), "<=", 1e-6);

        let r1 = sq.ray_towards(&pt(&[0.0, 0.0]), &pt(&[1.0, 1.0]))?;
        let r2 = sq.ray_towards(&pt(&[0.0, 0.0]), &pt(&[0.0, 1.0]))?;
        let p = asymptotic_profile(&sq, &r1, &r2, steps);
        r.metric("vertex_edge.sup", p.sup());
        r.holds("vertex_edge.divergence_bound_hit", p.diverges());
        Ok(())
    })();
    if let Err(e) = res {
        r.error("asymptotics", e);
    }
    r
}

fn index2(seed: u64, n: usize, rng: &mut ChaCha8Rng) -> ExperimentReport {
    let mut r = ExperimentReport::new("index2", &[9], seed, n);
    r.tolerance("collinearity_residual", 1e-7);
    r.tolerance("cross_ratio", 1e-7);
    let s = simplex2();
    let (mut all_projective, mut tau2_nonprojective) = (true, true);
    let (mut residual, mut cr) = (0.0f64, 0.0f64);
    let mut last = None;
    for _ in 0..n {
        let p = random_simplex_map(rng);
        let tau2 = {
            let p = p.clone();
            move |x: &Point| gamma_reciprocal(&p.apply(x)?)
        };
        let composed = {
            let tau2 = tau2.clone();
            move |x: &Point| gamma_reciprocal(&tau2(x)?)
        };
        tau2_nonprojective &= !projectivity_check(&s, &tau2, 20, rng).passed;
        let rep = projectivity_check(&s, &composed, 20, rng);
        all_projective &= rep.passed;
        residual = residual.max(rep.max_collinearity_residual);
        cr = cr.max(rep.max_cross_ratio_deviation);
        last = Some(composed);
    }
    r.holds("tau2.non_projective", tau2_nonprojective);
    r.holds("composed.projective", all_projective);
    r.check("composed.max_collinearity_residual", residual, "<", 1e-7);
    r.check("composed.max_cross_ratio_deviation", cr, "<", 1e-7);
    if let Some(composed) = last {
        focusing_at_vertices(&mut r, "composed", &s, &s, &composed, true, rng);
    }
    r
}

/// Convex quadrilateral with vertices on a random ellipse at well separated angles.
fn random_quadrilateral(rng: &mut ChaCha8Rng) -> Vec<Point> {
    let base = rng.random_range(0.0..std::f64::consts::TAU);
    let (a, b) = (rng.random_range(0.5..3.0), rng.random_range(0.5..3.0));
    let (cx, cy) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
    (0..4)
        .map(|k| {
            let t: f64 = base + std::f64::consts::FRAC_PI_2 * (k as f64 + rng.random_range(-0.3..0.3));
            pt(&[cx + a * t.cos(), cy + b * t.sin()])
        })
        .collect()
}

fn random_triangle(rng: &mut ChaCha8Rng) -> Vec<Point> {
    loop {
        let pts: Vec<Point> = (0..3).map(|_| pt(&[rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)])).collect();
        let area =
            ((&pts[1] - &pts[0])[0] * (&pts[2] - &pts[0])[1] - (&pts[1] - &pts[0])[1] * (&pts[2] - &pts[0])[0]).abs();
        if area > 0.5 {
            return pts;
        }
    }
}

/// Largest distance from the image of a vertex of `p` to the nearest vertex of `q`.
fn vertex_residual(map: &ProjectiveMap, p: &ConvexDomain, q: &[Point]) -> Result<f64> {
    let mut worst = 0.0f64;
    for v in p.as_polytope().map(|x| x.vertices()).unwrap_or_default() {
        let img = map.apply(v)?;
        worst = worst.max(q.iter().map(|w| (&img - w).norm()).fold(f64::INFINITY, f64::min));
    }
    Ok(worst)
}

fn classify(seed: u64, n: usize, rng: &mut ChaCha8Rng) -> ExperimentReport {
    let mut r = ExperimentReport::new("classify2d", &[10], seed, n);
    r.tolerance("vertex_residual", 1e-7);
    let res = (|| -> Result<()> {
        let (mut tri_ok, mut tri_res) = (true, 0.0f64);
        let (mut quad_ok, mut quad_res) = (true, 0.0f64);
        let mut sq_tri_ok = true;
        let sq = square();
        let s = simplex2();
        for _ in 0..n {
            let tri = random_triangle(rng);
            let t = ConvexDomain::polytope(&tri)?;
            let c = classify_2d(&s, &t)?;
            tri_ok &= c.verdict == Verdict::ProjectivelyEquivalent;
            if let Some(m) = &c.map {
                tri_res = tri_res.max(vertex_residual(m, &s, &tri)?);
            }
            sq_tri_ok &= classify_2d(&sq, &t)?.verdict == Verdict::NotIsometric;

            let quad = random_quadrilateral(rng);
            let qd = ConvexDomain::polytope(&quad)?;
            let c = classify_2d(&sq, &qd)?;
            quad_ok &= c.verdict == Verdict::ProjectivelyEquivalent && c.map.is_some();
            if let Some(m) = &c.map {
                quad_res = quad_res.max(vertex_residual(m, &sq, &quad)?);
            }
        }
        r.holds("triangle_triangle.equivalent", tri_ok);
        r.check("triangle_triangle.max_vertex_residual", tri_res, "<", 1e-7);
        r.holds("square_triangle.not_isometric", sq_tri_ok);
        r.holds("square_quadrilateral.equivalent", quad_ok);
        r.check("square_quadrilateral.max_vertex_residual", quad_res, "<", 1e-7);
        Ok(())
    })();
    if let Err(e) = res {
        r.error("classify2d", e);
    }
    r
}

fn vinberg(seed: u64, n: usize, rng: &mut ChaCha8Rng) -> ExperimentReport {
    let mut r = ExperimentReport::new("vinberg", &[11], seed, n);
    r.tolerance("orthant_vs_gamma", 1e-12);
    r.tolerance("lorentz_isometry", 1e-9);
    let s = simplex2();
    let orthant_slice = |x: &Point| -> Result<Point> {
        let star = vinberg_star(ConeKind::Orthant, x)?;
        let total = star.sum();
        Ok(star / total)
    };
    let mut dev = 0.0f64;
    for _ in 0..n {
        let x = sample_spread(&s, rng);
        match (orthant_slice(&x), gamma_reciprocal(&x)) {
            (Ok(a), Ok(b)) => dev = dev.max((a - b).amax()),
            (Err(e), _) | (_, Err(e)) => {
                r.error("orthant", e);
                return r;
            }
        }
    }
    r.check("orthant.max_deviation_from_gamma", dev, "<=", 1e-12);
    let proj = projectivity_check(&s, &orthant_slice, n, rng);
    r.holds("orthant.non_projective", !proj.passed);

    // x₁ = 1 slice of the Lorentz cone is the unit disk
    let disk = ConvexDomain::unit_ball(2);
    let lorentz_slice = |p: &Point| -> Result<Point> {
        let star = vinberg_star(ConeKind::Lorentz, &pt(&[1.0, p[0], p[1]]))?;
        Ok(pt(&[star[1] / star[0], star[2] / star[0]]))
    };
    let proj = projectivity_check(&disk, &lorentz_slice, n, rng);
    r.holds("lorentz.projective", proj.passed);
    r.check("lorentz.max_collinearity_residual", proj.max_collinearity_residual, "<", 1e-7);
    match sampled_isometry_check(&disk, &disk, &lorentz_slice, n, 1e-9, rng) {
        Ok(rep) => r.check("lorentz.max_isometry_deviation", rep.max_deviation, "<=", 1e-9),
        Err(e) => r.error("lorentz", e),
    }
    r
}

/// Least-squares fit of `a ↦ k a + c` to samples of `f`; returns `(k, c, max residual)`.
pub fn fit_scaling(samples: &[(Point, Point)]) -> (f64, Point, f64) {
    let n = samples[0].0.len();
    let rows = samples.len() * n;
    let mut design = DMatrix::zeros(rows, n + 1);
    let mut rhs = DVector::zeros(rows);
    for (s, (a, fa)) in samples.iter().enumerate() {
        for i in 0..n {
            design[(s * n + i, 0)] = a[i];
            design[(s * n + i, 1 + i)] = 1.0;
            rhs[s * n + i] = fa[i];
        }
    }
    let sol = design.clone().svd(true, true).solve(&rhs, 1e-14).expect("SVD solve");
    let k = sol[0];
    let c = sol.rows(1, n).into_owned();
    let worst = samples.iter().map(|(a, fa)| (fa - (a * k + &c)).amax()).fold(0.0, f64::max);
    (k, c, worst)
}

fn conjugation(seed: u64, n: usize, rng: &mut ChaCha8Rng) -> ExperimentReport {
    const GRID: usize = 21;
    let mut r = ExperimentReport::new("conjugation", &[12], seed, n);
    r.tolerance("affine_deviation", 1e-7);
    let (mut worst, mut k_err, mut c_err) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..n {
        let d: Vec<f64> = (0..3).map(|_| rng.random_range(-2.0f64..2.0).exp()).collect();
        let f = |a: &Point| -> Result<Point> {
            let x = lambda_n_inverse(&t_n_inverse(a));
            let y = Point::from_fn(3, |i, _| d[i] * x[i]);
            let total = y.sum();
            Ok(t_n(&lambda_n(&(y / total))?))
        };
        let mut samples = Vec::with_capacity(GRID * GRID);
        for i in 0..GRID {
            for j in 0..GRID {
                let a = pt(&[-3.0 + 6.0 * i as f64 / (GRID - 1) as f64, -3.0 + 6.0 * j as f64 / (GRID - 1) as f64]);
                match f(&a) {
                    Ok(fa) => samples.push((a, fa)),
                    Err(e) => {
                        r.error("conjugation", e);
                        return r;
                    }
                }
            }
        }
        let (k, c, dev) = fit_scaling(&samples);
        worst = worst.max(dev);
        // diagonal maps act on Λ coordinates as translation by the centered log scale
        let expected = t_n(&WPoint::project(&pt(&[d[0].ln(), d[1].ln(), d[2].ln()])));
        k_err = k_err.max((k - 1.0).abs());
        c_err = c_err.max((c - expected).amax());
    }
    r.check("max_affine_deviation", worst, "<", 1e-7);
    r.metric("max_scale_error", k_err);
    r.metric("max_translation_error", c_err);
    r
}

fn focusing(seed: u64, rays: usize, rng: &mut ChaCha8Rng) -> ExperimentReport {
    let mut r = ExperimentReport::new("focusing", &[5, 9], seed, rays);
    r.tolerance("focus_eps", crate::isometry::FOCUS_EPS);
    let unit_square = ConvexDomain::axis_box(&[0.0, 0.0], &[1.0, 1.0]).expect("square");
    match focusing_probe(
        &unit_square,
        &unit_square,
        &|p: &Point| Ok(p.clone()),
        &pt(&[1.0, 1.0]),
        rays,
        DEFAULT_HORIZON,
        rng,
    ) {
        Ok(v) => {
            r.holds("identity.focusing", v.focusing);
            let err = v.focus.map(|f| (f - pt(&[1.0, 1.0])).norm()).unwrap_or(f64::INFINITY);
            r.check("identity.focus_error", err, "<", crate::isometry::FOCUS_EPS);
        }
        Err(e) => r.error("identity", e),
    }
    let s = simplex2();
    focusing_at_vertices(&mut r, "gamma", &s, &s, &gamma_reciprocal, false, rng);

    let sq = square();
    let src: Vec<Point> = [[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]].iter().map(|p| pt(p)).collect();
    let dst: Vec<Point> = [[0.0, 0.0], [2.0, 0.0], [1.0, 1.0], [0.0, 1.0]].iter().map(|p| pt(p)).collect();
    match (fit_projective(&src, &dst), ConvexDomain::polytope(&dst)) {
        (Ok(m), Ok(trap)) => {
            focusing_at_vertices(&mut r, "trapezoid_fit", &sq, &trap, &|p: &Point| m.apply(p), true, rng)
        }
        (Err(e), _) | (_, Err(e)) => r.error("trapezoid_fit", e),
    }

    let p = random_simplex_map(rng);
    let composed = move |x: &Point| gamma_reciprocal(&gamma_reciprocal(&p.apply(x)?)?);
    focusing_at_vertices(&mut r, "index2_pair", &s, &s, &composed, true, rng);
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(run_suite("nope", 1, None).is_err());
    }

    #[test]
    fn reports_are_reproducible() {
        let a = run_suite("known-values", 3, None).unwrap();
        let b = run_suite("known-values", 3, None).unwrap();
        assert!(a.passed);
        assert_eq!(a.to_json(), b.to_json());
        let a = run_suite("metric-axioms", 9, Some(20)).unwrap();
        let b = run_suite("metric-axioms", 9, Some(20)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn scaling_fit_recovers_affine_maps() {
        let samples: Vec<(Point, Point)> = (0..10)
            .map(|i| {
                let a = pt(&[i as f64, (i * i) as f64 * 0.1]);
                let fa = &a * 2.5 + pt(&[1.0, -3.0]);
                (a, fa)
            })
            .collect();
        let (k, c, dev) = fit_scaling(&samples);
        assert!((k - 2.5).abs() < 1e-12 && (c - pt(&[1.0, -3.0])).amax() < 1e-12 && dev < 1e-12);
    }
}
