//! SVG figures of planar domains with Hilbert balls, chords, ray families and curves.

use std::fmt::Write as _;

use crate::convex::{AffineFrame, ConvexDomain};
use crate::error::{GeometryError, Result};
use crate::isometry::classify::cyclic_vertices;
use crate::linalg::{distance_to_line, Point};
use crate::metric::distance;

const BALL_DIRECTIONS: usize = 360;
const ELLIPSE_SAMPLES: usize = 360;
const WIDTH: f64 = 400.0;

#[derive(Debug, Clone)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
}

/// Segments from `apex` to `count` boundary points spaced evenly along the outline.
#[derive(Debug, Clone)]
pub struct RayFamily {
    pub apex: Point,
    pub count: usize,
}

#[derive(Debug, Clone, Default)]
pub struct Overlays {
    pub balls: Vec<Ball>,
    /// Each pair is extended to the full chord through it.
    pub chords: Vec<(Point, Point)>,
    pub ray_families: Vec<RayFamily>,
    pub polylines: Vec<Vec<Point>>,
}

fn drawing_frame(domain: &ConvexDomain) -> AffineFrame {
    if domain.ambient_dim() == 2 {
        AffineFrame::identity(2)
    } else {
        domain.frame()
    }
}

/// Closed boundary curve in ambient coordinates.
pub fn outline(domain: &ConvexDomain) -> Result<Vec<Point>> {
    if domain.intrinsic_dim() != 2 {
        return Err(GeometryError::Unsupported(format!(
            "rendering needs a planar domain, got dimension {}",
            domain.intrinsic_dim()
        )));
    }
    match domain {
        ConvexDomain::Polytope(p) => Ok(cyclic_vertices(p)),
        ConvexDomain::Ellipsoid(_) => {
            let frame = drawing_frame(domain);
            let c = domain.centroid();
            Ok((0..ELLIPSE_SAMPLES)
                .map(|k| {
                    let a = std::f64::consts::TAU * k as f64 / ELLIPSE_SAMPLES as f64;
                    let u = frame.vector_from_local(&Point::from_vec(vec![a.cos(), a.sin()]));
                    let (_, hi) = domain.chord_params(&c, &u);
                    &c + u * hi
                })
                .collect())
        }
    }
}

/// Boundary of the Hilbert ball `{p : d(center, p) < radius}`, one point per direction.
pub fn hilbert_ball(domain: &ConvexDomain, center: &Point, radius: f64) -> Result<Vec<Point>> {
    domain.require_interior(center)?;
    if !(radius.is_finite() && radius > 0.0) {
        return Err(GeometryError::DegenerateInput("ball radius must be positive".into()));
    }
    let frame = drawing_frame(domain);
    let mut pts = Vec::with_capacity(BALL_DIRECTIONS);
    for k in 0..BALL_DIRECTIONS {
        let a = std::f64::consts::TAU * k as f64 / BALL_DIRECTIONS as f64;
        let u = frame.vector_from_local(&Point::from_vec(vec![a.cos(), a.sin()]));
        let (_, hi) = domain.chord_params(center, &u);
        let (mut lo_t, mut hi_t) = (0.0, hi);
        for _ in 0..200 {
            let mid = 0.5 * (lo_t + hi_t);
            if mid <= lo_t || mid >= hi_t {
                break;
            }
            let p = center + &u * mid;
            match distance(domain, center, &p) {
                Ok(d) if d < radius => lo_t = mid,
                _ => hi_t = mid,
            }
        }
        pts.push(center + &u * lo_t);
    }
    Ok(pts)
}

/// Images of `samples + 1` evenly spaced points of the segment `[x, y]`.
pub fn mapped_segment(
    map: &dyn Fn(&Point) -> Result<Point>,
    x: &Point,
    y: &Point,
    samples: usize,
) -> Result<Vec<Point>> {
    let samples = samples.max(1);
    (0..=samples).map(|k| map(&(x + (y - x) * (k as f64 / samples as f64)))).collect()
}

/// Largest distance of a polyline's points from the line through its endpoints.
pub fn straightness_residual(polyline: &[Point]) -> f64 {
    let (Some(a), Some(b)) = (polyline.first(), polyline.last()) else {
        return 0.0;
    };
    polyline.iter().map(|p| distance_to_line(p, a, b)).fold(0.0, f64::max)
}

struct Viewport {
    frame: AffineFrame,
    min: (f64, f64),
    scale: f64,
    height: f64,
}

impl Viewport {
    fn fit(frame: AffineFrame, outline: &[Point]) -> Self {
        let local: Vec<_> = outline.iter().map(|p| frame.to_local(p)).collect();
        let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for l in &local {
            x0 = x0.min(l[0]);
            x1 = x1.max(l[0]);
            y0 = y0.min(l[1]);
            y1 = y1.max(l[1]);
        }
        let margin = 0.05 * (x1 - x0).max(y1 - y0);
        let (x0, y0, x1, y1) = (x0 - margin, y0 - margin, x1 + margin, y1 + margin);
        let scale = WIDTH / (x1 - x0);
        Self { frame, min: (x0, y0), scale, height: (y1 - y0) * scale }
    }

    fn map(&self, p: &Point) -> (f64, f64) {
        let l = self.frame.to_local(p);
        ((l[0] - self.min.0) * self.scale, self.height - (l[1] - self.min.1) * self.scale)
    }

    fn points_attr(&self, pts: &[Point]) -> String {
        let mut s = String::new();
        for (i, p) in pts.iter().enumerate() {
            let (x, y) = self.map(p);
            if i > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{x:.3},{y:.3}");
        }
        s
    }

    fn line(&self, out: &mut String, class: &str, a: &Point, b: &Point) {
        let (x1, y1) = self.map(a);
        let (x2, y2) = self.map(b);
        let _ = writeln!(out, r#"  <line class="{class}" x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}"/>"#);
    }
}

/// Evenly spaced points along a closed polygonal curve.
fn along_outline(curve: &[Point], count: usize) -> Vec<Point> {
    let n = curve.len();
    let lengths: Vec<f64> = (0..n).map(|i| (&curve[(i + 1) % n] - &curve[i]).norm()).collect();
    let total: f64 = lengths.iter().sum();
    (0..count)
        .map(|k| {
            let mut s = total * (k as f64 + 0.5) / count as f64;
            let mut i = 0;
            while i + 1 < n && s > lengths[i] {
                s -= lengths[i];
                i += 1;
            }
            let t = if lengths[i] > 0.0 { s / lengths[i] } else { 0.0 };
            &curve[i] + (&curve[(i + 1) % n] - &curve[i]) * t
        })
        .collect()
}

pub fn render_svg(domain: &ConvexDomain, overlays: &Overlays) -> Result<String> {
    let boundary = outline(domain)?;
    let vp = Viewport::fit(drawing_frame(domain), &boundary);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.3} {h:.3}">"#,
        w = WIDTH,
        h = vp.height
    );
    out.push_str(concat!(
        "  <style>.domain{fill:#f4f4f4;stroke:#000;stroke-width:1.5}",
        ".ball{fill:none;stroke:#1f77b4}.chord{stroke:#d62728}",
        ".ray{stroke:#2ca02c;stroke-width:0.7}.curve{fill:none;stroke:#9467bd}</style>\n"
    ));
    let _ = writeln!(out, r#"  <polygon class="domain" points="{}"/>"#, vp.points_attr(&boundary));
    for ball in &overlays.balls {
        let pts = hilbert_ball(domain, &ball.center, ball.radius)?;
        let _ = writeln!(out, r#"  <polygon class="ball" points="{}"/>"#, vp.points_attr(&pts));
    }
    for (x, y) in &overlays.chords {
        let chord = domain.chord_through(x, y)?;
        vp.line(&mut out, "chord", &chord.alpha, &chord.beta);
    }
    for fam in &overlays.ray_families {
        for target in along_outline(&boundary, fam.count) {
            vp.line(&mut out, "ray", &fam.apex, &target);
        }
    }
    for pl in &overlays.polylines {
        let _ = writeln!(out, r#"  <polyline class="curve" points="{}"/>"#, vp.points_attr(pl));
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isometry::gamma_reciprocal;
    use crate::linalg::pt;

    fn square() -> ConvexDomain {
        ConvexDomain::axis_box(&[-1.0, -1.0], &[1.0, 1.0]).unwrap()
    }

    #[test]
    fn ball_in_square_stays_inside() {
        let sq = square();
        let c = pt(&[0.0, 0.0]);
        let r = 3f64.ln();
        let ball = hilbert_ball(&sq, &c, r).unwrap();
        assert_eq!(ball.len(), BALL_DIRECTIONS);
        for p in &ball {
            assert!(sq.contains_interior(p));
            assert!((distance(&sq, &c, p).unwrap() - r).abs() < 1e-9);
        }
        // along the axes d = ln 3 is reached at 1/2
        assert!((ball[0][0] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn gamma_image_of_chord_is_curved() {
        let s = ConvexDomain::standard_simplex(2);
        let x = pt(&[0.6, 0.3, 0.1]);
        let y = pt(&[0.1, 0.3, 0.6]);
        let curve = mapped_segment(&gamma_reciprocal, &x, &y, 50).unwrap();
        assert!(straightness_residual(&curve) > 1e-3);
        let svg = render_svg(&s, &Overlays { polylines: vec![curve], ..Default::default() }).unwrap();
        assert!(svg.contains(r#"class="curve""#));
    }

    #[test]
    fn empty_overlays_give_outline_only() {
        let svg = render_svg(&square(), &Overlays::default()).unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polygon").count(), 1);
        assert!(!svg.contains("<line") && !svg.contains("<polyline"));
    }

    #[test]
    fn overlays_render() {
        let o = Overlays {
            balls: vec![Ball { center: pt(&[0.0, 0.0]), radius: 0.5 }],
            chords: vec![(pt(&[-0.5, 0.0]), pt(&[0.5, 0.2]))],
            ray_families: vec![RayFamily { apex: pt(&[1.0, 1.0]), count: 5 }],
            polylines: vec![],
        };
        let svg = render_svg(&ConvexDomain::unit_ball(2), &o).unwrap();
        assert_eq!(svg.matches("<polygon").count(), 2);
        assert_eq!(svg.matches(r#"class="ray""#).count(), 5);
        assert_eq!(svg.matches(r#"class="chord""#).count(), 1);
    }

    #[test]
    fn non_planar_is_unsupported() {
        let cube = ConvexDomain::axis_box(&[0.0; 3], &[1.0; 3]).unwrap();
        assert!(matches!(render_svg(&cube, &Overlays::default()), Err(GeometryError::Unsupported(_))));
    }
}
