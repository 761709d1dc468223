use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use hilbert_geom::convex::{ConvexDomain, EPS_GEO};
use hilbert_geom::error::GeometryError;
use hilbert_geom::experiments::{run_suite, SUITES};
use hilbert_geom::io::{format_sig12, load_domain, parse_point, truncate_sig12, IoError};
use hilbert_geom::isometry::classify_2d;
use hilbert_geom::linalg::Point;
use hilbert_geom::metric::{distance, is_rigid_chord};
use hilbert_geom::svg::{render_svg, Ball, Overlays, RayFamily};

#[derive(Parser)]
#[command(name = "hg", version, about = "Hilbert geometry of convex domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hilbert distance between two interior points.
    Distance {
        domain: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Whether the line through x and y is the unique geodesic between its points.
    Rigid {
        domain: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Isometry verdict for two planar domains.
    Classify { a: PathBuf, b: PathBuf },
    /// Run a property suite and print its report.
    Check {
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Draw a planar domain as SVG.
    Render {
        domain: PathBuf,
        /// Hilbert ball as `x,y:radius`; repeatable.
        #[arg(long, allow_hyphen_values = true)]
        balls: Vec<String>,
        /// Chord through two points as `x1,y1:x2,y2`; repeatable.
        #[arg(long, allow_hyphen_values = true)]
        chords: Vec<String>,
        /// Ray family as `x,y:count`; repeatable.
        #[arg(long, allow_hyphen_values = true)]
        rays: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// Exit status 1 is a failed check or computation, 2 is bad input.
enum Failure {
    Usage(String),
    Failed(String),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Self::Usage(e.to_string())
    }
}

impl From<GeometryError> for Failure {
    fn from(e: GeometryError) -> Self {
        Self::Failed(e.to_string())
    }
}

fn geometric_eps() -> Result<f64, Failure> {
    match std::env::var("HG_EPS") {
        Err(_) => Ok(EPS_GEO),
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
            _ => Err(Failure::Usage(format!("HG_EPS must be a positive number, got {s:?}"))),
        },
    }
}

fn domain(path: &Path, eps: f64) -> Result<ConvexDomain, Failure> {
    Ok(load_domain(path, eps)?.into_domain()?)
}

fn point_in(d: &ConvexDomain, text: &str) -> Result<Point, Failure> {
    let p = parse_point(text).map_err(Failure::Usage)?;
    if p.len() != d.ambient_dim() {
        return Err(Failure::Usage(format!(
            "point {text:?} has {} coordinates, domain lives in dimension {}",
            p.len(),
            d.ambient_dim()
        )));
    }
    d.require_interior(&p).map_err(|e| Failure::Usage(format!("point {text:?}: {e}")))?;
    Ok(p)
}

fn coords(p: &Point) -> Value {
    json!(p.iter().map(|&c| truncate_sig12(c)).collect::<Vec<_>>())
}

fn split_pair<'a>(text: &'a str, what: &str) -> Result<(&'a str, &'a str), Failure> {
    text.split_once(':').ok_or_else(|| Failure::Usage(format!("{what} {text:?} must have the form A:B")))
}

fn overlays(balls: &[String], chords: &[String], rays: &[String]) -> Result<Overlays, Failure> {
    let mut o = Overlays::default();
    for b in balls {
        let (c, r) = split_pair(b, "ball")?;
        let radius = r.trim().parse().map_err(|_| Failure::Usage(format!("ball radius {r:?} is not a number")))?;
        o.balls.push(Ball { center: parse_point(c).map_err(Failure::Usage)?, radius });
    }
    for c in chords {
        let (x, y) = split_pair(c, "chord")?;
        o.chords.push((parse_point(x).map_err(Failure::Usage)?, parse_point(y).map_err(Failure::Usage)?));
    }
    for r in rays {
        let (apex, n) = split_pair(r, "ray family")?;
        let count = n.trim().parse().map_err(|_| Failure::Usage(format!("ray count {n:?} is not an integer")))?;
        o.ray_families.push(RayFamily { apex: parse_point(apex).map_err(Failure::Usage)?, count });
    }
    Ok(o)
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let eps = geometric_eps()?;
    match cli.command {
        Command::Distance { domain: path, x, y } => {
            let d = domain(&path, eps)?;
            let (x, y) = (point_in(&d, &x)?, point_in(&d, &y)?);
            println!("{}", format_sig12(distance(&d, &x, &y)?));
            Ok(true)
        }
        Command::Rigid { domain: path, x, y } => {
            let d = domain(&path, eps)?;
            let (x, y) = (point_in(&d, &x)?, point_in(&d, &y)?);
            if (&x - &y).norm() == 0.0 {
                return Err(Failure::Usage("x and y must be distinct".into()));
            }
            let r = is_rigid_chord(&d, &x, &y)?;
            match r.witness {
                None => println!("rigid"),
                Some(w) => {
                    println!("non-rigid");
                    let witness = json!({
                        "z": coords(&w.z),
                        "direction_alpha": coords(&w.direction_alpha),
                        "direction_beta": coords(&w.direction_beta),
                    });
                    println!("{witness}");
                }
            }
            Ok(true)
        }
        Command::Classify { a, b } => {
            let (p, q) = (domain(&a, eps)?, domain(&b, eps)?);
            if p.intrinsic_dim() != 2 || q.intrinsic_dim() != 2 {
                return Err(Failure::Usage("classify needs two planar domains".into()));
            }
            let c = classify_2d(&p, &q)?;
            let max_deviation = match (&c.map, p.as_polytope(), q.as_polytope()) {
                (Some(m), Some(pp), Some(qq)) => {
                    let mut worst = 0.0f64;
                    for v in pp.vertices() {
                        let img = m.apply(v)?;
                        let near = qq.vertices().iter().map(|w| (&img - w).norm()).fold(f64::INFINITY, f64::min);
                        worst = worst.max(near);
                    }
                    json!(truncate_sig12(worst))
                }
                _ => Value::Null,
            };
            let witness = match &c.map {
                Some(m) => {
                    let mat = m.matrix();
                    let rows: Vec<Vec<f64>> =
                        (0..mat.nrows()).map(|i| mat.row(i).iter().map(|&v| truncate_sig12(v)).collect()).collect();
                    json!({ "matrix": rows })
                }
                None => Value::Null,
            };
            let out = json!({
                "verdict": c.verdict.as_str(),
                "witness": witness,
                "max_deviation": max_deviation,
                "seed": Value::Null,
                "non_projective_isometries": c.non_projective_isometries,
                "reason": c.reason,
            });
            println!("{}", serde_json::to_string_pretty(&out).expect("json"));
            Ok(true)
        }
        Command::Check { suite, seed, samples } => {
            if !SUITES.contains(&suite.as_str()) {
                return Err(Failure::Usage(format!("unknown suite {suite:?}; known suites: {}", SUITES.join(", "))));
            }
            if samples == Some(0) {
                return Err(Failure::Usage("--samples must be at least 1".into()));
            }
            let report = run_suite(&suite, seed, samples)?;
            println!("{}", report.to_json());
            Ok(report.passed)
        }
        Command::Render { domain: path, balls, chords, rays, output } => {
            let d = domain(&path, eps)?;
            if d.intrinsic_dim() != 2 {
                return Err(Failure::Usage(format!(
                    "render needs a planar domain, got dimension {}",
                    d.intrinsic_dim()
                )));
            }
            let o = overlays(&balls, &chords, &rays)?;
            let svg = render_svg(&d, &o).map_err(|e| Failure::Usage(e.to_string()))?;
            match output {
                Some(path) => {
                    std::fs::write(&path, svg).map_err(|e| Failure::Failed(format!("{}: {e}", path.display())))?
                }
                None => print!("{svg}"),
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("hg: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Failed(msg)) => {
            eprintln!("hg: {msg}");
            ExitCode::from(1)
        }
    }
}
