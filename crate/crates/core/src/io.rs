//! JSON ingestion of domains, cones and projective maps.
//!
//! ```json
//! {"kind":"polytope","vertices":[[0,0],[1,0],[0,1]]}
//! {"kind":"ellipsoid","center":[0,0],"shape":[[1,0],[0,1]]}
//! {"kind":"simplex","dim":2}
//! {"kind":"cone","generators":[[1,0,0],[0,1,0],[0,0,1]]}
//! {"kind":"lorentz","dim":3}
//! {"matrix":[[1,0,0],[0,1,0],[0,0,1]]}
//! ```

use std::path::Path;

use nalgebra::DMatrix;
use serde::Deserialize;
use thiserror::Error;

use crate::cone::Cone;
use crate::convex::{ConvexDomain, EPS_GEO};
use crate::error::GeometryError;
use crate::isometry::ProjectiveMap;
use crate::linalg::{pt, Point};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("validation failed: {0}")]
    Validation(#[from] GeometryError),
    #[error("{path}: {message}")]
    Read { path: String, message: String },
    #[error("expected {expected}, found {found}")]
    WrongKind { expected: &'static str, found: &'static str },
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        Self::Parse { line: e.line(), column: e.column(), message: e.to_string() }
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum DomainFile {
    Polytope { vertices: Vec<Vec<f64>> },
    Ellipsoid { center: Vec<f64>, shape: Vec<Vec<f64>> },
    Simplex { dim: usize },
    Cone { generators: Vec<Vec<f64>> },
    Lorentz { dim: usize },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapFile {
    matrix: Vec<Vec<f64>>,
}

/// A parsed domain file: either a convex domain or a cone.
#[derive(Debug, Clone)]
pub enum Loaded {
    Domain(ConvexDomain),
    Cone(Cone),
}

impl Loaded {
    pub fn into_domain(self) -> Result<ConvexDomain, IoError> {
        match self {
            Self::Domain(d) => Ok(d),
            Self::Cone(_) => Err(IoError::WrongKind { expected: "convex domain", found: "cone" }),
        }
    }

    pub fn into_cone(self) -> Result<Cone, IoError> {
        match self {
            Self::Cone(c) => Ok(c),
            Self::Domain(_) => Err(IoError::WrongKind { expected: "cone", found: "convex domain" }),
        }
    }
}

fn matrix(rows: &[Vec<f64>]) -> Result<DMatrix<f64>, GeometryError> {
    let n = rows.len();
    let m = rows.first().map(|r| r.len()).unwrap_or(0);
    if let Some(bad) = rows.iter().find(|r| r.len() != m) {
        return Err(GeometryError::DimensionMismatch { expected: m, got: bad.len() });
    }
    Ok(DMatrix::from_fn(n, m, |i, j| rows[i][j]))
}

pub fn parse_domain(text: &str) -> Result<Loaded, IoError> {
    parse_domain_eps(text, EPS_GEO)
}

/// Parses a domain, building it with geometric tolerance `eps`.
pub fn parse_domain_eps(text: &str, eps: f64) -> Result<Loaded, IoError> {
    let file: DomainFile = serde_json::from_str(text)?;
    let loaded = match file {
        DomainFile::Polytope { vertices } => {
            let pts: Vec<Point> = vertices.iter().map(|v| pt(v)).collect();
            Loaded::Domain(ConvexDomain::polytope_eps(&pts, eps)?)
        }
        DomainFile::Ellipsoid { center, shape } => {
            Loaded::Domain(ConvexDomain::ellipsoid(pt(&center), matrix(&shape)?)?.with_eps(eps))
        }
        DomainFile::Simplex { dim } => {
            if dim < 1 {
                return Err(GeometryError::DegenerateInput("simplex dimension must be at least 1".into()).into());
            }
            Loaded::Domain(ConvexDomain::standard_simplex_eps(dim, eps))
        }
        DomainFile::Cone { generators } => {
            let gens: Vec<Point> = generators.iter().map(|v| pt(v)).collect();
            Loaded::Cone(Cone::from_generators(&gens)?)
        }
        DomainFile::Lorentz { dim } => {
            if dim < 2 {
                return Err(GeometryError::DegenerateInput("Lorentz cone needs dimension at least 2".into()).into());
            }
            Loaded::Cone(Cone::lorentz(dim))
        }
    };
    Ok(loaded)
}

pub fn load_domain(path: &Path, eps: f64) -> Result<Loaded, IoError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| IoError::Read { path: path.display().to_string(), message: e.to_string() })?;
    parse_domain_eps(&text, eps)
}

/// Row-major `{"matrix": [[…], …]}` acting on the affine chart.
pub fn parse_projective_map(text: &str) -> Result<ProjectiveMap, IoError> {
    let file: MapFile = serde_json::from_str(text)?;
    Ok(ProjectiveMap::new(matrix(&file.matrix)?)?)
}

pub fn projective_map_json(map: &ProjectiveMap) -> serde_json::Value {
    let m = map.matrix();
    let rows: Vec<Vec<f64>> = (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect();
    serde_json::json!({ "matrix": rows })
}

/// Comma-separated coordinates such as `"0.5,-1"`.
pub fn parse_point(text: &str) -> Result<Point, String> {
    let coords: Result<Vec<f64>, _> = text.split(',').map(|s| s.trim().parse::<f64>()).collect();
    let coords = coords.map_err(|e| format!("invalid point {text:?}: {e}"))?;
    if coords.is_empty() {
        return Err(format!("invalid point {text:?}"));
    }
    Ok(pt(&coords))
}

/// Shortest round-trip representation cut to 12 significant digits.
pub fn format_sig12(v: f64) -> String {
    truncate_sig12(v).to_string()
}

/// `v` with its decimal expansion truncated (not rounded) to 12 significant digits.
pub fn truncate_sig12(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    let s = format!("{v:e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent form");
    let (sign, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", mantissa),
    };
    let digits: String = digits.chars().filter(|c| *c != '.').take(12).collect();
    let text = format!("{sign}{}.{}e{exp}", &digits[..1], &digits[1..]);
    text.parse().expect("valid float text")
}
