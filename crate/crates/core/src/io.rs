//! JSON schemas for bodies, path manifests, and family certificates, plus
//! atomic file output. Floats are serialized in shortest round-trip form,
//! so re-parsing an emitted file reproduces the value exactly.

use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::bodies::{lp_ball, ConvexBody, GaugeBody, LpExponent};
use crate::error::{Error, Result};

/// Wire form of a body. Polygon vertices may be given as a half-list; the
/// symmetric closure is applied on ingestion.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BodySpec {
    Polygon {
        vertices: Vec<[f64; 2]>,
    },
    Polytope3 {
        vertices: Vec<[f64; 3]>,
    },
    Lp {
        p: PValue,
        dim: usize,
    },
    Scaled {
        t: f64,
        of: Box<BodySpec>,
    },
    LinearImage {
        matrix: Vec<Vec<f64>>,
        of: Box<BodySpec>,
    },
    Intersection {
        a: Box<BodySpec>,
        b: Box<BodySpec>,
    },
    Hull {
        a: Box<BodySpec>,
        b: Box<BodySpec>,
    },
}

/// An lp exponent on the wire: a number or the string "inf".
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PValue {
    Number(f64),
    Word(String),
}

impl PValue {
    pub fn to_exponent(&self) -> Result<LpExponent> {
        let p = match self {
            PValue::Number(x) => {
                if x.is_infinite() && *x > 0.0 {
                    LpExponent::Infinity
                } else {
                    LpExponent::Finite(*x)
                }
            }
            PValue::Word(w) if w.eq_ignore_ascii_case("inf") => LpExponent::Infinity,
            PValue::Word(w) => {
                return Err(Error::input(format!("unknown lp exponent \"{w}\"")));
            }
        };
        p.validate()?;
        Ok(p)
    }

    pub fn from_exponent(p: LpExponent) -> PValue {
        match p {
            LpExponent::Finite(x) => PValue::Number(x),
            LpExponent::Infinity => PValue::Word("inf".to_string()),
        }
    }
}

pub fn spec_to_body(spec: &BodySpec) -> Result<ConvexBody> {
    match spec {
        BodySpec::Polygon { vertices } => Ok(ConvexBody::Polygon(
            crate::bodies::Polygon2::from_f64_vertices(vertices)?,
        )),
        BodySpec::Polytope3 { vertices } => {
            let mut pts = vertices.clone();
            for v in vertices {
                pts.push([-v[0], -v[1], -v[2]]);
            }
            Ok(ConvexBody::Polytope(crate::bodies::Polytope3::from_points(
                &pts,
            )?))
        }
        BodySpec::Lp { p, dim } => lp_ball(p.to_exponent()?, *dim),
        BodySpec::Scaled { t, of } => spec_to_body(of)?.scale(*t),
        BodySpec::LinearImage { matrix, of } => {
            let body = spec_to_body(of)?;
            let n = body.dim();
            if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
                return Err(Error::input(format!(
                    "matrix must be {n}x{n} to match the body dimension"
                )));
            }
            let flat: Vec<f64> = matrix.iter().flatten().cloned().collect();
            body.linear_image(&DMatrix::from_row_slice(n, n, &flat))
        }
        BodySpec::Intersection { a, b } => spec_to_body(a)?.intersect(&spec_to_body(b)?),
        BodySpec::Hull { a, b } => spec_to_body(a)?.hull_union(&spec_to_body(b)?),
    }
}

pub fn body_to_spec(body: &ConvexBody) -> BodySpec {
    match body {
        ConvexBody::Polygon(p) => BodySpec::Polygon {
            vertices: p.vertices_f64().to_vec(),
        },
        ConvexBody::Polytope(p) => BodySpec::Polytope3 {
            vertices: p.vertices().to_vec(),
        },
        ConvexBody::Gauge(g) => match g {
            GaugeBody::Lp { p, dim } => BodySpec::Lp {
                p: PValue::from_exponent(*p),
                dim: *dim,
            },
            GaugeBody::Scaled { t, of } => BodySpec::Scaled {
                t: *t,
                of: Box::new(body_to_spec(of)),
            },
            GaugeBody::LinearImage { map, of, .. } => BodySpec::LinearImage {
                matrix: (0..map.nrows())
                    .map(|i| (0..map.ncols()).map(|j| map[(i, j)]).collect())
                    .collect(),
                of: Box::new(body_to_spec(of)),
            },
            GaugeBody::Intersection(a, b) => BodySpec::Intersection {
                a: Box::new(body_to_spec(a)),
                b: Box::new(body_to_spec(b)),
            },
            GaugeBody::Hull(a, b) => BodySpec::Hull {
                a: Box::new(body_to_spec(a)),
                b: Box::new(body_to_spec(b)),
            },
        },
    }
}

pub fn read_body(path: &Path) -> Result<ConvexBody> {
    let text = std::fs::read_to_string(path)?;
    let spec: BodySpec = serde_json::from_str(&text)
        .map_err(|e| Error::input(format!("{}: {e}", path.display())))?;
    spec_to_body(&spec)
}

pub fn body_to_json(body: &ConvexBody) -> Result<String> {
    Ok(serde_json::to_string_pretty(&body_to_spec(body))?)
}

pub fn body_from_json(text: &str) -> Result<ConvexBody> {
    let spec: BodySpec = serde_json::from_str(text).map_err(|e| Error::input(e.to_string()))?;
    spec_to_body(&spec)
}

/// Manifest of an exported path: family kind, positioned distance, and the
/// sampled exponents (the per-sample files are named by these values).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PathManifest {
    pub kind: String,
    pub d: f64,
    pub lambdas: Vec<f64>,
}

/// File name of the sample at `lambda`, fixed 6-decimal formatting.
pub fn lambda_file_name(lambda: f64) -> String {
    format!("body_{lambda:.6}.json")
}

pub fn svg_file_name(lambda: f64) -> String {
    format!("body_{lambda:.6}.svg")
}

/// Per-member certificate of a family export.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyCertificate {
    pub lambda: f64,
    pub sandwich_ok: bool,
    pub new_faces: Vec<[[f64; 2]; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    pub invariant_sample: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub facet_census: Option<Vec<usize>>,
}

/// Write JSON atomically: temp file in the same directory, then rename.
pub fn write_json_atomic<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    write_text_atomic(path, &text)
}

pub fn write_text_atomic(path: &Path, text: &str) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    std::fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(
        ".{}.tmp",
        path.file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| "out".to_string())
    ));
    std::fs::write(&tmp, text)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}
