//! Interchange formats. Rationals are always written as `"p/q"` strings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::exactmath::{format_rational, parse_rational, Rational};
use crate::planefan::{LatticeVector2, PlaneFan};
use crate::shephard::{CertificateKind, PolytopalityCertificate, ShephardDiagram};
use crate::wedgepuzzle::{CharMatrix, Label, Puzzle, PuzzleEdge, PuzzleError, WedgeSignature};

#[derive(Debug, thiserror::Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("unrecognized document: expected a fan, a characteristic matrix or a puzzle")]
    UnknownShape,
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanDoc {
    pub rays: Vec<[i64; 2]>,
}

impl FanDoc {
    pub fn from_fan(fan: &PlaneFan) -> Self {
        Self {
            rays: fan.rays().iter().map(|v| [v.x, v.y]).collect(),
        }
    }

    pub fn to_fan(&self) -> Result<PlaneFan, JsonError> {
        let rays = self.rays.iter().map(|&[x, y]| LatticeVector2::new(x, y)).collect();
        PlaneFan::validate(rays).map_err(|e| JsonError::Invalid(e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnDoc {
    pub label: String,
    pub v: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub n: usize,
    pub cols: Vec<ColumnDoc>,
}

impl MatrixDoc {
    pub fn from_matrix(m: &CharMatrix) -> Self {
        Self {
            n: m.n(),
            cols: m
                .labeled_columns()
                .map(|(l, v)| ColumnDoc {
                    label: l.to_string(),
                    v: v.to_vec(),
                })
                .collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<CharMatrix, JsonError> {
        let cols = self
            .cols
            .iter()
            .map(|c| Ok((c.label.parse::<Label>().map_err(invalid)?, c.v.clone())))
            .collect::<Result<Vec<_>, JsonError>>()?;
        CharMatrix::new(self.n, cols).map_err(invalid)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub color: usize,
    pub from: Vec<usize>,
    pub to: Vec<usize>,
    pub e: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PuzzleDoc {
    pub m: usize,
    #[serde(rename = "J")]
    pub j: Vec<usize>,
    pub base: FanDoc,
    pub edges: Vec<EdgeDoc>,
}

impl PuzzleDoc {
    pub fn from_puzzle(p: &Puzzle) -> Self {
        Self {
            m: p.signature.m(),
            j: p.signature.multiplicities().to_vec(),
            base: FanDoc::from_fan(p.base()),
            edges: p
                .edges
                .iter()
                .map(|e| EdgeDoc {
                    color: e.color,
                    from: e.from.clone(),
                    to: e.to.clone(),
                    e: e.e,
                })
                .collect(),
        }
    }

    pub fn to_puzzle(&self) -> Result<Puzzle, JsonError> {
        if self.j.len() != self.m {
            return Err(JsonError::Invalid(format!(
                "J has {} entries, m = {}",
                self.j.len(),
                self.m
            )));
        }
        let sig = WedgeSignature::new(self.j.clone()).map_err(invalid)?;
        let base = self.base.to_fan()?;
        let edges: Vec<PuzzleEdge> = self
            .edges
            .iter()
            .map(|e| PuzzleEdge {
                color: e.color,
                from: e.from.clone(),
                to: e.to.clone(),
                e: e.e,
            })
            .collect();
        Puzzle::from_edges(&sig, &base, &edges).map_err(invalid)
    }
}

fn invalid(e: PuzzleError) -> JsonError {
    JsonError::Invalid(e.to_string())
}

/// A parsed input document.
#[derive(Clone, Debug)]
pub enum InputDoc {
    Fan(FanDoc),
    Matrix(MatrixDoc),
    Puzzle(PuzzleDoc),
}

impl InputDoc {
    pub fn parse(text: &str) -> Result<Self, JsonError> {
        let value: Value = serde_json::from_str(text)?;
        let has = |k: &str| value.get(k).is_some();
        if has("edges") {
            Ok(Self::Puzzle(serde_json::from_value(value)?))
        } else if has("cols") {
            Ok(Self::Matrix(serde_json::from_value(value)?))
        } else if has("rays") {
            Ok(Self::Fan(serde_json::from_value(value)?))
        } else {
            Err(JsonError::UnknownShape)
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Fan(_) => "fan",
            Self::Matrix(_) => "matrix",
            Self::Puzzle(_) => "puzzle",
        }
    }
}

pub fn rational(v: &Rational) -> Value {
    Value::String(format_rational(v))
}

pub fn rationals(vs: &[Rational]) -> Value {
    Value::Array(vs.iter().map(rational).collect())
}

/// Reads a `"p/q"` string (or a plain integer) back.
pub fn read_rational(v: &Value) -> Result<Rational, JsonError> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|e| JsonError::Invalid(e.to_string())),
        Value::Number(n) if n.is_i64() => Ok(Rational::from(n.as_i64().expect("checked"))),
        _ => Err(JsonError::Invalid(format!("expected a rational, found {v}"))),
    }
}

pub fn read_rationals(v: &Value) -> Result<Vec<Rational>, JsonError> {
    v.as_array()
        .ok_or_else(|| JsonError::Invalid(format!("expected an array, found {v}")))?
        .iter()
        .map(read_rational)
        .collect()
}

fn cone_key(cone: &[Label]) -> String {
    cone.iter().map(Label::to_string).collect::<Vec<_>>().join(",")
}

/// Certificate document for one oracle run.
pub fn certificate(cert: &PolytopalityCertificate) -> Value {
    let mut out = serde_json::Map::new();
    let verdict = if cert.is_positive() {
        "projective"
    } else {
        "not_strongly_polytopal"
    };
    out.insert("verdict".into(), json!(verdict));
    let kind = match cert.kind {
        CertificateKind::InteriorPoint => "interior_point",
        CertificateKind::SupportHeights => "support_heights",
        CertificateKind::EmptyWitness => "empty",
    };
    out.insert("kind".into(), json!(kind));
    if let Some(p) = &cert.point {
        out.insert("witness".into(), rationals(p));
    }
    if let Some(bary) = &cert.barycentric {
        let map: BTreeMap<String, Value> = bary
            .iter()
            .map(|(cone, lambda)| (cone_key(cone), rationals(lambda)))
            .collect();
        out.insert("barycentric".into(), json!(map));
    }
    if let Some(h) = &cert.heights {
        out.insert("heights".into(), rationals(h));
    }
    if let Some(s) = &cert.slack {
        out.insert("slack".into(), rational(s));
    }
    Value::Object(out)
}

pub fn diagram(d: &ShephardDiagram) -> Value {
    let points: BTreeMap<String, Value> = d
        .labels
        .iter()
        .zip(&d.points)
        .map(|(l, p)| (l.to_string(), rationals(p)))
        .collect();
    json!({
        "ambient_dim": d.ambient_dim,
        "labels": d.labels.iter().map(Label::to_string).collect::<Vec<_>>(),
        "weights": rationals(&d.relation.weights),
        "points": points,
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::qf;

    #[test]
    fn fan_round_trip() {
        let f = PlaneFan::pentagon(2);
        let doc = FanDoc::from_fan(&f);
        let text = serde_json::to_string(&doc).unwrap();
        assert_eq!(text, r#"{"rays":[[1,0],[0,1],[-1,1],[-1,0],[2,-1]]}"#);
        let InputDoc::Fan(back) = InputDoc::parse(&text).unwrap() else {
            panic!("fan expected");
        };
        assert_eq!(back.to_fan().unwrap(), f);
    }

    #[test]
    fn matrix_round_trip() {
        let m = CharMatrix::from_fan(&PlaneFan::projective_plane());
        let doc = MatrixDoc::from_matrix(&m);
        let text = serde_json::to_string(&doc).unwrap();
        assert!(text.contains(r#""label":"1_1""#));
        let InputDoc::Matrix(back) = InputDoc::parse(&text).unwrap() else {
            panic!("matrix expected");
        };
        assert_eq!(back.to_matrix().unwrap(), m);
    }

    #[test]
    fn puzzle_round_trip() {
        let sig = WedgeSignature::new(vec![2, 1, 1, 1, 1]).unwrap();
        let axes = BTreeMap::from([(Label::new(1, 2), 1)]);
        let p = Puzzle::from_axes(&sig, &PlaneFan::pentagon(2), &axes).unwrap();
        let doc = PuzzleDoc::from_puzzle(&p);
        let text = serde_json::to_string(&doc).unwrap();
        assert!(text.contains(r#""J":[2,1,1,1,1]"#));
        let InputDoc::Puzzle(back) = InputDoc::parse(&text).unwrap() else {
            panic!("puzzle expected");
        };
        assert_eq!(back.to_puzzle().unwrap(), p);
    }

    #[test]
    fn rationals_are_strings() {
        assert_eq!(rational(&qf(-3, 6)), json!("-1/2"));
        assert_eq!(rational(&qf(4, 1)), json!("4/1"));
        assert_eq!(read_rational(&json!("6/4")).unwrap(), qf(3, 2));
        assert_eq!(read_rational(&json!(5)).unwrap(), qf(5, 1));
        assert!(read_rational(&json!(0.5)).is_err());
    }

    #[test]
    fn unknown_documents() {
        assert!(matches!(InputDoc::parse("{}"), Err(JsonError::UnknownShape)));
        assert!(matches!(InputDoc::parse("{"), Err(JsonError::Syntax(_))));
        let bad = r#"{"rays":[[1,0],[0,1],[-1,-2]]}"#;
        let InputDoc::Fan(doc) = InputDoc::parse(bad).unwrap() else {
            panic!("fan expected");
        };
        assert!(doc.to_fan().is_err());
    }
}
