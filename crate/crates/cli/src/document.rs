//! JSON descriptions of state spaces.
//!
//! ```json
//! {"type": "polytope", "vertices": [[0, 0], [1, 0], ["1/2", "0.75"]]}
//! {"type": "ball", "dim": 3, "center": [0, 0, 0], "radius": 1}
//! {"type": "generator", "name": "polygon", "params": {"n": 6}}
//! ```
//!
//! Rationals are JSON integers, decimal strings or `"p/q"` strings. JSON
//! floats are rejected in polytope vertices and converted exactly from their
//! decimal text for the ball center and radius. The canonical encoding writes
//! every rational as a string.

use gptlab_core::rational::parse_rational;
use gptlab_core::{Point, Rational, SpaceDescription, StateSpace};
use serde_json::{json, Map, Value};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceDocument {
    Polytope { vertices: Vec<Point> },
    Ball { dim: usize, center: Point, radius: Rational },
    Generator(Generator),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    Simplex { c: usize },
    Cube { d: usize },
    Polygon { n: usize },
    Disk,
    Ball { dim: usize },
}

fn parse_err(msg: impl Into<String>) -> CliError {
    CliError::Parse(msg.into())
}

fn rational(value: &Value, allow_float: bool) -> Result<Rational> {
    match value {
        Value::String(s) => parse_rational(s).map_err(|e| parse_err(e.to_string())),
        Value::Number(n) if n.is_i64() || n.is_u64() => {
            parse_rational(&n.to_string()).map_err(|e| parse_err(e.to_string()))
        }
        Value::Number(n) if allow_float => {
            let f = n.as_f64().ok_or_else(|| parse_err(format!("bad number {n}")))?;
            // Rust prints the shortest decimal that round-trips.
            parse_rational(&format!("{f:e}")).map_err(|e| parse_err(e.to_string()))
        }
        Value::Number(n) => Err(parse_err(format!(
            "floating-point value {n} is not allowed here; use a string such as \"1/3\" or \"0.25\""
        ))),
        other => Err(parse_err(format!("expected a rational, found {other}"))),
    }
}

fn point(value: &Value, allow_float: bool) -> Result<Point> {
    let items = value
        .as_array()
        .ok_or_else(|| parse_err(format!("expected an array of rationals, found {value}")))?;
    Ok(Point::new(items.iter().map(|v| rational(v, allow_float)).collect::<Result<_>>()?))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| parse_err(format!("missing field {key:?}")))
}

fn count(value: &Value, key: &str) -> Result<usize> {
    value
        .as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| parse_err(format!("{key:?} must be a nonnegative integer")))
}

impl SpaceDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
        Self::from_value(&value)
    }

    pub fn from_value(value: &Value) -> Result<Self> {
        let obj = value.as_object().ok_or_else(|| parse_err("expected a JSON object"))?;
        let kind = field(obj, "type")?.as_str().ok_or_else(|| parse_err("\"type\" must be a string"))?;
        match kind {
            "polytope" => {
                let vertices = field(obj, "vertices")?
                    .as_array()
                    .ok_or_else(|| parse_err("\"vertices\" must be an array"))?
                    .iter()
                    .map(|v| point(v, false))
                    .collect::<Result<_>>()?;
                Ok(SpaceDocument::Polytope { vertices })
            }
            "ball" => Ok(SpaceDocument::Ball {
                dim: count(field(obj, "dim")?, "dim")?,
                center: point(field(obj, "center")?, true)?,
                radius: rational(field(obj, "radius")?, true)?,
            }),
            "generator" => {
                let name = field(obj, "name")?.as_str().ok_or_else(|| parse_err("\"name\" must be a string"))?;
                let empty = Map::new();
                let params = match obj.get("params") {
                    None => &empty,
                    Some(p) => p.as_object().ok_or_else(|| parse_err("\"params\" must be an object"))?,
                };
                let param = |key: &str| field(params, key).and_then(|v| count(v, key));
                let generator = match name {
                    "simplex" => Generator::Simplex { c: param("c")? },
                    "cube" => Generator::Cube { d: param("d")? },
                    "polygon" => Generator::Polygon { n: param("n")? },
                    "disk" => Generator::Disk,
                    "ball" => Generator::Ball {
                        dim: if params.contains_key("dim") { param("dim")? } else { 3 },
                    },
                    other => return Err(parse_err(format!("unknown generator {other:?}"))),
                };
                Ok(SpaceDocument::Generator(generator))
            }
            other => Err(parse_err(format!("unknown space type {other:?}"))),
        }
    }

    /// The canonical JSON encoding.
    pub fn to_value(&self) -> Value {
        match self {
            SpaceDocument::Polytope { vertices } => json!({
                "type": "polytope",
                "vertices": vertices.iter().map(point_json).collect::<Vec<_>>(),
            }),
            SpaceDocument::Ball { dim, center, radius } => json!({
                "type": "ball",
                "dim": dim,
                "center": point_json(center),
                "radius": radius.to_string(),
            }),
            SpaceDocument::Generator(g) => {
                let (name, params) = match *g {
                    Generator::Simplex { c } => ("simplex", json!({ "c": c })),
                    Generator::Cube { d } => ("cube", json!({ "d": d })),
                    Generator::Polygon { n } => ("polygon", json!({ "n": n })),
                    Generator::Disk => ("disk", json!({})),
                    Generator::Ball { dim } => ("ball", json!({ "dim": dim })),
                };
                json!({ "type": "generator", "name": name, "params": params })
            }
        }
    }

    pub fn to_canonical_string(&self) -> String {
        self.to_value().to_string()
    }

    pub fn description(&self) -> SpaceDescription {
        match self {
            SpaceDocument::Polytope { vertices } => SpaceDescription::Polytope {
                vertices: vertices.clone(),
            },
            SpaceDocument::Ball { dim, center, radius } => SpaceDescription::Ball {
                dim: *dim,
                center: center.clone(),
                radius: radius.clone(),
            },
            SpaceDocument::Generator(g) => match *g {
                Generator::Simplex { c } => SpaceDescription::Simplex { c },
                Generator::Cube { d } => SpaceDescription::Cube { d },
                Generator::Polygon { n } => SpaceDescription::Polygon { n },
                Generator::Disk => SpaceDescription::Disk,
                Generator::Ball { dim: 3 } => SpaceDescription::BlochBall,
                Generator::Ball { dim } => SpaceDescription::Ball {
                    dim,
                    center: Point::zero(dim),
                    radius: Rational::from_integer(1.into()),
                },
            },
        }
    }

    /// Builds the state space. Malformed geometry is a parse error; balls
    /// outside dimensions 2 and 3 are unsupported.
    pub fn build(&self) -> Result<StateSpace> {
        if let SpaceDocument::Ball { dim, .. } | SpaceDocument::Generator(Generator::Ball { dim }) = self {
            if !(2..=3).contains(dim) {
                return Err(CliError::Unsupported(format!("balls of dimension {dim}; only 2 and 3 are supported")));
            }
        }
        StateSpace::from_description(&self.description()).map_err(|e| match e {
            gptlab_core::Error::Unsupported(_) => CliError::Unsupported(e.to_string()),
            _ => parse_err(e.to_string()),
        })
    }
}

pub fn point_json(p: &Point) -> Value {
    Value::Array(p.coords().iter().map(|x| Value::String(x.to_string())).collect())
}

/// Parses a state given as comma-separated rationals, e.g. `"1/2, 1/4"`.
pub fn parse_point(text: &str) -> Result<Point> {
    text.parse().map_err(|e: gptlab_core::rational::ParseRationalError| parse_err(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use gptlab_core::rational::ratio;

    #[test]
    fn mixed_rational_encodings() {
        let doc = SpaceDocument::parse(r#"{"type":"polytope","vertices":[[0,0],["1",0],["1/2","0.75"]]}"#).unwrap();
        let SpaceDocument::Polytope { vertices } = &doc else { panic!() };
        assert_eq!(vertices[2], Point::new(vec![ratio(1, 2), ratio(3, 4)]));
        let again = SpaceDocument::parse(&doc.to_canonical_string()).unwrap();
        assert_eq!(again, doc);
        assert_eq!(again.to_canonical_string(), doc.to_canonical_string());
    }

    #[test]
    fn floats_are_rejected_for_polytopes_only() {
        let err = SpaceDocument::parse(r#"{"type":"polytope","vertices":[[0.5,0]]}"#).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let ball = SpaceDocument::parse(r#"{"type":"ball","dim":2,"center":[0.1,0],"radius":1.5}"#).unwrap();
        let SpaceDocument::Ball { center, radius, .. } = ball else { panic!() };
        assert_eq!(center[0], ratio(1, 10));
        assert_eq!(radius, ratio(3, 2));
    }

    #[test]
    fn generators() {
        let doc = SpaceDocument::parse(r#"{"type":"generator","name":"simplex","params":{"c":3}}"#).unwrap();
        assert_eq!(doc, SpaceDocument::Generator(Generator::Simplex { c: 3 }));
        assert_eq!(doc.build().unwrap().dim(), 2);
        let ball = SpaceDocument::parse(r#"{"type":"generator","name":"ball"}"#).unwrap();
        assert_eq!(ball.build().unwrap(), StateSpace::bloch_ball());
        for bad in [
            r#"{"type":"generator","name":"torus"}"#,
            r#"{"type":"generator","name":"cube","params":{}}"#,
            r#"{"type":"sphere"}"#,
            "[1,2]",
            "{",
        ] {
            assert_eq!(SpaceDocument::parse(bad).unwrap_err().exit_code(), 2, "{bad}");
        }
    }

    #[test]
    fn degenerate_geometry_is_a_parse_error() {
        let doc = SpaceDocument::parse(r#"{"type":"ball","dim":3,"center":[0,0,0],"radius":0}"#).unwrap();
        assert_eq!(doc.build().unwrap_err().exit_code(), 2);
        let doc = SpaceDocument::parse(r#"{"type":"generator","name":"ball","params":{"dim":4}}"#).unwrap();
        assert_eq!(doc.build().unwrap_err().exit_code(), 3);
    }
}
