//! The analysis commands and their reports.
//!
//! Every report is a serde value; text output flattens it into an aligned
//! two-column table.

use gptlab_core::discrimination::{self, Decomposition, P6Outcome};
use gptlab_core::metrics::{self, EntropyModel, Metric};
use gptlab_core::symmetry::{self, AutomorphismGroup};
use gptlab_core::{Effect, State, StateSpace};
use serde::Serialize;
use serde_json::Value;

use crate::document::{parse_point, point_json};
use crate::error::Result;

/// Number of random states tried when looking for a state that does not
/// decompose into distinguishable pure states.
pub const P6_SAMPLES: usize = 1000;

/// Tolerance for `D = 2P − 1` on the ball, where both sides are `f64`.
pub const BALL_IDENTITY_TOLERANCE: f64 = 1e-9;

/// A count that may be infinite or continuous.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Size {
    Finite(usize),
    Symbolic(&'static str),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct P6Report {
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

impl P6Report {
    pub fn holds(&self) -> bool {
        self.status == "Holds"
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub dim: usize,
    pub num_pure_states: Size,
    pub is_simplex: bool,
    pub c: usize,
    pub satisfies_p5: bool,
    pub is_isogonal: bool,
    pub p6: P6Report,
    pub invariant_state: Value,
    pub invariant_state_unique: bool,
    pub automorphism_group_order: Size,
    pub classification_tag: &'static str,
}

pub fn p6_report(space: &StateSpace, seed: u64) -> P6Report {
    match discrimination::satisfies_p6_sampled(space, P6_SAMPLES, seed) {
        P6Outcome::Holds => P6Report {
            status: "Holds",
            counterexample: None,
        },
        P6Outcome::FailsWith(s) => P6Report {
            status: "FailsWith",
            counterexample: Some(point_json(s.point())),
        },
    }
}

pub fn cmd_analyze(space: &StateSpace, seed: u64) -> AnalysisReport {
    let is_simplex = discrimination::is_simplex(space);
    let group = symmetry::automorphism_group(space);
    AnalysisReport {
        dim: space.dim(),
        num_pure_states: match space.as_polytope() {
            Some(p) => Size::Finite(p.vertices().len()),
            None => Size::Symbolic("infinite"),
        },
        is_simplex,
        c: discrimination::max_distinguishable(space),
        satisfies_p5: symmetry::satisfies_p5(space),
        is_isogonal: symmetry::is_isogonal(space),
        p6: p6_report(space, seed),
        invariant_state: point_json(symmetry::invariant_state(space).point()),
        invariant_state_unique: symmetry::invariant_state_unique(space),
        automorphism_group_order: match group {
            AutomorphismGroup::Finite(elements) => Size::Finite(elements.len()),
            AutomorphismGroup::BallOrthogonal { .. } => Size::Symbolic("continuous"),
        },
        classification_tag: if is_simplex {
            "classical"
        } else if space.is_ball() {
            "qubit-like-ball"
        } else {
            "other"
        },
    }
}

fn metric_json(m: &Metric) -> Value {
    match m {
        Metric::Exact(r) => Value::String(r.to_string()),
        Metric::Approx(x) => Value::from(*x),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceReport {
    pub kolmogorov: Value,
    pub success_probability: Value,
    /// Whether `D = 2P − 1`: exactly on polytopes, within
    /// [`BALL_IDENTITY_TOLERANCE`] on balls.
    pub identity_holds: bool,
}

pub fn state(space: &StateSpace, text: &str) -> Result<State> {
    Ok(space.state(parse_point(text)?)?)
}

pub fn distance_identity_holds(d: &Metric, p: &Metric) -> bool {
    match (d, p) {
        (Metric::Exact(d), Metric::Exact(p)) => {
            *d == p * gptlab_core::rational::int(2) - gptlab_core::rational::int(1)
        }
        _ => (d.to_f64() - (2.0 * p.to_f64() - 1.0)).abs() <= BALL_IDENTITY_TOLERANCE,
    }
}

pub fn cmd_distance(space: &StateSpace, s1: &State, s2: &State) -> Result<DistanceReport> {
    let d = metrics::kolmogorov_distance(space, s1, s2)?;
    let p = metrics::optimal_success_probability(space, s1, s2)?;
    Ok(DistanceReport {
        identity_holds: distance_identity_holds(&d, &p),
        kolmogorov: metric_json(&d),
        success_probability: metric_json(&p),
    })
}

fn effect_json(e: &Effect) -> Value {
    serde_json::json!({ "a": point_json(&e.a), "b": e.b.to_string() })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistinguishReport {
    pub distinguishable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measurement: Option<Vec<Value>>,
}

pub fn cmd_distinguish(space: &StateSpace, states: &[State]) -> Result<DistinguishReport> {
    let witness = discrimination::distinguish(space, states)?;
    Ok(DistinguishReport {
        distinguishable: witness.is_some(),
        measurement: witness.map(|w| w.measurement.effects().iter().map(effect_json).collect()),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Component {
    pub state: Value,
    pub weight: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecomposeReport {
    pub decomposable: bool,
    pub exact: bool,
    pub components: Vec<Component>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measurement: Option<Vec<Value>>,
}

pub fn cmd_decompose(space: &StateSpace, s: &State) -> Result<DecomposeReport> {
    Ok(match discrimination::decompose_distinguishable(space, s)? {
        None => DecomposeReport {
            decomposable: false,
            exact: true,
            components: Vec::new(),
            measurement: None,
        },
        Some(Decomposition::Exact { witness, weights }) => DecomposeReport {
            decomposable: true,
            exact: true,
            components: witness
                .states
                .iter()
                .zip(&weights)
                .map(|(s, w)| Component {
                    state: point_json(s.point()),
                    weight: Value::String(w.to_string()),
                })
                .collect(),
            measurement: Some(witness.measurement.effects().iter().map(effect_json).collect()),
        },
        Some(Decomposition::Approximate { pure_states, weights }) => DecomposeReport {
            decomposable: true,
            exact: false,
            components: pure_states
                .iter()
                .zip(&weights)
                .map(|(s, w)| Component {
                    state: Value::from(s.clone()),
                    weight: Value::from(*w),
                })
                .collect(),
            measurement: None,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyReport {
    pub entropy: f64,
}

pub fn cmd_entropy(space: &StateSpace, s: &State) -> Result<EntropyReport> {
    Ok(EntropyReport {
        entropy: metrics::entropy(space, s)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetryReport {
    pub automorphism_group_order: Size,
    pub satisfies_p5: bool,
    pub is_isogonal: bool,
    pub invariant_state: Value,
    pub invariant_state_unique: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex_permutations: Option<Vec<Vec<usize>>>,
}

pub fn cmd_symmetry(space: &StateSpace) -> SymmetryReport {
    let group = symmetry::automorphism_group(space);
    SymmetryReport {
        automorphism_group_order: group.order().map_or(Size::Symbolic("continuous"), Size::Finite),
        satisfies_p5: symmetry::satisfies_p5(space),
        is_isogonal: symmetry::is_isogonal(space),
        invariant_state: point_json(symmetry::invariant_state(space).point()),
        invariant_state_unique: symmetry::invariant_state_unique(space),
        vertex_permutations: group
            .elements()
            .map(|els| els.iter().filter_map(|g| g.permutation.clone()).collect()),
    }
}

/// Entropies of many states of one space, sharing the measurement search.
pub fn entropies(space: &StateSpace, states: &[State]) -> Result<Vec<f64>> {
    let model = EntropyModel::new(space)?;
    Ok(states.iter().map(|s| model.entropy(s)).collect())
}

/// Renders a JSON value as an aligned `key  value` table. Nested objects use
/// dotted keys; arrays of scalars are written inline.
pub fn render_table(value: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", value, &mut rows);
    let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    rows.iter()
        .map(|(k, v)| format!("{k:<width$}  {v}\n"))
        .collect()
}

fn flatten(prefix: &str, value: &Value, rows: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&key(k), v, rows);
            }
        }
        Value::Array(items) if items.iter().any(|v| v.is_object() || v.is_array() && v.as_array().unwrap().iter().any(Value::is_object)) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), v, rows);
            }
        }
        other => rows.push((prefix.to_string(), inline(other))),
    }
}

fn inline(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        Value::Array(items) => format!("({})", items.iter().map(inline).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use gptlab_core::StateSpace;

    #[test]
    fn analyze_simplex_cube_ball() {
        let report = cmd_analyze(&StateSpace::simplex(3).unwrap(), 1);
        assert!(report.is_simplex && report.satisfies_p5 && report.p6.holds());
        assert_eq!(report.c, 3);
        assert_eq!(report.classification_tag, "classical");

        let report = cmd_analyze(&StateSpace::cube(2).unwrap(), 1);
        assert_eq!(report.c, 2);
        assert!(report.satisfies_p5 && !report.p6.holds());
        assert!(report.p6.counterexample.is_some());
        assert_eq!(report.classification_tag, "other");

        let report = cmd_analyze(&StateSpace::bloch_ball(), 1);
        assert_eq!(report.c, 2);
        assert!(report.satisfies_p5 && report.p6.holds());
        assert_eq!(report.classification_tag, "qubit-like-ball");
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["num_pure_states"], "infinite");
        assert_eq!(json["automorphism_group_order"], "continuous");
    }

    #[test]
    fn distance_examples() {
        let tri = StateSpace::simplex(3).unwrap();
        let r = cmd_distance(&tri, &state(&tri, "1,0,0").unwrap(), &state(&tri, "0,1,0").unwrap()).unwrap();
        assert_eq!((r.kolmogorov.as_str(), r.success_probability.as_str()), (Some("1"), Some("1")));
        let s = state(&tri, "1/3,1/3,1/3").unwrap();
        let r = cmd_distance(&tri, &s, &s).unwrap();
        assert_eq!((r.kolmogorov.as_str(), r.success_probability.as_str()), (Some("0"), Some("1/2")));
        assert!(r.identity_holds);
        let ball = StateSpace::bloch_ball();
        let r = cmd_distance(&ball, &state(&ball, "0,0,1").unwrap(), &state(&ball, "0,0,-1").unwrap()).unwrap();
        assert!(r.identity_holds);
        assert!((r.kolmogorov.as_f64().unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(state(&tri, "1,1,0").unwrap_err().exit_code(), 4);
    }

    #[test]
    fn table_is_aligned() {
        let table = render_table(&serde_json::json!({"a": 1, "long_key": [ "1/2", "0" ], "p6": {"status": "Holds"}}));
        assert_eq!(table, "a          1\nlong_key   (1/2, 0)\np6.status  Holds\n");
    }
}
