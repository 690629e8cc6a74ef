//! Instance checks of the structural results over a corpus of state spaces.
//!
//! The corpus mixes built-in spaces with seeded random polytopes. Each check
//! records the property, the instance and the outcome; a run passes when
//! every check does.

use gptlab_core::discrimination;
use gptlab_core::gpt::dual_on_effects;
use gptlab_core::metrics::{self, EntropyModel, Fault, Metric};
use gptlab_core::rational::Rational;
use gptlab_core::sampling;
use gptlab_core::symmetry;
use gptlab_core::{Point, State, StateSpace};
use serde::Serialize;

use crate::report::{distance_identity_holds, p6_report};

/// Slack for entropy comparisons; only the logarithms are inexact.
pub const ENTROPY_TOLERANCE: f64 = 1e-9;

/// Random state pairs per instance for the distance checks.
const DISTANCE_PAIRS: usize = 3;

/// Random states per instance for the entropy checks.
const ENTROPY_SAMPLES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusKind {
    /// Built-in spaces plus random polytopes.
    Default,
    /// Built-in spaces only.
    Builtins,
    /// Standard and random simplices only.
    Simplices,
    /// Random polytopes only.
    Random,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusSpec {
    pub kind: CorpusKind,
    pub random_count: usize,
    pub min_dim: usize,
    pub max_dim: usize,
    pub min_vertices: usize,
    pub max_vertices: usize,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        Self {
            kind: CorpusKind::Default,
            random_count: 10,
            min_dim: 2,
            max_dim: 3,
            min_vertices: 4,
            max_vertices: 8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub space: StateSpace,
}

fn instance(name: impl Into<String>, space: StateSpace) -> Instance {
    Instance {
        name: name.into(),
        space,
    }
}

/// A non-symmetric trapezoid with a single reflection symmetry.
pub fn trapezoid() -> StateSpace {
    StateSpace::polytope([[0, 0], [3, 0], [2, 1], [1, 1]].iter().map(|v| Point::from_ints(v)).collect())
        .expect("trapezoid")
}

pub fn builtin_corpus() -> Vec<Instance> {
    let mut out = Vec::new();
    for c in 2..=5 {
        out.push(instance(format!("simplex c={c}"), StateSpace::simplex(c).expect("simplex")));
    }
    for d in 2..=3 {
        out.push(instance(format!("cube d={d}"), StateSpace::cube(d).expect("cube")));
    }
    for n in [3, 4, 6, 8] {
        out.push(instance(format!("polygon n={n}"), StateSpace::polygon(n).expect("polygon")));
    }
    out.push(instance("trapezoid", trapezoid()));
    out.push(instance("disk", StateSpace::disk()));
    out.push(instance("bloch ball", StateSpace::bloch_ball()));
    out
}

/// Seeded random polytopes. Instance `i` depends only on `seed` and `i`.
pub fn random_corpus(spec: &CorpusSpec, seed: u64) -> Vec<Instance> {
    (0..spec.random_count)
        .map(|i| {
            let mut rng = sampling::rng(seed.wrapping_add(i as u64));
            let span = spec.max_dim.saturating_sub(spec.min_dim) + 1;
            let dim = spec.min_dim + i % span;
            let lo = spec.min_vertices.max(dim + 1);
            let hi = spec.max_vertices.max(lo);
            let n = lo + (i / span) % (hi - lo + 1);
            instance(format!("random #{i} dim={dim} n={n}"), sampling::random_polytope(dim, n, &mut rng))
        })
        .collect()
}

pub fn random_simplices(count: usize, seed: u64) -> Vec<Instance> {
    (0..count)
        .map(|i| {
            let mut rng = sampling::rng(seed.wrapping_add(i as u64));
            let dim = 2 + i % 2;
            instance(format!("random simplex #{i} dim={dim}"), sampling::random_simplex(dim, &mut rng))
        })
        .collect()
}

pub fn build_corpus(spec: &CorpusSpec, seed: u64) -> Vec<Instance> {
    match spec.kind {
        CorpusKind::Default => {
            let mut out = builtin_corpus();
            out.extend(random_corpus(spec, seed));
            out
        }
        CorpusKind::Builtins => builtin_corpus(),
        CorpusKind::Random => random_corpus(spec, seed),
        CorpusKind::Simplices => {
            let mut out: Vec<Instance> = (2..=5)
                .map(|c| instance(format!("simplex c={c}"), StateSpace::simplex(c).expect("simplex")))
                .collect();
            out.extend(random_simplices(spec.random_count, seed));
            out
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub property: &'static str,
    pub instance: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

struct Recorder<'a> {
    instance: &'a str,
    checks: Vec<Check>,
}

impl Recorder<'_> {
    fn record(&mut self, property: &'static str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            property,
            instance: self.instance.to_string(),
            passed,
            detail: detail.into(),
        });
    }
}

pub fn cmd_verify(spec: &CorpusSpec, seed: u64, fault: Fault) -> VerifyReport {
    let checks: Vec<Check> = build_corpus(spec, seed)
        .iter()
        .enumerate()
        .flat_map(|(i, inst)| check_instance(inst, seed.wrapping_add(i as u64), fault))
        .collect();
    VerifyReport {
        seed,
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

fn distance(space: &StateSpace, a: &State, b: &State, fault: Fault) -> Metric {
    metrics::kolmogorov_distance_with(space, a, b, fault).expect("states of the space")
}

pub fn check_instance(inst: &Instance, seed: u64, fault: Fault) -> Vec<Check> {
    let space = &inst.space;
    let mut rec = Recorder {
        instance: &inst.name,
        checks: Vec::new(),
    };
    let dim = space.dim();
    let c = discrimination::max_distinguishable(space);
    let is_simplex = discrimination::is_simplex(space);
    let p6 = p6_report(space, seed);
    let symmetric = symmetry::satisfies_p5(space);

    rec.record(
        "distinguishable-count-bound",
        c <= dim + 1 && (c == dim + 1) == is_simplex,
        format!("c={c} dim={dim} simplex={is_simplex}"),
    );
    if space.as_polytope().is_some() {
        rec.record(
            "full-family-under-decomposability",
            !p6.holds() || c == dim + 1,
            format!("decomposability {} c={c} dim={dim}", p6.status),
        );
        rec.record(
            "decomposability-only-classical",
            p6.holds() == is_simplex,
            format!("decomposability {} simplex={is_simplex}", p6.status),
        );
        check_duality(space, &mut rec);
    }

    let mut rng = sampling::rng(seed);
    let pairs: Vec<(State, State)> = (0..DISTANCE_PAIRS)
        .map(|_| (sampling::random_state(space, &mut rng), sampling::random_state(space, &mut rng)))
        .collect();
    let identity_ok = pairs.iter().all(|(a, b)| {
        let d = distance(space, a, b, fault);
        let p = metrics::optimal_success_probability(space, a, b).expect("states of the space");
        distance_identity_holds(&d, &p)
    });
    rec.record("distance-success-identity", identity_ok, format!("{DISTANCE_PAIRS} sampled pairs"));

    let group = symmetry::automorphism_group(space);
    if let Some(elements) = group.elements() {
        let preserved = pairs.iter().all(|(a, b)| {
            let d = distance(space, a, b, fault);
            elements.iter().all(|g| distance(space, &g.apply(a), &g.apply(b), fault) == d)
        });
        rec.record(
            "automorphism-preserves-distance",
            preserved,
            format!("{} automorphisms, {DISTANCE_PAIRS} pairs", elements.len()),
        );
        if symmetric {
            let s_m = symmetry::invariant_state(space);
            let distances: Vec<Metric> = space
                .pure_states()
                .expect("polytope")
                .iter()
                .map(|v| distance(space, &s_m, v, fault))
                .collect();
            rec.record(
                "invariant-distance-constant",
                distances.windows(2).all(|w| w[0] == w[1]),
                format!("D(s_M, v) = {}", distances[0]),
            );
        }
    }

    if symmetric {
        let model = EntropyModel::new(space).expect("entropy model");
        let s_m = symmetry::invariant_state(space);
        let top = model.entropy(&s_m);
        let samples: Vec<State> = (0..ENTROPY_SAMPLES).map(|_| sampling::random_state(space, &mut rng)).collect();
        let maximal = samples.iter().all(|s| model.entropy(s) <= top + ENTROPY_TOLERANCE);
        let invariant = group.elements().is_none_or(|els| {
            samples.iter().all(|s| {
                let h = model.entropy(s);
                els.iter().all(|g| (model.entropy(&g.apply(s)) - h).abs() <= ENTROPY_TOLERANCE)
            })
        });
        rec.record(
            "entropy-maximal-at-invariant",
            maximal && invariant,
            format!("S(s_M) = {top:.12}, {ENTROPY_SAMPLES} samples"),
        );
    }
    rec.checks
}

/// For each automorphism `Ψ` with dual `Φ = Ψ*`: `Φ(u) = u`, `Φ(0) = 0`,
/// `Φ(e)(v) = e(Ψ(v))` on every vertex, and the state rebuilt from the
/// values `Φ(e)(v)` is `Ψ(v)`, so the dual of the dual is `Ψ` again. Also
/// checks that equivalent pure states come with a witness mapping them.
fn check_duality(space: &StateSpace, rec: &mut Recorder<'_>) {
    let group = symmetry::automorphism_group(space);
    let elements = group.elements().expect("polytope");
    let effects = space.spanning_effects();
    let vertices = space.pure_states().expect("polytope");
    let (unit, zero) = (space.unit_effect(), space.zero_effect());
    let ok = elements.iter().all(|g| {
        let phi: Vec<_> = effects.iter().map(|e| dual_on_effects(&g.forward, e).expect("dims")).collect();
        let fixes_constants = space.effects_agree(&dual_on_effects(&g.forward, &unit).expect("dims"), &unit)
            && space.effects_agree(&dual_on_effects(&g.forward, &zero).expect("dims"), &zero);
        fixes_constants
            && vertices.iter().all(|v| {
                let image = g.apply(v);
                let values: Vec<Rational> = phi.iter().map(|f| f.value(v.point())).collect();
                effects.iter().zip(&values).all(|(e, x)| e.value(image.point()) == *x)
                    && space.state_from_effect_values(&effects, &values).ok().as_ref() == Some(&image)
            })
    });
    let witnesses_ok = vertices.iter().all(|v| match symmetry::are_equivalent(space, &vertices[0], v) {
        Ok(Some(g)) => g.apply(v) == vertices[0],
        Ok(None) => !symmetry::satisfies_p5(space),
        Err(_) => false,
    });
    rec.record(
        "equivalence-dual-roundtrip",
        ok && witnesses_ok,
        format!("{} automorphisms, {} effects", elements.len(), effects.len()),
    );
}
