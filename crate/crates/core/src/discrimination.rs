//! Perfect distinguishability of states, the maximum number `c` of
//! distinguishable states, and decomposability of states into mixtures of
//! distinguishable pure states.
//!
//! States `s_1..s_n` are distinguishable when some measurement `(e_i)` has
//! `e_i(s_j) = δ_ij`. On a polytope this is an LP feasibility problem over the
//! effect coefficients; on a ball it is decided analytically (only antipodal
//! pure pairs are distinguishable).
//!
//! # Searching pure states only
//!
//! If mixed states `t_1..t_n` are distinguished by `(e_i)`, write each `t_j`
//! as a mixture of pure states. Since `e_j(t_j) = 1` and `e_j ≤ 1`, every pure
//! state in the mixture for `t_j` also has `e_j = 1`, hence `e_i = 0` for
//! `i ≠ j`. Picking one such pure state per `t_j` gives a distinguishable
//! family of the same size with the same measurement. So `c` is attained on
//! pure states, and subsets of vertices are all that needs searching.
//! Distinguishable families are also closed under taking subsets (merge the
//! spare effects into one), which makes a level-wise search complete.

use std::collections::HashSet;

use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{self, Point};
use crate::gpt::{Effect, Measurement, Polytope, State, StateSpace};
use crate::lp::{self, LinearProgram, Relation};
use crate::rational::{ratio, sqrt_exact, to_f64, Rational};
use crate::sampling;

/// States together with a measurement that tells them apart with certainty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistinguishabilityWitness {
    pub states: Vec<State>,
    pub measurement: Measurement,
}

impl DistinguishabilityWitness {
    /// Whether `e_i(s_j) = δ_ij` holds exactly.
    pub fn is_kronecker(&self) -> bool {
        let effects = self.measurement.effects();
        effects.len() == self.states.len()
            && effects.iter().enumerate().all(|(i, e)| {
                self.states.iter().enumerate().all(|(j, s)| {
                    let v = e.value(s.point());
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }
}

/// A convex decomposition into distinguishable pure states.
#[derive(Debug, Clone, PartialEq)]
pub enum Decomposition {
    Exact {
        witness: DistinguishabilityWitness,
        /// Aligned with `witness.states`.
        weights: Vec<Rational>,
    },
    /// Ball states at an irrational distance from the center decompose over
    /// an antipodal pair with irrational coordinates.
    Approximate {
        pure_states: Vec<Vec<f64>>,
        weights: Vec<f64>,
    },
}

impl Decomposition {
    pub fn weights_f64(&self) -> Vec<f64> {
        match self {
            Decomposition::Exact { weights, .. } => weights.iter().map(to_f64).collect(),
            Decomposition::Approximate { weights, .. } => weights.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum P6Outcome {
    Holds,
    FailsWith(State),
}

fn ensure_members(space: &StateSpace, states: &[State]) -> Result<()> {
    for s in states {
        if !space.contains(s.point())? {
            return Err(Error::NotAState);
        }
    }
    Ok(())
}

/// A witness measurement when `states` are distinguishable, `None` otherwise.
pub fn distinguish(space: &StateSpace, states: &[State]) -> Result<Option<DistinguishabilityWitness>> {
    if states.is_empty() {
        return Err(Error::Empty);
    }
    ensure_members(space, states)?;
    let effects = match space {
        StateSpace::Polytope(p) => {
            let chart_points: Vec<Point> = states.iter().map(|s| p.chart().to_chart(s.point())).collect();
            distinguishing_effects(p, &chart_points)?
        }
        StateSpace::Ball(_) => ball_distinguishing_effects(space, states),
    };
    Ok(effects.map(|effects| DistinguishabilityWitness {
        states: states.to_vec(),
        measurement: Measurement::new(effects).expect("nonempty measurement"),
    }))
}

fn ball_distinguishing_effects(space: &StateSpace, states: &[State]) -> Option<Vec<Effect>> {
    let ball = space.as_ball().expect("ball");
    match states {
        [_] => Some(vec![space.unit_effect()]),
        [s1, s2] => {
            let c = ball.center();
            let antipodal = space.is_pure(s1) && (s1.point() + s2.point()) == c.scale(&Rational::from_integer(2.into()));
            antipodal.then(|| {
                let e = antipodal_effect(space, s1.point());
                vec![e.clone(), e.complement()]
            })
        }
        _ => None,
    }
}

/// On a ball: the effect `1/2 + ⟨p − c, s − c⟩/(2r²)`, which is 1 at the pure
/// state `p` and 0 at its antipode.
fn antipodal_effect(space: &StateSpace, pure: &Point) -> Effect {
    let ball = space.as_ball().expect("ball");
    let c = ball.center();
    let dir = pure - c;
    let scale = (Rational::from_integer(2.into()) * ball.radius() * ball.radius()).recip();
    let a = dir.scale(&scale);
    let b = ratio(1, 2) - a.dot(c);
    Effect::new(a, b)
}

/// LP feasibility for `e_i(y_j) = δ_ij`, `e_i ≥ 0` on vertices, `Σ e_i = u`,
/// with effects parameterized in chart coordinates. Returns ambient effects.
///
/// The last effect is `u - Σ e_i` and every other effect vanishes on the last
/// point, so only the linear parts `a_i` of `e_i(x) = a_i·(x - y_last)` for
/// `i < n - 1` are unknowns.
fn distinguishing_effects(p: &Polytope, chart_points: &[Point]) -> Result<Option<Vec<Effect>>> {
    let n = chart_points.len();
    let dim = p.dim();
    let (last, rest) = chart_points.split_last().expect("nonempty family");
    if rest.is_empty() {
        return Ok(Some(vec![Effect::new(Point::zero(p.ambient_dim()), Rational::one())]));
    }
    let m = rest.len();
    let var = |i: usize, k: usize| i * dim + k;
    let mut program = LinearProgram::new(m * dim);
    let zeros = || vec![Rational::zero(); m * dim];
    let row_for = |i: usize, x: &Point| {
        let mut row = zeros();
        for k in 0..dim {
            row[var(i, k)] = &x[k] - &last[k];
        }
        row
    };
    for i in 0..m {
        for (j, y) in rest.iter().enumerate() {
            let rhs = if i == j { Rational::one() } else { Rational::zero() };
            program.add_constraint(row_for(i, y), Relation::Eq, rhs);
        }
    }
    for w in p.chart_vertices() {
        if chart_points.contains(w) {
            continue;
        }
        let mut total = zeros();
        for i in 0..m {
            let row = row_for(i, w);
            for k in 0..dim {
                total[var(i, k)] += &row[var(i, k)];
            }
            program.add_constraint(row, Relation::Ge, Rational::zero());
        }
        program.add_constraint(total, Relation::Le, Rational::one());
    }
    let Some(x) = lp::feasible_point(&program)? else {
        return Ok(None);
    };
    let mut effects: Vec<Effect> = (0..m)
        .map(|i| {
            let a = Point::new(x[var(i, 0)..var(i, 0) + dim].to_vec());
            let b = -a.dot(last);
            let (a, b) = p.chart().pull_back_functional(&a, &b);
            Effect::new(a, b)
        })
        .collect();
    let sum = effects.iter().skip(1).fold(effects[0].clone(), |acc, e| acc.add(e));
    effects.push(sum.complement());
    debug_assert_eq!(effects.len(), n);
    Ok(Some(effects))
}

fn vertices_distinguishable(p: &Polytope, indices: &[usize]) -> bool {
    let points: Vec<Point> = indices.iter().map(|&i| p.chart_vertices()[i].clone()).collect();
    distinguishing_effects(p, &points)
        .expect("well-formed program")
        .is_some()
}

/// All distinguishable families of vertices, by size: `levels[k]` holds the
/// sorted index sets of size `k + 1`, in lexicographic order.
pub fn distinguishable_families(p: &Polytope) -> Vec<Vec<Vec<usize>>> {
    let n = p.vertices().len();
    let mut levels: Vec<Vec<Vec<usize>>> = vec![(0..n).map(|i| vec![i]).collect()];
    loop {
        let current = levels.last().expect("level");
        let known: HashSet<&[usize]> = current.iter().map(Vec::as_slice).collect();
        let mut candidates = Vec::new();
        for (ai, a) in current.iter().enumerate() {
            for b in &current[ai + 1..] {
                let k = a.len();
                if a[..k - 1] != b[..k - 1] {
                    break;
                }
                let mut cand = a.clone();
                cand.push(b[k - 1]);
                let closed = (0..cand.len()).all(|drop| {
                    let sub: Vec<usize> = cand.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, &v)| v).collect();
                    known.contains(sub.as_slice())
                });
                if !closed {
                    continue;
                }
                let pts: Vec<Point> = cand.iter().map(|&i| p.vertices()[i].clone()).collect();
                if geometry::is_affinely_independent(&pts).expect("vertices") {
                    candidates.push(cand);
                }
            }
        }
        let accepted: Vec<Vec<usize>> = candidates
            .into_par_iter()
            .filter(|c| vertices_distinguishable(p, c))
            .collect();
        if accepted.is_empty() {
            return levels;
        }
        levels.push(accepted);
    }
}

/// Distinguishable vertex families not contained in a larger one, sorted
/// lexicographically.
pub fn maximal_families(p: &Polytope) -> Vec<Vec<usize>> {
    maximal_from_levels(&distinguishable_families(p))
}

fn maximal_from_levels(levels: &[Vec<Vec<usize>>]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for (k, level) in levels.iter().enumerate() {
        let bigger = levels.get(k + 1);
        for fam in level {
            let covered = bigger.is_some_and(|b| b.iter().any(|g| fam.iter().all(|v| g.contains(v))));
            if !covered {
                out.push(fam.clone());
            }
        }
    }
    out.sort();
    out
}

/// The maximum number of distinguishable states.
pub fn max_distinguishable(space: &StateSpace) -> usize {
    match space {
        StateSpace::Polytope(p) => distinguishable_families(p).len(),
        StateSpace::Ball(_) => 2,
    }
}

/// Whether the space is a simplex (a classical system).
pub fn is_simplex(space: &StateSpace) -> bool {
    match space {
        StateSpace::Polytope(p) => {
            p.vertices().len() == p.dim() + 1
                && geometry::is_affinely_independent(p.vertices()).expect("vertices")
        }
        StateSpace::Ball(_) => false,
    }
}

/// Writes `s` as a mixture of distinguishable pure states, if possible.
pub fn decompose_distinguishable(space: &StateSpace, s: &State) -> Result<Option<Decomposition>> {
    ensure_members(space, std::slice::from_ref(s))?;
    match space {
        StateSpace::Polytope(p) => Ok(decompose_with_families(p, s, &maximal_families(p))),
        StateSpace::Ball(_) => Ok(Some(decompose_in_ball(space, s))),
    }
}

fn decompose_with_families(p: &Polytope, s: &State, families: &[Vec<usize>]) -> Option<Decomposition> {
    let target = p.chart().to_chart(s.point());
    for fam in families {
        let gens: Vec<Point> = fam.iter().map(|&i| p.chart_vertices()[i].clone()).collect();
        let Ok(support) = geometry::convex_decompose(&target, &gens) else {
            continue;
        };
        let mut weights = vec![Rational::zero(); fam.len()];
        for (i, w) in support {
            weights[i] = w;
        }
        let effects = distinguishing_effects(p, &gens)
            .expect("well-formed program")
            .expect("family is distinguishable");
        let witness = DistinguishabilityWitness {
            states: fam.iter().map(|&i| State::new_unchecked(p.vertices()[i].clone())).collect(),
            measurement: Measurement::new(effects).expect("nonempty"),
        };
        return Some(Decomposition::Exact { witness, weights });
    }
    None
}

fn decompose_in_ball(space: &StateSpace, s: &State) -> Decomposition {
    let ball = space.as_ball().expect("ball");
    let c = ball.center();
    let r = ball.radius();
    let offset = s.point() - c;
    let exact_pair = |pure: Point, weight: Rational| {
        let antipode = &c.scale(&Rational::from_integer(2.into())) - &pure;
        let e = antipodal_effect(space, &pure);
        Decomposition::Exact {
            witness: DistinguishabilityWitness {
                states: vec![State::new_unchecked(pure), State::new_unchecked(antipode)],
                measurement: Measurement::new(vec![e.clone(), e.complement()]).expect("nonempty"),
            },
            weights: vec![weight.clone(), Rational::one() - weight],
        }
    };
    if offset.is_zero() {
        let pure = c + &Point::unit(ball.dim(), 0).scale(r);
        return exact_pair(pure, ratio(1, 2));
    }
    if space.is_pure(s) {
        return Decomposition::Exact {
            witness: DistinguishabilityWitness {
                states: vec![s.clone()],
                measurement: Measurement::new(vec![space.unit_effect()]).expect("nonempty"),
            },
            weights: vec![Rational::one()],
        };
    }
    match sqrt_exact(&offset.norm_squared()) {
        Some(len) => {
            let pure = c + &offset.scale(&(r / &len));
            let weight = (Rational::one() + len / r) / Rational::from_integer(2.into());
            exact_pair(pure, weight)
        }
        None => {
            let rho = ball.relative_radius(s.point());
            let off = offset.to_f64();
            let len = off.iter().map(|x| x * x).sum::<f64>().sqrt();
            let cf = c.to_f64();
            let rf = to_f64(r);
            let plus: Vec<f64> = cf.iter().zip(&off).map(|(c, o)| c + rf * o / len).collect();
            let minus: Vec<f64> = cf.iter().zip(&off).map(|(c, o)| c - rf * o / len).collect();
            Decomposition::Approximate {
                pure_states: vec![plus, minus],
                weights: vec![(1.0 + rho) / 2.0, (1.0 - rho) / 2.0],
            }
        }
    }
}

/// Sampled check of decomposability into distinguishable pure states.
///
/// Balls and simplices hold without sampling. Other polytopes are tested on
/// `num_samples` random mixed states; the first state with no decomposition
/// is returned.
pub fn satisfies_p6_sampled(space: &StateSpace, num_samples: usize, seed: u64) -> P6Outcome {
    let p = match space {
        StateSpace::Ball(_) => return P6Outcome::Holds,
        StateSpace::Polytope(_) if is_simplex(space) => return P6Outcome::Holds,
        StateSpace::Polytope(p) => p,
    };
    let families = maximal_families(p);
    let mut rng = sampling::rng(seed);
    for _ in 0..num_samples {
        let s = sampling::random_state(space, &mut rng);
        if decompose_with_families(p, &s, &families).is_none() {
            return P6Outcome::FailsWith(s);
        }
    }
    P6Outcome::Holds
}

/// Random mixed states of `space` as extra candidates, used to check that
/// including mixed states never beats the pure-state search.
pub fn mixed_family_exceeds<R: Rng>(space: &StateSpace, size: usize, tries: usize, rng: &mut R) -> Result<bool> {
    let pure = space.pure_states().ok_or_else(|| Error::Unsupported("ball".into()))?;
    for _ in 0..tries {
        let mut family: Vec<State> = Vec::with_capacity(size);
        while family.len() < size {
            if rng.random_bool(0.5) {
                family.push(pure[rng.random_range(0..pure.len())].clone());
            } else {
                family.push(sampling::random_state(space, rng));
            }
        }
        family.sort();
        family.dedup();
        if family.len() == size && distinguish(space, &family)?.is_some() {
            return Ok(true);
        }
    }
    Ok(false)
}
