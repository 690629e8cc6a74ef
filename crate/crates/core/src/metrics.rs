//! Kolmogorov distance, optimal two-state discrimination, indecomposable
//! effects and measurement entropy.
//!
//! Indecomposable effects are taken to be the extreme rays of the cone of
//! affine functionals that are nonnegative on the state space. This
//! definition is imported from the literature on measurement entropy; an
//! indecomposable measurement is one whose effects all lie on such rays.
//!
//! Polytope quantities are exact rationals, except for entropies, where only
//! the logarithms are taken in floating point. Ball quantities use `f64`.

use std::collections::HashSet;
use std::fmt;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::gpt::{Ball, Effect, Measurement, Polytope, State, StateSpace};
use crate::linalg::Matrix;
use crate::lp::{self, LinearProgram, Relation};
use crate::rational::{ratio, to_f64, Rational};

/// A distance or probability: exact on polytopes, floating point on balls.
#[derive(Debug, Clone, PartialEq)]
pub enum Metric {
    Exact(Rational),
    Approx(f64),
}

impl Metric {
    pub fn to_f64(&self) -> f64 {
        match self {
            Metric::Exact(r) => to_f64(r),
            Metric::Approx(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Metric::Exact(r) => Some(r),
            Metric::Approx(_) => None,
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Metric::Exact(r) => write!(f, "{r}"),
            Metric::Approx(x) => write!(f, "{x}"),
        }
    }
}

/// Deliberate sabotage of the distance LP, used as a negative control by
/// verification runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fault {
    #[default]
    None,
    /// Minimizes instead of maximizing `e(s1) − e(s2)`.
    FlipDistanceObjective,
}

fn check_states(space: &StateSpace, states: &[&State]) -> Result<()> {
    for s in states {
        if !space.contains(s.point())? {
            return Err(Error::NotAState);
        }
    }
    Ok(())
}

/// `sup_e |e(s1) − e(s2)|` over all effects.
pub fn kolmogorov_distance(space: &StateSpace, s1: &State, s2: &State) -> Result<Metric> {
    kolmogorov_distance_with(space, s1, s2, Fault::None)
}

pub fn kolmogorov_distance_with(space: &StateSpace, s1: &State, s2: &State, fault: Fault) -> Result<Metric> {
    check_states(space, &[s1, s2])?;
    match space {
        StateSpace::Polytope(p) => {
            let diff = chart_difference(p, s1, s2);
            let (objective, sign) = match fault {
                Fault::None => (diff, Rational::one()),
                Fault::FlipDistanceObjective => (diff.scale(&-Rational::one()), -Rational::one()),
            };
            Ok(Metric::Exact(sign * effect_polytope_max(p, &objective)?))
        }
        StateSpace::Ball(b) => Ok(Metric::Approx(ball_distance(b, s1, s2))),
    }
}

/// `max_e (e(s1) + 1 − e(s2)) / 2`: the best success probability for telling
/// `s1` from `s2` given equal priors.
pub fn optimal_success_probability(space: &StateSpace, s1: &State, s2: &State) -> Result<Metric> {
    check_states(space, &[s1, s2])?;
    match space {
        StateSpace::Polytope(p) => {
            let half = ratio(1, 2);
            let objective = chart_difference(p, s1, s2).scale(&half);
            Ok(Metric::Exact(effect_polytope_max(p, &objective)? + half))
        }
        StateSpace::Ball(b) => Ok(Metric::Approx((1.0 + ball_distance(b, s1, s2)) / 2.0)),
    }
}

fn ball_distance(b: &Ball, s1: &State, s2: &State) -> f64 {
    let d = (s1.point() - s2.point()).norm_squared();
    to_f64(&d).sqrt() / (2.0 * to_f64(b.radius()))
}

fn chart_difference(p: &Polytope, s1: &State, s2: &State) -> Point {
    let chart = p.chart();
    &chart.to_chart(s1.point()) - &chart.to_chart(s2.point())
}

/// `max ⟨a', objective⟩` over chart effects `(a', b')` with
/// `0 ≤ ⟨a', w⟩ + b' ≤ 1` on every vertex `w`.
fn effect_polytope_max(p: &Polytope, objective: &Point) -> Result<Rational> {
    let d = p.dim();
    let mut program = LinearProgram::new(d + 1);
    let mut coefficients = objective.coords().to_vec();
    coefficients.push(Rational::zero());
    program.maximize(coefficients);
    for w in p.chart_vertices() {
        let mut row = w.coords().to_vec();
        row.push(Rational::one());
        program.add_constraint(row.clone(), Relation::Ge, Rational::zero());
        program.add_constraint(row, Relation::Le, Rational::one());
    }
    match lp::solve(&program)?.optimum() {
        Some(v) => Ok(v.clone()),
        None => Err(Error::MalformedProgram("effect polytope LP has no optimum".into())),
    }
}

/// An extreme ray of the cone of nonnegative affine functionals, scaled so
/// that its maximum over the state space is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EffectRay {
    pub a: Point,
    pub b: Rational,
}

impl EffectRay {
    pub fn effect(&self) -> Effect {
        Effect::new(self.a.clone(), self.b.clone())
    }
}

/// Extreme rays in chart coordinates, as `(a', b')` vectors, sorted.
fn chart_rays(p: &Polytope) -> Vec<Vec<Rational>> {
    let d = p.dim();
    let rows: Vec<Vec<Rational>> = p
        .chart_vertices()
        .iter()
        .map(|w| {
            let mut row = w.coords().to_vec();
            row.push(Rational::one());
            row
        })
        .collect();
    if d == 0 {
        return vec![vec![Rational::one()]];
    }
    let subsets: Vec<Vec<usize>> = (0..rows.len()).combinations(d).collect();
    let mut rays: Vec<Vec<Rational>> = subsets
        .into_par_iter()
        .filter_map(|subset| {
            let m = Matrix::from_rows(d + 1, subset.iter().map(|&i| rows[i].clone()));
            let null = m.nullspace();
            if null.len() != 1 {
                return None;
            }
            let ray = &null[0];
            let values: Vec<Rational> = rows.iter().map(|r| crate::linalg::dot(r, ray)).collect();
            let sign = if values.iter().all(|v| !v.is_negative()) {
                Rational::one()
            } else if values.iter().all(|v| !v.is_positive()) {
                -Rational::one()
            } else {
                return None;
            };
            let max = values.iter().map(|v| v * &sign).max().expect("vertices");
            let scale = sign / max;
            Some(ray.iter().map(|x| x * &scale).collect())
        })
        .collect();
    rays.sort();
    rays.dedup();
    rays
}

/// The indecomposable effects of a polytope, sorted. Balls have a continuum
/// of them and are rejected.
pub fn indecomposable_effects(space: &StateSpace) -> Result<Vec<EffectRay>> {
    let p = space
        .as_polytope()
        .ok_or_else(|| Error::Unsupported("indecomposable effects of a ball form a continuum".into()))?;
    let mut rays: Vec<EffectRay> = chart_rays(p)
        .into_iter()
        .map(|r| {
            let d = p.dim();
            let (a, b) = p.chart().pull_back_functional(&Point::new(r[..d].to_vec()), &r[d]);
            EffectRay { a, b }
        })
        .collect();
    rays.sort();
    Ok(rays)
}

/// Precomputed data for evaluating the measurement entropy
/// `S(s) = inf H(m_1(s), m_2(s), …)` over indecomposable measurements.
#[derive(Debug, Clone)]
pub enum EntropyModel {
    /// The vertices of the set of indecomposable measurements.
    Polytope(Vec<Measurement>),
    Ball(Ball),
}

impl EntropyModel {
    /// Measurements `Σ λ_i r_i = u` with `λ ≥ 0` are a bounded polytope in
    /// `λ`. The outcome distribution is affine in `λ` and Shannon entropy is
    /// concave, so the infimum is attained at a basic feasible solution; all
    /// of them are enumerated exactly.
    pub fn new(space: &StateSpace) -> Result<Self> {
        let p = match space {
            StateSpace::Ball(b) => return Ok(EntropyModel::Ball(b.clone())),
            StateSpace::Polytope(p) => p,
        };
        let d = p.dim();
        let rays = chart_rays(p);
        let mut unit = vec![Rational::zero(); d + 1];
        unit[d] = Rational::one();
        let bases: Vec<Vec<usize>> = (0..rays.len()).combinations(d + 1).collect();
        let solutions: Vec<Vec<(usize, Rational)>> = bases
            .into_par_iter()
            .filter_map(|basis| {
                let cols: Vec<&[Rational]> = basis.iter().map(|&i| rays[i].as_slice()).collect();
                let m = Matrix::from_columns(d + 1, &cols);
                let inv = m.inverse()?;
                let lambda = inv.mul_vec(&unit);
                if lambda.iter().any(Signed::is_negative) {
                    return None;
                }
                Some(
                    basis
                        .into_iter()
                        .zip(lambda)
                        .filter(|(_, l)| !l.is_zero())
                        .collect(),
                )
            })
            .collect();
        let unique: HashSet<Vec<(usize, Rational)>> = solutions.into_iter().collect();
        let mut unique: Vec<_> = unique.into_iter().collect();
        unique.sort();
        let measurements = unique
            .into_iter()
            .map(|sol| {
                let effects = sol
                    .into_iter()
                    .map(|(i, l)| {
                        let r = &rays[i];
                        let a = Point::new(r[..d].iter().map(|x| x * &l).collect());
                        let (a, b) = p.chart().pull_back_functional(&a, &(&r[d] * &l));
                        Effect::new(a, b)
                    })
                    .collect();
                Measurement::new(effects).expect("nonempty measurement")
            })
            .collect();
        Ok(EntropyModel::Polytope(measurements))
    }

    /// The extremal indecomposable measurements; empty for a ball.
    pub fn measurements(&self) -> &[Measurement] {
        match self {
            EntropyModel::Polytope(ms) => ms,
            EntropyModel::Ball(_) => &[],
        }
    }

    /// `S(s)` in bits. The caller is responsible for `s` lying in the space.
    pub fn entropy(&self, s: &State) -> f64 {
        match self {
            EntropyModel::Ball(b) => {
                let p = (1.0 + b.relative_radius(s.point())) / 2.0;
                shannon(&[p, 1.0 - p])
            }
            EntropyModel::Polytope(ms) => ms
                .iter()
                .map(|m| {
                    let probs: Vec<f64> = m.effects().iter().map(|e| to_f64(&e.value(s.point()))).collect();
                    shannon(&probs)
                })
                .fold(f64::INFINITY, f64::min),
        }
    }
}

/// Shannon entropy in bits, ignoring zero entries.
pub fn shannon(probabilities: &[f64]) -> f64 {
    probabilities
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum::<f64>()
        .max(0.0)
}

/// Measurement entropy of `s` in bits.
pub fn entropy(space: &StateSpace, s: &State) -> Result<f64> {
    check_states(space, &[s])?;
    Ok(EntropyModel::new(space)?.entropy(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn st(space: &StateSpace, s: &str) -> State {
        space.state(s.parse().unwrap()).unwrap()
    }

    fn exact(m: Metric) -> Rational {
        m.as_exact().unwrap().clone()
    }

    #[test]
    fn classical_distances_are_total_variation() {
        let space = StateSpace::simplex(2).unwrap();
        let (p, q) = (st(&space, "1,0"), st(&space, "0,1"));
        assert_eq!(exact(kolmogorov_distance(&space, &p, &q).unwrap()), int(1));
        assert_eq!(exact(kolmogorov_distance(&space, &p, &p).unwrap()), int(0));
        let (p, q) = (st(&space, "3/4,1/4"), st(&space, "1/4,3/4"));
        assert_eq!(exact(optimal_success_probability(&space, &p, &q).unwrap()), ratio(3, 4));
        assert_eq!(exact(optimal_success_probability(&space, &p, &p).unwrap()), ratio(1, 2));

        let tri = StateSpace::simplex(3).unwrap();
        let (p, q) = (st(&tri, "1/2,1/3,1/6"), st(&tri, "1/6,1/6,2/3"));
        // Total variation: (1/3 + 1/6 + 1/2)/2.
        assert_eq!(exact(kolmogorov_distance(&tri, &p, &q).unwrap()), ratio(1, 2));
    }

    #[test]
    fn ball_distances() {
        let ball = StateSpace::bloch_ball();
        let (a, b) = (st(&ball, "0,0,1"), st(&ball, "0,0,-1"));
        assert!((kolmogorov_distance(&ball, &a, &b).unwrap().to_f64() - 1.0).abs() < 1e-12);
        assert!((optimal_success_probability(&ball, &a, &b).unwrap().to_f64() - 1.0).abs() < 1e-12);
        let c = st(&ball, "3/5,0,0");
        assert!((kolmogorov_distance(&ball, &a, &c).unwrap().to_f64() - 34f64.sqrt() / 10.0).abs() < 1e-12);
    }

    #[test]
    fn fault_flips_the_sign() {
        let space = StateSpace::simplex(2).unwrap();
        let (p, q) = (st(&space, "1,0"), st(&space, "0,1"));
        let d = kolmogorov_distance_with(&space, &p, &q, Fault::FlipDistanceObjective).unwrap();
        assert_eq!(exact(d), int(-1));
    }

    #[test]
    fn states_outside_are_rejected() {
        let space = StateSpace::cube(2).unwrap();
        let outside = State::new_unchecked("2,2".parse().unwrap());
        let inside = st(&space, "0,0");
        assert_eq!(kolmogorov_distance(&space, &outside, &inside), Err(Error::NotAState));
    }

    fn ray(a: &str, b: Rational) -> EffectRay {
        EffectRay { a: a.parse().unwrap(), b }
    }

    #[test]
    fn rays_of_small_spaces() {
        let seg = StateSpace::cube(1).unwrap();
        let rays = indecomposable_effects(&seg).unwrap();
        assert_eq!(rays, vec![ray("-1", int(1)), ray("1", int(0))]);

        let square = StateSpace::cube(2).unwrap();
        let rays: HashSet<EffectRay> = indecomposable_effects(&square).unwrap().into_iter().collect();
        let expected: HashSet<EffectRay> =
            [ray("1,0", int(0)), ray("0,1", int(0)), ray("-1,0", int(1)), ray("0,-1", int(1))].into_iter().collect();
        assert_eq!(rays, expected);

        let tri = StateSpace::simplex(3).unwrap();
        let rays = indecomposable_effects(&tri).unwrap();
        assert_eq!(rays.len(), 3);
        for (j, r) in rays.iter().enumerate() {
            // Each ray agrees with some coordinate effect on the simplex.
            let hits = (0..3)
                .filter(|&i| tri.effects_agree(&r.effect(), &Effect::new(Point::unit(3, i), int(0))))
                .count();
            assert_eq!(hits, 1, "ray {j}");
        }
        assert!(matches!(indecomposable_effects(&StateSpace::disk()), Err(Error::Unsupported(_))));
    }

    /// Oracle: double description. Start from the cone of all `(a, b)` and
    /// intersect one halfspace at a time, keeping the generating rays.
    fn double_description_count(space: &StateSpace) -> usize {
        let p = space.as_polytope().unwrap();
        let d = p.dim();
        let rows: Vec<Vec<Rational>> = p
            .chart_vertices()
            .iter()
            .map(|w| w.coords().iter().cloned().chain([Rational::one()]).collect())
            .collect();
        // Start with the simplicial cone cut out by an affinely independent
        // set of d+1 vertices, generated by the inverse matrix columns.
        let anchor: Vec<usize> = {
            let mut a = Vec::new();
            for i in 0..rows.len() {
                let mut trial: Vec<Vec<Rational>> = a.iter().map(|&k: &usize| rows[k].clone()).collect();
                trial.push(rows[i].clone());
                if Matrix::from_rows(d + 1, trial).rank() == a.len() + 1 {
                    a.push(i);
                }
            }
            a
        };
        let inv = Matrix::from_rows(d + 1, anchor.iter().map(|&i| rows[i].clone())).inverse().unwrap();
        let mut gens: Vec<Vec<Rational>> = (0..=d).map(|j| inv.column(j)).collect();
        let mut active: Vec<usize> = anchor.clone();
        for (k, row) in rows.iter().enumerate() {
            if anchor.contains(&k) {
                continue;
            }
            let val = |g: &Vec<Rational>| crate::linalg::dot(row, g);
            let (pos, neg): (Vec<_>, Vec<_>) = gens.iter().cloned().partition(|g| !val(g).is_negative());
            let mut next = pos.clone();
            for gp in pos.iter().filter(|g| val(g).is_positive()) {
                for gn in &neg {
                    // Adjacent when the constraints tight at both have rank d − 1.
                    let zeros: Vec<Vec<Rational>> = active
                        .iter()
                        .filter(|&&i| {
                            crate::linalg::dot(&rows[i], gp).is_zero() && crate::linalg::dot(&rows[i], gn).is_zero()
                        })
                        .map(|&i| rows[i].clone())
                        .collect();
                    let rank = if zeros.is_empty() { 0 } else { Matrix::from_rows(d + 1, zeros).rank() };
                    if rank + 1 != d {
                        continue;
                    }
                    let (vp, vn) = (val(gp), -val(gn));
                    next.push(gp.iter().zip(gn).map(|(x, y)| x * &vn + y * &vp).collect());
                }
            }
            gens = next;
            active.push(k);
        }
        let normalized: HashSet<Vec<Rational>> = gens
            .into_iter()
            .map(|g| {
                let max = rows.iter().map(|r| crate::linalg::dot(r, &g)).max().unwrap();
                g.iter().map(|x| x / &max).collect()
            })
            .collect();
        normalized.len()
    }

    #[test]
    fn ray_counts_match_double_description() {
        let mut rng = crate::sampling::rng(4);
        let spaces = [
            StateSpace::cube(3).unwrap(),
            StateSpace::polygon(6).unwrap(),
            StateSpace::simplex(4).unwrap(),
            crate::sampling::random_polytope(2, 7, &mut rng),
            crate::sampling::random_polytope(3, 7, &mut rng),
        ];
        for space in &spaces {
            assert_eq!(indecomposable_effects(space).unwrap().len(), double_description_count(space));
        }
    }

    #[test]
    fn rays_are_valid_and_not_pairwise_decomposable() {
        let space = StateSpace::polygon(8).unwrap();
        let rays = indecomposable_effects(&space).unwrap();
        let p = space.as_polytope().unwrap();
        for r in &rays {
            assert!(space.validate_effect(&r.effect()));
            assert_eq!(p.functional_range(&r.effect()).1, int(1));
        }
        // A ray vanishes on a facet, a sum of two other rays does not.
        for r in &rays {
            let zeros: Vec<usize> = (0..p.vertices().len()).filter(|&k| r.effect().value(&p.vertices()[k]).is_zero()).collect();
            for (x, y) in rays.iter().tuple_combinations() {
                if x == r || y == r {
                    continue;
                }
                let sum = x.effect().add(&y.effect());
                assert!(!zeros.iter().all(|&k| sum.value(&p.vertices()[k]).is_zero()));
            }
        }
    }

    #[test]
    fn classical_entropy_is_shannon() {
        let tri = StateSpace::simplex(3).unwrap();
        let uniform = st(&tri, "1/3,1/3,1/3");
        assert!((entropy(&tri, &uniform).unwrap() - 3f64.log2()).abs() < 1e-12);
        let p = st(&tri, "1/2,1/4,1/4");
        assert!((entropy(&tri, &p).unwrap() - 1.5).abs() < 1e-12);
        assert!(entropy(&tri, &st(&tri, "0,1,0")).unwrap().abs() < 1e-12);
    }

    #[test]
    fn ball_and_square_entropy() {
        let ball = StateSpace::bloch_ball();
        let h34 = shannon(&[0.75, 0.25]);
        assert!((h34 - 0.811_278_124_459_132_9).abs() < 1e-12);
        assert!((entropy(&ball, &st(&ball, "0,0,1/2")).unwrap() - h34).abs() < 1e-12);
        assert!((entropy(&ball, &st(&ball, "0,0,0")).unwrap() - 1.0).abs() < 1e-12);
        assert!(entropy(&ball, &st(&ball, "0,1,0")).unwrap().abs() < 1e-12);

        let square = StateSpace::cube(2).unwrap();
        assert!((entropy(&square, &st(&square, "1/2,1/2")).unwrap() - 1.0).abs() < 1e-12);
        assert!(entropy(&square, &st(&square, "1,0")).unwrap().abs() < 1e-12);
        // Best is measuring x: H(1/4, 3/4).
        assert!((entropy(&square, &st(&square, "1/4,1/2")).unwrap() - h34).abs() < 1e-12);
    }
}
