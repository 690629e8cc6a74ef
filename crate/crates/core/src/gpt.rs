//! State spaces, states, effects and measurements.
//!
//! A state space is either a rational polytope, given by its pure states, or
//! an analytic disk/ball. Effects are kept in the `(a, b)` form
//! `e(s) = ⟨a, s⟩ + b`. A measurement is a tuple of effects whose sum is the
//! unit effect on the space.

use std::f64::consts::PI;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::{self, AffineChart, AffineMap, Point};
use crate::linalg::Matrix;
use crate::rational::{int, ratio, to_f64, Rational};

/// A recipe for a state space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceDescription {
    Polytope { vertices: Vec<Point> },
    Ball { dim: usize, center: Point, radius: Rational },
    /// The standard simplex of probability vectors in `Q^c`.
    Simplex { c: usize },
    /// The unit hypercube `[0, 1]^d`.
    Cube { d: usize },
    /// A rational polygon approximating the regular `n`-gon.
    Polygon { n: usize },
    /// The unit disk.
    Disk,
    /// The unit ball of `R^3` (Bloch ball).
    BlochBall,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    vertices: Vec<Point>,
    chart: AffineChart,
    chart_vertices: Vec<Point>,
}

impl Polytope {
    /// Pure states, in input order.
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn chart(&self) -> &AffineChart {
        &self.chart
    }

    /// Vertices expressed in chart coordinates (full-dimensional in `Q^dim`).
    pub fn chart_vertices(&self) -> &[Point] {
        &self.chart_vertices
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.chart.ambient_dim()
    }

    pub fn vertex_index(&self, p: &Point) -> Option<usize> {
        self.vertices.iter().position(|v| v == p)
    }

    /// Mean of the vertices.
    pub fn centroid(&self) -> Point {
        let w = ratio(1, self.vertices.len() as i64);
        Point::combination(self.vertices.iter().map(|v| (&w, v)))
    }

    /// `(min, max)` of an affine functional over the polytope.
    pub fn functional_range(&self, e: &Effect) -> (Rational, Rational) {
        let mut values = self.vertices.iter().map(|v| e.value(v));
        let first = values.next().expect("nonempty polytope");
        values.fold((first.clone(), first), |(lo, hi), v| {
            (if v < lo { v.clone() } else { lo }, if v > hi { v } else { hi })
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball {
    dim: usize,
    center: Point,
    radius: Rational,
}

impl Ball {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn radius(&self) -> &Rational {
        &self.radius
    }

    /// `|p − center|²`.
    pub fn offset_squared(&self, p: &Point) -> Rational {
        (p - &self.center).norm_squared()
    }

    /// `|p − center| / radius` in floating point.
    pub fn relative_radius(&self, p: &Point) -> f64 {
        to_f64(&(self.offset_squared(p) / (&self.radius * &self.radius))).sqrt()
    }
}

/// A compact convex state space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StateSpace {
    Polytope(Polytope),
    Ball(Ball),
}

/// A point of a state space. States carry no reference to their space; they
/// are only produced by [`StateSpace::state`] and friends, which check
/// membership.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State(Point);

impl State {
    pub fn point(&self) -> &Point {
        &self.0
    }

    pub fn into_point(self) -> Point {
        self.0
    }

    pub(crate) fn new_unchecked(point: Point) -> Self {
        State(point)
    }
}

/// An affine functional `e(s) = ⟨a, s⟩ + b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Effect {
    pub a: Point,
    pub b: Rational,
}

impl Effect {
    pub fn new(a: Point, b: Rational) -> Self {
        Self { a, b }
    }

    pub fn constant(dim: usize, b: Rational) -> Self {
        Self::new(Point::zero(dim), b)
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    /// Panics on dimension mismatch; see [`StateSpace::effect_value`].
    pub fn value(&self, p: &Point) -> Rational {
        self.a.dot(p) + &self.b
    }

    pub fn add(&self, other: &Effect) -> Effect {
        Effect::new(&self.a + &other.a, &self.b + &other.b)
    }

    pub fn sub(&self, other: &Effect) -> Effect {
        Effect::new(&self.a - &other.a, &self.b - &other.b)
    }

    pub fn scale(&self, factor: &Rational) -> Effect {
        Effect::new(self.a.scale(factor), &self.b * factor)
    }

    /// `u − e`.
    pub fn complement(&self) -> Effect {
        Effect::new(self.a.scale(&-Rational::one()), Rational::one() - &self.b)
    }
}

/// A finite tuple of effects. Outcomes are the indices `0..len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Measurement {
    effects: Vec<Effect>,
}

impl Measurement {
    pub fn new(effects: Vec<Effect>) -> Result<Self> {
        let first = effects.first().ok_or(Error::Empty)?;
        let d = first.dim();
        if let Some(e) = effects.iter().find(|e| e.dim() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: e.dim(),
            });
        }
        Ok(Self { effects })
    }

    pub fn effects(&self) -> &[Effect] {
        &self.effects
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.effects[0].dim()
    }

    /// Sum of all effects.
    pub fn total(&self) -> Effect {
        self.effects[1..].iter().fold(self.effects[0].clone(), |acc, e| acc.add(e))
    }

    /// Outcome probabilities `e_i(s)`.
    pub fn probabilities(&self, s: &State) -> Result<Vec<Rational>> {
        check_dim(self.dim(), s.point())?;
        Ok(self.effects.iter().map(|e| e.value(s.point())).collect())
    }
}

fn check_dim(expected: usize, p: &Point) -> Result<()> {
    if p.dim() == expected {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected,
            found: p.dim(),
        })
    }
}

impl StateSpace {
    pub fn from_description(description: &SpaceDescription) -> Result<Self> {
        match description {
            SpaceDescription::Polytope { vertices } => Self::polytope(vertices.clone()),
            SpaceDescription::Ball {
                dim,
                center,
                radius,
            } => Self::ball(*dim, center.clone(), radius.clone()),
            SpaceDescription::Simplex { c } => Self::simplex(*c),
            SpaceDescription::Cube { d } => Self::cube(*d),
            SpaceDescription::Polygon { n } => Self::polygon(*n),
            SpaceDescription::Disk => Ok(Self::disk()),
            SpaceDescription::BlochBall => Ok(Self::bloch_ball()),
        }
    }

    /// The convex hull of `points`; non-extreme points are discarded.
    pub fn polytope(points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidSpace("polytope needs at least one vertex".into()));
        }
        let vertices = geometry::extreme_points(&points)?;
        let chart = AffineChart::new(&vertices)?;
        let chart_vertices = vertices.iter().map(|v| chart.to_chart(v)).collect();
        Ok(StateSpace::Polytope(Polytope {
            vertices,
            chart,
            chart_vertices,
        }))
    }

    pub fn ball(dim: usize, center: Point, radius: Rational) -> Result<Self> {
        if !(2..=3).contains(&dim) {
            return Err(Error::InvalidSpace(format!("ball dimension must be 2 or 3, got {dim}")));
        }
        check_dim(dim, &center)?;
        if !radius.is_positive() {
            return Err(Error::InvalidSpace("ball radius must be positive".into()));
        }
        Ok(StateSpace::Ball(Ball {
            dim,
            center,
            radius,
        }))
    }

    /// Probability vectors over `c` outcomes.
    pub fn simplex(c: usize) -> Result<Self> {
        if c == 0 {
            return Err(Error::InvalidSpace("simplex needs c >= 1".into()));
        }
        Self::polytope((0..c).map(|i| Point::unit(c, i)).collect())
    }

    /// `[0, 1]^d`, vertices in binary counting order.
    pub fn cube(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidSpace("cube needs d >= 1".into()));
        }
        let vertices = (0..1u64 << d)
            .map(|mask| Point::new((0..d).map(|i| int(((mask >> i) & 1) as i64)).collect()))
            .collect();
        Self::polytope(vertices)
    }

    /// A rational polygon approximating the regular `n`-gon.
    ///
    /// For `n ∈ {3, 4, 6}` the polygon is exactly affine-regular. For `n`
    /// divisible by 4 the vertices approximate angles `(2k+1)π/n` on the unit
    /// circle and the vertex set is invariant under the symmetries of the
    /// square (so the octagon is vertex-transitive and every such polygon is
    /// centrally symmetric). Other `n` use angles `2πk/n`. No rational
    /// polygon with 5 or 7 vertices has a vertex-transitive affine group.
    pub fn polygon(n: usize) -> Result<Self> {
        let vertices = match n {
            0..=2 => return Err(Error::InvalidSpace(format!("polygon needs n >= 3, got {n}"))),
            3 => vec![Point::from_ints(&[0, 0]), Point::from_ints(&[1, 0]), Point::from_ints(&[0, 1])],
            4 => vec![
                Point::from_ints(&[1, 0]),
                Point::from_ints(&[0, 1]),
                Point::from_ints(&[-1, 0]),
                Point::from_ints(&[0, -1]),
            ],
            6 => vec![
                Point::from_ints(&[1, 0]),
                Point::from_ints(&[1, 1]),
                Point::from_ints(&[0, 1]),
                Point::from_ints(&[-1, 0]),
                Point::from_ints(&[-1, -1]),
                Point::from_ints(&[0, -1]),
            ],
            _ if n.is_multiple_of(4) => (0..n).map(|k| circle_point(2 * k as u64 + 1, n as u64)).collect(),
            _ => (0..n).map(|k| circle_point(2 * k as u64, n as u64)).collect(),
        };
        Self::polytope(vertices)
    }

    pub fn disk() -> Self {
        Self::ball(2, Point::zero(2), Rational::one()).expect("unit disk")
    }

    pub fn bloch_ball() -> Self {
        Self::ball(3, Point::zero(3), Rational::one()).expect("unit ball")
    }

    pub fn as_polytope(&self) -> Option<&Polytope> {
        match self {
            StateSpace::Polytope(p) => Some(p),
            StateSpace::Ball(_) => None,
        }
    }

    pub fn as_ball(&self) -> Option<&Ball> {
        match self {
            StateSpace::Ball(b) => Some(b),
            StateSpace::Polytope(_) => None,
        }
    }

    pub fn is_ball(&self) -> bool {
        matches!(self, StateSpace::Ball(_))
    }

    /// Affine dimension of the space.
    pub fn dim(&self) -> usize {
        match self {
            StateSpace::Polytope(p) => p.dim(),
            StateSpace::Ball(b) => b.dim,
        }
    }

    /// Length of coordinate vectors.
    pub fn ambient_dim(&self) -> usize {
        match self {
            StateSpace::Polytope(p) => p.ambient_dim(),
            StateSpace::Ball(b) => b.dim,
        }
    }

    pub fn contains(&self, p: &Point) -> Result<bool> {
        check_dim(self.ambient_dim(), p)?;
        match self {
            StateSpace::Polytope(poly) => {
                if !poly.chart.contains(p) {
                    return Ok(false);
                }
                geometry::in_convex_hull(&poly.chart.to_chart(p), &poly.chart_vertices)
            }
            StateSpace::Ball(b) => Ok(b.offset_squared(p) <= &b.radius * &b.radius),
        }
    }

    /// The state at `p`, or [`Error::NotAState`].
    pub fn state(&self, p: Point) -> Result<State> {
        if self.contains(&p)? {
            Ok(State(p))
        } else {
            Err(Error::NotAState)
        }
    }

    pub fn is_pure(&self, s: &State) -> bool {
        match self {
            StateSpace::Polytope(p) => p.vertex_index(s.point()).is_some(),
            StateSpace::Ball(b) => b.offset_squared(s.point()) == &b.radius * &b.radius,
        }
    }

    /// Pure states of a polytope, as states.
    pub fn pure_states(&self) -> Option<Vec<State>> {
        self.as_polytope()
            .map(|p| p.vertices.iter().cloned().map(State).collect())
    }

    pub fn unit_effect(&self) -> Effect {
        Effect::constant(self.ambient_dim(), Rational::one())
    }

    pub fn zero_effect(&self) -> Effect {
        Effect::constant(self.ambient_dim(), Rational::zero())
    }

    pub fn effect_value(&self, e: &Effect, s: &State) -> Result<Rational> {
        check_dim(self.ambient_dim(), &e.a)?;
        check_dim(self.ambient_dim(), s.point())?;
        Ok(e.value(s.point()))
    }

    /// Whether `e` takes values in `[0, 1]` on the whole space.
    ///
    /// On a polytope the extremes are attained at vertices. On a ball the range
    /// is `[m − r|a|, m + r|a|]` with `m = ⟨a, c⟩ + b`, compared through squares.
    pub fn validate_effect(&self, e: &Effect) -> bool {
        if e.dim() != self.ambient_dim() {
            return false;
        }
        match self {
            StateSpace::Polytope(p) => {
                let (lo, hi) = p.functional_range(e);
                !lo.is_negative() && hi <= Rational::one()
            }
            StateSpace::Ball(ball) => {
                let m = e.value(&ball.center);
                let spread_sq = &ball.radius * &ball.radius * e.a.norm_squared();
                let upper_gap = Rational::one() - &m;
                !m.is_negative()
                    && !upper_gap.is_negative()
                    && &m * &m >= spread_sq
                    && &upper_gap * &upper_gap >= spread_sq
            }
        }
    }

    /// All effects valid and summing to the unit effect on the space.
    pub fn validate_measurement(&self, m: &Measurement) -> bool {
        m.dim() == self.ambient_dim()
            && m.effects.iter().all(|e| self.validate_effect(e))
            && self.effects_agree(&m.total(), &self.unit_effect())
    }

    /// Whether two functionals agree on every state.
    ///
    /// On a polytope whose affine hull is not the whole ambient space the
    /// `(a, b)` form is not unique, so agreement is decided on the vertices.
    pub fn effects_agree(&self, e: &Effect, f: &Effect) -> bool {
        if e.dim() != f.dim() || e.dim() != self.ambient_dim() {
            return false;
        }
        match self {
            StateSpace::Polytope(p) => p.vertices.iter().all(|v| e.value(v) == f.value(v)),
            StateSpace::Ball(_) => e == f,
        }
    }

    /// The state with coordinates `x`, or [`Error::NotAState`] when `x` lies
    /// outside the space.
    pub fn functional_to_state(&self, x: &Point) -> Result<State> {
        self.state(x.clone())
    }

    /// Reconstructs the state whose effect values are `values`.
    ///
    /// The effects must separate states (their linear parts must span the
    /// direction space of the space). Fails with [`Error::NotAState`] when no
    /// state of the space has these values.
    pub fn state_from_effect_values(&self, effects: &[Effect], values: &[Rational]) -> Result<State> {
        if effects.len() != values.len() {
            return Err(Error::InvalidArgument(format!(
                "{} effects but {} values",
                effects.len(),
                values.len()
            )));
        }
        for e in effects {
            check_dim(self.ambient_dim(), &e.a)?;
        }
        let (dim, rows, rhs): (usize, Vec<Vec<Rational>>, Vec<Rational>) = match self {
            StateSpace::Polytope(p) => {
                let mut rows = Vec::new();
                let mut rhs = Vec::new();
                for (e, v) in effects.iter().zip(values) {
                    let (a, b) = p.chart.push_forward_functional(&e.a, &e.b);
                    rows.push(a.into_coords());
                    rhs.push(v - b);
                }
                (p.dim(), rows, rhs)
            }
            StateSpace::Ball(ball) => (
                ball.dim,
                effects.iter().map(|e| e.a.coords().to_vec()).collect(),
                effects.iter().zip(values).map(|(e, v)| v - &e.b).collect(),
            ),
        };
        let m = Matrix::from_rows(dim, rows);
        if m.rank() < dim {
            return Err(Error::InvalidArgument("effects do not separate states".into()));
        }
        let y = Point::new(m.solve(&rhs).ok_or(Error::NotAState)?);
        let x = match self {
            StateSpace::Polytope(p) => p.chart.from_chart(&y),
            StateSpace::Ball(_) => y,
        };
        self.state(x)
    }

    /// `dim` normalized coordinate effects together with `u` and `0`. The
    /// coordinate effects' linear parts span the direction space.
    pub fn spanning_effects(&self) -> Vec<Effect> {
        let mut out = Vec::with_capacity(self.dim() + 2);
        match self {
            StateSpace::Polytope(p) => {
                for i in 0..p.dim() {
                    let values = p.chart_vertices.iter().map(|v| v[i].clone());
                    let lo = values.clone().min().expect("vertex");
                    let hi = values.max().expect("vertex");
                    let width = &hi - &lo;
                    let a = Point::unit(p.dim(), i).scale(&width.recip());
                    let b = -lo / &width;
                    let (a, b) = p.chart.pull_back_functional(&a, &b);
                    out.push(Effect::new(a, b));
                }
            }
            StateSpace::Ball(ball) => {
                let two_r = &ball.radius * int(2);
                for i in 0..ball.dim {
                    let a = Point::unit(ball.dim, i).scale(&two_r.recip());
                    let b = (&ball.radius - &ball.center[i]) / &two_r;
                    out.push(Effect::new(a, b));
                }
            }
        }
        out.push(self.unit_effect());
        out.push(self.zero_effect());
        out
    }
}

/// The dual action `Ψ*(e) = e ∘ Ψ`: `a' = Aᵀa`, `b' = ⟨a, t⟩ + b`.
pub fn dual_on_effects(psi: &AffineMap, e: &Effect) -> Result<Effect> {
    check_dim(psi.target_dim(), &e.a)?;
    let a = Point::new(psi.linear.transpose().mul_vec(e.a.coords()));
    let b = e.a.dot(&psi.translation) + &e.b;
    Ok(Effect::new(a, b))
}

/// A rational point near angle `πp/q` on the unit circle. The angle is reduced
/// to `[0, π/4]` exactly and mapped back by exact reflections, so angle sets
/// that are symmetric under the square's symmetries give symmetric point sets.
fn circle_point(p: u64, q: u64) -> Point {
    // Angle = π·num/den.
    let (mut num, mut den) = (p % (2 * q), q);
    let (mut flip_y, mut flip_x, mut swap) = (false, false, false);
    if num > den {
        num = 2 * den - num;
        flip_y = true;
    }
    if 2 * num > den {
        num = den - num;
        flip_x = true;
    }
    if 4 * num > den {
        // π/2 − π·num/den = π·(den − 2num)/(2den)
        num = den - 2 * num;
        den *= 2;
        swap = true;
    }
    const SCALE: i64 = 1 << 16;
    let (x, y) = if num == 0 {
        (Rational::one(), Rational::zero())
    } else if 4 * num == den {
        let q = ratio((std::f64::consts::FRAC_1_SQRT_2 * SCALE as f64).round() as i64, SCALE);
        (q.clone(), q)
    } else {
        let theta = PI * num as f64 / den as f64;
        let t = ratio(((theta / 2.0).tan() * SCALE as f64).round() as i64, SCALE);
        let t2 = &t * &t;
        let denom = Rational::one() + &t2;
        ((Rational::one() - &t2) / &denom, int(2) * &t / &denom)
    };
    let (mut x, mut y) = if swap { (y, x) } else { (x, y) };
    if flip_x {
        x = -x;
    }
    if flip_y {
        y = -y;
    }
    Point::new(vec![x, y])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(space: &StateSpace, coords: &str) -> State {
        space.state(coords.parse().unwrap()).unwrap()
    }

    #[test]
    fn generators() {
        let s = StateSpace::simplex(3).unwrap();
        assert_eq!(
            s.as_polytope().unwrap().vertices(),
            &[Point::from_ints(&[1, 0, 0]), Point::from_ints(&[0, 1, 0]), Point::from_ints(&[0, 0, 1])]
        );
        assert_eq!(s.dim(), 2);
        let sq = StateSpace::cube(2).unwrap();
        assert_eq!(sq.as_polytope().unwrap().vertices().len(), 4);
        assert_eq!(StateSpace::cube(3).unwrap().as_polytope().unwrap().vertices().len(), 8);
        let b = StateSpace::bloch_ball();
        assert_eq!(b.dim(), 3);
        assert_eq!(b.as_ball().unwrap().radius(), &Rational::one());
    }

    #[test]
    fn constructor_errors() {
        assert!(StateSpace::polytope(vec![]).is_err());
        assert!(StateSpace::ball(4, Point::zero(4), Rational::one()).is_err());
        assert!(StateSpace::ball(2, Point::zero(2), Rational::zero()).is_err());
        assert!(StateSpace::ball(2, Point::zero(3), Rational::one()).is_err());
        assert!(StateSpace::polygon(2).is_err());
    }

    #[test]
    fn polygons_have_n_vertices_and_contain_center() {
        for n in 3..=32 {
            let p = StateSpace::polygon(n).unwrap();
            assert_eq!(p.as_polytope().unwrap().vertices().len(), n, "n = {n}");
            let centroid = p.as_polytope().unwrap().centroid();
            assert!(p.contains(&centroid).unwrap());
        }
    }

    #[test]
    fn polygons_divisible_by_four_are_centrally_symmetric() {
        for n in [8, 12, 16, 32] {
            let p = StateSpace::polygon(n).unwrap();
            let verts = p.as_polytope().unwrap().vertices();
            for v in verts {
                let neg = v.scale(&-Rational::one());
                assert!(verts.contains(&neg));
                let swapped = Point::new(vec![v[1].clone(), v[0].clone()]);
                assert!(verts.contains(&swapped));
            }
        }
    }

    #[test]
    fn effect_values() {
        let classical = StateSpace::polytope(vec![Point::from_ints(&[1, 0]), Point::from_ints(&[0, 1])]).unwrap();
        let e = Effect::new(Point::from_ints(&[1, 0]), Rational::zero());
        let p = state(&classical, "1/2, 1/2");
        assert_eq!(classical.effect_value(&e, &p).unwrap(), ratio(1, 2));
        assert_eq!(classical.effect_value(&classical.unit_effect(), &p).unwrap(), Rational::one());
        assert_eq!(classical.effect_value(&classical.zero_effect(), &p).unwrap(), Rational::zero());
        let bad = Effect::new(Point::from_ints(&[1]), Rational::zero());
        assert!(classical.effect_value(&bad, &p).is_err());
    }

    #[test]
    fn unit_and_zero_effects() {
        let sq = StateSpace::cube(2).unwrap();
        assert_eq!(sq.unit_effect(), Effect::new(Point::zero(2), Rational::one()));
        assert_eq!(StateSpace::bloch_ball().zero_effect(), Effect::new(Point::zero(3), Rational::zero()));
        let diff = sq.unit_effect().sub(&sq.zero_effect());
        for v in sq.as_polytope().unwrap().vertices() {
            assert_eq!(diff.value(v), Rational::one());
        }
    }

    #[test]
    fn effect_validation() {
        let sq = StateSpace::cube(2).unwrap();
        assert!(sq.validate_effect(&Effect::new(Point::from_ints(&[1, 0]), Rational::zero())));
        assert!(!sq.validate_effect(&Effect::constant(2, int(2))));
        let ball = StateSpace::bloch_ball();
        assert!(ball.validate_effect(&Effect::new(Point::new(vec![ratio(1, 2), int(0), int(0)]), ratio(1, 2))));
        assert!(!ball.validate_effect(&Effect::new(Point::new(vec![ratio(1, 2), int(0), int(0)]), ratio(2, 3))));
        assert!(!ball.validate_effect(&Effect::new(Point::new(vec![ratio(3, 5), int(0), int(0)]), ratio(1, 2))));
    }

    #[test]
    fn ball_effect_range_against_sphere_sampling() {
        // Dense sampling of the sphere as an independent range oracle.
        let ball = StateSpace::bloch_ball();
        let candidates = [
            (vec![ratio(1, 2), int(0), int(0)], ratio(1, 2)),
            (vec![ratio(1, 4), ratio(1, 4), int(0)], ratio(1, 2)),
            (vec![ratio(1, 3), ratio(1, 3), ratio(1, 3)], ratio(1, 2)),
            (vec![ratio(1, 5), int(0), ratio(1, 5)], ratio(3, 10)),
        ];
        for (a, b) in candidates {
            let e = Effect::new(Point::new(a.clone()), b.clone());
            let af: Vec<f64> = a.iter().map(to_f64).collect();
            let bf = to_f64(&b);
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for i in 0..200 {
                for j in 0..400 {
                    let th = PI * i as f64 / 199.0;
                    let ph = 2.0 * PI * j as f64 / 400.0;
                    let x = [th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()];
                    let v = af[0] * x[0] + af[1] * x[1] + af[2] * x[2] + bf;
                    lo = lo.min(v);
                    hi = hi.max(v);
                }
            }
            let sampled_valid = lo >= -1e-3 && hi <= 1.0 + 1e-3;
            assert_eq!(ball.validate_effect(&e), sampled_valid, "{e:?} range [{lo}, {hi}]");
        }
    }

    #[test]
    fn measurement_validation() {
        let sq = StateSpace::cube(2).unwrap();
        let e = Effect::new(Point::new(vec![ratio(1, 2), ratio(1, 2)]), Rational::zero());
        let m = Measurement::new(vec![e.clone(), e.complement()]).unwrap();
        assert!(sq.validate_measurement(&m));

        let too_big = Effect::new(Point::from_ints(&[2, 0]), Rational::zero());
        let m = Measurement::new(vec![too_big.clone(), too_big.complement()]).unwrap();
        assert!(!sq.validate_measurement(&m));

        let simplex = StateSpace::simplex(3).unwrap();
        let decision: Vec<Effect> = (0..3).map(|i| Effect::new(Point::unit(3, i), Rational::zero())).collect();
        assert!(simplex.validate_measurement(&Measurement::new(decision).unwrap()));
    }

    #[test]
    fn dual_maps() {
        let sq = StateSpace::cube(2).unwrap();
        let e = Effect::new(Point::from_ints(&[1, 0]), Rational::zero());
        assert_eq!(dual_on_effects(&AffineMap::identity(2), &e).unwrap(), e);

        // Swapping classical coordinates swaps the effect vector.
        let swap = AffineMap::new(
            Matrix::from_rows(2, [vec![int(0), int(1)], vec![int(1), int(0)]]),
            Point::zero(2),
        );
        let classical = Effect::new(Point::new(vec![ratio(1, 3), ratio(2, 3)]), Rational::zero());
        assert_eq!(
            dual_on_effects(&swap, &classical).unwrap(),
            Effect::new(Point::new(vec![ratio(2, 3), ratio(1, 3)]), Rational::zero())
        );

        let flip = AffineMap::new(
            Matrix::from_rows(2, [vec![int(-1), int(0)], vec![int(0), int(1)]]),
            Point::from_ints(&[1, 0]),
        );
        let inv = flip.inverse().unwrap();
        let there = dual_on_effects(&flip, &e).unwrap();
        assert!(sq.validate_effect(&there));
        assert_eq!(dual_on_effects(&inv, &there).unwrap(), e);
        assert_eq!(dual_on_effects(&flip, &sq.unit_effect()).unwrap(), sq.unit_effect());
    }

    #[test]
    fn functional_to_state_examples() {
        let sq = StateSpace::cube(2).unwrap();
        let p: Point = "1/2,1/2".parse().unwrap();
        assert_eq!(sq.functional_to_state(&p).unwrap().point(), &p);
        assert_eq!(sq.functional_to_state(&Point::from_ints(&[2, 0])), Err(Error::NotAState));
        let v = sq.functional_to_state(&Point::from_ints(&[1, 1])).unwrap();
        assert!(sq.is_pure(&v));
    }

    #[test]
    fn reconstruction_from_effect_values() {
        for space in [StateSpace::simplex(3).unwrap(), StateSpace::cube(2).unwrap(), StateSpace::bloch_ball()] {
            let effects = space.spanning_effects();
            assert_eq!(effects.len(), space.dim() + 2);
            let s = match &space {
                StateSpace::Polytope(p) => State(p.centroid()),
                StateSpace::Ball(_) => state(&space, "1/3, 0, -1/2"),
            };
            let values: Vec<Rational> = effects.iter().map(|e| e.value(s.point())).collect();
            assert_eq!(space.state_from_effect_values(&effects, &values).unwrap(), s);
            for e in &effects {
                assert!(space.validate_effect(e));
            }
        }
        let sq = StateSpace::cube(2).unwrap();
        let effects = sq.spanning_effects();
        let values = vec![int(2), int(0), int(1), int(0)];
        assert_eq!(sq.state_from_effect_values(&effects, &values), Err(Error::NotAState));
    }
}
