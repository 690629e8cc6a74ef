//! Seeded random states, weights and polytopes, all with exact rational
//! coordinates.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{self, Point};
use crate::gpt::{State, StateSpace};
use crate::rational::{int, ratio, Rational};

/// Largest denominator of sampled convex weights.
pub const WEIGHT_DENOMINATOR_CAP: i64 = 1 << 16;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Strictly positive weights summing to one with common denominator at most
/// [`WEIGHT_DENOMINATOR_CAP`]. The integer numerators are quantized
/// exponential draws, so the weights are roughly flat-Dirichlet distributed.
pub fn dirichlet_weights<R: Rng>(n: usize, rng: &mut R) -> Vec<Rational> {
    assert!(n >= 1, "need at least one weight");
    let per = (WEIGHT_DENOMINATOR_CAP / n as i64).max(1);
    let scale = (per / 8).max(1) as f64;
    let counts: Vec<i64> = (0..n)
        .map(|_| {
            let u: f64 = rng.random_range(f64::EPSILON..1.0);
            (1 + (-u.ln() * scale) as i64).min(per)
        })
        .collect();
    let total: i64 = counts.iter().sum();
    counts.into_iter().map(|c| ratio(c, total)).collect()
}

/// A random state: a convex combination of vertices for a polytope, a random
/// rational point for a ball.
pub fn random_state<R: Rng>(space: &StateSpace, rng: &mut R) -> State {
    match space {
        StateSpace::Polytope(p) => {
            let w = dirichlet_weights(p.vertices().len(), rng);
            let point = Point::combination(w.iter().zip(p.vertices()));
            State::new_unchecked(point)
        }
        StateSpace::Ball(b) => loop {
            let offset = Point::new((0..b.dim()).map(|_| ratio(rng.random_range(-64..=64), 64)).collect());
            if offset.norm_squared() <= Rational::one() {
                let p = &b.center().clone() + &offset.scale(b.radius());
                return State::new_unchecked(p);
            }
        },
    }
}

/// A random rational point on the unit sphere of `Q^dim` (`dim ≥ 2`), by
/// inverse stereographic projection of a point with small denominators.
pub fn random_sphere_point<R: Rng>(dim: usize, rng: &mut R) -> Point {
    assert!(dim >= 2, "sphere points need dim >= 2");
    let t: Vec<Rational> = (0..dim - 1)
        .map(|_| {
            let q = rng.random_range(1..=8i64);
            ratio(rng.random_range(-3 * q..=3 * q), q)
        })
        .collect();
    let n2: Rational = t.iter().map(|x| x * x).sum();
    let denom = Rational::one() + &n2;
    let mut coords: Vec<Rational> = t.iter().map(|x| int(2) * x / &denom).collect();
    coords.push((n2 - Rational::one()) / denom);
    Point::new(coords)
}

/// Applies a random invertible rational affine map with small entries.
fn random_affine_image<R: Rng>(points: Vec<Point>, rng: &mut R) -> Vec<Point> {
    let dim = points[0].dim();
    let mut rows = vec![vec![Rational::zero(); dim]; dim];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = int(rng.random_range(1..=2));
        for v in row.iter_mut().skip(i + 1) {
            *v = ratio(rng.random_range(-2..=2), 2);
        }
    }
    let shift: Vec<Rational> = (0..dim).map(|_| ratio(rng.random_range(-2..=2), 2)).collect();
    points
        .into_iter()
        .map(|p| {
            Point::new(
                rows.iter()
                    .zip(&shift)
                    .map(|(row, s)| crate::linalg::dot(row, p.coords()) + s)
                    .collect(),
            )
        })
        .collect()
}

/// A random full-dimensional polytope in `Q^dim` with exactly `num_vertices`
/// vertices: random rational sphere points under a random affine map.
pub fn random_polytope<R: Rng>(dim: usize, num_vertices: usize, rng: &mut R) -> StateSpace {
    assert!(dim >= 2 && num_vertices > dim, "need dim >= 2 and more than dim vertices");
    loop {
        let mut pts: Vec<Point> = Vec::with_capacity(num_vertices);
        while pts.len() < num_vertices {
            let p = random_sphere_point(dim, rng);
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
        if geometry::affine_dimension(&pts).expect("points") != dim {
            continue;
        }
        let space = StateSpace::polytope(random_affine_image(pts, rng)).expect("valid polytope");
        if space.as_polytope().map(|p| p.vertices().len()) == Some(num_vertices) {
            return space;
        }
    }
}

/// A random full-dimensional simplex in `Q^dim`.
pub fn random_simplex<R: Rng>(dim: usize, rng: &mut R) -> StateSpace {
    loop {
        let pts: Vec<Point> = (0..=dim)
            .map(|_| Point::new((0..dim).map(|_| ratio(rng.random_range(-8..=8), 4)).collect()))
            .collect();
        if geometry::is_affinely_independent(&pts).expect("points") {
            return StateSpace::polytope(pts).expect("valid simplex");
        }
    }
}
