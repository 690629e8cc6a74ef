use gptlab_core::geometry::{self, Point};
use gptlab_core::lp::{self, LinearProgram, LpResult, Relation};
use gptlab_core::rational::{int, ratio, Rational};
use itertools::Itertools;
use num_traits::Zero;
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=3).prop_map(|(n, d)| ratio(n, d))
}

fn point(dim: usize) -> impl Strategy<Value = Point> {
    prop::collection::vec(small_rational(), dim).prop_map(Point::new)
}

/// Oracle for two-variable LPs over a bounded feasible region: intersect
/// every pair of constraint lines and keep the best feasible intersection.
fn vertex_oracle(program: &LinearProgram) -> Option<Rational> {
    let lines: Vec<(&[Rational], &Rational)> =
        program.constraints.iter().map(|c| (c.coefficients.as_slice(), &c.rhs)).collect();
    lines
        .iter()
        .tuple_combinations()
        .filter_map(|((a, p), (b, q))| {
            let det = &a[0] * &b[1] - &a[1] * &b[0];
            if det.is_zero() {
                return None;
            }
            let x = (*p * &b[1] - &a[1] * *q) / &det;
            let y = (&a[0] * *q - *p * &b[0]) / &det;
            let v = vec![x, y];
            program.is_feasible(&v).then(|| gptlab_core::linalg::dot(&program.objective, &v))
        })
        .max()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lp_matches_vertex_enumeration(
        objective in prop::collection::vec(small_rational(), 2),
        extra in prop::collection::vec((small_rational(), small_rational(), small_rational()), 0..5),
    ) {
        // A box keeps the region bounded; the extra cuts may make it empty.
        let mut program = LinearProgram::new(2);
        program.maximize(objective);
        for (a, b, r) in [(1, 0, 3), (-1, 0, 3), (0, 1, 3), (0, -1, 3)] {
            program.add_constraint(vec![int(a), int(b)], Relation::Le, int(r));
        }
        for (a, b, r) in extra {
            program.add_constraint(vec![a, b], Relation::Le, r);
        }
        let expected = vertex_oracle(&program);
        match lp::solve(&program).unwrap() {
            LpResult::Optimal { optimum, point } => {
                prop_assert!(program.is_feasible(&point));
                prop_assert_eq!(Some(optimum), expected);
            }
            LpResult::Infeasible => prop_assert_eq!(expected, None),
            LpResult::Unbounded => prop_assert!(false, "bounded program reported unbounded"),
        }
    }

    #[test]
    fn extreme_points_is_idempotent(points in prop::collection::vec(point(2), 1..9)) {
        let once = geometry::extreme_points(&points).unwrap();
        let twice = geometry::extreme_points(&once).unwrap();
        prop_assert_eq!(&once, &twice);
        for p in &points {
            prop_assert!(geometry::in_convex_hull(p, &once).unwrap());
        }
    }

    #[test]
    fn barycentric_coordinates_are_unique_for_independent_points(
        points in prop::collection::vec(point(3), 2..5),
        raw in prop::collection::vec(1i64..=9, 4),
    ) {
        let n = points.len();
        let total: i64 = raw[..n].iter().sum();
        let weights: Vec<Rational> = raw[..n].iter().map(|&w| ratio(w, total)).collect();
        let target = Point::combination(weights.iter().zip(&points));
        let found = geometry::convex_decompose(&target, &points).unwrap();
        let mut recovered = vec![Rational::zero(); n];
        for (i, w) in found {
            recovered[i] = w;
        }
        if geometry::is_affinely_independent(&points).unwrap() {
            prop_assert_eq!(recovered, weights);
        } else {
            let rebuilt = Point::combination(recovered.iter().zip(&points));
            prop_assert_eq!(rebuilt, target);
        }
    }

    #[test]
    fn affine_extension_interpolates_independent_sources(
        sources in prop::collection::vec(point(3), 1..5),
        images in prop::collection::vec(point(2), 4),
    ) {
        prop_assume!(geometry::is_affinely_independent(&sources).unwrap());
        let images = &images[..sources.len()];
        let map = geometry::affine_extension(&sources, images).unwrap();
        for (s, t) in sources.iter().zip(images) {
            prop_assert_eq!(&map.apply(s), t);
        }
    }
}
