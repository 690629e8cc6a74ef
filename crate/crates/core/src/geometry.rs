//! Exact convex-geometry primitives: points, affine maps, affine hulls, hull
//! membership and extreme-point reduction.

use std::fmt;
use std::ops::{Add, Index, Sub};
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix};
use crate::lp::{self, LinearProgram, Relation};
use crate::rational::{int, parse_rational, ParseRationalError, Rational};

/// A point of `Q^d`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(Vec<Rational>);

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        Self(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Self(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        Self(vec![Rational::zero(); dim])
    }

    /// The `i`-th standard basis vector of `Q^dim`.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut p = Self::zero(dim);
        p.0[i] = Rational::one();
        p
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn dot(&self, other: &Point) -> Rational {
        dot(&self.0, &other.0)
    }

    pub fn norm_squared(&self) -> Rational {
        self.dot(self)
    }

    pub fn scale(&self, factor: &Rational) -> Point {
        Point(self.0.iter().map(|c| c * factor).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(crate::rational::to_f64).collect()
    }

    /// `Σ weights_i · points_i`. Panics on empty input or length mismatch.
    pub fn combination<'a>(weights: impl IntoIterator<Item = (&'a Rational, &'a Point)>) -> Point {
        let mut acc: Option<Point> = None;
        for (w, p) in weights {
            let term = p.scale(w);
            acc = Some(match acc {
                None => term,
                Some(a) => &a + &term,
            });
        }
        acc.expect("empty combination")
    }
}

impl Index<usize> for Point {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl Add for &Point {
    type Output = Point;
    fn add(self, rhs: &Point) -> Point {
        assert_eq!(self.dim(), rhs.dim(), "point dimensions");
        Point(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Point {
    type Output = Point;
    fn sub(self, rhs: &Point) -> Point {
        assert_eq!(self.dim(), rhs.dim(), "point dimensions");
        Point(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Comma-separated rationals, optionally wrapped in parentheses: `"1/2, 0"`.
impl FromStr for Point {
    type Err = ParseRationalError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        if inner.trim().is_empty() {
            return Ok(Point(Vec::new()));
        }
        inner.split(',').map(parse_rational).collect::<Result<_, _>>().map(Point)
    }
}

/// `p ↦ linear·p + translation`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AffineMap {
    pub linear: Matrix,
    pub translation: Point,
}

impl AffineMap {
    pub fn new(linear: Matrix, translation: Point) -> Self {
        assert_eq!(linear.rows(), translation.dim(), "translation length");
        Self {
            linear,
            translation,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(Matrix::identity(dim), Point::zero(dim))
    }

    /// The constant map onto `target`, as a map of `Q^dim`.
    pub fn constant(target: &Point) -> Self {
        Self::new(Matrix::zeros(target.dim(), target.dim()), target.clone())
    }

    pub fn source_dim(&self) -> usize {
        self.linear.cols()
    }

    pub fn target_dim(&self) -> usize {
        self.linear.rows()
    }

    pub fn apply(&self, p: &Point) -> Point {
        &Point(self.linear.mul_vec(p.coords())) + &self.translation
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AffineMap) -> AffineMap {
        AffineMap {
            linear: self.linear.mul(&inner.linear),
            translation: self.apply(&inner.translation),
        }
    }

    pub fn inverse(&self) -> Option<AffineMap> {
        let inv = self.linear.inverse()?;
        let translation = Point(inv.mul_vec(self.translation.coords())).scale(&-Rational::one());
        Some(AffineMap {
            linear: inv,
            translation,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.linear.is_identity() && self.translation.is_zero()
    }

    /// `Σ w_i · maps_i`; with weights summing to one this is a convex
    /// combination of affine maps.
    pub fn combination(parts: &[(Rational, AffineMap)]) -> AffineMap {
        let (w0, m0) = parts.first().expect("empty combination");
        let mut linear = m0.linear.scale(w0);
        let mut translation = m0.translation.scale(w0);
        for (w, m) in &parts[1..] {
            linear = linear.add(&m.linear.scale(w));
            translation = &translation + &m.translation.scale(w);
        }
        AffineMap {
            linear,
            translation,
        }
    }
}

impl fmt::Debug for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AffineMap")
            .field("linear", &self.linear)
            .field("translation", &self.translation)
            .finish()
    }
}

/// Coordinates on the affine hull of a point set.
///
/// `from_chart(y) = origin + basis·y` and `to_chart(p) = projector·(p − origin)`
/// where `projector = (basisᵀbasis)⁻¹basisᵀ`. For a full-dimensional set the
/// chart is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineChart {
    origin: Point,
    basis: Matrix,
    projector: Matrix,
}

impl AffineChart {
    pub fn new(points: &[Point]) -> Result<Self> {
        let ambient = check_dims(points)?;
        let origin = points[0].clone();
        let directions: Vec<Point> = points[1..].iter().map(|p| p - &origin).collect();
        let independent = independent_subset(ambient, &directions);
        if independent.len() == ambient {
            return Ok(Self {
                origin: Point::zero(ambient),
                basis: Matrix::identity(ambient),
                projector: Matrix::identity(ambient),
            });
        }
        let cols: Vec<&[Rational]> = independent.iter().map(|&i| directions[i].coords()).collect();
        let basis = Matrix::from_columns(ambient, &cols);
        let bt = basis.transpose();
        let gram_inv = bt.mul(&basis).inverse().expect("independent directions");
        Ok(Self {
            origin,
            projector: gram_inv.mul(&bt),
            basis,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_identity(&self) -> bool {
        self.dim() == self.ambient_dim()
    }

    pub fn to_chart(&self, p: &Point) -> Point {
        if self.is_identity() {
            return p.clone();
        }
        Point(self.projector.mul_vec((p - &self.origin).coords()))
    }

    pub fn from_chart(&self, y: &Point) -> Point {
        if self.is_identity() {
            return y.clone();
        }
        &Point(self.basis.mul_vec(y.coords())) + &self.origin
    }

    /// Whether `p` lies on the affine hull.
    pub fn contains(&self, p: &Point) -> bool {
        p.dim() == self.ambient_dim() && self.from_chart(&self.to_chart(p)) == *p
    }

    /// Pulls a chart functional `y ↦ ⟨a', y⟩ + b'` back to ambient coordinates.
    /// The returned `a` lies in the direction space of the hull.
    pub fn pull_back_functional(&self, a: &Point, b: &Rational) -> (Point, Rational) {
        if self.is_identity() {
            return (a.clone(), b.clone());
        }
        let ambient_a = Point(self.projector.transpose().mul_vec(a.coords()));
        let offset = b - ambient_a.dot(&self.origin);
        (ambient_a, offset)
    }

    /// Pushes an ambient functional `x ↦ ⟨a, x⟩ + b` into chart coordinates.
    pub fn push_forward_functional(&self, a: &Point, b: &Rational) -> (Point, Rational) {
        if self.is_identity() {
            return (a.clone(), b.clone());
        }
        let chart_a = Point(self.basis.transpose().mul_vec(a.coords()));
        (chart_a, b + a.dot(&self.origin))
    }

    /// Expresses an affine map that preserves the hull in chart coordinates.
    pub fn push_forward_map(&self, map: &AffineMap) -> AffineMap {
        if self.is_identity() {
            return map.clone();
        }
        let linear = self.projector.mul(&map.linear).mul(&self.basis);
        let translation = self.to_chart(&map.apply(&self.origin));
        AffineMap::new(linear, translation)
    }
}

fn check_dims(points: &[Point]) -> Result<usize> {
    let first = points.first().ok_or(Error::Empty)?;
    let d = first.dim();
    match points.iter().find(|p| p.dim() != d) {
        Some(p) => Err(Error::DimensionMismatch {
            expected: d,
            found: p.dim(),
        }),
        None => Ok(d),
    }
}

/// Indices of a maximal linearly independent subset, greedily in input order.
fn independent_subset(ambient: usize, vectors: &[Point]) -> Vec<usize> {
    let cols: Vec<&[Rational]> = vectors.iter().map(Point::coords).collect();
    if cols.is_empty() {
        return Vec::new();
    }
    Matrix::from_columns(ambient, &cols).rref().1
}

/// Dimension of the affine hull: the rank of `{p_i − p_0}`.
pub fn affine_dimension(points: &[Point]) -> Result<usize> {
    let ambient = check_dims(points)?;
    let directions: Vec<Point> = points[1..].iter().map(|p| p - &points[0]).collect();
    Ok(independent_subset(ambient, &directions).len())
}

pub fn is_affinely_independent(points: &[Point]) -> Result<bool> {
    Ok(affine_dimension(points)? + 1 == points.len())
}

/// Weights of a convex combination of `generators` equal to `target`.
///
/// Only the support is returned (nonzero weights), as `(generator index,
/// weight)` pairs in index order. The decomposition is a basic feasible
/// solution of the membership LP, so its support has at most `d + 1` entries.
pub fn convex_decompose(target: &Point, generators: &[Point]) -> Result<Vec<(usize, Rational)>> {
    let d = check_dims(generators)?;
    if target.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: target.dim(),
        });
    }
    let n = generators.len();
    let mut lp = LinearProgram::new(n);
    for i in 0..n {
        lp.nonnegative(i);
    }
    lp.add_constraint(vec![Rational::one(); n], Relation::Eq, Rational::one());
    for k in 0..d {
        let row = generators.iter().map(|g| g[k].clone()).collect();
        lp.add_constraint(row, Relation::Eq, target[k].clone());
    }
    let weights = lp::feasible_point(&lp)?.ok_or(Error::NotInHull)?;
    Ok(weights
        .into_iter()
        .enumerate()
        .filter(|(_, w)| !w.is_zero())
        .collect())
}

/// Whether `target` lies in the convex hull of `generators`.
pub fn in_convex_hull(target: &Point, generators: &[Point]) -> Result<bool> {
    match convex_decompose(target, generators) {
        Ok(_) => Ok(true),
        Err(Error::NotInHull) => Ok(false),
        Err(e) => Err(e),
    }
}

/// The extreme points of the hull of `points`, in input order.
///
/// Duplicates are collapsed to their first occurrence; then points are tested
/// in input order and dropped when they are a convex combination of the points
/// still kept.
pub fn extreme_points(points: &[Point]) -> Result<Vec<Point>> {
    check_dims(points)?;
    let mut kept: Vec<Point> = Vec::with_capacity(points.len());
    for p in points {
        if !kept.contains(p) {
            kept.push(p.clone());
        }
    }
    let mut i = 0;
    while i < kept.len() {
        if kept.len() == 1 {
            break;
        }
        let others: Vec<Point> = kept
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, q)| q.clone())
            .collect();
        if in_convex_hull(&kept[i], &others)? {
            kept.remove(i);
        } else {
            i += 1;
        }
    }
    Ok(kept)
}

/// An affine map of the ambient space with `A·sources_i + b = images_i`.
///
/// Unique when the sources affinely span the ambient space. Otherwise the map
/// acts as the identity on the orthogonal complement of the source direction
/// space.
pub fn affine_extension(sources: &[Point], images: &[Point]) -> Result<AffineMap> {
    affine_extension_anchored(sources, images, 0)
}

/// [`affine_extension`] computed relative to `sources[anchor]`.
pub fn affine_extension_anchored(
    sources: &[Point],
    images: &[Point],
    anchor: usize,
) -> Result<AffineMap> {
    if sources.len() != images.len() {
        return Err(Error::InvalidArgument(format!(
            "{} sources but {} images",
            sources.len(),
            images.len()
        )));
    }
    let d = check_dims(sources)?;
    let e = check_dims(images)?;
    if anchor >= sources.len() {
        return Err(Error::InvalidArgument(format!("anchor {anchor} out of range")));
    }
    let base = &sources[anchor];
    let base_image = &images[anchor];
    let mut src_dirs = Vec::new();
    let mut img_dirs = Vec::new();
    for (i, (s, t)) in sources.iter().zip(images).enumerate() {
        if i != anchor {
            src_dirs.push(s - base);
            img_dirs.push(t - base_image);
        }
    }
    let independent = independent_subset(d, &src_dirs);
    let r = independent.len();

    // A = E·P + (I − D·P) restricted to matching shapes, where D holds the
    // independent source directions and P is the least-squares left inverse.
    let linear = if r == 0 {
        identity_like(e, d)
    } else {
        let dcols: Vec<&[Rational]> = independent.iter().map(|&i| src_dirs[i].coords()).collect();
        let ecols: Vec<&[Rational]> = independent.iter().map(|&i| img_dirs[i].coords()).collect();
        let dm = Matrix::from_columns(d, &dcols);
        let em = Matrix::from_columns(e, &ecols);
        let dt = dm.transpose();
        let p = dt.mul(&dm).inverse().expect("independent directions").mul(&dt);
        let complement = identity_like(e, d).sub(&identity_like(e, d).mul(&dm).mul(&p));
        em.mul(&p).add(&complement)
    };
    let translation = base_image - &Point(linear.mul_vec(base.coords()));
    let map = AffineMap::new(linear, translation);
    if sources.iter().zip(images).all(|(s, t)| map.apply(s) == *t) {
        Ok(map)
    } else {
        Err(Error::Inconsistent)
    }
}

/// The `rows × cols` matrix with ones on the diagonal.
fn identity_like(rows: usize, cols: usize) -> Matrix {
    let mut m = Matrix::zeros(rows, cols);
    for i in 0..rows.min(cols) {
        m[(i, i)] = Rational::one();
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn pts(coords: &[&[i64]]) -> Vec<Point> {
        coords.iter().map(|c| Point::from_ints(c)).collect()
    }

    fn square() -> Vec<Point> {
        pts(&[&[0, 0], &[1, 0], &[1, 1], &[0, 1]])
    }

    #[test]
    fn affine_dimension_examples() {
        assert_eq!(affine_dimension(&pts(&[&[0, 0], &[1, 0], &[0, 1]])).unwrap(), 2);
        assert_eq!(affine_dimension(&pts(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap(), 2);
        assert_eq!(affine_dimension(&pts(&[&[2, 3]])).unwrap(), 0);
    }

    #[test]
    fn affine_dimension_errors() {
        assert_eq!(affine_dimension(&[]), Err(Error::Empty));
        assert!(matches!(
            affine_dimension(&pts(&[&[0, 0], &[1]])),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(is_affinely_independent(&pts(&[&[0, 0], &[1]])).is_err());
    }

    #[test]
    fn affine_independence_examples() {
        assert!(is_affinely_independent(&pts(&[&[0, 0], &[1, 0], &[0, 1]])).unwrap());
        assert!(!is_affinely_independent(&pts(&[&[0, 0], &[1, 0], &[2, 0]])).unwrap());
        assert!(!is_affinely_independent(&square()).unwrap());
    }

    #[test]
    fn extreme_points_examples() {
        let mut with_center = square();
        with_center.push(Point::new(vec![ratio(1, 2), ratio(1, 2)]));
        assert_eq!(extreme_points(&with_center).unwrap(), square());

        let simplex = pts(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(extreme_points(&simplex).unwrap(), simplex);

        let line = vec![
            Point::from_ints(&[0]),
            Point::new(vec![ratio(1, 2)]),
            Point::from_ints(&[1]),
        ];
        assert_eq!(extreme_points(&line).unwrap(), pts(&[&[0], &[1]]));
    }

    #[test]
    fn extreme_points_collapses_duplicates() {
        let p = pts(&[&[0], &[0], &[1]]);
        assert_eq!(extreme_points(&p).unwrap(), pts(&[&[0], &[1]]));
        assert_eq!(extreme_points(&pts(&[&[3], &[3]])).unwrap(), pts(&[&[3]]));
    }

    #[test]
    fn convex_decompose_examples() {
        let center = Point::new(vec![ratio(1, 2), ratio(1, 2)]);
        let sq = square();
        let w = convex_decompose(&center, &sq).unwrap();
        let total: Rational = w.iter().map(|(_, x)| x.clone()).sum();
        assert_eq!(total, Rational::one());
        let rebuilt = Point::combination(w.iter().map(|(i, x)| (x, &sq[*i])));
        assert_eq!(rebuilt, center);

        assert_eq!(
            convex_decompose(&Point::from_ints(&[1, 1]), &square()).unwrap(),
            vec![(2, Rational::one())]
        );
        assert_eq!(
            convex_decompose(&Point::from_ints(&[2, 2]), &square()),
            Err(Error::NotInHull)
        );
    }

    #[test]
    fn affine_extension_examples() {
        let simplex = pts(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert!(affine_extension(&simplex, &simplex).unwrap().is_identity());

        let flip = affine_extension(&pts(&[&[0], &[1]]), &pts(&[&[1], &[0]])).unwrap();
        assert_eq!(flip.linear, Matrix::from_rows(1, [vec![int(-1)]]));
        assert_eq!(flip.translation, Point::from_ints(&[1]));

        assert_eq!(
            affine_extension(
                &pts(&[&[0, 0], &[1, 0], &[2, 0]]),
                &pts(&[&[0, 0], &[1, 0], &[0, 1]])
            ),
            Err(Error::Inconsistent)
        );
    }

    #[test]
    fn affine_extension_of_simplex_permutation_is_permutation_matrix() {
        let simplex = pts(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let rotated = pts(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]);
        let m = affine_extension(&simplex, &rotated).unwrap();
        assert!(m.translation.is_zero());
        assert_eq!(m.apply(&Point::from_ints(&[1, 1, 1])), Point::from_ints(&[1, 1, 1]));
    }

    #[test]
    fn chart_round_trip_and_functionals() {
        let simplex = pts(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let chart = AffineChart::new(&simplex).unwrap();
        assert_eq!(chart.dim(), 2);
        for v in &simplex {
            assert_eq!(chart.from_chart(&chart.to_chart(v)), *v);
        }
        assert!(!chart.contains(&Point::from_ints(&[1, 1, 1])));
        let (a, b) = chart.pull_back_functional(&Point::from_ints(&[1, 0]), &int(0));
        let (a2, b2) = chart.push_forward_functional(&a, &b);
        assert_eq!((a2, b2), (Point::from_ints(&[1, 0]), int(0)));

        let full = AffineChart::new(&square()).unwrap();
        assert!(full.is_identity());
    }

    #[test]
    fn point_parsing() {
        let p: Point = "(1/2, -3)".parse().unwrap();
        assert_eq!(p, Point::new(vec![ratio(1, 2), int(-3)]));
        assert!("1, x".parse::<Point>().is_err());
    }
}
