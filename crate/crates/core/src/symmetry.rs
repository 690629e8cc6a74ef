//! Affine automorphism groups of state spaces, physical equivalence of
//! states, invariant states, the group-invariant inner product and
//! isogonality.
//!
//! Polytope automorphisms permute the vertices. The search fixes an affinely
//! independent anchor set of vertices, assigns candidate images to it, builds
//! the unique affine map in chart coordinates and keeps it when it permutes
//! the vertex set exactly.
//!
//! Candidates are pruned with the Gram matrix `G_ij = (y_i − c)ᵀ C⁻¹ (y_j − c)`
//! of the centered chart vertices, where `C` is their scatter matrix. Any
//! affine automorphism fixes the centroid `c` and transforms `C` to `A C Aᵀ`,
//! so `G` is invariant under the induced vertex permutation. The filter never
//! discards a genuine automorphism.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{self, AffineMap, Point};
use crate::gpt::{Polytope, State, StateSpace};
use crate::linalg::Matrix;
use crate::rational::{int, Rational};

/// An affine bijection of a state space onto itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automorphism {
    pub forward: AffineMap,
    pub inverse: AffineMap,
    /// For polytopes, `permutation[i]` is the index of the image of vertex `i`.
    pub permutation: Option<Vec<usize>>,
}

impl Automorphism {
    pub fn apply(&self, s: &State) -> State {
        State::new_unchecked(self.forward.apply(s.point()))
    }

    pub fn is_identity(&self) -> bool {
        self.forward.is_identity()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AutomorphismGroup {
    /// Sorted by vertex permutation; the identity comes first.
    Finite(Vec<Automorphism>),
    /// All orthogonal maps about the center.
    BallOrthogonal { dim: usize, center: Point },
}

impl AutomorphismGroup {
    pub fn order(&self) -> Option<usize> {
        match self {
            AutomorphismGroup::Finite(elements) => Some(elements.len()),
            AutomorphismGroup::BallOrthogonal { .. } => None,
        }
    }

    pub fn elements(&self) -> Option<&[Automorphism]> {
        match self {
            AutomorphismGroup::Finite(elements) => Some(elements),
            AutomorphismGroup::BallOrthogonal { .. } => None,
        }
    }

    /// Whether the finite group contains the identity and is closed under
    /// composition and inverses.
    pub fn satisfies_group_axioms(&self) -> bool {
        let Some(elements) = self.elements() else {
            return true;
        };
        let maps: HashSet<&AffineMap> = elements.iter().map(|g| &g.forward).collect();
        elements.iter().any(Automorphism::is_identity)
            && elements.iter().all(|g| {
                maps.contains(&g.inverse)
                    && g.forward.compose(&g.inverse).is_identity()
                    && g.inverse.compose(&g.forward).is_identity()
                    && elements.iter().all(|h| maps.contains(&g.forward.compose(&h.forward)))
            })
    }
}

pub fn automorphism_group(space: &StateSpace) -> AutomorphismGroup {
    match space {
        StateSpace::Polytope(p) => AutomorphismGroup::Finite(polytope_automorphisms(p)),
        StateSpace::Ball(b) => AutomorphismGroup::BallOrthogonal {
            dim: b.dim(),
            center: b.center().clone(),
        },
    }
}

/// The affine-invariant Gram matrix of the chart vertices.
fn invariant_gram(p: &Polytope) -> Vec<Vec<Rational>> {
    let ys = p.chart_vertices();
    let d = p.dim();
    let c = chart_centroid(p);
    let centered: Vec<Point> = ys.iter().map(|y| y - &c).collect();
    let mut scatter = Matrix::zeros(d, d);
    for v in &centered {
        for i in 0..d {
            for j in 0..d {
                scatter[(i, j)] += &v[i] * &v[j];
            }
        }
    }
    let inv = scatter.inverse().expect("full-dimensional in chart coordinates");
    let transformed: Vec<Point> = centered.iter().map(|v| Point::new(inv.mul_vec(v.coords()))).collect();
    centered
        .iter()
        .map(|vi| transformed.iter().map(|tj| vi.dot(tj)).collect())
        .collect()
}

fn chart_centroid(p: &Polytope) -> Point {
    let n = Rational::from_integer(p.vertices().len().into());
    let w = n.recip();
    let weights = vec![w; p.vertices().len()];
    Point::combination(weights.iter().zip(p.chart_vertices()))
}

/// Greedy affinely independent vertex subset of size `dim + 1`.
fn anchor_indices(p: &Polytope) -> Vec<usize> {
    let ys = p.chart_vertices();
    let mut anchor = vec![0];
    for i in 1..ys.len() {
        if anchor.len() == p.dim() + 1 {
            break;
        }
        let mut trial: Vec<Point> = anchor.iter().map(|&k| ys[k].clone()).collect();
        trial.push(ys[i].clone());
        if geometry::is_affinely_independent(&trial).expect("vertices") {
            anchor.push(i);
        }
    }
    anchor
}

fn polytope_automorphisms(p: &Polytope) -> Vec<Automorphism> {
    let ys = p.chart_vertices();
    let n = ys.len();
    if p.dim() == 0 {
        return vec![identity_automorphism(p)];
    }
    let gram = invariant_gram(p);
    let anchor = anchor_indices(p);
    let index: HashMap<&Point, usize> = ys.iter().enumerate().map(|(i, y)| (y, i)).collect();

    let first_images: Vec<usize> = (0..n).filter(|&j| gram[j][j] == gram[anchor[0]][anchor[0]]).collect();
    let mut perms: Vec<Vec<usize>> = first_images
        .into_par_iter()
        .flat_map_iter(|j| {
            let mut found = Vec::new();
            let mut images = vec![j];
            extend_anchor(p, &gram, &anchor, &index, &mut images, &mut found);
            found
        })
        .collect();
    perms.sort();
    perms
        .into_iter()
        .map(|perm| {
            let images: Vec<Point> = perm.iter().map(|&j| p.vertices()[j].clone()).collect();
            let forward = geometry::affine_extension(p.vertices(), &images).expect("vertex images");
            let inverse = geometry::affine_extension(&images, p.vertices()).expect("vertex images");
            debug_assert!(forward.compose(&inverse).is_identity());
            Automorphism {
                forward,
                inverse,
                permutation: Some(perm),
            }
        })
        .collect()
}

fn extend_anchor(
    p: &Polytope,
    gram: &[Vec<Rational>],
    anchor: &[usize],
    index: &HashMap<&Point, usize>,
    images: &mut Vec<usize>,
    found: &mut Vec<Vec<usize>>,
) {
    let k = images.len();
    if k == anchor.len() {
        if let Some(perm) = vertex_permutation(p, anchor, images, index) {
            found.push(perm);
        }
        return;
    }
    let a = anchor[k];
    for j in 0..gram.len() {
        if images.contains(&j) || gram[j][j] != gram[a][a] {
            continue;
        }
        if (0..k).all(|l| gram[j][images[l]] == gram[a][anchor[l]]) {
            images.push(j);
            extend_anchor(p, gram, anchor, index, images, found);
            images.pop();
        }
    }
}

/// The vertex permutation induced by the affine map sending the anchor
/// vertices to `images`, when that map permutes the vertices.
fn vertex_permutation(
    p: &Polytope,
    anchor: &[usize],
    images: &[usize],
    index: &HashMap<&Point, usize>,
) -> Option<Vec<usize>> {
    let ys = p.chart_vertices();
    let src: Vec<Point> = anchor.iter().map(|&i| ys[i].clone()).collect();
    let dst: Vec<Point> = images.iter().map(|&i| ys[i].clone()).collect();
    if !geometry::is_affinely_independent(&dst).expect("vertices") {
        return None;
    }
    let map = geometry::affine_extension(&src, &dst).expect("anchor images");
    let mut perm = Vec::with_capacity(ys.len());
    let mut hit = vec![false; ys.len()];
    for y in ys {
        let j = *index.get(&map.apply(y))?;
        if std::mem::replace(&mut hit[j], true) {
            return None;
        }
        perm.push(j);
    }
    Some(perm)
}

fn identity_automorphism(p: &Polytope) -> Automorphism {
    let d = p.ambient_dim();
    Automorphism {
        forward: AffineMap::identity(d),
        inverse: AffineMap::identity(d),
        permutation: Some((0..p.vertices().len()).collect()),
    }
}

/// Whether every pair of pure states is related by an automorphism.
pub fn satisfies_p5(space: &StateSpace) -> bool {
    match automorphism_group(space) {
        AutomorphismGroup::Finite(elements) => is_vertex_transitive(&elements),
        AutomorphismGroup::BallOrthogonal { .. } => true,
    }
}

fn is_vertex_transitive(elements: &[Automorphism]) -> bool {
    let n = elements[0].permutation.as_ref().expect("polytope").len();
    let orbit: HashSet<usize> = elements.iter().map(|g| g.permutation.as_ref().expect("polytope")[0]).collect();
    orbit.len() == n
}

/// An automorphism `Ψ` with `Ψ(s2) = s1`, or `None` when the states are not
/// physically equivalent.
pub fn are_equivalent(space: &StateSpace, s1: &State, s2: &State) -> Result<Option<Automorphism>> {
    for s in [s1, s2] {
        if !space.contains(s.point())? {
            return Err(Error::NotAState);
        }
    }
    match space {
        StateSpace::Polytope(p) => Ok(polytope_automorphisms(p)
            .into_iter()
            .find(|g| &g.forward.apply(s2.point()) == s1.point())),
        StateSpace::Ball(b) => {
            let c = b.center();
            let v1 = s1.point() - c;
            let v2 = s2.point() - c;
            if v1.norm_squared() != v2.norm_squared() {
                return Ok(None);
            }
            let map = if v1 == v2 {
                AffineMap::identity(b.dim())
            } else {
                householder_about(c, &(&v2 - &v1))
            };
            Ok(Some(Automorphism {
                forward: map.clone(),
                inverse: map,
                permutation: None,
            }))
        }
    }
}

/// The reflection `x ↦ c + H(x − c)` with `H = I − 2wwᵀ/|w|²`.
fn householder_about(c: &Point, w: &Point) -> AffineMap {
    let d = w.dim();
    let factor = int(2) / w.norm_squared();
    let mut h = Matrix::identity(d);
    for i in 0..d {
        for j in 0..d {
            h[(i, j)] -= &factor * &w[i] * &w[j];
        }
    }
    let translation = c - &Point::new(h.mul_vec(c.coords()));
    AffineMap::new(h, translation)
}

/// The group-invariant state: the vertex average of a polytope, the center
/// of a ball.
pub fn invariant_state(space: &StateSpace) -> State {
    match space {
        StateSpace::Polytope(p) => {
            let s = p.centroid();
            for g in polytope_automorphisms(p) {
                assert_eq!(g.forward.apply(&s), s, "vertex average is not invariant");
            }
            State::new_unchecked(s)
        }
        StateSpace::Ball(b) => State::new_unchecked(b.center().clone()),
    }
}

/// Whether the invariant state is the only state fixed by every automorphism.
pub fn invariant_state_unique(space: &StateSpace) -> bool {
    let p = match space {
        StateSpace::Ball(_) => return true,
        StateSpace::Polytope(p) => p,
    };
    let d = p.dim();
    if d == 0 {
        return true;
    }
    let elements = polytope_automorphisms(p);
    let mut rows = Vec::new();
    for g in &elements {
        let a = p.chart().push_forward_map(&g.forward).linear.sub(&Matrix::identity(d));
        rows.extend((0..d).map(|i| a.row(i).to_vec()));
    }
    Matrix::from_rows(d, rows).rank() == d
}

/// `M = (1/|G|) Σ A_gᵀ A_g` over the linear parts of the automorphisms in
/// chart coordinates, so that `A_gᵀ M A_g = M`. The identity for a ball.
pub fn invariant_inner_product(space: &StateSpace) -> Matrix {
    match space {
        StateSpace::Ball(b) => Matrix::identity(b.dim()),
        StateSpace::Polytope(p) => averaged_gram(p, &chart_linear_parts(p, &polytope_automorphisms(p))),
    }
}

fn chart_linear_parts(p: &Polytope, elements: &[Automorphism]) -> Vec<Matrix> {
    elements
        .iter()
        .map(|g| p.chart().push_forward_map(&g.forward).linear)
        .collect()
}

fn averaged_gram(p: &Polytope, linears: &[Matrix]) -> Matrix {
    let d = p.dim();
    let mut m = Matrix::zeros(d, d);
    for a in linears {
        m = m.add(&a.transpose().mul(a));
    }
    m.scale(&Rational::from_integer(linears.len().into()).recip())
}

/// Whether the automorphisms act transitively on the pure states and
/// preserve the invariant inner product.
pub fn is_isogonal(space: &StateSpace) -> bool {
    let p = match space {
        StateSpace::Ball(_) => return true,
        StateSpace::Polytope(p) => p,
    };
    let elements = polytope_automorphisms(p);
    let linears = chart_linear_parts(p, &elements);
    let m = averaged_gram(p, &linears);
    assert!(
        linears.iter().all(|a| a.transpose().mul(&m).mul(a) == m),
        "averaged inner product is not invariant"
    );
    is_vertex_transitive(&elements)
}

/// The orbit `{Ψ(s)}` of a state, without repeats, in group order.
pub fn orbit(space: &StateSpace, s: &State) -> Result<Vec<State>> {
    let p = match space {
        StateSpace::Ball(_) => return Err(Error::Unsupported("orbits of ball states are not finite".into())),
        StateSpace::Polytope(p) => p,
    };
    if !space.contains(s.point())? {
        return Err(Error::NotAState);
    }
    let mut seen = HashSet::new();
    Ok(polytope_automorphisms(p)
        .iter()
        .map(|g| g.apply(s))
        .filter(|t| seen.insert(t.clone()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    fn st(space: &StateSpace, s: &str) -> State {
        space.state(s.parse().unwrap()).unwrap()
    }

    fn trapezoid() -> StateSpace {
        StateSpace::polytope(["0,0", "3,0", "2,1", "1,1"].iter().map(|s| s.parse().unwrap()).collect()).unwrap()
    }

    /// Oracle: try every vertex permutation, extend affinely and keep the ones
    /// that permute the vertices.
    fn brute_force_order(space: &StateSpace) -> usize {
        let p = space.as_polytope().unwrap();
        let verts = p.vertices();
        let set: HashSet<&Point> = verts.iter().collect();
        (0..verts.len())
            .permutations(verts.len())
            .filter(|perm| {
                let images: Vec<Point> = perm.iter().map(|&j| verts[j].clone()).collect();
                let Ok(map) = geometry::affine_extension(verts, &images) else {
                    return false;
                };
                verts.iter().zip(&images).all(|(v, w)| &map.apply(v) == w)
                    && verts.iter().all(|v| set.contains(&map.apply(v)))
            })
            .count()
    }

    #[test]
    fn group_orders_match_brute_force() {
        let cases = [
            (StateSpace::simplex(3).unwrap(), 6),
            (StateSpace::cube(2).unwrap(), 8),
            (trapezoid(), 2),
            (StateSpace::polygon(6).unwrap(), 12),
            (StateSpace::polygon(5).unwrap(), 2),
        ];
        for (space, expected) in cases {
            assert_eq!(brute_force_order(&space), expected);
            let group = automorphism_group(&space);
            assert_eq!(group.order(), Some(expected));
            assert!(group.satisfies_group_axioms());
        }
        assert_eq!(automorphism_group(&StateSpace::cube(3).unwrap()).order(), Some(48));
        assert_eq!(automorphism_group(&StateSpace::simplex(4).unwrap()).order(), Some(24));
    }

    #[test]
    fn identity_comes_first() {
        let group = automorphism_group(&StateSpace::cube(2).unwrap());
        assert!(group.elements().unwrap()[0].is_identity());
    }

    #[test]
    fn symmetry_predicates() {
        assert!(satisfies_p5(&StateSpace::cube(1).unwrap()));
        assert!(satisfies_p5(&StateSpace::cube(2).unwrap()));
        assert!(satisfies_p5(&StateSpace::cube(3).unwrap()));
        assert!(satisfies_p5(&StateSpace::simplex(4).unwrap()));
        assert!(satisfies_p5(&StateSpace::bloch_ball()));
        assert!(!satisfies_p5(&trapezoid()));
        assert!(!is_isogonal(&trapezoid()));
        for n in [3, 4, 6, 8] {
            assert!(is_isogonal(&StateSpace::polygon(n).unwrap()), "n = {n}");
        }
    }

    #[test]
    fn equivalence_of_states() {
        let square = StateSpace::cube(2).unwrap();
        let (a, b) = (st(&square, "0,0"), st(&square, "1,1"));
        let g = are_equivalent(&square, &a, &b).unwrap().unwrap();
        assert_eq!(g.apply(&b), a);
        assert!(are_equivalent(&square, &a, &st(&square, "1/2,1/2")).unwrap().is_none());

        let ball = StateSpace::bloch_ball();
        let (s1, s2) = (st(&ball, "0,0,1"), st(&ball, "3/5,0,-4/5"));
        let g = are_equivalent(&ball, &s1, &s2).unwrap().unwrap();
        assert_eq!(g.apply(&s2), s1);
        assert!(g.forward.compose(&g.inverse).is_identity());
        // Orthogonal: preserves norms.
        let probe: Point = "1/3,2,-1".parse().unwrap();
        assert_eq!(g.forward.apply(&probe).norm_squared(), probe.norm_squared());
        assert!(are_equivalent(&ball, &s1, &st(&ball, "0,0,1/2")).unwrap().is_none());
    }

    #[test]
    fn invariant_states() {
        assert_eq!(invariant_state(&StateSpace::cube(2).unwrap()).point(), &"1/2,1/2".parse().unwrap());
        assert_eq!(invariant_state(&StateSpace::simplex(3).unwrap()).point(), &"1/3,1/3,1/3".parse().unwrap());
        assert!(invariant_state(&StateSpace::bloch_ball()).point().is_zero());
        assert!(invariant_state_unique(&StateSpace::cube(2).unwrap()));
        assert!(invariant_state_unique(&StateSpace::simplex(3).unwrap()));
        assert!(!invariant_state_unique(&trapezoid()));
    }

    #[test]
    fn invariant_inner_products() {
        let square = invariant_inner_product(&StateSpace::cube(2).unwrap());
        assert_eq!(square, Matrix::identity(2));
        let kite = StateSpace::polytope(["0,0", "4,0", "3,2", "0,1"].iter().map(|s| s.parse().unwrap()).collect()).unwrap();
        assert_eq!(brute_force_order(&kite), 1);
        assert_eq!(automorphism_group(&kite).order(), Some(1));
        assert_eq!(invariant_inner_product(&kite), Matrix::identity(2));
        let tri = StateSpace::simplex(3).unwrap();
        let m = invariant_inner_product(&tri);
        let p = tri.as_polytope().unwrap();
        for g in automorphism_group(&tri).elements().unwrap() {
            let a = p.chart().push_forward_map(&g.forward).linear;
            assert_eq!(a.transpose().mul(&m).mul(&a), m);
        }
    }

    #[test]
    fn orbits() {
        let square = StateSpace::cube(2).unwrap();
        assert_eq!(orbit(&square, &st(&square, "0,0")).unwrap().len(), 4);
        assert_eq!(orbit(&square, &st(&square, "1/2,1/2")).unwrap().len(), 1);
        let mids: HashSet<State> = orbit(&square, &st(&square, "1/2,0")).unwrap().into_iter().collect();
        let expected: HashSet<State> = ["1/2,0", "1,1/2", "1/2,1", "0,1/2"].iter().map(|s| st(&square, s)).collect();
        assert_eq!(mids, expected);
        assert!(matches!(orbit(&StateSpace::disk(), &st(&StateSpace::disk(), "0,0")), Err(Error::Unsupported(_))));
    }
}
