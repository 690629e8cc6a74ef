//! Exact computations on finite-dimensional general probabilistic theories.
//!
//! A theory is specified by its state space: a rational polytope given by its
//! pure states, or an analytic disk/ball. Effects are affine functionals
//! `e(s) = ⟨a, s⟩ + b` with values in `[0, 1]`, and measurements are tuples of
//! effects summing to the unit effect.
//!
//! Everything on polytopes is exact ([`Rational`] coordinates, exact simplex
//! LP). Quantities on the ball that need `|x|` itself (distances, entropy) are
//! reported in `f64`.
//!
//! Module map:
//! - [`geometry`]: points, affine maps, hulls, convex decomposition
//! - [`lp`]: exact simplex LP, the single optimization primitive
//! - [`gpt`]: state spaces, states, effects, measurements, dual maps
//! - [`discrimination`]: distinguishability and decomposability
//! - [`symmetry`]: affine automorphism groups and invariant states
//! - [`metrics`]: Kolmogorov distance, discrimination probability, entropy
//! - [`sampling`]: seeded random states and random polytopes

pub mod discrimination;
pub mod error;
pub mod geometry;
pub mod gpt;
pub mod linalg;
pub mod lp;
pub mod metrics;
pub mod rational;
pub mod sampling;
pub mod symmetry;

pub use error::{Error, Result};
pub use geometry::{AffineMap, Point};
pub use gpt::{Effect, Measurement, SpaceDescription, State, StateSpace};
pub use rational::Rational;
