//! Exact integral-affine geometry for Lagrangian torus invariants.
//!
//! The crate works entirely over arbitrary-precision integers and rationals.
//! It provides
//!
//! - lattice primitives (primitive vectors, minors, integral index, Hermite
//!   and Smith normal forms),
//! - rational polytopes with integral-affine distances and 2D chambers,
//! - Markov triples and their mutation tree,
//! - almost toric base diagrams, the piecewise shear mutation, and Markov
//!   triangles,
//! - the arithmetic of the `Υ_k` reductions,
//! - displacement-energy germs and their `GL(n, ℤ)` equivalence,
//! - the smallness predicates used to transport germs into Darboux charts,
//! - a JSON/SVG command-line surface.

pub mod atf;
pub mod cli;
pub mod germ;
pub mod json;
pub mod lattice;
pub mod locality;
pub mod markov;
pub mod polytope;
pub mod rational;
pub mod reduction;
pub mod svg;

mod fm;

pub use atf::{AtfDiagram, Half, Mutation, Node};
pub use germ::{Equivalence, Germ, GermInvariants, PiecewiseMin};
pub use lattice::{IntMatrix, IntVec, PrimVec, UnimodularMap};
pub use markov::{MarkovTree, MarkovTriple};
pub use polytope::{Facet, Polygon2, RationalPolytope};
pub use rational::Rational;
pub use reduction::{ProductTorusSpec, UpsilonParams};
