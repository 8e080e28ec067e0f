//! Exact arithmetic toolkit for configurations of pairwise-incident planes in P^5,
//! the symplectic geometry of their Pluecker spans, and the sextic degeneracy loci
//! attached to Lagrangian subspaces of the third wedge of a six-dimensional space.
//!
//! Everything here computes over exactly represented fields: prime fields F_p,
//! their small extensions F_{p^k}, and arbitrary-precision rationals. There is no
//! floating point anywhere in the crate.

pub mod curves;
pub mod epw;
pub mod exec;
pub mod field;
pub mod grassmann;
pub mod hyper;
pub mod intmat;
pub mod jsonio;
pub mod lattice;
pub mod matrix;
pub mod poly;
pub mod tens;

pub use field::{FieldSpec, Scalar};
pub use matrix::ExactMatrix;
pub use poly::MultiPoly;
