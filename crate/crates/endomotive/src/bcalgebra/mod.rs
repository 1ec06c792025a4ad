//! The finite-level function algebras over the tower and the operators
//! between them, together with the structural checks that identify the
//! invertible part with a Galois torsor and characterize the
//! equivariant functions.

pub mod equivariant;
pub mod matrix;
pub mod monomial;
pub mod operators;
pub mod orbits;
pub mod symmetry;
