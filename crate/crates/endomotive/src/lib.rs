//! Exact arithmetic for Deligne-Ribet monoids and finite-level Bost-Connes
//! endomotives over the rationals and quadratic fields.
//!
//! Everything is computed in exact arithmetic: ideals are integer HNF
//! lattices, class groups are built from explicit generator searches, and
//! analytic quantities (partition functions) are returned as certified
//! rational intervals.  No floating point enters any algebraic decision.
//!
//! The main capabilities, each with a runnable demo under `examples/`:
//!
//! * `nfield` - quadratic fields, HNF ideal arithmetic, unit groups,
//!   totally positive lifts and ray generator searches;
//! * `classgroups` - residue-ring totients, class groups, narrow class
//!   groups and strict ray class groups with discrete logarithms;
//! * `drmonoid` - the Deligne-Ribet monoid at a finite level, built three
//!   independent ways and cross-checked;
//! * `bcalgebra` - function spaces on the monoid levels, the sigma/rho
//!   operator calculus, Galois-equivariant function modules and the
//!   crossed-product monomial calculus;
//! * `kms` - partition functions, measures on the levels, Gibbs states and
//!   the zero-temperature simplex;
//! * `functor` - base change from the rationals to a quadratic field and
//!   the induction bimodule.
//!
//! The `dr` binary exposes the same functionality as a small command line
//! tool; see the crate README for usage.

pub mod bcalgebra;
pub mod cache;
pub mod classgroups;
pub mod drmonoid;
pub mod error;
pub mod functor;
pub mod kms;
pub mod nfield;
pub mod report;
pub mod verify;

pub use error::Error;
