//! Measures and thermodynamics at finite level.
//!
//! The normalized counting measures on the levels, their behaviour
//! under projections (uniformity) and under multiplication embeddings
//! (the scaling condition), truncated Dedekind zeta partition functions
//! as certified rational intervals, Gibbs states on the truncated
//! regular representation with the algebraic KMS identity, and the
//! simplex of ground states with its free transitive class group
//! action.

pub mod gibbs;
pub mod interval;
pub mod measure;
pub mod partition;
pub mod simplex;

pub use gibbs::{gibbs_kms_check, GibbsReport, TruncatedRep};
pub use interval::Interval;
pub use measure::{check_scaling, check_uniformity, scaling_suite, LevelMeasure};
pub use partition::{partition_function, PartitionValue, TruncatedGibbsState};
pub use simplex::{kms_infinity_simplex, SimplexReport};
