//! Base change between the rationals and a quadratic field.
//!
//! Ideal extension and ideal norm as monoid maps connected by the
//! splitting data of the extension, the divisor retraction that matches
//! conductor towers across the two fields, the induced maps between the
//! finite levels in both directions with their compatibility squares,
//! and a truncated bimodule carrying a left action of the extension
//! algebra and a base-valued inner product.

pub mod bimodule;
pub mod drmaps;
pub mod extension;

pub use bimodule::{bimodule_build, BimoduleReport, Tensor, TruncatedBimodule};
pub use drmaps::{
    component_restriction_check, dr_norm_map, dr_ver_map, ver_norm_compose, ComponentData,
    ComponentReport, NormReport, VerReport,
};
pub use extension::{
    extend_and_norm, extended_content, is_extended, omega_map, ExtensionContext, OmegaMap,
};
