//! The 2-group tower `G_k = G/P_k(G)`: construction, arithmetic and
//! serialization.

mod pcp;
mod pquotient;
mod word;

pub use pcp::{Definition, GenLabel, GroupElement, PcPresentation, Projection};
pub use pquotient::{pquotient, QuotientLimits};
pub use word::{tower_presentation, tower_relators, Letter, Presentation, Word};

use thiserror::Error;

/// Group orders past the small classes rest on the finite-width behaviour
/// of the exponent-2 series; the independent matrix-group cross-check pins
/// the class-2 quotient.
pub const FINITE_WIDTH_NOTE: &str =
    "group orders assume the exponent-2 series has finite width; cross-checked independently at class 2";

#[derive(Debug, Error)]
pub enum GroupError {
    /// The engine derived contradictory tables; aborting beats returning a
    /// wrong group.
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("relators with odd exponent sums collapse the weight-1 layer; unsupported")]
    WeightOneCollapse,
    #[error("enumeration needs 2^{needed_log2} elements, cap is 2^{cap_log2}")]
    EnumerationCap { needed_log2: usize, cap_log2: usize },
    #[error("resource cap exceeded: requested {requested}, cap {cap}")]
    ClassCap { requested: usize, cap: usize },
    #[error("malformed input: {0}")]
    Format(String),
}
