//! Decidable set algebra over countable ground sets.
//!
//! Two tiers: the exact tier (finite sets and eventually periodic sets of
//! naturals) where every question is decided, and the sparse tier
//! (generator-presented sets, Boolean mixtures, oracles) where some answers
//! degrade to [`Verdict::Unknown`] at a horizon.

mod ground;
mod periodic;
mod setexpr;
mod sparse;
mod verdict;

pub use ground::{Element, GroundSet};
pub use periodic::Periodic;
pub use setexpr::{part_ground, Predicate, SetExpr, SetOp};
pub use sparse::{GenKind, Generator};
pub use verdict::{Verdict, Witness};

/// Horizon used when a call or the CLI does not override it.
pub const DEFAULT_HORIZON: u64 = 4096;
