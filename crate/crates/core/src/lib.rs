//! Executable coarse geometry.
//!
//! Balleans (coarse spaces) over finitely presented countable ground sets:
//! entourage algebra, bornologies and their cardinal invariants, the
//! bornological product / bouquet / comb constructions, the smallest and
//! largest coarse structures compatible with a bornology, asymptotic
//! predicates with three-valued verdicts, and a rule-based inference pass
//! that is cross-checked against the executable predicates.

pub mod analysis;
pub mod bornology;
pub mod cli;
pub mod coarse;
pub mod constructions;
pub mod error;
pub mod groundsets;

pub use error::{Error, Result};
pub use groundsets::{Element, GroundSet, SetExpr, Verdict, Witness, DEFAULT_HORIZON};
