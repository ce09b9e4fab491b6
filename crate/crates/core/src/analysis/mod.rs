//! Asymptotic predicates, slowly oscillating functions, discreteness and
//! property inference.

pub mod asymptotic;
pub mod crossval;
pub mod discrete;
pub mod infer;
pub mod oracle;
pub mod slow;

pub use asymptotic::{
    asymptotically_disjoint, asymptotically_separated, is_asymptotic_neighbourhood, nat_distance, spine_part,
    Separation,
};
pub use slow::{is_slowly_oscillating, oscillation_grid, synthesize_separator, Provenance, SlowFunction, SlowReport, Value};
pub use discrete::{default_catalog, is_antidiscrete, is_discrete, ultranormal_search, UltranormalOutcome};
pub use oracle::{countable_base_detection, executable, Property};
pub use infer::{infer_properties, infer_rules, Basis, Finding, PropertyReport, Tri};
pub use crossval::{corpus, cross_validate, eps_grid, Check, CrossReport, Status};
