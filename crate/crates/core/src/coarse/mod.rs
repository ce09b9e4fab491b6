//! Entourage algebra and coarse-structure presentations.

pub mod entourage;
pub mod presentation;
pub mod relation;

pub use entourage::{finite_elements, BallMap, EntKind, Entourage, BALL_LIMIT};
pub use presentation::{
    ball_points, bounded_sets, generate, generate_closure, generated_family, is_bounded, is_coarse_map,
    is_connected, is_finite_subsets, is_large, origin_bornology, restrict_to, Base, CoarsePresentation, Origin,
    PointedBallean, TARGET_RADIUS_CAP,
};
pub use relation::{
    brute_force_closure, check_axioms, down_closure, enumerate_structures, AxiomReport, Family, Relation,
};
