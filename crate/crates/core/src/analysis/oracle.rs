//! Executable checks used to confirm or refute rule-derived properties.

use std::fmt;

use crate::coarse::{is_bounded, is_connected, CoarsePresentation, Origin};
use crate::groundsets::{Element, GroundSet, SetExpr, Verdict};

use super::discrete::{default_catalog, is_antidiscrete, is_discrete, ultranormal_search};

/// The properties reported by inference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Property {
    Bounded,
    Connected,
    Metrizable,
    Normal,
    Discrete,
    Antidiscrete,
    Ultranormal,
}

impl Property {
    pub const ALL: [Property; 7] = [
        Property::Bounded,
        Property::Connected,
        Property::Metrizable,
        Property::Normal,
        Property::Discrete,
        Property::Antidiscrete,
        Property::Ultranormal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Bounded => "bounded",
            Property::Connected => "connected",
            Property::Metrizable => "metrizable",
            Property::Normal => "normal",
            Property::Discrete => "discrete",
            Property::Antidiscrete => "antidiscrete",
            Property::Ultranormal => "ultranormal",
        }
    }

    pub fn parse(s: &str) -> Option<Property> {
        Property::ALL.into_iter().find(|p| p.name() == s)
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Base indices checked against the diagonal witness.
pub const DIAGONAL_ROUNDS: u64 = 32;

/// Countable-base detection. A cofinal chain certifies; on B-products and
/// bouquets of unbounded factors whose index bornology has an infinite
/// member `M`, the diagonal entourage pairing the basepoint with a point at
/// spine distance beyond `α` on every coordinate `α ∈ M` escapes each `E_n`.
pub fn countable_base_detection(x: &CoarsePresentation, horizon: u64) -> Verdict {
    if x.is_chain_indexable() {
        return Verdict::True;
    }
    let (index, factor) = match &x.origin {
        Origin::BProduct { index, factor } => (index, factor),
        Origin::Bouquet { index, spine } => (index, spine),
        _ => return Verdict::Unknown(horizon),
    };
    if !is_bounded(factor, &SetExpr::All, horizon).is_false() {
        return Verdict::Unknown(horizon);
    }
    let Some(member) = (0..8)
        .filter_map(|n| index.base_member(n))
        .find(|m| m.finiteness(&index.ground, horizon).is_false())
    else {
        return Verdict::Unknown(horizon);
    };
    let (origin, lift): (Element, Box<dyn Fn(u64, Element) -> Element>) = match &x.ground {
        GroundSet::FinSupp { .. } => (Element::Sparse(Vec::new()), Box::new(|a, s| Element::Sparse(vec![(a, s)]))),
        GroundSet::Wedge { .. } => (Element::Base, Box::new(Element::tagged)),
        _ => return Verdict::Unknown(horizon),
    };
    let e = match &x.ground {
        GroundSet::FinSupp { basepoint, .. } | GroundSet::Wedge { basepoint, .. } => basepoint.clone(),
        _ => unreachable!(),
    };
    let alphas = member.enumerate_nats(horizon);
    // a factor point outside the α-th base ball of the basepoint
    let far = |a: u64| {
        let ent = factor.entourage(a)?;
        factor.points_upto(horizon).find(|p| !ent.relates(&e, p))
    };
    for n in 0..=DIAGONAL_ROUNDS {
        let Some(en) = x.entourage(n) else {
            return Verdict::Unknown(horizon);
        };
        let escapes = alphas
            .iter()
            .filter(|&&a| a >= n)
            .take(4)
            .any(|&a| far(a).is_some_and(|s| !en.relates(&origin, &lift(a, s))));
        if !escapes {
            return Verdict::Unknown(horizon);
        }
    }
    Verdict::note(format!(
        "the diagonal entourage over {member} (coordinate α moved beyond its α-th ball) escapes E_0 .. E_{DIAGONAL_ROUNDS}"
    ))
}

/// The executable check for `p`, when one exists. Bounded balleans have no
/// discreteness checks.
pub fn executable(p: Property, x: &CoarsePresentation, horizon: u64) -> Option<Verdict> {
    match p {
        Property::Bounded => Some(is_bounded(x, &SetExpr::All, horizon)),
        Property::Connected => Some(is_connected(x, horizon)),
        Property::Metrizable => Some(countable_base_detection(x, horizon)),
        Property::Normal => None,
        Property::Discrete => is_discrete(x, horizon).ok(),
        Property::Antidiscrete => is_antidiscrete(x, &[], horizon).ok(),
        Property::Ultranormal => Some(ultranormal_search(x, &default_catalog(&x.ground), horizon).verdict),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bornology::Bornology;
    use crate::constructions::{b_product, PointedFamily};
    use crate::DEFAULT_HORIZON as H;

    #[test]
    fn cantor_style_product_has_a_chain() {
        let x = b_product(&Bornology::finite_subsets(GroundSet::Naturals), &PointedFamily::rays().build().unwrap()).unwrap();
        assert!(countable_base_detection(&x, H).is_true());
    }

    #[test]
    fn infinite_member_gives_a_diagonal_witness() {
        let x = b_product(&Bornology::evens_plus(), &PointedFamily::rays().build().unwrap()).unwrap();
        assert!(countable_base_detection(&x, H).is_false());
    }

    #[test]
    fn property_names_round_trip() {
        for p in Property::ALL {
            assert_eq!(Property::parse(p.name()), Some(p));
        }
    }
}
