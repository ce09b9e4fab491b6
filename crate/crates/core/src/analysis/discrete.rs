//! Discreteness, antidiscreteness and the ultranormality search.

use crate::coarse::{ball_points, bounded_sets, is_bounded, is_finite_subsets, CoarsePresentation, Entourage, Origin};
use crate::constructions::{doubling, largest_membership};
use crate::groundsets::{Element, GroundSet, SetExpr, Verdict};
use crate::{Error, Result};

use super::asymptotic::asymptotically_disjoint;

/// Centers examined by the ball comparisons.
pub const CENTER_CAP: u64 = 512;

/// Largest base index tried when looking for a dominating entourage.
pub const DOMINATION_CAP: u64 = 64;

fn require_unbounded(x: &CoarsePresentation, what: &str, horizon: u64) -> Result<()> {
    if is_bounded(x, &SetExpr::All, horizon).is_true() {
        return Err(Error::Domain(format!("{what} is defined for unbounded balleans only")));
    }
    Ok(())
}

fn centers(x: &CoarsePresentation, horizon: u64) -> Vec<Element> {
    x.points_upto(horizon.min(CENTER_CAP)).collect()
}

fn non_singleton_everywhere(e: &Entourage, pts: &[Element]) -> bool {
    pts.iter()
        .filter(|p| p.nat() != Some(0))
        .all(|p| e.ball_elements(p).is_some_and(|b| b.len() > 1))
}

/// Whether every entourage has singleton balls off some bounded set.
pub fn is_discrete(x: &CoarsePresentation, horizon: u64) -> Result<Verdict> {
    require_unbounded(x, "discreteness", horizon)?;
    let pts = centers(x, horizon);
    let cap = horizon.min(CENTER_CAP);
    Ok(match &x.origin {
        Origin::Down(_) => Verdict::True,
        Origin::Up(b, registered) if is_finite_subsets(b) => registered
            .iter()
            .find(|e| non_singleton_everywhere(e, &pts))
            .map_or(Verdict::Unknown(horizon), |e| {
                Verdict::note(format!("{e} has non-singleton balls at every point in [1, {cap}]"))
            }),
        _ if x.is_chain_indexable() => match x.entourage(1) {
            Some(e) if !pts.is_empty() && pts.iter().all(|p| ball_points(x, 1, p).is_some_and(|b| b.len() > 1)) => {
                Verdict::note(format!("{e} has non-singleton balls at every point up to {cap}"))
            }
            _ => Verdict::Unknown(horizon),
        },
        _ => Verdict::Unknown(horizon),
    })
}

/// First base index whose balls contain those of `w` at every sampled center.
fn dominating_index(x: &CoarsePresentation, w: &Entourage, pts: &[Element]) -> Option<u64> {
    (0..=DOMINATION_CAP).find(|&i| {
        pts.iter().all(|p| match (w.ball_elements(p), ball_points(x, i, p)) {
            (Some(wb), Some(xb)) => wb.is_subset(&xb),
            _ => false,
        })
    })
}

/// Whether the structure is the largest one with its bounded sets. Each
/// witness that belongs to the largest structure but escapes every base
/// entourage up to [`DOMINATION_CAP`] refutes it.
pub fn is_antidiscrete(x: &CoarsePresentation, witnesses: &[Entourage], horizon: u64) -> Result<Verdict> {
    require_unbounded(x, "antidiscreteness", horizon)?;
    if matches!(x.origin, Origin::Up(..)) {
        return Ok(Verdict::True);
    }
    if !x.is_chain_indexable() {
        return Ok(Verdict::Unknown(horizon));
    }
    let defaults;
    let witnesses = if witnesses.is_empty() && x.ground == GroundSet::Naturals {
        defaults = [doubling()];
        &defaults[..]
    } else {
        witnesses
    };
    let b = bounded_sets(x);
    let pts = centers(x, horizon);
    for w in witnesses {
        if largest_membership(&b, w, horizon).is_true() && dominating_index(x, w, &pts).is_none() {
            return Ok(Verdict::note(format!(
                "{w} belongs to the largest compatible structure but no E_i with i <= {DOMINATION_CAP} contains it"
            )));
        }
    }
    Ok(Verdict::Unknown(horizon))
}

/// Outcome of [`ultranormal_search`].
#[derive(Debug, Clone)]
pub struct UltranormalOutcome {
    pub verdict: Verdict,
    pub pairs_scanned: usize,
}

/// Sets tried when the caller supplies no catalog.
pub fn default_catalog(ground: &GroundSet) -> Vec<SetExpr> {
    match ground {
        GroundSet::Naturals => ["pow4", "two-pow4", "pow2", "squares"]
            .iter()
            .filter_map(|g| SetExpr::generator(g))
            .chain([SetExpr::progression(2, 0), SetExpr::progression(2, 1)])
            .collect(),
        GroundSet::Wedge { .. } => ["pow4", "two-pow4"]
            .iter()
            .filter_map(|g| SetExpr::generator(g))
            .map(|s| SetExpr::tagged(0, s))
            .collect(),
        _ => Vec::new(),
    }
}

/// Looks for two unbounded asymptotically disjoint sets in `catalog`.
pub fn ultranormal_search(x: &CoarsePresentation, catalog: &[SetExpr], horizon: u64) -> UltranormalOutcome {
    let unbounded: Vec<&SetExpr> = catalog
        .iter()
        .filter(|s| is_bounded(x, s, horizon).is_false())
        .collect();
    let mut pairs_scanned = 0;
    for (i, y) in unbounded.iter().enumerate() {
        for z in &unbounded[i + 1..] {
            pairs_scanned += 1;
            if asymptotically_disjoint(x, y, z, horizon).is_true() {
                return UltranormalOutcome {
                    verdict: Verdict::note(format!("({y}, {z})")),
                    pairs_scanned,
                };
            }
        }
    }
    UltranormalOutcome {
        verdict: Verdict::Unknown(horizon),
        pairs_scanned,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bornology::Bornology;
    use crate::constructions::{largest_compatible, smallest_compatible};
    use crate::DEFAULT_HORIZON as H;

    fn fin() -> Bornology {
        Bornology::finite_subsets(GroundSet::Naturals)
    }

    #[test]
    fn block_structure_is_discrete() {
        let x = smallest_compatible(&fin());
        assert!(is_discrete(&x, H).unwrap().is_true());
        assert!(is_antidiscrete(&x, &[], H).unwrap().is_false());
    }

    #[test]
    fn line_is_neither() {
        let x = CoarsePresentation::metric_nat();
        assert!(is_discrete(&x, H).unwrap().is_false());
        assert!(is_antidiscrete(&x, &[doubling()], H).unwrap().is_false());
    }

    #[test]
    fn largest_structure() {
        let x = largest_compatible(&fin(), &[]);
        assert!(is_antidiscrete(&x, &[], H).unwrap().is_true());
        assert!(is_discrete(&x, H).unwrap().is_false());
    }

    #[test]
    fn bounded_is_a_domain_error() {
        let x = smallest_compatible(&Bornology::powerset(GroundSet::FinitePoints(3)));
        assert!(matches!(is_discrete(&x, H), Err(Error::Domain(_))));
    }

    #[test]
    fn ultranormal_pairs() {
        let line = CoarsePresentation::metric_nat();
        let cat = default_catalog(&GroundSet::Naturals);
        let r = ultranormal_search(&line, &cat, H);
        assert!(r.verdict.is_false());
        let blocks = smallest_compatible(&fin());
        let evens_odds = [SetExpr::progression(2, 0), SetExpr::progression(2, 1)];
        let r = ultranormal_search(&blocks, &evens_odds, H);
        assert!(r.verdict.is_false());
    }
}
