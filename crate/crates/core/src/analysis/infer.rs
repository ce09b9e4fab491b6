//! Citation-carrying inference over construction trees.

use std::collections::BTreeMap;
use std::fmt;

use crate::bornology::{BornKind, Bornology, Invariants, SymCard};
use crate::coarse::{bounded_sets, is_bounded, is_finite_subsets, CoarsePresentation};
use crate::constructions::{BalleanExpr, PointedFamily};
use crate::groundsets::{SetExpr, SetOp, Verdict};
use crate::{Error, Result};

use super::oracle::{executable, Property};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tri {
    True,
    False,
    Unknown,
}

impl Tri {
    fn of(b: bool) -> Tri {
        if b {
            Tri::True
        } else {
            Tri::False
        }
    }
}

impl fmt::Display for Tri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tri::True => "TRUE",
            Tri::False => "FALSE",
            Tri::Unknown => "UNKNOWN",
        })
    }
}

/// What a finding rests on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Basis {
    /// A citation chain.
    Rule(String),
    /// A concrete refutation.
    Witness(String),
    /// Settled by an exact executable check.
    Decided,
    /// The subgoal that stopped the derivation.
    Blocked(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finding {
    pub value: Tri,
    pub basis: Basis,
}

impl Finding {
    pub fn rule(value: bool, cite: impl Into<String>) -> Self {
        Finding {
            value: Tri::of(value),
            basis: Basis::Rule(cite.into()),
        }
    }

    pub fn blocked(why: impl Into<String>) -> Self {
        Finding {
            value: Tri::Unknown,
            basis: Basis::Blocked(why.into()),
        }
    }

    pub fn is_rule(&self) -> bool {
        matches!(self.basis, Basis::Rule(_))
    }

    fn chain(&self, more: &str) -> Finding {
        match &self.basis {
            Basis::Rule(c) => Finding::rule(self.value == Tri::True, format!("{c}; {more}")),
            _ => self.clone(),
        }
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.basis {
            Basis::Rule(c) => write!(f, "{} [{c}]", self.value),
            Basis::Witness(w) => write!(f, "{} [witness: {w}]", self.value),
            Basis::Decided => write!(f, "{} [decided]", self.value),
            Basis::Blocked(b) => write!(f, "{} [blocked: {b}]", self.value),
        }
    }
}

/// One finding per property, in a fixed order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyReport {
    pub findings: BTreeMap<Property, Finding>,
}

impl PropertyReport {
    pub fn get(&self, p: Property) -> &Finding {
        &self.findings[&p]
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lines: Vec<String> = self.findings.iter().map(|(p, v)| format!("{p}: {v}")).collect();
        f.write_str(&lines.join("\n"))
    }
}

fn card_eq(label: &str, c: &SymCard) -> String {
    let s = c.to_string();
    if s.starts_with('≥') {
        format!("{label}{s}")
    } else {
        format!("{label}={s}")
    }
}

fn unbounded_invariants(b: &Bornology, horizon: u64) -> Option<Invariants> {
    if !b.is_unbounded(horizon).is_true() {
        return None;
    }
    b.cardinal_invariants(horizon).ok()
}

fn built(e: &BalleanExpr) -> Result<CoarsePresentation> {
    e.build()
}

fn expr_bounded(e: &BalleanExpr, horizon: u64) -> Result<Verdict> {
    Ok(is_bounded(&built(e)?, &SetExpr::All, horizon))
}

fn is_singleton(e: &BalleanExpr, horizon: u64) -> Result<bool> {
    Ok(built(e)?.points_upto(horizon).take(2).count() < 2)
}

/// Family members sorted into the cases the family theorems distinguish.
enum MemberShape {
    UnboundedMetrizable,
    BoundedNonSingleton,
    Other,
}

fn member_shape(fam: &PointedFamily, horizon: u64) -> Result<MemberShape> {
    let m = &fam.member;
    let bounded = expr_bounded(m, horizon)?;
    let metrizable = metrizable(m, horizon)?.is_some_and(|f| f.value == Tri::True);
    Ok(if bounded.is_false() && metrizable {
        MemberShape::UnboundedMetrizable
    } else if bounded.is_true() && !is_singleton(m, horizon)? {
        MemberShape::BoundedNonSingleton
    } else {
        MemberShape::Other
    })
}

/// Metrizability of a family construction over `index`; `unbounded`,
/// `bounded` are the citations for the two member shapes.
fn family_metrizable(
    index: &Bornology,
    fam: &PointedFamily,
    unbounded: &str,
    bounded: &str,
    horizon: u64,
) -> Result<Option<Finding>> {
    Ok(match member_shape(fam, horizon)? {
        MemberShape::UnboundedMetrizable => {
            if index.ground.is_finite() {
                Some(Finding::rule(true, "Thm 4; finite index"))
            } else if is_finite_subsets(index) {
                Some(Finding::rule(true, unbounded))
            } else if index.has_infinite_member(horizon).is_true() {
                Some(Finding::rule(false, format!("{unbounded}; B has an infinite member, so B ≠ [A]^<ω")))
            } else {
                None
            }
        }
        MemberShape::BoundedNonSingleton => match index.has_countable_base() {
            Verdict::True => Some(Finding::rule(true, format!("{bounded}; B has a countable base"))),
            Verdict::False(_) => Some(Finding::rule(false, format!("{bounded}; B has no countable base"))),
            Verdict::Unknown(_) => None,
        },
        MemberShape::Other => None,
    })
}

/// Whether the teeth meet every bounded set of the handle in a finite set.
fn teeth_meet_bounded_finitely(handle: &CoarsePresentation, teeth: &SetExpr, horizon: u64) -> bool {
    let b = bounded_sets(handle);
    if is_finite_subsets(&b) || teeth.finiteness(&handle.ground, horizon).is_true() {
        return true;
    }
    (0..16).all(|n| {
        b.base_member(n).is_some_and(|m| {
            m.combine(teeth, SetOp::Intersection)
                .is_ok_and(|s| s.finiteness(&handle.ground, horizon).is_true())
        })
    })
}

/// Rule-derived metrizability.
pub fn metrizable(e: &BalleanExpr, horizon: u64) -> Result<Option<Finding>> {
    Ok(match e {
        BalleanExpr::MetricNat => Some(Finding::rule(true, "Thm 1; the radius entourages form a countable base")),
        BalleanExpr::Points(_) => Some(Finding::rule(true, "Thm 1; one entourage forms a base")),
        BalleanExpr::Discrete(b) => match b.has_countable_base() {
            Verdict::True => Some(Finding::rule(true, "Thm 1; B has a countable base")),
            Verdict::False(_) => Some(Finding::rule(false, "Thm 1; B has no countable base")),
            Verdict::Unknown(_) => None,
        },
        BalleanExpr::Product(fs) => {
            let mut all = true;
            for f in fs {
                all &= metrizable(f, horizon)?.is_some_and(|m| m.value == Tri::True);
            }
            all.then(|| Finding::rule(true, "Thm 4; finitely many metrizable factors"))
        }
        BalleanExpr::BProduct(b, fam) => family_metrizable(b, fam, "Thm 5", "Thm 6", horizon)?,
        BalleanExpr::Macrocube(b) => family_metrizable(b, &PointedFamily::doubletons(), "Thm 5", "Thm 6", horizon)?,
        BalleanExpr::Bouquet(b, fam) => family_metrizable(b, fam, "Thm 7", "Thm 8", horizon)?,
        BalleanExpr::Comb { handle, teeth, spines } => {
            let h = metrizable(handle, horizon)?.is_some_and(|m| m.value == Tri::True);
            let s = metrizable(&spines.member, horizon)?.is_some_and(|m| m.value == Tri::True);
            (h && s && teeth_meet_bounded_finitely(&built(handle)?, teeth, horizon))
                .then(|| Finding::rule(true, "Thm 10; the teeth meet every bounded set finitely"))
        }
        BalleanExpr::Subballean(x, _) => metrizable(x, horizon)?
            .filter(|m| m.value == Tri::True)
            .map(|m| m.chain("Thm 1; subballean of a metrizable ballean")),
        BalleanExpr::Antidiscrete(_) | BalleanExpr::AbstractBallean(_) => None,
    })
}

fn is_normal(e: &BalleanExpr, horizon: u64) -> Result<bool> {
    Ok(normal(e, horizon)?.is_some_and(|f| f.value == Tri::True))
}

/// A normal product of two unbounded balleans needs matching invariants; a
/// mismatch refutes normality.
fn product_mismatch(a: &BalleanExpr, b: &BalleanExpr, horizon: u64) -> Result<Option<Finding>> {
    let (Some(x), Some(y)) = (
        unbounded_invariants(&bounded_sets(&built(a)?), horizon),
        unbounded_invariants(&bounded_sets(&built(b)?), horizon),
    ) else {
        return Ok(None);
    };
    let cards = [
        ("add", &x.add),
        ("cof", &y.cof),
        ("add", &y.add),
        ("cof", &x.cof),
    ];
    for (i, (l1, c1)) in cards.iter().enumerate() {
        for (l2, c2) in &cards[i + 1..] {
            if c1.definitely_lt(c2) || c2.definitely_lt(c1) {
                return Ok(Some(Finding::rule(
                    false,
                    format!("Thm 3 contrapositive; {} ≠ {}", card_eq(l1, c1), card_eq(l2, c2)),
                )));
            }
        }
    }
    Ok(None)
}

/// The product-bornology theorem on `⇑(B_X × B_Y)`.
fn up_product_not_normal(b: &Bornology, horizon: u64) -> Option<Finding> {
    let BornKind::Product(bx, by) = &b.kind else {
        return None;
    };
    let (x, y) = (unbounded_invariants(bx, horizon)?, unbounded_invariants(by, horizon)?);
    let fire = |small: &Invariants, big: &Invariants| {
        small.cov.definitely_lt(&big.add).then(|| {
            Finding::rule(
                false,
                format!(
                    "cov(B_Y) < add(B_X) theorem; {} < {}",
                    card_eq("cov", &small.cov),
                    card_eq("add", &big.add)
                ),
            )
        })
    };
    fire(&y, &x).or_else(|| fire(&x, &y))
}

/// Rule-derived normality.
pub fn normal(e: &BalleanExpr, horizon: u64) -> Result<Option<Finding>> {
    match e {
        BalleanExpr::Bouquet(_, fam) if is_normal(&fam.member, horizon)? => {
            return Ok(Some(Finding::rule(true, "Thm 9")));
        }
        BalleanExpr::Comb { handle, spines, .. }
            if is_normal(handle, horizon)? && is_normal(&spines.member, horizon)? =>
        {
            return Ok(Some(Finding::rule(true, "Thm 11")));
        }
        _ => {}
    }
    if let Some(m) = metrizable(e, horizon)? {
        if m.value == Tri::True {
            return Ok(Some(m.chain("metrizable ⇒ normal")));
        }
    }
    Ok(match e {
        BalleanExpr::Discrete(_) => Some(Finding::rule(true, "Thm 2; the indicator of Z is slowly oscillating")),
        BalleanExpr::Antidiscrete(b) => up_product_not_normal(b, horizon),
        BalleanExpr::Product(fs) if fs.len() == 2 => product_mismatch(&fs[0], &fs[1], horizon)?,
        // unbounded metrizable members: normal iff metrizable
        BalleanExpr::BProduct(_, fam) => match (member_shape(fam, horizon)?, metrizable(e, horizon)?) {
            (MemberShape::UnboundedMetrizable, Some(m)) if m.value == Tri::False => Some(m),
            _ => None,
        },
        _ => None,
    })
}

/// Rule-derived findings only.
pub fn infer_rules(e: &BalleanExpr, horizon: u64) -> Result<BTreeMap<Property, Finding>> {
    let mut out = BTreeMap::new();
    if let Some(f) = metrizable(e, horizon)? {
        out.insert(Property::Metrizable, f);
    }
    if let Some(f) = normal(e, horizon)? {
        out.insert(Property::Normal, f);
    }
    let bounded = expr_bounded(e, horizon)?;
    match e {
        BalleanExpr::Discrete(_) if bounded.is_false() => {
            out.insert(Property::Discrete, Finding::rule(true, "⇓B is the smallest compatible structure"));
        }
        BalleanExpr::Antidiscrete(_) if bounded.is_false() => {
            out.insert(Property::Antidiscrete, Finding::rule(true, "⇑B is the largest compatible structure"));
        }
        _ => {}
    }
    if bounded.is_true() {
        out.insert(Property::Ultranormal, Finding::rule(true, "bounded, so no unbounded subsets"));
    }
    Ok(out)
}

fn render_witness(v: &Verdict) -> String {
    v.witness().map_or_else(|| "executable check".to_string(), ToString::to_string)
}

/// Rules first, executable checks for the rest; a witness contradicting a
/// rule is an [`Error::Inconsistency`].
pub fn infer_properties(e: &BalleanExpr, horizon: u64) -> Result<PropertyReport> {
    let x = built(e)?;
    let rules = infer_rules(e, horizon)?;
    let bounded = is_bounded(&x, &SetExpr::All, horizon).is_true();
    let mut findings = BTreeMap::new();
    for p in Property::ALL {
        let exe = executable(p, &x, horizon);
        let finding = match (rules.get(&p), exe) {
            (Some(r), Some(v)) if (r.value == Tri::True && v.is_false()) || (r.value == Tri::False && v.is_true()) => {
                return Err(Error::Inconsistency(format!(
                    "{p} of {e}: rule says {r}, executable check says {}{}",
                    v.label(),
                    v.witness().map(|w| format!(" ({w})")).unwrap_or_default()
                )));
            }
            (Some(r), _) => r.clone(),
            (None, Some(Verdict::True)) => Finding {
                value: Tri::True,
                basis: Basis::Decided,
            },
            (None, Some(v @ Verdict::False(_))) => Finding {
                value: Tri::False,
                basis: Basis::Witness(render_witness(&v)),
            },
            (None, Some(Verdict::Unknown(h))) => Finding::blocked(format!("no rule applies; undecided at horizon {h}")),
            (None, None) if bounded && matches!(p, Property::Discrete | Property::Antidiscrete) => {
                Finding::blocked("defined for unbounded balleans only")
            }
            (None, None) => Finding::blocked("no rule applies"),
        };
        findings.insert(p, finding);
    }
    Ok(PropertyReport { findings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groundsets::GroundSet;
    use crate::DEFAULT_HORIZON as H;

    fn fin() -> Bornology {
        Bornology::finite_subsets(GroundSet::Naturals)
    }

    #[test]
    fn cantor_style_b_product() {
        let e = BalleanExpr::BProduct(fin(), Box::new(PointedFamily::rays()));
        let r = infer_properties(&e, H).unwrap();
        assert_eq!(r.get(Property::Metrizable).to_string(), "TRUE [Thm 5]");
        assert_eq!(r.get(Property::Normal).to_string(), "TRUE [Thm 5; metrizable ⇒ normal]");
    }

    #[test]
    fn infinite_member_b_product() {
        let e = BalleanExpr::BProduct(Bornology::evens_plus(), Box::new(PointedFamily::rays()));
        let r = infer_properties(&e, H).unwrap();
        assert_eq!(r.get(Property::Metrizable).value, Tri::False);
        assert_eq!(r.get(Property::Normal).value, Tri::False);
    }

    #[test]
    fn product_with_large_cofinality() {
        let k = SymCard::declared("κ", true);
        let b = Bornology::declare(GroundSet::Naturals, k.clone(), k.clone(), k, true).unwrap();
        let e = BalleanExpr::Product(vec![BalleanExpr::MetricNat, BalleanExpr::AbstractBallean(b)]);
        let r = infer_properties(&e, H).unwrap();
        assert_eq!(r.get(Property::Normal).to_string(), "FALSE [Thm 3 contrapositive; add=ℵ0 ≠ cof=κ≥ℵ1]");
    }

    #[test]
    fn comb_over_powers_of_four() {
        let e = BalleanExpr::Comb {
            handle: Box::new(BalleanExpr::MetricNat),
            teeth: SetExpr::generator("pow4").unwrap(),
            spines: Box::new(PointedFamily::rays()),
        };
        let r = infer_properties(&e, H).unwrap();
        assert_eq!(r.get(Property::Metrizable).value, Tri::True);
        assert!(matches!(&r.get(Property::Metrizable).basis, Basis::Rule(c) if c.starts_with("Thm 10")));
    }

    #[test]
    fn bouquet_is_normal() {
        let e = BalleanExpr::Bouquet(Bornology::evens_plus(), Box::new(PointedFamily::rays()));
        let r = infer_properties(&e, H).unwrap();
        assert_eq!(r.get(Property::Normal).to_string(), "TRUE [Thm 9]");
        assert_eq!(r.get(Property::Metrizable).value, Tri::False);
    }

    #[test]
    fn up_product_cardinal_mismatch() {
        let k = SymCard::declared("κ", true);
        let bx = Bornology::declare(GroundSet::Naturals, k.clone(), k.clone(), k, true).unwrap();
        let e = BalleanExpr::Antidiscrete(Bornology::product(bx, fin()));
        let r = infer_properties(&e, H).unwrap();
        assert_eq!(r.get(Property::Normal).value, Tri::False);
        assert_eq!(r.get(Property::Antidiscrete).value, Tri::True);
    }

    #[test]
    fn report_lines() {
        let r = infer_properties(&BalleanExpr::Discrete(fin()), H).unwrap();
        let text = r.to_string();
        assert_eq!(text.lines().count(), 7);
        assert!(text.contains("discrete: TRUE"));
        assert!(text.contains("bounded: FALSE"));
    }
}
