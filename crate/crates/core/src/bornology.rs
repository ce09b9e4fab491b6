//! Bornologies: presentations, axiom checks and the cardinal invariants
//! `add`, `cov`, `cof`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groundsets::{Element, GroundSet, SetExpr, SetOp, Verdict, Witness};

/// Symbolic cardinal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymCard {
    Fin(u64),
    Aleph0,
    AtLeastAleph1,
    /// A named cardinal; `at_least_aleph1` records whether it is uncountable.
    Declared { name: String, at_least_aleph1: bool },
}

impl SymCard {
    pub fn declared(name: impl Into<String>, at_least_aleph1: bool) -> Self {
        SymCard::Declared {
            name: name.into(),
            at_least_aleph1,
        }
    }

    /// Whether the cardinal is known to be uncountable.
    pub fn is_uncountable(&self) -> Option<bool> {
        match self {
            SymCard::Fin(_) | SymCard::Aleph0 => Some(false),
            SymCard::AtLeastAleph1 => Some(true),
            SymCard::Declared { at_least_aleph1, .. } => at_least_aleph1.then_some(true),
        }
    }

    /// Strictly below, when derivable.
    pub fn definitely_lt(&self, other: &SymCard) -> bool {
        self.partial_cmp(other) == Some(Ordering::Less)
    }

    fn rank(&self) -> Option<(u8, u64)> {
        match self {
            SymCard::Fin(n) => Some((0, *n)),
            SymCard::Aleph0 => Some((1, 0)),
            _ => None,
        }
    }

    pub fn min(a: &SymCard, b: &SymCard) -> SymCard {
        match a.partial_cmp(b) {
            Some(Ordering::Greater) => b.clone(),
            Some(_) => a.clone(),
            None => SymCard::Declared {
                name: format!("min({a}, {b})"),
                at_least_aleph1: a.is_uncountable() == Some(true) && b.is_uncountable() == Some(true),
            },
        }
    }

    pub fn max(a: &SymCard, b: &SymCard) -> SymCard {
        match a.partial_cmp(b) {
            Some(Ordering::Less) => b.clone(),
            Some(_) => a.clone(),
            None => SymCard::Declared {
                name: format!("max({a}, {b})"),
                at_least_aleph1: a.is_uncountable() == Some(true) || b.is_uncountable() == Some(true),
            },
        }
    }
}

impl PartialOrd for SymCard {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self == other {
            return Some(Ordering::Equal);
        }
        if let (Some(a), Some(b)) = (self.rank(), other.rank()) {
            return Some(a.cmp(&b));
        }
        // a countable value sits below anything known to be uncountable
        match (self.is_uncountable(), other.is_uncountable()) {
            (Some(false), Some(true)) => Some(Ordering::Less),
            (Some(true), Some(false)) => Some(Ordering::Greater),
            _ => None,
        }
    }
}

impl fmt::Display for SymCard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymCard::Fin(n) => write!(f, "{n}"),
            SymCard::Aleph0 => write!(f, "ℵ0"),
            SymCard::AtLeastAleph1 => write!(f, "≥ℵ1"),
            SymCard::Declared { name, at_least_aleph1: true } => write!(f, "{name}≥ℵ1"),
            SymCard::Declared { name, .. } => write!(f, "{name}"),
        }
    }
}

type MemberFn = Arc<dyn Fn(u64) -> SetExpr + Send + Sync>;
type OracleFn = Arc<dyn Fn(&SetExpr, u64) -> Verdict + Send + Sync>;

#[derive(Clone)]
pub enum BornKind {
    /// `[X]^{<ω}`.
    FiniteSubsets,
    /// Subsets of some member of the increasing chain `B_0 ⊆ B_1 ⊆ …`.
    Chain {
        name: String,
        member: MemberFn,
        members_finite: bool,
        /// An infinite set meeting every member in a finite set, when the
        /// presentation supplies one.
        avoided: Option<SetExpr>,
    },
    /// Subsets of finite unions of the listed sets.
    Explicit(Vec<SetExpr>),
    Oracle { name: String, test: OracleFn },
    Abstract {
        add: SymCard,
        cov: SymCard,
        cof: SymCard,
        unbounded: bool,
    },
    /// `{B ⊆ X × Y : B ⊆ B_X × B_Y}`.
    Product(Box<Bornology>, Box<Bornology>),
    /// `{B ∈ ambient : B ⊆ subset}`, membership delegated to the ambient test.
    Induced { ambient: Box<Bornology>, subset: SetExpr },
}

#[derive(Clone)]
pub struct Bornology {
    pub ground: GroundSet,
    pub kind: BornKind,
}

impl fmt::Debug for Bornology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bornology({self} on {})", self.ground)
    }
}

/// Outcome of [`Bornology::check`]; each field holds the first violation.
#[derive(Debug, Clone, Default)]
pub struct BornologyReport {
    pub singleton: Option<Element>,
    pub union: Option<(SetExpr, SetExpr)>,
    pub subset: Option<(SetExpr, SetExpr)>,
}

impl BornologyReport {
    pub fn passes(&self) -> bool {
        self.singleton.is_none() && self.union.is_none() && self.subset.is_none()
    }
}

impl fmt::Display for BornologyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.singleton {
            None => writeln!(f, "singletons: PASS")?,
            Some(x) => writeln!(f, "singletons: FAIL {{{x}}} is not a member")?,
        }
        match &self.union {
            None => writeln!(f, "unions: PASS")?,
            Some((a, b)) => writeln!(f, "unions: FAIL {a} ∪ {b}")?,
        }
        match &self.subset {
            None => write!(f, "subsets: PASS"),
            Some((a, b)) => write!(f, "subsets: FAIL {b} ⊆ {a}"),
        }
    }
}

/// `add`, `cov`, `cof` with the derivation steps that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct Invariants {
    pub add: SymCard,
    pub cov: SymCard,
    pub cof: SymCard,
    pub trace: Vec<String>,
}

impl Invariants {
    pub fn ordered(&self) -> bool {
        !self.cov.definitely_lt(&self.add) && !self.cof.definitely_lt(&self.cov)
    }
}

impl fmt::Display for Invariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "add: {}", self.add)?;
        writeln!(f, "cov: {}", self.cov)?;
        write!(f, "cof: {}", self.cof)?;
        for t in &self.trace {
            write!(f, "\n  because {t}")?;
        }
        Ok(())
    }
}

fn countable_trace(what: &str) -> Vec<String> {
    vec![
        format!("{what} is closed under finite unions, so add ≥ ℵ0"),
        "the ground is the union of countably many members but is not a member, so add ≤ cov ≤ ℵ0".into(),
        "a countable increasing base is cofinal, so cof ≤ ℵ0".into(),
    ]
}

impl Bornology {
    pub fn finite_subsets(ground: GroundSet) -> Self {
        Bornology {
            ground,
            kind: BornKind::FiniteSubsets,
        }
    }

    /// The chain `[0, n]` on the naturals.
    pub fn intervals() -> Self {
        Self::chain(GroundSet::Naturals, "intervals", true, |n| SetExpr::interval(0, n))
    }

    /// The chain `evens ∪ [0, n]`, a countable base with infinite members.
    pub fn evens_plus() -> Self {
        Self::chain(GroundSet::Naturals, "evens-plus", false, |n| {
            SetExpr::progression(2, 0)
                .combine(&SetExpr::interval(0, n), SetOp::Union)
                .expect("same ground")
        })
        .avoiding(SetExpr::progression(2, 1))
    }

    pub fn chain(
        ground: GroundSet,
        name: impl Into<String>,
        members_finite: bool,
        member: impl Fn(u64) -> SetExpr + Send + Sync + 'static,
    ) -> Self {
        Bornology {
            ground,
            kind: BornKind::Chain {
                name: name.into(),
                member: Arc::new(member),
                members_finite,
                avoided: None,
            },
        }
    }

    /// Records an infinite set that meets every chain member finitely. It
    /// certifies unboundedness and refutes membership of sets meeting it
    /// infinitely.
    pub fn avoiding(mut self, set: SetExpr) -> Self {
        if let BornKind::Chain { avoided, .. } = &mut self.kind {
            *avoided = Some(set);
        }
        self
    }

    /// Built-in chains by name.
    pub fn builtin_chain(name: &str) -> Option<Self> {
        match name {
            "intervals" => Some(Self::intervals()),
            "evens-plus" => Some(Self::evens_plus()),
            _ => None,
        }
    }

    pub fn explicit(ground: GroundSet, base: Vec<SetExpr>) -> Self {
        Bornology {
            ground,
            kind: BornKind::Explicit(base),
        }
    }

    pub fn powerset(ground: GroundSet) -> Self {
        Self::explicit(ground, vec![SetExpr::All])
    }

    pub fn oracle(
        ground: GroundSet,
        name: impl Into<String>,
        test: impl Fn(&SetExpr, u64) -> Verdict + Send + Sync + 'static,
    ) -> Self {
        Bornology {
            ground,
            kind: BornKind::Oracle {
                name: name.into(),
                test: Arc::new(test),
            },
        }
    }

    /// A declared bornology; rejects declarations violating
    /// `add ≤ cov ≤ cof` or giving an unbounded bornology finite additivity.
    pub fn declare(ground: GroundSet, add: SymCard, cov: SymCard, cof: SymCard, unbounded: bool) -> Result<Self> {
        if cov.definitely_lt(&add) || cof.definitely_lt(&cov) || cof.definitely_lt(&add) {
            return Err(Error::Domain(format!(
                "declared invariants violate add ≤ cov ≤ cof: add={add}, cov={cov}, cof={cof}"
            )));
        }
        if unbounded && matches!(add, SymCard::Fin(_)) {
            return Err(Error::Domain(format!(
                "an unbounded bornology is closed under finite unions, so add ≥ ℵ0 (declared {add})"
            )));
        }
        Ok(Bornology {
            ground,
            kind: BornKind::Abstract { add, cov, cof, unbounded },
        })
    }

    pub fn product(a: Bornology, b: Bornology) -> Self {
        Bornology {
            ground: GroundSet::TupleSpace(vec![a.ground.clone(), b.ground.clone()]),
            kind: BornKind::Product(Box::new(a), Box::new(b)),
        }
    }

    /// `{B ∈ self : B ⊆ subset}`.
    pub fn induced(self, subset: SetExpr) -> Self {
        Bornology {
            ground: self.ground.clone(),
            kind: BornKind::Induced {
                ambient: Box::new(self),
                subset,
            },
        }
    }

    pub fn is_abstract(&self) -> bool {
        match &self.kind {
            BornKind::Abstract { .. } => true,
            BornKind::Product(a, b) => a.is_abstract() || b.is_abstract(),
            BornKind::Induced { ambient, .. } => ambient.is_abstract(),
            _ => false,
        }
    }

    /// The `n`-th member of a countable increasing base, when one is known.
    pub fn base_member(&self, n: u64) -> Option<SetExpr> {
        match &self.kind {
            BornKind::FiniteSubsets => match self.ground {
                GroundSet::Naturals => Some(SetExpr::interval(0, n)),
                GroundSet::FinitePoints(k) => Some(SetExpr::interval(0, n.min(k.saturating_sub(1)))),
                _ => {
                    let pts: Vec<Element> = self.ground.elements_upto(n).collect();
                    Some(SetExpr::points(pts))
                }
            },
            BornKind::Chain { member, .. } => Some(member(n)),
            BornKind::Explicit(list) => {
                let mut acc = SetExpr::empty();
                for s in list {
                    acc = acc.combine(s, SetOp::Union).ok()?;
                }
                Some(acc)
            }
            BornKind::Product(a, b) => Some(SetExpr::Rectangle(vec![a.base_member(n)?, b.base_member(n)?])),
            BornKind::Induced { ambient, subset } => ambient.base_member(n)?.combine(subset, SetOp::Intersection).ok(),
            BornKind::Oracle { .. } | BornKind::Abstract { .. } => None,
        }
    }

    /// Whether some member is infinite.
    pub fn has_infinite_member(&self, horizon: u64) -> Verdict {
        if self.ground.is_finite() {
            return Verdict::note("finite ground");
        }
        match &self.kind {
            BornKind::FiniteSubsets => Verdict::note("every member is finite"),
            BornKind::Chain { members_finite: true, .. } => Verdict::note("every chain member is finite"),
            BornKind::Chain { member, .. } => (0..=8)
                .map(|n| member(n).finiteness(&self.ground, horizon).negate())
                .fold(Verdict::False(None), Verdict::or)
                .or(Verdict::Unknown(horizon)),
            BornKind::Explicit(list) => list
                .iter()
                .map(|s| s.finiteness(&self.ground, horizon).negate())
                .fold(Verdict::False(None), Verdict::or),
            BornKind::Product(a, b) => {
                // B_X × B_Y with one side infinite and the other non-empty
                a.has_infinite_member(horizon).or(b.has_infinite_member(horizon))
            }
            BornKind::Induced { ambient, subset } => match subset.finiteness(&self.ground, horizon) {
                Verdict::True => Verdict::note("members lie inside a finite set"),
                _ => match ambient.has_infinite_member(horizon) {
                    v @ Verdict::False(_) => v,
                    _ => Verdict::Unknown(horizon),
                },
            },
            BornKind::Abstract { .. } | BornKind::Oracle { .. } => Verdict::Unknown(horizon),
        }
    }

    /// Membership of `s`.
    pub fn member(&self, s: &SetExpr, horizon: u64) -> Verdict {
        match &self.kind {
            BornKind::FiniteSubsets => s.finiteness(&self.ground, horizon),
            BornKind::Chain {
                member,
                members_finite,
                avoided,
                ..
            } => {
                if let Some(a) = avoided {
                    if let Ok(meet) = s.combine(a, SetOp::Intersection) {
                        if meet.finiteness(&self.ground, horizon).is_false() {
                            return Verdict::note(format!("meets {a} infinitely, which every member meets finitely"));
                        }
                    }
                }
                self.chain_member(s, member, *members_finite, horizon)
            }
            BornKind::Explicit(list) => {
                if list.iter().any(|b| matches!(b, SetExpr::All)) {
                    return Verdict::True;
                }
                let union = match self.base_member(0) {
                    Some(u) => u,
                    None => SetExpr::Union(list.clone()),
                };
                s.subset_verdict(&union, &self.ground, horizon)
            }
            BornKind::Oracle { test, .. } => test(s, horizon),
            BornKind::Abstract { unbounded, .. } => {
                if matches!(s, SetExpr::All) {
                    return Verdict::from_bool(!unbounded);
                }
                match s.finiteness(&self.ground, horizon) {
                    Verdict::True => Verdict::True,
                    _ => Verdict::Unknown(horizon),
                }
            }
            BornKind::Product(a, b) => product_member(a, b, s, &self.ground, horizon),
            BornKind::Induced { ambient, subset } => s
                .subset_verdict(subset, &self.ground, horizon)
                .and(ambient.member(s, horizon)),
        }
    }

    fn chain_member(&self, s: &SetExpr, member: &MemberFn, members_finite: bool, horizon: u64) -> Verdict {
        let finite = s.finiteness(&self.ground, horizon);
        if members_finite {
            if let Verdict::False(w) = &finite {
                return Verdict::False(w.clone());
            }
        }
        // the chain is increasing, so the first covering index is found by bisection
        let inside = |n: u64| s.subset_verdict(&member(n), &self.ground, horizon);
        match inside(horizon) {
            Verdict::True => Verdict::True,
            _ => Verdict::Unknown(horizon),
        }
    }

    /// Checks singletons, unions and subsets on sampled members.
    pub fn check(&self, horizon: u64) -> BornologyReport {
        let mut report = BornologyReport::default();
        let probe = horizon.min(64);
        report.singleton = self
            .ground
            .elements_upto(probe)
            .find(|x| self.member(&SetExpr::points([x.clone()]), horizon).is_false());
        let samples = self.samples();
        'u: for (i, a) in samples.iter().enumerate() {
            for b in &samples[i..] {
                if let Ok(u) = a.combine(b, SetOp::Union) {
                    if self.member(&u, horizon).is_false() {
                        report.union = Some((a.clone(), b.clone()));
                        break 'u;
                    }
                }
            }
        }
        'sub: for a in &samples {
            for cut in [SetExpr::progression(2, 0), SetExpr::interval(0, 5), SetExpr::empty()] {
                let Ok(sub) = a.combine(&cut, SetOp::Intersection) else {
                    continue;
                };
                if self.member(&sub, horizon).is_false() {
                    report.subset = Some((a.clone(), sub));
                    break 'sub;
                }
            }
        }
        report
    }

    /// A few members used for sampling checks.
    pub fn samples(&self) -> Vec<SetExpr> {
        let mut out: Vec<SetExpr> = (0..6).filter_map(|n| self.base_member(n * 3)).collect();
        if let BornKind::Explicit(list) = &self.kind {
            out.extend(list.iter().cloned());
        }
        if out.is_empty() {
            out = self
                .ground
                .elements_upto(8)
                .map(|x| SetExpr::points([x]))
                .collect();
        }
        out
    }

    /// Whether the ground itself is not a member.
    pub fn is_unbounded(&self, horizon: u64) -> Verdict {
        match &self.kind {
            BornKind::FiniteSubsets => Verdict::from_bool(!self.ground.is_finite()),
            BornKind::Chain {
                members_finite: true, ..
            } => {
                if self.ground.is_finite() {
                    self.member(&SetExpr::All, horizon).negate()
                } else {
                    Verdict::True
                }
            }
            BornKind::Chain { avoided: Some(_), .. } => Verdict::True,
            BornKind::Abstract { unbounded, .. } => Verdict::from_bool(*unbounded),
            BornKind::Product(a, b) => a.is_unbounded(horizon).or(b.is_unbounded(horizon)),
            BornKind::Induced { ambient, subset } => ambient.member(subset, horizon).negate(),
            _ => self.member(&SetExpr::All, horizon).negate(),
        }
    }

    /// `(add, cov, cof)`; defined for unbounded bornologies only.
    pub fn cardinal_invariants(&self, horizon: u64) -> Result<Invariants> {
        match self.is_unbounded(horizon) {
            Verdict::True => {}
            Verdict::False(_) => {
                return Err(Error::Domain(
                    "the bornology is bounded; add, cov and cof are defined for unbounded bornologies".into(),
                ))
            }
            Verdict::Unknown(h) => {
                return Err(Error::Unsupported(format!(
                    "unboundedness is undecided at horizon {h}"
                )))
            }
        }
        let countable = |what: &str| Invariants {
            add: SymCard::Aleph0,
            cov: SymCard::Aleph0,
            cof: SymCard::Aleph0,
            trace: countable_trace(what),
        };
        match &self.kind {
            BornKind::FiniteSubsets => Ok(countable("[X]^<ω")),
            BornKind::Chain { name, .. } => Ok(countable(&format!("the chain {name}"))),
            BornKind::Induced { ambient, .. } if ambient.has_countable_base().is_true() => {
                Ok(countable("the induced bornology"))
            }
            BornKind::Abstract { add, cov, cof, .. } => Ok(Invariants {
                add: add.clone(),
                cov: cov.clone(),
                cof: cof.clone(),
                trace: vec!["declared".into()],
            }),
            BornKind::Product(a, b) => {
                let side = |x: &Bornology| match x.is_unbounded(horizon) {
                    Verdict::True => x.cardinal_invariants(horizon).map(Some),
                    _ => Ok(None),
                };
                match (side(a)?, side(b)?) {
                    (Some(x), Some(y)) => Ok(Invariants {
                        add: SymCard::min(&x.add, &y.add),
                        cov: SymCard::max(&x.cov, &y.cov),
                        cof: SymCard::max(&x.cof, &y.cof),
                        trace: vec![
                            "a union of rectangles is bounded iff both projections are, so add is the smaller add".into(),
                            "rectangles cover iff both sides cover, so cov is the larger cov".into(),
                            "cofinal rectangles need cofinal families on both sides, so cof is the larger cof".into(),
                        ],
                    }),
                    (Some(x), None) | (None, Some(x)) => {
                        let mut t = x.trace.clone();
                        t.push("the other factor is bounded and does not change the invariants".into());
                        Ok(Invariants { trace: t, ..x })
                    }
                    (None, None) => Err(Error::Domain("both factors are bounded".into())),
                }
            }
            BornKind::Explicit(_) => Err(Error::Precondition(
                "a finite base that does not cover the ground is not a bornology".into(),
            )),
            BornKind::Oracle { .. } | BornKind::Induced { .. } => Err(Error::Unsupported(format!(
                "no invariant rules for the presentation {self}"
            ))),
        }
    }

    pub fn has_countable_base(&self) -> Verdict {
        match &self.kind {
            // every encodable ground is countable
            BornKind::FiniteSubsets | BornKind::Chain { .. } | BornKind::Explicit(_) => Verdict::True,
            BornKind::Product(a, b) => a.has_countable_base().and(b.has_countable_base()),
            BornKind::Induced { ambient, .. } => match ambient.has_countable_base() {
                Verdict::True => Verdict::True,
                _ => Verdict::Unknown(0),
            },
            BornKind::Abstract { cof, .. } => match cof.is_uncountable() {
                Some(true) => Verdict::note(format!("cof = {cof} exceeds ℵ0")),
                Some(false) => Verdict::True,
                None => Verdict::Unknown(0),
            },
            BornKind::Oracle { .. } => Verdict::Unknown(0),
        }
    }
}

fn product_member(a: &Bornology, b: &Bornology, s: &SetExpr, ground: &GroundSet, horizon: u64) -> Verdict {
    match s {
        SetExpr::Rectangle(cs) if cs.len() == 2 => {
            let empty = |c: &SetExpr| c.exact().is_some_and(|p| p.next_at_or_after(0).is_none());
            if empty(&cs[0]) || empty(&cs[1]) {
                return Verdict::True;
            }
            a.member(&cs[0], horizon).and(b.member(&cs[1], horizon))
        }
        SetExpr::Finite(xs) => {
            let mut left = Vec::new();
            let mut right = Vec::new();
            for x in xs {
                match x {
                    Element::Tuple(v) if v.len() == 2 => {
                        left.push(v[0].clone());
                        right.push(v[1].clone());
                    }
                    _ => return Verdict::falsified(Witness::Point(x.clone())),
                }
            }
            a.member(&SetExpr::points(left), horizon)
                .and(b.member(&SetExpr::points(right), horizon))
        }
        SetExpr::All => a.member(&SetExpr::All, horizon).and(b.member(&SetExpr::All, horizon)),
        _ => match s.finiteness(ground, horizon) {
            Verdict::True => Verdict::True,
            _ => Verdict::Unknown(horizon),
        },
    }
}

impl fmt::Display for Bornology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            BornKind::FiniteSubsets => match &self.ground {
                GroundSet::Naturals => write!(f, "(finite-subsets)"),
                g => write!(f, "(finite-subsets {g})"),
            },
            BornKind::Chain { name, .. } => write!(f, "(chain {name})"),
            BornKind::Explicit(list) if list.len() == 1 && matches!(list[0], SetExpr::All) => match &self.ground {
                GroundSet::Naturals => write!(f, "(powerset)"),
                g => write!(f, "(powerset {g})"),
            },
            BornKind::Explicit(list) => {
                write!(f, "(explicit")?;
                for s in list {
                    write!(f, " {s}")?;
                }
                write!(f, ")")
            }
            BornKind::Oracle { name, .. } => write!(f, "(oracle-bornology {name})"),
            BornKind::Abstract { add, cov, cof, unbounded } => {
                write!(f, "(abstract :add {} :cov {} :cof {}", card_syntax(add), card_syntax(cov), card_syntax(cof))?;
                if !unbounded {
                    write!(f, " :bounded")?;
                }
                write!(f, ")")
            }
            BornKind::Product(a, b) => write!(f, "(product {a} {b})"),
            BornKind::Induced { ambient, subset } => write!(f, "(induced {ambient} {subset})"),
        }
    }
}

/// Instance-file spelling of a cardinal.
pub fn card_syntax(c: &SymCard) -> String {
    match c {
        SymCard::Fin(n) => n.to_string(),
        SymCard::Aleph0 => "aleph0".into(),
        SymCard::AtLeastAleph1 => "aleph1+".into(),
        SymCard::Declared { name, at_least_aleph1: true } => format!("{name}+"),
        SymCard::Declared { name, .. } => name.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_HORIZON as H;

    #[test]
    fn finite_subsets_of_naturals() {
        let b = Bornology::finite_subsets(GroundSet::Naturals);
        assert!(b.check(H).passes());
        assert!(b.is_unbounded(H).is_true());
        let inv = b.cardinal_invariants(H).unwrap();
        assert_eq!((inv.add, inv.cov, inv.cof), (SymCard::Aleph0, SymCard::Aleph0, SymCard::Aleph0));
    }

    #[test]
    fn evens_alone_misses_odd_singletons() {
        let b = Bornology::explicit(GroundSet::Naturals, vec![SetExpr::progression(2, 0)]);
        let r = b.check(H);
        assert_eq!(r.singleton, Some(Element::Nat(1)));
    }

    #[test]
    fn interval_chain() {
        let b = Bornology::intervals();
        assert!(b.check(H).passes());
        assert!(b.is_unbounded(H).is_true());
        assert!(b.member(&SetExpr::nats([3, 17]), H).is_true());
        assert!(b.member(&SetExpr::progression(2, 0), H).is_false());
        assert!(b.has_countable_base().is_true());
    }

    #[test]
    fn powerset_is_bounded() {
        let b = Bornology::powerset(GroundSet::Naturals);
        assert!(b.is_unbounded(H).is_false());
        assert!(matches!(b.cardinal_invariants(H), Err(Error::Domain(_))));
    }

    #[test]
    fn declarations_are_ordered() {
        let k = SymCard::declared("κ", true);
        assert!(Bornology::declare(GroundSet::Naturals, k.clone(), k.clone(), k.clone(), true).is_ok());
        let bad = Bornology::declare(GroundSet::Naturals, SymCard::AtLeastAleph1, SymCard::Aleph0, SymCard::Aleph0, true);
        assert!(matches!(bad, Err(Error::Domain(_))));
    }

    #[test]
    fn product_with_uncountable_cofinality() {
        let a = Bornology::finite_subsets(GroundSet::Naturals);
        let b = Bornology::declare(
            GroundSet::Naturals,
            SymCard::Aleph0,
            SymCard::Aleph0,
            SymCard::AtLeastAleph1,
            true,
        )
        .unwrap();
        let p = Bornology::product(a, b);
        let inv = p.cardinal_invariants(H).unwrap();
        assert_eq!(inv.cof, SymCard::AtLeastAleph1);
        assert_eq!(inv.add, SymCard::Aleph0);
        assert!(inv.ordered());
        assert!(p.has_countable_base().is_false());
    }

    #[test]
    fn product_membership() {
        let f = || Bornology::finite_subsets(GroundSet::Naturals);
        let p = Bornology::product(f(), f());
        let diag = SetExpr::points((0..10).map(|n| Element::pair(Element::Nat(n), Element::Nat(n))));
        assert!(p.member(&diag, H).is_true());
        let rect = SetExpr::Rectangle(vec![SetExpr::progression(2, 0), SetExpr::interval(0, 5)]);
        assert!(p.member(&rect, H).is_false());
        assert!(p.is_unbounded(H).is_true());
    }

    #[test]
    fn symcard_order() {
        assert!(SymCard::Fin(3) < SymCard::Aleph0);
        assert!(SymCard::Aleph0 < SymCard::AtLeastAleph1);
        assert!(SymCard::Aleph0 < SymCard::declared("κ", true));
        assert_eq!(SymCard::AtLeastAleph1.partial_cmp(&SymCard::declared("κ", true)), None);
    }
}
