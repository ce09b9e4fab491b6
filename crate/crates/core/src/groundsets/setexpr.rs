//! Finitely presented subsets of a ground set.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use super::sparse::geometric_coincide_infinitely;
use super::{Element, Generator, GroundSet, Periodic, Verdict, Witness};
use crate::error::{Error, Result};

/// A named membership oracle, for carriers that have no closed form
/// (comb carriers, restriction bornologies, user maps).
#[derive(Clone)]
pub struct Predicate {
    pub name: String,
    pub test: Arc<dyn Fn(&Element) -> bool + Send + Sync>,
}

impl Predicate {
    pub fn new(name: impl Into<String>, f: impl Fn(&Element) -> bool + Send + Sync + 'static) -> Self {
        Predicate {
            name: name.into(),
            test: Arc::new(f),
        }
    }
}

impl fmt::Debug for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Predicate({})", self.name)
    }
}

impl PartialEq for Predicate {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && Arc::ptr_eq(&self.test, &other.test)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SetExpr {
    Finite(BTreeSet<Element>),
    Periodic(Periodic),
    Sparse(Generator),
    Union(Vec<SetExpr>),
    Intersection(Vec<SetExpr>),
    Complement(Box<SetExpr>),
    /// Product of component sets, for tuple grounds.
    Rectangle(Vec<SetExpr>),
    /// The copy of a set inside part / spine `tag`.
    Tagged(u64, Box<SetExpr>),
    /// The whole ground.
    All,
    Oracle(Predicate),
}

/// Boolean combinators accepted by [`SetExpr::combine`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetOp {
    Union,
    Intersection,
    Difference,
}

/// Coarse classification used to detect ground mismatches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    Nat,
    Tuple(usize),
    Tagged,
    Sparse,
    Any,
}

impl SetExpr {
    pub fn empty() -> Self {
        SetExpr::Finite(BTreeSet::new())
    }

    pub fn nats(xs: impl IntoIterator<Item = u64>) -> Self {
        SetExpr::Finite(xs.into_iter().map(Element::Nat).collect())
    }

    pub fn points(xs: impl IntoIterator<Item = Element>) -> Self {
        SetExpr::Finite(xs.into_iter().collect())
    }

    pub fn progression(period: u64, residue: u64) -> Self {
        SetExpr::Periodic(Periodic::progression(period, residue))
    }

    pub fn interval(lo: u64, hi: u64) -> Self {
        SetExpr::Periodic(Periodic::interval(lo, hi))
    }

    pub fn generator(name: &str) -> Option<Self> {
        Generator::builtin(name).map(SetExpr::Sparse)
    }

    pub fn oracle(name: impl Into<String>, f: impl Fn(&Element) -> bool + Send + Sync + 'static) -> Self {
        SetExpr::Oracle(Predicate::new(name, f))
    }

    pub fn tagged(tag: u64, s: SetExpr) -> Self {
        SetExpr::Tagged(tag, Box::new(s))
    }

    pub fn complement(s: SetExpr) -> Self {
        SetExpr::Complement(Box::new(s))
    }

    /// Membership; errors when `x` cannot belong to any ground this set
    /// lives on (a natural-number set asked about a tuple, say).
    pub fn contains(&self, x: &Element) -> Result<bool> {
        let bad = || Error::Encoding(format!("{x} is not a natural number"));
        Ok(match self {
            SetExpr::Finite(xs) => xs.contains(x),
            SetExpr::Periodic(p) => p.contains(x.nat().ok_or_else(bad)?),
            SetExpr::Sparse(g) => g.contains(x.nat().ok_or_else(bad)?),
            SetExpr::Union(parts) => {
                for p in parts {
                    if p.contains(x)? {
                        return Ok(true);
                    }
                }
                false
            }
            SetExpr::Intersection(parts) => {
                for p in parts {
                    if !p.contains(x)? {
                        return Ok(false);
                    }
                }
                true
            }
            SetExpr::Complement(s) => !s.contains(x)?,
            SetExpr::Rectangle(cs) => match x {
                Element::Tuple(xs) if xs.len() == cs.len() => {
                    for (c, xi) in cs.iter().zip(xs) {
                        if !c.contains(xi)? {
                            return Ok(false);
                        }
                    }
                    true
                }
                _ => false,
            },
            SetExpr::Tagged(t, s) => match x {
                Element::Tagged(u, inner) if u == t => s.contains(inner)?,
                _ => false,
            },
            SetExpr::All => true,
            SetExpr::Oracle(p) => (p.test)(x),
        })
    }

    /// Infallible membership, treating malformed elements as non-members.
    pub fn has(&self, x: &Element) -> bool {
        self.contains(x).unwrap_or(false)
    }

    fn shape(&self) -> Shape {
        match self {
            SetExpr::Periodic(_) | SetExpr::Sparse(_) => Shape::Nat,
            SetExpr::Finite(xs) => match xs.iter().next() {
                Some(Element::Nat(_)) => Shape::Nat,
                Some(Element::Tuple(v)) => Shape::Tuple(v.len()),
                Some(Element::Tagged(..)) | Some(Element::Base) => Shape::Tagged,
                Some(Element::Sparse(_)) => Shape::Sparse,
                None => Shape::Any,
            },
            SetExpr::Rectangle(cs) => Shape::Tuple(cs.len()),
            SetExpr::Tagged(..) => Shape::Tagged,
            SetExpr::Union(ps) | SetExpr::Intersection(ps) => ps
                .iter()
                .map(SetExpr::shape)
                .find(|s| *s != Shape::Any)
                .unwrap_or(Shape::Any),
            SetExpr::Complement(s) => s.shape(),
            SetExpr::All | SetExpr::Oracle(_) => Shape::Any,
        }
    }

    /// The exact-tier normal form, when the expression is built from finite
    /// sets of naturals and eventually periodic sets only.
    pub fn exact(&self) -> Option<Periodic> {
        match self {
            SetExpr::Finite(xs) => xs
                .iter()
                .map(Element::nat)
                .collect::<Option<Vec<_>>>()
                .map(Periodic::finite),
            SetExpr::Periodic(p) => Some(p.clone()),
            SetExpr::Sparse(g) => g.as_periodic(),
            SetExpr::Union(ps) => ps
                .iter()
                .try_fold(Periodic::empty(), |acc, p| Some(acc.union(&p.exact()?))),
            SetExpr::Intersection(ps) => ps
                .iter()
                .try_fold(Periodic::full(), |acc, p| Some(acc.intersection(&p.exact()?))),
            SetExpr::Complement(s) => s.exact().map(|p| p.complement()),
            SetExpr::All => Some(Periodic::full()),
            _ => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.exact().is_some()
    }

    /// Lifts an exact-tier set back to its preferred expression: `Finite`
    /// when finite, `Periodic` otherwise.
    pub fn from_periodic(p: Periodic) -> SetExpr {
        if p.is_finite() {
            SetExpr::nats(p.prelude().iter().copied())
        } else {
            SetExpr::Periodic(p)
        }
    }

    /// Set-theoretic combination. Exact-tier inputs stay in the exact tier.
    pub fn combine(&self, other: &SetExpr, op: SetOp) -> Result<SetExpr> {
        let (a, b) = (self.shape(), other.shape());
        if a != b && a != Shape::Any && b != Shape::Any {
            return Err(Error::GroundMismatch {
                left: format!("{a:?}"),
                right: format!("{b:?}"),
            });
        }
        // finite sets merge directly; tabulating them as periodic sets costs their largest element
        if let (SetExpr::Finite(x), SetExpr::Finite(y)) = (self, other) {
            let r: BTreeSet<Element> = match op {
                SetOp::Union => x.union(y).cloned().collect(),
                SetOp::Intersection => x.intersection(y).cloned().collect(),
                SetOp::Difference => x.difference(y).cloned().collect(),
            };
            return Ok(SetExpr::Finite(r));
        }
        if let (Some(p), Some(q)) = (self.exact(), other.exact()) {
            let r = match op {
                SetOp::Union => p.union(&q),
                SetOp::Intersection => p.intersection(&q),
                SetOp::Difference => p.difference(&q),
            };
            return Ok(SetExpr::from_periodic(r));
        }
        Ok(match op {
            SetOp::Union => SetExpr::Union(vec![self.clone(), other.clone()]),
            SetOp::Intersection => SetExpr::Intersection(vec![self.clone(), other.clone()]),
            SetOp::Difference => SetExpr::Intersection(vec![
                self.clone(),
                SetExpr::complement(other.clone()),
            ]),
        })
    }

    /// `{x in S : code(x) <= horizon}` in code order.
    pub fn enumerate(&self, ground: &GroundSet, horizon: u64) -> Vec<Element> {
        if let (SetExpr::Finite(xs), _) = (self, ground) {
            let mut v: Vec<(u64, Element)> = xs
                .iter()
                .filter_map(|x| ground.encode(x).ok().map(|c| (c, x.clone())))
                .filter(|(c, _)| *c <= horizon)
                .collect();
            v.sort();
            return v.into_iter().map(|(_, x)| x).collect();
        }
        if let (SetExpr::Sparse(g), GroundSet::Naturals) = (self, ground) {
            return g.upto(horizon).into_iter().map(Element::Nat).collect();
        }
        ground
            .elements_upto(horizon)
            .filter(|x| self.has(x))
            .collect()
    }

    /// Natural-number shorthand for [`SetExpr::enumerate`].
    pub fn enumerate_nats(&self, horizon: u64) -> Vec<u64> {
        self.enumerate(&GroundSet::Naturals, horizon)
            .into_iter()
            .filter_map(|x| x.nat())
            .collect()
    }

    /// Decides (or semi-decides) whether the set is finite.
    pub fn finiteness(&self, ground: &GroundSet, horizon: u64) -> Verdict {
        if ground.is_finite() {
            return Verdict::True;
        }
        if matches!(ground, GroundSet::Naturals) {
            if let Some(p) = self.exact() {
                return periodic_finiteness(&p);
            }
        }
        match self {
            SetExpr::Finite(_) => Verdict::True,
            SetExpr::All => Verdict::note("the whole infinite ground"),
            SetExpr::Periodic(p) => periodic_finiteness(p),
            SetExpr::Sparse(g) => Verdict::note(format!("strictly increasing generator {}", g.name)),
            SetExpr::Union(ps) => ps
                .iter()
                .map(|p| p.finiteness(ground, horizon))
                .fold(Verdict::True, Verdict::and),
            SetExpr::Intersection(ps) => intersection_finiteness(ps, ground, horizon),
            SetExpr::Complement(inner) => match (ground, inner.as_ref()) {
                (GroundSet::Naturals, SetExpr::Sparse(g)) if g.as_periodic().is_none() => {
                    match g.kind {
                        super::GenKind::Custom(_) => Verdict::Unknown(horizon),
                        _ => Verdict::note("complement of a superlinear generator has unbounded gaps"),
                    }
                }
                (_, SetExpr::Finite(_)) => Verdict::note("cofinite in an infinite ground"),
                _ => Verdict::Unknown(horizon),
            },
            SetExpr::Rectangle(cs) => {
                let GroundSet::TupleSpace(gs) = ground else {
                    return Verdict::Unknown(horizon);
                };
                let vs: Vec<Verdict> = cs
                    .iter()
                    .zip(gs)
                    .map(|(c, g)| c.finiteness(g, horizon))
                    .collect();
                let any_empty = cs.iter().any(|c| match c {
                    SetExpr::Finite(x) => x.is_empty(),
                    _ => c.exact().is_some_and(|p| p == Periodic::empty()),
                });
                if any_empty {
                    Verdict::True
                } else if vs.iter().all(Verdict::is_true) {
                    Verdict::True
                } else if let Some(f) = vs.iter().find(|v| v.is_false()) {
                    f.clone()
                } else {
                    Verdict::Unknown(horizon)
                }
            }
            SetExpr::Tagged(t, s) => match part_ground(ground, *t) {
                Some(g) => s.finiteness(&g, horizon),
                None => Verdict::True,
            },
            SetExpr::Oracle(_) => Verdict::Unknown(horizon),
        }
    }
}

/// Ground of part / spine `tag` inside a tagged or wedge ground.
pub fn part_ground(ground: &GroundSet, tag: u64) -> Option<GroundSet> {
    match ground {
        GroundSet::TaggedUnion(gs) => gs.get(tag as usize).cloned(),
        GroundSet::Wedge { spine, .. } => Some((**spine).clone()),
        _ => None,
    }
}

impl SetExpr {
    /// Whether `self ⊆ other`: exact on the exact tier and on explicitly
    /// finite sets, otherwise refuted by the first escaping point up to
    /// `horizon`.
    pub fn subset_verdict(&self, other: &SetExpr, ground: &GroundSet, horizon: u64) -> Verdict {
        if matches!(other, SetExpr::All) {
            return Verdict::True;
        }
        let on_nats = matches!(ground, GroundSet::Naturals | GroundSet::FinitePoints(_));
        if on_nats {
            if let (Some(p), Some(q)) = (self.exact(), other.exact()) {
                let d = p.difference(&q);
                return match d.next_at_or_after(0) {
                    None => Verdict::True,
                    Some(x) => Verdict::falsified(Witness::Point(Element::Nat(x))),
                };
            }
        }
        if let SetExpr::Finite(xs) = self {
            return match xs.iter().find(|x| !other.has(x)) {
                None => Verdict::True,
                Some(x) => Verdict::falsified(Witness::Point(x.clone())),
            };
        }
        match self.enumerate(ground, horizon).into_iter().find(|x| !other.has(x)) {
            Some(x) => Verdict::falsified(Witness::Point(x)),
            None if ground.size().is_some_and(|n| n <= horizon.saturating_add(1)) => Verdict::True,
            None => Verdict::Unknown(horizon),
        }
    }
}

fn periodic_finiteness(p: &Periodic) -> Verdict {
    if p.is_finite() {
        Verdict::True
    } else {
        let r = p.residues().iter().next().copied().unwrap_or(0);
        Verdict::note(format!(
            "residue {r} mod {} is unbounded from {}",
            p.period(),
            p.threshold()
        ))
    }
}

fn intersection_finiteness(ps: &[SetExpr], ground: &GroundSet, horizon: u64) -> Verdict {
    let verdicts: Vec<Verdict> = ps.iter().map(|p| p.finiteness(ground, horizon)).collect();
    if verdicts.iter().any(Verdict::is_true) {
        return Verdict::True;
    }
    if !matches!(ground, GroundSet::Naturals) {
        return Verdict::Unknown(horizon);
    }
    let mut exact = Periodic::full();
    let mut sparse: Vec<&Generator> = Vec::new();
    for p in ps {
        match (p.exact(), p) {
            (Some(e), _) => exact = exact.intersection(&e),
            (None, SetExpr::Sparse(g)) => sparse.push(g),
            _ => return Verdict::Unknown(horizon),
        }
    }
    if exact.is_finite() {
        return Verdict::True;
    }
    match sparse.as_slice() {
        [] => periodic_finiteness(&exact),
        [g] => match g.meets_infinitely(&exact) {
            Some(true) => Verdict::note(format!(
                "{} meets residue classes mod {} infinitely often",
                g.name,
                exact.period()
            )),
            Some(false) => Verdict::True,
            None => Verdict::Unknown(horizon),
        },
        gens => {
            for (i, a) in gens.iter().enumerate() {
                for b in &gens[i + 1..] {
                    if geometric_coincide_infinitely(a, b) == Some(false) {
                        return Verdict::True;
                    }
                }
            }
            Verdict::Unknown(horizon)
        }
    }
}

impl fmt::Display for SetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(f: &mut fmt::Formatter<'_>, head: &str, xs: &[SetExpr]) -> fmt::Result {
            write!(f, "({head}")?;
            for x in xs {
                write!(f, " {x}")?;
            }
            write!(f, ")")
        }
        match self {
            SetExpr::Finite(xs) => {
                write!(f, "(set")?;
                for x in xs {
                    write!(f, " {x}")?;
                }
                write!(f, ")")
            }
            SetExpr::Periodic(p) => {
                write!(f, "(periodic {} (", p.period())?;
                write_nums(f, p.residues())?;
                write!(f, ") {} (", p.threshold())?;
                write_nums(f, p.prelude())?;
                write!(f, "))")
            }
            SetExpr::Sparse(g) => write!(f, "(gen {})", g.name),
            SetExpr::Union(xs) => list(f, "union", xs),
            SetExpr::Intersection(xs) => list(f, "inter", xs),
            SetExpr::Complement(x) => write!(f, "(complement {x})"),
            SetExpr::Rectangle(xs) => list(f, "rect", xs),
            SetExpr::Tagged(t, x) => write!(f, "(tag {t} {x})"),
            SetExpr::All => write!(f, "(all)"),
            SetExpr::Oracle(p) => write!(f, "(oracle {})", p.name),
        }
    }
}

fn write_nums(f: &mut fmt::Formatter<'_>, xs: &BTreeSet<u64>) -> fmt::Result {
    let mut first = true;
    for x in xs {
        if !first {
            write!(f, " ")?;
        }
        first = false;
        write!(f, "{x}")?;
    }
    Ok(())
}
