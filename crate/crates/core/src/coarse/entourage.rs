//! Entourages: reflexive relations presented through their balls.
//!
//! Composition follows the pair convention `(x, y) ∈ E∘F` iff there is `z`
//! with `(x, z) ∈ E` and `(z, y) ∈ F`, so the ball identity is
//! `(E∘F)[x] = F[E[x]]`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use super::relation::Relation;
use crate::error::{Error, Result};
use crate::groundsets::{part_ground, Element, GroundSet, SetExpr, SetOp};

/// Balls with more points than this are kept as membership oracles.
pub const BALL_LIMIT: usize = 200_000;

type BallFn = Arc<dyn Fn(&Element) -> SetExpr + Send + Sync>;

/// An entourage given by a computable ball function.
#[derive(Clone)]
pub struct BallMap {
    pub name: String,
    pub forward: BallFn,
    /// Balls of the inverse relation, when computable.
    pub backward: Option<BallFn>,
}

impl fmt::Debug for BallMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BallMap({})", self.name)
    }
}

#[derive(Debug, Clone)]
pub enum EntKind {
    Diagonal,
    /// `|x - y| <= r` on the naturals.
    MetricRadius(u64),
    /// Explicit pairs, implicitly joined with the diagonal.
    FiniteRelation(BTreeSet<(Element, Element)>),
    BallMap(BallMap),
    /// Componentwise, on a tuple ground.
    Product(Vec<Entourage>),
    /// On a finitely supported ground: coordinates inside `member` move
    /// within `coord`, coordinates outside it stay fixed.
    Support {
        member: SetExpr,
        coord: Box<Entourage>,
    },
    /// `(B × B) ∪ Δ`.
    Block(SetExpr),
    /// Restriction of a `Support` entourage to a wedge carrier.
    Wedge {
        member: SetExpr,
        spine: Box<Entourage>,
    },
    /// `E ∩ (Y × Y)`, joined with the diagonal.
    Restrict(Box<Entourage>, SetExpr),
    Union(Vec<Entourage>),
    Compose(Box<Entourage>, Box<Entourage>),
    /// `G ∘ G ∘ … ∘ G` (`k` factors; `k = 0` is the diagonal).
    Power(Box<Entourage>, u32),
}

#[derive(Debug, Clone)]
pub struct Entourage {
    pub ground: GroundSet,
    pub kind: EntKind,
}

fn mismatch(a: &GroundSet, b: &GroundSet) -> Error {
    Error::GroundMismatch {
        left: a.to_string(),
        right: b.to_string(),
    }
}

/// Enumerates a set that is known to be finite, up to `BALL_LIMIT` points.
pub fn finite_elements(s: &SetExpr, ground: &GroundSet) -> Option<BTreeSet<Element>> {
    if let Some(n) = ground.size().filter(|&n| n as usize <= BALL_LIMIT) {
        return Some(ground.elements_upto(n).filter(|x| s.has(x)).collect());
    }
    let out = match s {
        SetExpr::Finite(xs) => xs.clone(),
        SetExpr::Rectangle(cs) => {
            let GroundSet::TupleSpace(gs) = ground else {
                return None;
            };
            let parts: Vec<BTreeSet<Element>> = cs
                .iter()
                .zip(gs)
                .map(|(c, g)| finite_elements(c, g))
                .collect::<Option<_>>()?;
            let total = parts.iter().try_fold(1usize, |a, p| a.checked_mul(p.len()))?;
            if total > BALL_LIMIT {
                return None;
            }
            let mut acc: Vec<Vec<Element>> = vec![Vec::new()];
            for p in &parts {
                acc = acc
                    .into_iter()
                    .flat_map(|prefix| {
                        p.iter().map(move |x| {
                            let mut v = prefix.clone();
                            v.push(x.clone());
                            v
                        })
                    })
                    .collect();
            }
            acc.into_iter().map(Element::Tuple).collect()
        }
        SetExpr::Tagged(t, inner) => {
            let g = part_ground(ground, *t)?;
            let basepoint = match ground {
                GroundSet::Wedge { basepoint, .. } => Some(basepoint),
                _ => None,
            };
            finite_elements(inner, &g)?
                .into_iter()
                .map(|x| match basepoint {
                    Some(b) if *b == x => Element::Base,
                    _ => Element::tagged(*t, x),
                })
                .collect()
        }
        SetExpr::Union(ps) => {
            let mut acc = BTreeSet::new();
            for p in ps {
                acc.extend(finite_elements(p, ground)?);
                if acc.len() > BALL_LIMIT {
                    return None;
                }
            }
            acc
        }
        SetExpr::Intersection(ps) => {
            let seed = ps.iter().find_map(|p| finite_elements(p, ground))?;
            seed.into_iter().filter(|x| ps.iter().all(|p| p.has(x))).collect()
        }
        _ => {
            let p = s.exact()?;
            if !p.is_finite() || !matches!(ground, GroundSet::Naturals | GroundSet::FinitePoints(_)) {
                return None;
            }
            p.prelude().iter().map(|&x| Element::Nat(x)).collect()
        }
    };
    (out.len() <= BALL_LIMIT).then_some(out)
}

impl Entourage {
    pub fn diagonal(ground: GroundSet) -> Self {
        Entourage { ground, kind: EntKind::Diagonal }
    }

    pub fn metric(r: u64) -> Self {
        Entourage {
            ground: GroundSet::Naturals,
            kind: EntKind::MetricRadius(r),
        }
    }

    pub fn finite(ground: GroundSet, pairs: impl IntoIterator<Item = (Element, Element)>) -> Self {
        Entourage {
            ground,
            kind: EntKind::FiniteRelation(pairs.into_iter().filter(|(x, y)| x != y).collect()),
        }
    }

    /// Relation on `FinitePoints(n)` from a bit-matrix relation.
    pub fn from_relation(r: &Relation) -> Self {
        let pairs = r
            .pairs()
            .map(|(x, y)| (Element::Nat(x as u64), Element::Nat(y as u64)));
        Self::finite(GroundSet::FinitePoints(r.points() as u64), pairs)
    }

    /// Bit-matrix form on a finite ground of at most eight points.
    pub fn to_relation(&self) -> Option<Relation> {
        let n = self.ground.size()? as usize;
        if n > super::relation::MAX_POINTS {
            return None;
        }
        let pts: Vec<Element> = self.ground.elements_upto(n as u64).collect();
        let mut r = Relation::empty(n);
        for (i, x) in pts.iter().enumerate() {
            for (j, y) in pts.iter().enumerate() {
                if self.relates(x, y) {
                    r.insert(i, j);
                }
            }
        }
        Some(r)
    }

    pub fn ball_map(
        ground: GroundSet,
        name: impl Into<String>,
        forward: impl Fn(&Element) -> SetExpr + Send + Sync + 'static,
        backward: Option<BallFn>,
    ) -> Self {
        Entourage {
            ground,
            kind: EntKind::BallMap(BallMap {
                name: name.into(),
                forward: Arc::new(forward),
                backward,
            }),
        }
    }

    /// `{(n, n+1)}` on the naturals.
    pub fn successor() -> Self {
        let back: BallFn = Arc::new(|x: &Element| match x.nat() {
            Some(n) if n > 0 => SetExpr::nats([n - 1]),
            _ => SetExpr::empty(),
        });
        Self::ball_map(
            GroundSet::Naturals,
            "successor",
            |x| match x.nat() {
                Some(n) => SetExpr::nats([n + 1]),
                None => SetExpr::empty(),
            },
            Some(back),
        )
    }

    pub fn block(ground: GroundSet, member: SetExpr) -> Self {
        Entourage {
            ground,
            kind: EntKind::Block(member),
        }
    }

    pub fn product(components: Vec<Entourage>) -> Self {
        let ground = GroundSet::TupleSpace(components.iter().map(|e| e.ground.clone()).collect());
        Entourage {
            ground,
            kind: EntKind::Product(components),
        }
    }

    pub fn restrict(self, carrier: SetExpr) -> Self {
        if matches!(carrier, SetExpr::All) {
            return self;
        }
        Entourage {
            ground: self.ground.clone(),
            kind: EntKind::Restrict(Box::new(self), carrier),
        }
    }

    pub fn union(ground: GroundSet, parts: Vec<Entourage>) -> Self {
        Entourage {
            ground,
            kind: EntKind::Union(parts),
        }
    }

    pub fn power(self, k: u32) -> Self {
        Entourage {
            ground: self.ground.clone(),
            kind: EntKind::Power(Box::new(self), k),
        }
    }

    fn wedge_basepoint(&self) -> Option<&Element> {
        match &self.ground {
            GroundSet::Wedge { basepoint, .. } => Some(basepoint),
            _ => None,
        }
    }

    fn finsupp_basepoint(&self) -> Option<&Element> {
        match &self.ground {
            GroundSet::FinSupp { basepoint, .. } => Some(basepoint),
            _ => None,
        }
    }

    /// Whether `(x, y)` belongs to the entourage.
    pub fn relates(&self, x: &Element, y: &Element) -> bool {
        if x == y {
            return true;
        }
        match &self.kind {
            EntKind::Diagonal => false,
            EntKind::MetricRadius(r) => match (x.nat(), y.nat()) {
                (Some(a), Some(b)) => a.abs_diff(b) <= *r,
                _ => false,
            },
            EntKind::FiniteRelation(pairs) => pairs.contains(&(x.clone(), y.clone())),
            EntKind::BallMap(m) => (m.forward)(x).has(y),
            EntKind::Product(es) => match (x, y) {
                (Element::Tuple(xs), Element::Tuple(ys)) if xs.len() == es.len() && ys.len() == es.len() => {
                    es.iter().zip(xs.iter().zip(ys)).all(|(e, (a, b))| e.relates(a, b))
                }
                _ => false,
            },
            EntKind::Support { member, coord } => {
                let Some(bp) = self.finsupp_basepoint() else {
                    return false;
                };
                let mut support: BTreeSet<u64> = x.support().into_iter().collect();
                support.extend(y.support());
                support.into_iter().all(|alpha| {
                    let a = x.coordinate(alpha).unwrap_or(bp);
                    let b = y.coordinate(alpha).unwrap_or(bp);
                    if member.has(&Element::Nat(alpha)) {
                        coord.relates(a, b)
                    } else {
                        a == b
                    }
                })
            }
            EntKind::Block(b) => b.has(x) && b.has(y),
            EntKind::Wedge { member, spine } => {
                let Some(e) = self.wedge_basepoint() else {
                    return false;
                };
                let inside = |a: u64| member.has(&Element::Nat(a));
                match (x, y) {
                    (Element::Base, Element::Tagged(b, t)) => inside(*b) && spine.relates(e, t),
                    (Element::Tagged(a, s), Element::Base) => inside(*a) && spine.relates(s, e),
                    (Element::Tagged(a, s), Element::Tagged(b, t)) if a == b => {
                        inside(*a) && spine.relates(s, t)
                    }
                    (Element::Tagged(a, s), Element::Tagged(b, t)) => {
                        inside(*a) && inside(*b) && spine.relates(s, e) && spine.relates(e, t)
                    }
                    _ => false,
                }
            }
            EntKind::Restrict(e, carrier) => carrier.has(x) && carrier.has(y) && e.relates(x, y),
            EntKind::Union(es) => es.iter().any(|e| e.relates(x, y)),
            EntKind::Compose(e, f) => match e.ball_elements(x) {
                Some(mid) => mid.iter().any(|z| f.relates(z, y)),
                None => f
                    .invert()
                    .ok()
                    .and_then(|fi| fi.ball_elements(y))
                    .is_some_and(|mid| mid.iter().any(|z| e.relates(x, z))),
            },
            EntKind::Power(g, k) => self
                .power_ball(g, *k, x)
                .is_some_and(|ball| ball.contains(y)),
        }
    }

    fn power_ball(&self, g: &Entourage, k: u32, x: &Element) -> Option<BTreeSet<Element>> {
        let mut seen: BTreeSet<Element> = [x.clone()].into_iter().collect();
        let mut frontier: VecDeque<Element> = [x.clone()].into_iter().collect();
        for _ in 0..k {
            let mut next = VecDeque::new();
            while let Some(z) = frontier.pop_front() {
                for w in g.ball_elements(&z)? {
                    if seen.insert(w.clone()) {
                        next.push_back(w);
                    }
                }
                if seen.len() > BALL_LIMIT {
                    return None;
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        Some(seen)
    }

    fn oracle_ball(&self, x: &Element) -> SetExpr {
        let me = self.clone();
        let center = x.clone();
        SetExpr::oracle(format!("ball at {x}"), move |y| me.relates(&center, y))
    }

    /// The ball `E[x]`.
    pub fn ball(&self, x: &Element) -> SetExpr {
        match &self.kind {
            EntKind::Diagonal => SetExpr::points([x.clone()]),
            EntKind::MetricRadius(r) => match x.nat() {
                Some(n) => SetExpr::interval(n.saturating_sub(*r), n.saturating_add(*r)),
                None => SetExpr::points([x.clone()]),
            },
            EntKind::FiniteRelation(pairs) => SetExpr::points(
                std::iter::once(x.clone())
                    .chain(pairs.iter().filter(|(a, _)| a == x).map(|(_, b)| b.clone())),
            ),
            EntKind::BallMap(m) => SetExpr::points([x.clone()])
                .combine(&(m.forward)(x), SetOp::Union)
                .unwrap_or_else(|_| self.oracle_ball(x)),
            EntKind::Product(es) => match x {
                Element::Tuple(xs) if xs.len() == es.len() => {
                    SetExpr::Rectangle(es.iter().zip(xs).map(|(e, xi)| e.ball(xi)).collect())
                }
                _ => SetExpr::points([x.clone()]),
            },
            EntKind::Block(b) => {
                if b.has(x) {
                    b.clone()
                } else {
                    SetExpr::points([x.clone()])
                }
            }
            EntKind::Restrict(e, carrier) => {
                if carrier.has(x) {
                    match e.ball(x).combine(carrier, SetOp::Intersection) {
                        Ok(SetExpr::Intersection(_)) | Err(_) => match e.ball_elements(x) {
                            Some(xs) => SetExpr::points(xs.into_iter().filter(|y| carrier.has(y))),
                            None => self.oracle_ball(x),
                        },
                        Ok(s) => s,
                    }
                } else {
                    SetExpr::points([x.clone()])
                }
            }
            EntKind::Union(es) => {
                let balls: Vec<SetExpr> = es.iter().map(|e| e.ball(x)).collect();
                balls
                    .iter()
                    .skip(1)
                    .try_fold(balls.first().cloned().unwrap_or_else(SetExpr::empty), |acc, b| {
                        acc.combine(b, SetOp::Union)
                    })
                    .unwrap_or_else(|_| self.oracle_ball(x))
            }
            EntKind::Support { .. }
            | EntKind::Wedge { .. }
            | EntKind::Compose(..)
            | EntKind::Power(..) => match self.ball_elements(x) {
                Some(xs) => SetExpr::points(xs),
                None => self.oracle_ball(x),
            },
        }
    }

    /// The ball as an explicit finite set, when it is one.
    pub fn ball_elements(&self, x: &Element) -> Option<BTreeSet<Element>> {
        match &self.kind {
            EntKind::Support { member, coord } => self.support_ball(x, member, coord),
            EntKind::Wedge { member, spine } => self.wedge_ball(x, member, spine),
            EntKind::Compose(e, f) => {
                let mut out = BTreeSet::new();
                for z in e.ball_elements(x)? {
                    out.extend(f.ball_elements(&z)?);
                    if out.len() > BALL_LIMIT {
                        return None;
                    }
                }
                Some(out)
            }
            EntKind::Power(g, k) => self.power_ball(g, *k, x),
            _ => {
                let mut b = finite_elements(&self.ball(x), &self.ground)?;
                b.insert(x.clone());
                Some(b)
            }
        }
    }

    fn support_ball(&self, x: &Element, member: &SetExpr, coord: &Entourage) -> Option<BTreeSet<Element>> {
        let GroundSet::FinSupp { index, basepoint, .. } = &self.ground else {
            return None;
        };
        let alphas: Vec<u64> = finite_elements(member, index)?
            .into_iter()
            .filter_map(|a| a.nat())
            .collect();
        let mut choices: Vec<(u64, Vec<Element>)> = Vec::new();
        let mut total: usize = 1;
        for &a in &alphas {
            let here = x.coordinate(a).unwrap_or(basepoint);
            let opts: Vec<Element> = coord.ball_elements(here)?.into_iter().collect();
            total = total.checked_mul(opts.len())?;
            if total > BALL_LIMIT {
                return None;
            }
            choices.push((a, opts));
        }
        let fixed: Vec<(u64, Element)> = match x {
            Element::Sparse(c) => c.iter().filter(|(a, _)| !alphas.contains(a)).cloned().collect(),
            _ => Vec::new(),
        };
        let mut acc: Vec<Vec<(u64, Element)>> = vec![fixed];
        for (a, opts) in &choices {
            acc = acc
                .into_iter()
                .flat_map(|prefix| {
                    opts.iter().map(move |v| {
                        let mut c = prefix.clone();
                        if v != basepoint {
                            c.push((*a, v.clone()));
                        }
                        c
                    })
                })
                .collect();
        }
        Some(
            acc.into_iter()
                .map(|mut c| {
                    c.sort_by_key(|(a, _)| *a);
                    Element::Sparse(c)
                })
                .collect(),
        )
    }

    fn wedge_ball(&self, x: &Element, member: &SetExpr, spine: &Entourage) -> Option<BTreeSet<Element>> {
        let GroundSet::Wedge { index, basepoint: e, .. } = &self.ground else {
            return None;
        };
        let inside = |a: u64| member.has(&Element::Nat(a));
        let lift = |a: u64, s: Element| if s == *e { Element::Base } else { Element::tagged(a, s) };
        let mut out = BTreeSet::new();
        out.insert(x.clone());
        let touches_base = match x {
            Element::Base => true,
            Element::Tagged(a, s) => {
                if !inside(*a) {
                    return Some(out);
                }
                for t in spine.ball_elements(s)? {
                    out.insert(lift(*a, t));
                }
                spine.relates(s, e)
            }
            _ => return None,
        };
        if touches_base {
            out.insert(Element::Base);
            let alphas = finite_elements(member, index)?;
            let around = spine.ball_elements(e)?;
            for a in alphas.into_iter().filter_map(|a| a.nat()) {
                for t in &around {
                    out.insert(lift(a, t.clone()));
                }
                if out.len() > BALL_LIMIT {
                    return None;
                }
            }
        }
        Some(out)
    }

    /// Structural symmetry (sufficient, not necessary).
    pub fn is_symmetric(&self) -> bool {
        match &self.kind {
            EntKind::Diagonal | EntKind::MetricRadius(_) | EntKind::Block(_) => true,
            EntKind::FiniteRelation(p) => p.iter().all(|(a, b)| p.contains(&(b.clone(), a.clone()))),
            EntKind::BallMap(_) => false,
            EntKind::Product(es) | EntKind::Union(es) => es.iter().all(Entourage::is_symmetric),
            EntKind::Support { coord, .. } => coord.is_symmetric(),
            EntKind::Wedge { spine, .. } => spine.is_symmetric(),
            EntKind::Restrict(e, _) | EntKind::Power(e, _) => e.is_symmetric(),
            EntKind::Compose(..) => false,
        }
    }

    /// `E⁻¹`.
    pub fn invert(&self) -> Result<Entourage> {
        let kind = match &self.kind {
            EntKind::Diagonal | EntKind::MetricRadius(_) | EntKind::Block(_) => self.kind.clone(),
            EntKind::FiniteRelation(p) => {
                EntKind::FiniteRelation(p.iter().map(|(a, b)| (b.clone(), a.clone())).collect())
            }
            EntKind::BallMap(m) => match &m.backward {
                Some(back) => EntKind::BallMap(BallMap {
                    name: format!("{}^-1", m.name),
                    forward: back.clone(),
                    backward: Some(m.forward.clone()),
                }),
                None => {
                    return Err(Error::Unsupported(format!(
                        "ball map {} has no computable inverse image",
                        m.name
                    )))
                }
            },
            EntKind::Product(es) => EntKind::Product(es.iter().map(|e| e.invert()).collect::<Result<_>>()?),
            EntKind::Union(es) => EntKind::Union(es.iter().map(|e| e.invert()).collect::<Result<_>>()?),
            EntKind::Support { member, coord } => EntKind::Support {
                member: member.clone(),
                coord: Box::new(coord.invert()?),
            },
            EntKind::Wedge { member, spine } => EntKind::Wedge {
                member: member.clone(),
                spine: Box::new(spine.invert()?),
            },
            EntKind::Restrict(e, c) => EntKind::Restrict(Box::new(e.invert()?), c.clone()),
            EntKind::Compose(e, f) => EntKind::Compose(Box::new(f.invert()?), Box::new(e.invert()?)),
            EntKind::Power(g, k) => EntKind::Power(Box::new(g.invert()?), *k),
        };
        Ok(Entourage {
            ground: self.ground.clone(),
            kind,
        })
    }

    /// `E ∘ F`.
    pub fn compose(&self, other: &Entourage) -> Result<Entourage> {
        if self.ground != other.ground {
            return Err(mismatch(&self.ground, &other.ground));
        }
        let kind = match (&self.kind, &other.kind) {
            (EntKind::Diagonal, _) => other.kind.clone(),
            (_, EntKind::Diagonal) => self.kind.clone(),
            (EntKind::MetricRadius(a), EntKind::MetricRadius(b)) => EntKind::MetricRadius(a + b),
            (EntKind::FiniteRelation(p), EntKind::FiniteRelation(q)) => {
                let mut out: BTreeSet<(Element, Element)> = p.union(q).cloned().collect();
                for (x, z) in p {
                    for (z2, y) in q {
                        if z == z2 && x != y {
                            out.insert((x.clone(), y.clone()));
                        }
                    }
                }
                EntKind::FiniteRelation(out)
            }
            _ => EntKind::Compose(Box::new(self.clone()), Box::new(other.clone())),
        };
        Ok(Entourage {
            ground: self.ground.clone(),
            kind,
        })
    }

    /// `E[S] = ⋃_{s ∈ S} E[s]`.
    pub fn apply(&self, s: &SetExpr) -> Result<SetExpr> {
        if matches!(s, SetExpr::All) {
            return Ok(SetExpr::All);
        }
        if let (EntKind::MetricRadius(r), Some(p)) = (&self.kind, s.exact()) {
            return Ok(SetExpr::from_periodic(p.thicken(*r)));
        }
        if let Some(points) = finite_elements(s, &self.ground) {
            let mut acc = SetExpr::empty();
            for x in points {
                acc = acc.combine(&self.ball(&x), SetOp::Union)?;
            }
            return Ok(acc);
        }
        let inverse = self.invert()?;
        let target = s.clone();
        Ok(SetExpr::oracle(format!("E[{s}]"), move |y| match inverse.ball_elements(y) {
            Some(pre) => pre.iter().any(|z| target.has(z)),
            None => false,
        }))
    }

    /// First point (in code order, up to `horizon`) where the two balls differ.
    pub fn first_ball_difference(&self, other: &Entourage, horizon: u64) -> Option<Element> {
        let probe = horizon.min(64);
        self.ground.elements_upto(horizon).find(|x| {
            match (self.ball_elements(x), other.ball_elements(x)) {
                (Some(a), Some(b)) => a != b,
                _ => self
                    .ground
                    .elements_upto(probe)
                    .any(|y| self.relates(x, &y) != other.relates(x, &y)),
            }
        })
    }
}

impl fmt::Display for Entourage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            EntKind::Diagonal => write!(f, "(diagonal)"),
            EntKind::MetricRadius(r) => write!(f, "(radius {r})"),
            EntKind::FiniteRelation(p) => {
                write!(f, "(pairs")?;
                for (a, b) in p {
                    write!(f, " ({a} {b})")?;
                }
                write!(f, ")")
            }
            EntKind::BallMap(m) => write!(f, "(ballmap {})", m.name),
            EntKind::Product(es) => {
                write!(f, "(product-ent")?;
                for e in es {
                    write!(f, " {e}")?;
                }
                write!(f, ")")
            }
            EntKind::Support { member, coord } => write!(f, "(support {member} {coord})"),
            EntKind::Block(b) => write!(f, "(block {b})"),
            EntKind::Wedge { member, spine } => write!(f, "(wedge-ent {member} {spine})"),
            EntKind::Restrict(e, c) => write!(f, "(restrict {e} {c})"),
            EntKind::Union(es) => {
                write!(f, "(union-ent")?;
                for e in es {
                    write!(f, " {e}")?;
                }
                write!(f, ")")
            }
            EntKind::Compose(a, b) => write!(f, "(compose {a} {b})"),
            EntKind::Power(g, k) => write!(f, "(power {g} {k})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groundsets::Periodic;

    fn n(x: u64) -> Element {
        Element::Nat(x)
    }

    #[test]
    fn metric_radii_add_under_composition() {
        let e = Entourage::metric(2).compose(&Entourage::metric(3)).unwrap();
        // oracle: pair composition on {0..50}
        for x in 0..=50u64 {
            for y in 0..=50u64 {
                let brute = (0..=50u64).any(|z| x.abs_diff(z) <= 2 && z.abs_diff(y) <= 3);
                assert_eq!(e.relates(&n(x), &n(y)), brute, "({x},{y})");
            }
        }
    }

    #[test]
    fn diagonal_is_identity() {
        let e = Entourage::successor();
        let d = Entourage::diagonal(GroundSet::Naturals);
        let c = e.compose(&d).unwrap();
        assert_eq!(c.first_ball_difference(&e, 200), None);
    }

    #[test]
    fn swap_squared_on_three_points() {
        let g = GroundSet::FinitePoints(3);
        let swap = Entourage::finite(g, [(n(0), n(1)), (n(1), n(0))]);
        let sq = swap.compose(&swap).unwrap();
        let want = Relation::from_pairs(3, [(0, 1), (1, 0)]).union(&Relation::diagonal(3));
        assert_eq!(sq.to_relation(), Some(want));
    }

    #[test]
    fn general_composition_matches_pair_convention() {
        let g = GroundSet::FinitePoints(4);
        let e = Entourage::finite(g.clone(), [(n(0), n(1))]);
        let f = Entourage::block(g, SetExpr::nats([1, 2]));
        let c = Entourage {
            ground: e.ground.clone(),
            kind: EntKind::Compose(Box::new(e.clone()), Box::new(f.clone())),
        };
        let want = e.to_relation().unwrap().compose(&f.to_relation().unwrap());
        assert_eq!(c.to_relation(), Some(want));
    }

    #[test]
    fn inverse_of_successor() {
        let s = Entourage::successor();
        let inv = s.invert().unwrap();
        assert!(inv.relates(&n(5), &n(4)));
        assert!(!inv.relates(&n(4), &n(5)));
        let bare = Entourage::ball_map(GroundSet::Naturals, "double", |x| SetExpr::nats(x.nat().map(|v| 2 * v)), None);
        assert!(matches!(bare.invert(), Err(Error::Unsupported(_))));
    }

    #[test]
    fn apply_metric() {
        let e = Entourage::metric(3);
        assert_eq!(e.apply(&SetExpr::nats([5])).unwrap().exact(), Some(Periodic::interval(2, 8)));
        let evens = SetExpr::progression(2, 0);
        assert_eq!(Entourage::metric(1).apply(&evens).unwrap().exact(), Some(Periodic::full()));
        assert!(matches!(e.apply(&SetExpr::All).unwrap(), SetExpr::All));
    }

    #[test]
    fn powers_of_successor_are_metric_balls() {
        let g = Entourage::union(
            GroundSet::Naturals,
            vec![Entourage::successor(), Entourage::successor().invert().unwrap()],
        );
        let p = g.power(4);
        assert_eq!(p.first_ball_difference(&Entourage::metric(4), 60), None);
    }

    #[test]
    fn restriction_to_evens() {
        let r = Entourage::metric(3).restrict(SetExpr::progression(2, 0));
        let ball = r.ball(&n(6));
        assert_eq!(finite_elements(&ball, &GroundSet::Naturals).unwrap(), [4, 6, 8].map(n).into());
    }
}
