//! Coarse structures presented by a base of entourages.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use super::entourage::{finite_elements, EntKind, Entourage};
use super::relation::{down_closure, Family, Relation};
use crate::bornology::{BornKind, Bornology};
use crate::error::{Error, Result};
use crate::groundsets::{Element, GenKind, GroundSet, SetExpr, SetOp, Verdict, Witness};

type ChainFn = Arc<dyn Fn(u64) -> Entourage + Send + Sync>;

/// A base `E_0 ⊆ E_1 ⊆ …` or no computable base at all.
#[derive(Clone)]
pub enum Base {
    /// `cofinal` is false when the chain is only a sub-family of the
    /// structure (then it can refute but not certify).
    Chain { entourage: ChainFn, cofinal: bool },
    Opaque,
}

/// How a presentation was built; consumed by the structural decision rules.
#[derive(Clone)]
pub enum Origin {
    MetricNat,
    Generated,
    Explicit,
    Down(Bornology),
    /// `⇑B`, with the registered entourages that make up its documented
    /// cofinal family.
    Up(Bornology, Vec<Entourage>),
    Abstract(Bornology),
    Product(Vec<CoarsePresentation>),
    BProduct {
        index: Bornology,
        factor: Box<CoarsePresentation>,
    },
    Bouquet {
        index: Bornology,
        spine: Box<CoarsePresentation>,
    },
    Comb {
        handle: Box<CoarsePresentation>,
        teeth: SetExpr,
        spine: Box<CoarsePresentation>,
    },
    Subballean(Box<CoarsePresentation>, SetExpr),
}

impl Origin {
    pub fn label(&self) -> &'static str {
        match self {
            Origin::MetricNat => "metric-nat",
            Origin::Generated => "generated",
            Origin::Explicit => "explicit",
            Origin::Down(_) => "down",
            Origin::Up(..) => "up",
            Origin::Abstract(_) => "abstract",
            Origin::Product(_) => "product",
            Origin::BProduct { .. } => "b-product",
            Origin::Bouquet { .. } => "bouquet",
            Origin::Comb { .. } => "comb",
            Origin::Subballean(..) => "subballean",
        }
    }
}

#[derive(Clone)]
pub struct CoarsePresentation {
    pub ground: GroundSet,
    /// Points of the ground that belong to the space.
    pub carrier: SetExpr,
    pub base: Base,
    pub origin: Origin,
}

impl fmt::Debug for CoarsePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoarsePresentation({} over {})", self.origin.label(), self.ground)
    }
}

/// A presentation with a distinguished point.
#[derive(Debug, Clone)]
pub struct PointedBallean {
    pub space: CoarsePresentation,
    pub basepoint: Element,
}

impl PointedBallean {
    pub fn new(space: CoarsePresentation, basepoint: Element) -> Result<Self> {
        if !space.ground.has(&basepoint) || !space.carrier.has(&basepoint) {
            return Err(Error::Encoding(format!("basepoint {basepoint} is not a point of the space")));
        }
        Ok(PointedBallean { space, basepoint })
    }
}

impl CoarsePresentation {
    pub fn chain(
        ground: GroundSet,
        origin: Origin,
        cofinal: bool,
        entourage: impl Fn(u64) -> Entourage + Send + Sync + 'static,
    ) -> Self {
        CoarsePresentation {
            ground,
            carrier: SetExpr::All,
            base: Base::Chain {
                entourage: Arc::new(entourage),
                cofinal,
            },
            origin,
        }
    }

    /// `(ℕ, |x - y|)` with base `E_n = {|x - y| <= n}`.
    pub fn metric_nat() -> Self {
        Self::chain(GroundSet::Naturals, Origin::MetricNat, true, Entourage::metric)
    }

    /// The structure on `FinitePoints(n)` given by an explicit family; the
    /// largest member is its base.
    pub fn explicit(n: usize, family: &Family) -> Self {
        let top = family.iter().fold(Relation::diagonal(n), |a, b| a.union(b));
        let e = Entourage::from_relation(&top);
        Self::chain(GroundSet::FinitePoints(n as u64), Origin::Explicit, true, move |_| e.clone())
    }

    pub fn entourage(&self, i: u64) -> Option<Entourage> {
        match &self.base {
            Base::Chain { entourage, .. } => Some(entourage(i)),
            Base::Opaque => None,
        }
    }

    /// The base is a cofinal countable chain.
    pub fn is_chain_indexable(&self) -> bool {
        matches!(self.base, Base::Chain { cofinal: true, .. })
    }

    pub fn ball(&self, i: u64, x: &Element) -> Option<SetExpr> {
        self.entourage(i).map(|e| e.ball(x))
    }

    /// Carrier points with code at most `horizon`.
    pub fn points_upto(&self, horizon: u64) -> impl Iterator<Item = Element> + '_ {
        self.ground
            .elements_upto(horizon)
            .filter(|x| self.carrier.has(x))
    }

    /// The largest base entourage on a finite ground (the chain is eventually
    /// constant there).
    fn finite_top(&self) -> Option<Relation> {
        let n = self.ground.size()?;
        self.entourage(n * n + 1)?.to_relation()
    }
}

/// `(E ∩ (Y × Y))`-base of the subballean on `Y`.
pub fn restrict_to(x: &CoarsePresentation, y: &SetExpr) -> CoarsePresentation {
    let carrier = match &x.carrier {
        SetExpr::All => y.clone(),
        c => c.combine(y, SetOp::Intersection).unwrap_or_else(|_| SetExpr::Intersection(vec![c.clone(), y.clone()])),
    };
    let base = match &x.base {
        Base::Chain { entourage, cofinal } => {
            let (f, y) = (entourage.clone(), y.clone());
            Base::Chain {
                entourage: Arc::new(move |i| f(i).restrict(y.clone())),
                cofinal: *cofinal,
            }
        }
        Base::Opaque => Base::Opaque,
    };
    CoarsePresentation {
        ground: x.ground.clone(),
        carrier,
        base,
        origin: Origin::Subballean(Box::new(x.clone()), y.clone()),
    }
}

/// Coarse structure generated by finite-relation and metric fragments.
///
/// `E_n = (G ∪ G⁻¹ ∪ Δ ∪ C_n)^{∘n}` where `C_n` links the point of code 0
/// with every point `m <= n` that no generator relates to an earlier point.
/// Those connecting pairs make the result connected.
pub fn generate(generators: &[Entourage], ground: GroundSet) -> Result<CoarsePresentation> {
    build_generated(generators, ground, true)
}

/// [`generate`] without connecting pairs.
pub fn generate_closure(generators: &[Entourage], ground: GroundSet) -> Result<CoarsePresentation> {
    build_generated(generators, ground, false)
}

fn build_generated(generators: &[Entourage], ground: GroundSet, connect: bool) -> Result<CoarsePresentation> {
    let mut sym = Vec::new();
    for g in generators {
        if g.ground != ground {
            return Err(Error::GroundMismatch {
                left: g.ground.to_string(),
                right: ground.to_string(),
            });
        }
        match g.kind {
            EntKind::FiniteRelation(_) | EntKind::MetricRadius(_) | EntKind::BallMap(_) | EntKind::Diagonal => {}
            _ => return Err(Error::Unsupported(format!("generator {g} is not a relation fragment"))),
        }
        sym.push(g.clone());
        sym.push(g.invert()?);
    }
    let g = ground.clone();
    let fragments = Entourage::union(ground.clone(), sym);
    let origin = if connect { Origin::Generated } else { Origin::Explicit };
    Ok(CoarsePresentation::chain(ground, origin, true, move |n| {
        let mut parts = vec![fragments.clone()];
        if connect {
            let pts: Vec<Element> = g.elements_upto(n).collect();
            let mut pairs = Vec::new();
            for (m, p) in pts.iter().enumerate().skip(1) {
                let linked = pts[..m].iter().any(|q| fragments.relates(p, q) || fragments.relates(q, p));
                if !linked {
                    pairs.push((pts[0].clone(), p.clone()));
                    pairs.push((p.clone(), pts[0].clone()));
                }
            }
            if !pairs.is_empty() {
                parts.push(Entourage::finite(g.clone(), pairs));
            }
        }
        let step = Entourage::union(g.clone(), parts);
        let k = match g.size() {
            Some(s) => n.min(s * s) as u32,
            None => n.min(u32::MAX as u64) as u32,
        };
        step.power(k)
    }))
}

/// The family generated on a finite ground: the down-set of the largest
/// base entourage.
pub fn generated_family(x: &CoarsePresentation) -> Option<Family> {
    x.finite_top().map(|t| down_closure(&t))
}

fn structurally_connected(x: &CoarsePresentation) -> bool {
    match &x.origin {
        Origin::MetricNat | Origin::Generated | Origin::Down(_) | Origin::Up(..) | Origin::Abstract(_) => true,
        Origin::Product(fs) => fs.iter().all(structurally_connected),
        Origin::BProduct { factor, .. } => structurally_connected(factor),
        Origin::Bouquet { spine, .. } => structurally_connected(spine),
        Origin::Comb { handle, spine, .. } => structurally_connected(handle) && structurally_connected(spine),
        Origin::Subballean(p, _) => structurally_connected(p),
        Origin::Explicit => false,
    }
}

/// Whether every two points lie in a common ball.
pub fn is_connected(x: &CoarsePresentation, horizon: u64) -> Verdict {
    if let Some(top) = x.finite_top() {
        let pts: Vec<Element> = x.ground.elements_upto(top.points() as u64).collect();
        for (i, a) in pts.iter().enumerate() {
            if !x.carrier.has(a) {
                continue;
            }
            for (j, b) in pts.iter().enumerate() {
                if x.carrier.has(b) && !top.contains(i, j) {
                    return Verdict::falsified(Witness::Pair(a.clone(), b.clone()));
                }
            }
        }
        return Verdict::True;
    }
    if structurally_connected(x) {
        Verdict::True
    } else {
        Verdict::Unknown(horizon)
    }
}

/// Whether `s` lies in a single ball.
pub fn is_bounded(x: &CoarsePresentation, s: &SetExpr, horizon: u64) -> Verdict {
    if let Some(top) = x.finite_top() {
        let pts: Vec<Element> = x.ground.elements_upto(top.points() as u64).collect();
        let members: Vec<usize> = (0..pts.len()).filter(|&j| s.has(&pts[j])).collect();
        let found = (0..pts.len()).any(|i| members.iter().all(|&j| top.contains(i, j)));
        return if found {
            Verdict::True
        } else {
            Verdict::note("no ball of the largest entourage contains the set")
        };
    }
    match &x.origin {
        Origin::MetricNat | Origin::Generated => s.finiteness(&x.ground, horizon),
        Origin::Down(b) | Origin::Up(b, _) | Origin::Abstract(b) => b.member(s, horizon),
        Origin::Subballean(p, y) => {
            let inside = s.combine(y, SetOp::Intersection).unwrap_or_else(|_| s.clone());
            is_bounded(p, &inside, horizon)
        }
        Origin::Product(fs) => match s {
            SetExpr::Rectangle(cs) if cs.len() == fs.len() => {
                if cs.iter().any(|c| c.exact().is_some_and(|p| p.next_at_or_after(0).is_none())) {
                    return Verdict::True;
                }
                fs.iter()
                    .zip(cs)
                    .map(|(f, c)| is_bounded(f, c, horizon))
                    .fold(Verdict::True, Verdict::and)
            }
            _ => finite_or_unknown(x, s, horizon),
        },
        Origin::BProduct { index, factor } | Origin::Bouquet { index, spine: factor } => match s {
            SetExpr::All => {
                let by_index = match index.is_unbounded(horizon) {
                    Verdict::True => Verdict::note(format!("the index bornology {index} is unbounded")),
                    v => v.negate(),
                };
                by_index.and(is_bounded(factor, &SetExpr::All, horizon))
            }
            SetExpr::Tagged(_, inner) if matches!(x.origin, Origin::Bouquet { .. }) => is_bounded(factor, inner, horizon),
            _ => finite_or_unknown(x, s, horizon),
        },
        _ => finite_or_unknown(x, s, horizon),
    }
}

fn finite_or_unknown(x: &CoarsePresentation, s: &SetExpr, horizon: u64) -> Verdict {
    match s.finiteness(&x.ground, horizon) {
        // a finite set of a connected space is bounded
        Verdict::True if structurally_connected(x) => Verdict::True,
        _ => Verdict::Unknown(horizon),
    }
}

/// The bornology of bounded sets.
pub fn bounded_sets(x: &CoarsePresentation) -> Bornology {
    if x.ground.is_finite() && is_connected(x, 0).is_true() {
        return Bornology::powerset(x.ground.clone());
    }
    match &x.origin {
        Origin::MetricNat | Origin::Generated => Bornology::finite_subsets(x.ground.clone()),
        Origin::Down(b) | Origin::Up(b, _) | Origin::Abstract(b) => b.clone(),
        Origin::Product(fs) if fs.len() == 1 => bounded_sets(&fs[0]),
        Origin::Product(fs) if fs.len() == 2 => Bornology::product(bounded_sets(&fs[0]), bounded_sets(&fs[1])),
        Origin::Subballean(p, y) => bounded_sets(p).induced(y.clone()),
        _ => {
            let me = x.clone();
            Bornology::oracle(x.ground.clone(), format!("bounded-in-{}", x.origin.label()), move |s, h| {
                is_bounded(&me, s, h)
            })
        }
    }
}

/// Whether `E_i[y] = X` for some base index `i`.
pub fn is_large(x: &CoarsePresentation, y: &SetExpr, horizon: u64) -> Verdict {
    if matches!(y, SetExpr::All) {
        return Verdict::True;
    }
    if let Some(top) = x.finite_top() {
        let pts: Vec<Element> = x.ground.elements_upto(top.points() as u64).collect();
        let ys: Vec<usize> = (0..pts.len()).filter(|&i| y.has(&pts[i])).collect();
        return match (0..pts.len()).find(|&j| !ys.iter().any(|&i| top.contains(i, j))) {
            None => Verdict::True,
            Some(j) => Verdict::falsified(Witness::Point(pts[j].clone())),
        };
    }
    match &x.origin {
        Origin::MetricNat => metric_large(y, horizon),
        Origin::Down(b) => {
            let rest = SetExpr::complement(y.clone());
            let nonempty = match y.exact() {
                Some(p) => Verdict::from_bool(p.next_at_or_after(0).is_some()),
                None => Verdict::from_bool(!y.enumerate(&x.ground, horizon).is_empty()).or(Verdict::Unknown(horizon)),
            };
            b.member(&rest, horizon).and(nonempty)
        }
        _ => Verdict::Unknown(horizon),
    }
}

fn metric_large(y: &SetExpr, horizon: u64) -> Verdict {
    if let Some(p) = y.exact() {
        if p.is_finite() {
            return match p.max() {
                None => Verdict::note("the empty set covers nothing"),
                Some(m) => Verdict::falsified(Witness::Note(format!(
                    "E_i[Y] misses {m} + i + 1 for every i"
                ))),
            };
        }
        // farthest point from Y, found within one period past the threshold
        let lim = p.threshold() + 2 * p.period();
        let radius = (0..=lim)
            .map(|x| {
                let up = p.next_at_or_after(x).map(|y| y - x);
                let down = p.prev_at_or_before(x).map(|y| x - y);
                up.into_iter().chain(down).min().unwrap_or(u64::MAX)
            })
            .max()
            .unwrap_or(0);
        debug_assert!(radius < u64::MAX);
        return Verdict::True;
    }
    if let SetExpr::Sparse(g) = y {
        let superlinear = match g.kind {
            GenKind::Geometric { .. } => true,
            GenKind::Polynomial { degree, .. } => degree >= 2,
            GenKind::Custom(_) => false,
        };
        if superlinear {
            let mids: Vec<String> = g
                .iter()
                .zip(g.iter().skip(1))
                .filter(|(a, b)| b - a >= 2)
                .take(4)
                .map(|(a, b)| (a + (b - a) / 2).to_string())
                .collect();
            return Verdict::falsified(Witness::Note(format!(
                "gaps of {} grow without bound; midpoints {} … escape every fixed radius",
                g.name,
                mids.join(", ")
            )));
        }
    }
    Verdict::Unknown(horizon)
}

/// Search cap for the target radius in [`is_coarse_map`].
pub const TARGET_RADIUS_CAP: u64 = 64;

/// Checks `f(E_i[x]) ⊆ E'_j[f(x)]` for `i <= 3`, searching `j` up to
/// [`TARGET_RADIUS_CAP`] at every point up to the horizon.
pub fn is_coarse_map(
    f: &dyn Fn(&Element) -> Element,
    x: &CoarsePresentation,
    target: &CoarsePresentation,
    horizon: u64,
) -> Verdict {
    if !x.is_chain_indexable() || !target.is_chain_indexable() {
        return Verdict::Unknown(horizon);
    }
    let sweep = horizon.min(512);
    let targets: Vec<Entourage> = (0..=TARGET_RADIUS_CAP).filter_map(|j| target.entourage(j)).collect();
    for i in 0..=3 {
        let Some(e) = x.entourage(i) else {
            return Verdict::Unknown(horizon);
        };
        for p in x.points_upto(sweep) {
            let Some(ball) = e.ball_elements(&p) else {
                return Verdict::Unknown(horizon);
            };
            let fp = f(&p);
            let images: Vec<Element> = ball.iter().filter(|q| x.carrier.has(q)).map(f).collect();
            if !targets.iter().any(|t| images.iter().all(|fq| t.relates(&fp, fq))) {
                let far = images
                    .iter()
                    .find(|fq| !targets.last().is_some_and(|t| t.relates(&fp, fq)))
                    .cloned()
                    .unwrap_or_else(|| fp.clone());
                return Verdict::falsified(Witness::Note(format!(
                    "the E_{i}-ball at {p} maps onto {far}, outside E'_{TARGET_RADIUS_CAP}[{fp}]"
                )));
            }
        }
    }
    Verdict::True
}

/// Bornologies are carried for `Down`/`Up`/`Abstract` origins.
pub fn origin_bornology(x: &CoarsePresentation) -> Option<&Bornology> {
    match &x.origin {
        Origin::Down(b) | Origin::Up(b, _) | Origin::Abstract(b) => Some(b),
        _ => None,
    }
}

/// Whether the bornology is `[ground]^{<ω}` by presentation; chains of
/// finite members are taken to exhaust the ground.
pub fn is_finite_subsets(b: &Bornology) -> bool {
    match &b.kind {
        BornKind::FiniteSubsets => true,
        BornKind::Chain { members_finite, .. } => *members_finite,
        _ => false,
    }
}

/// Ball of the `i`-th base entourage as an explicit finite set.
pub fn ball_points(x: &CoarsePresentation, i: u64, p: &Element) -> Option<BTreeSet<Element>> {
    let e = x.entourage(i)?;
    let b = e.ball_elements(p).or_else(|| finite_elements(&e.ball(p), &x.ground))?;
    Some(b.into_iter().filter(|q| x.carrier.has(q)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coarse::relation::brute_force_closure;
    use crate::DEFAULT_HORIZON as H;

    fn n(x: u64) -> Element {
        Element::Nat(x)
    }

    #[test]
    fn successor_generates_the_metric() {
        let x = generate(&[Entourage::successor()], GroundSet::Naturals).unwrap();
        for i in [1, 3, 7] {
            let e = x.entourage(i).unwrap();
            assert_eq!(e.first_ball_difference(&Entourage::metric(i), 50), None, "index {i}");
        }
    }

    #[test]
    fn empty_generators_on_two_points_connect() {
        let x = generate(&[], GroundSet::FinitePoints(2)).unwrap();
        assert!(is_connected(&x, H).is_true());
        let fam = generated_family(&x).unwrap();
        assert!(fam.contains(&Relation::full(2)));
        let bare = generate_closure(&[], GroundSet::FinitePoints(2)).unwrap();
        assert_eq!(is_connected(&bare, H), Verdict::falsified(Witness::Pair(n(0), n(1))));
    }

    #[test]
    fn one_pair_on_three_points_matches_brute_force() {
        let g = GroundSet::FinitePoints(3);
        let e = Entourage::finite(g.clone(), [(n(0), n(1))]);
        let x = generate_closure(&[e], g).unwrap();
        let want = brute_force_closure(3, &[Relation::from_pairs(3, [(0, 1)])]);
        assert_eq!(generated_family(&x).unwrap(), want);
    }

    #[test]
    fn diagonal_structure_is_disconnected() {
        let fam: Family = [Relation::diagonal(2)].into_iter().collect();
        let x = CoarsePresentation::explicit(2, &fam);
        assert_eq!(is_connected(&x, H), Verdict::falsified(Witness::Pair(n(0), n(1))));
    }

    #[test]
    fn restriction_to_evens() {
        let x = restrict_to(&CoarsePresentation::metric_nat(), &SetExpr::progression(2, 0));
        assert_eq!(ball_points(&x, 3, &n(6)).unwrap(), [4, 6, 8].map(n).into());
        assert!(is_bounded(&x, &SetExpr::nats([2, 4]), H).is_true());
    }

    #[test]
    fn large_sets_of_the_line() {
        let x = CoarsePresentation::metric_nat();
        assert!(is_large(&x, &SetExpr::progression(2, 0), H).is_true());
        assert!(is_large(&x, &SetExpr::generator("pow2").unwrap(), H).is_false());
        assert!(is_large(&x, &SetExpr::All, H).is_true());
        assert!(is_large(&x, &SetExpr::nats([1, 2]), H).is_false());
    }

    #[test]
    fn coarse_maps_of_the_line() {
        let x = CoarsePresentation::metric_nat();
        let double = |p: &Element| n(2 * p.nat().unwrap());
        let square = |p: &Element| n(p.nat().unwrap().pow(2));
        assert!(is_coarse_map(&double, &x, &x, H).is_true());
        assert!(is_coarse_map(&|p: &Element| p.clone(), &x, &x, H).is_true());
        assert!(is_coarse_map(&square, &x, &x, H).is_false());
    }

    #[test]
    fn bounded_sets_of_the_line() {
        let x = CoarsePresentation::metric_nat();
        assert!(is_bounded(&x, &SetExpr::nats([1, 5, 9]), H).is_true());
        assert!(is_bounded(&x, &SetExpr::progression(2, 0), H).is_false());
        assert!(matches!(bounded_sets(&x).kind, BornKind::FiniteSubsets));
    }
}
