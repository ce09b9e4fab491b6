//! Builders: products, B-products, macrocubes, bouquets, combs, `⇓B`, `⇑B`.

use std::fmt;
use std::sync::Arc;

use crate::bornology::{BornKind, Bornology};
use crate::coarse::{
    bounded_sets, is_finite_subsets, restrict_to, Base, CoarsePresentation, EntKind, Entourage, Origin,
    PointedBallean, Relation,
};
use crate::error::{Error, Result};
use crate::groundsets::{Element, GroundSet, SetExpr, Verdict, Witness};

/// A pointed ballean used for every member of an indexed family.
#[derive(Debug, Clone, PartialEq)]
pub struct PointedFamily {
    pub member: BalleanExpr,
    pub basepoint: Element,
}

impl PointedFamily {
    /// Metric rays `ℕ` pointed at 0.
    pub fn rays() -> Self {
        PointedFamily {
            member: BalleanExpr::MetricNat,
            basepoint: Element::Nat(0),
        }
    }

    /// Doubletons `{0, 1}` pointed at 0.
    pub fn doubletons() -> Self {
        PointedFamily {
            member: BalleanExpr::Points(2),
            basepoint: Element::Nat(0),
        }
    }

    pub fn build(&self) -> Result<PointedBallean> {
        PointedBallean::new(self.member.build()?, self.basepoint.clone())
    }
}

impl fmt::Display for PointedFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == Self::rays() {
            write!(f, "(rays)")
        } else if *self == Self::doubletons() {
            write!(f, "(doubletons)")
        } else {
            write!(f, "(family {} {})", self.member, self.basepoint)
        }
    }
}

/// Construction tree.
#[derive(Debug, Clone)]
pub enum BalleanExpr {
    MetricNat,
    /// `n` points, all in one ball.
    Points(u64),
    /// `⇓B`.
    Discrete(Bornology),
    /// `⇑B`.
    Antidiscrete(Bornology),
    AbstractBallean(Bornology),
    Product(Vec<BalleanExpr>),
    BProduct(Bornology, Box<PointedFamily>),
    Macrocube(Bornology),
    Bouquet(Bornology, Box<PointedFamily>),
    Comb {
        handle: Box<BalleanExpr>,
        teeth: SetExpr,
        spines: Box<PointedFamily>,
    },
    Subballean(Box<BalleanExpr>, SetExpr),
}

impl PartialEq for BalleanExpr {
    fn eq(&self, other: &Self) -> bool {
        self.to_string() == other.to_string()
    }
}

impl fmt::Display for BalleanExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BalleanExpr::MetricNat => write!(f, "(metric-nat)"),
            BalleanExpr::Points(n) => write!(f, "(points {n})"),
            BalleanExpr::Discrete(b) => write!(f, "(down {b})"),
            BalleanExpr::Antidiscrete(b) => write!(f, "(up {b})"),
            BalleanExpr::AbstractBallean(b) => write!(f, "(abstract-ballean {b})"),
            BalleanExpr::Product(fs) => {
                write!(f, "(product")?;
                for x in fs {
                    write!(f, " {x}")?;
                }
                write!(f, ")")
            }
            BalleanExpr::BProduct(b, fam) => write!(f, "(b-product {b} {fam})"),
            BalleanExpr::Macrocube(b) => write!(f, "(macrocube {b})"),
            BalleanExpr::Bouquet(b, fam) => write!(f, "(bouquet {b} {fam})"),
            BalleanExpr::Comb { handle, teeth, spines } => write!(f, "(comb {handle} {teeth} {spines})"),
            BalleanExpr::Subballean(x, y) => write!(f, "(sub {x} {y})"),
        }
    }
}

impl BalleanExpr {
    /// The ground set the construction lives on.
    pub fn ground(&self) -> Result<GroundSet> {
        Ok(self.build()?.ground)
    }

    pub fn build(&self) -> Result<CoarsePresentation> {
        self.build_with(&[])
    }

    /// Builds the presentation; `witnesses` are registered with every `⇑B`
    /// node they belong to.
    pub fn build_with(&self, witnesses: &[Entourage]) -> Result<CoarsePresentation> {
        match self {
            BalleanExpr::MetricNat => Ok(CoarsePresentation::metric_nat()),
            BalleanExpr::Points(n) => points(*n),
            BalleanExpr::Discrete(b) => Ok(smallest_compatible(b)),
            BalleanExpr::Antidiscrete(b) => Ok(largest_compatible(b, witnesses)),
            BalleanExpr::AbstractBallean(b) => Ok(CoarsePresentation {
                ground: b.ground.clone(),
                carrier: SetExpr::All,
                base: Base::Opaque,
                origin: Origin::Abstract(b.clone()),
            }),
            BalleanExpr::Product(fs) => {
                let built = fs.iter().map(|x| x.build_with(witnesses)).collect::<Result<Vec<_>>>()?;
                product(built)
            }
            BalleanExpr::BProduct(b, fam) => b_product(b, &fam.build()?),
            BalleanExpr::Macrocube(b) => macrocube(b),
            BalleanExpr::Bouquet(b, fam) => Ok(bouquet(b, &fam.build()?)?.space),
            BalleanExpr::Comb { handle, teeth, spines } => comb(&handle.build_with(witnesses)?, teeth, &spines.build()?),
            BalleanExpr::Subballean(x, y) => Ok(restrict_to(&x.build_with(witnesses)?, y)),
        }
    }
}

/// `n` points forming a single ball.
pub fn points(n: u64) -> Result<CoarsePresentation> {
    if n == 0 || n > 8 {
        return Err(Error::Domain(format!("a bounded point ballean needs 1 to 8 points, got {n}")));
    }
    let fam = [Relation::full(n as usize)].into_iter().collect();
    Ok(CoarsePresentation::explicit(n as usize, &fam))
}

/// Cartesian product with componentwise base `(E_i, …, E_i)`.
pub fn product(factors: Vec<CoarsePresentation>) -> Result<CoarsePresentation> {
    if factors.is_empty() {
        return Err(Error::Precondition("a product needs at least one factor".into()));
    }
    let ground = GroundSet::TupleSpace(factors.iter().map(|f| f.ground.clone()).collect());
    let carrier = if factors.iter().all(|f| matches!(f.carrier, SetExpr::All)) {
        SetExpr::All
    } else {
        SetExpr::Rectangle(factors.iter().map(|f| f.carrier.clone()).collect())
    };
    let chains: Option<Vec<_>> = factors
        .iter()
        .map(|f| match &f.base {
            Base::Chain { entourage, cofinal } => Some((entourage.clone(), *cofinal)),
            Base::Opaque => None,
        })
        .collect();
    let base = match chains {
        Some(cs) => {
            let cofinal = cs.iter().all(|(_, c)| *c);
            let fs: Vec<_> = cs.into_iter().map(|(f, _)| f).collect();
            Base::Chain {
                entourage: Arc::new(move |i| Entourage::product(fs.iter().map(|f| f(i)).collect())),
                cofinal,
            }
        }
        None => Base::Opaque,
    };
    Ok(CoarsePresentation {
        ground,
        carrier,
        base,
        origin: Origin::Product(factors),
    })
}

/// Whether uniform radii over the `n`-th base member give a cofinal chain:
/// the index bornology needs a countable base, and either its members are
/// finite or the factor is bounded.
fn uniform_chain_is_cofinal(index: &Bornology, factor: &CoarsePresentation) -> bool {
    let countable = index.has_countable_base().is_true();
    let finite_members = index.ground.is_finite() || is_finite_subsets(index) || index.has_infinite_member(0).is_false();
    let factor_bounded = factor.ground.is_finite() && crate::coarse::is_connected(factor, 0).is_true();
    countable && factor.is_chain_indexable() && (finite_members || factor_bounded)
}

fn factor_chain(factor: &CoarsePresentation) -> Result<Arc<dyn Fn(u64) -> Entourage + Send + Sync>> {
    match &factor.base {
        Base::Chain { entourage, .. } => Ok(entourage.clone()),
        Base::Opaque => Err(Error::Unsupported("family members need a computable base".into())),
    }
}

/// The B-product of copies of `factor`: finitely supported points, base
/// `E_n = {(x, y) : x_α E_n y_α for α ∈ B_n, x_α = y_α elsewhere}`.
pub fn b_product(index: &Bornology, factor: &PointedBallean) -> Result<CoarsePresentation> {
    let ground = GroundSet::FinSupp {
        index: Box::new(index.ground.clone()),
        factor: Box::new(factor.space.ground.clone()),
        basepoint: factor.basepoint.clone(),
    };
    let base = match index.base_member(0) {
        Some(_) => {
            let (b, f, g) = (index.clone(), factor_chain(&factor.space)?, ground.clone());
            Base::Chain {
                entourage: Arc::new(move |i| Entourage {
                    ground: g.clone(),
                    kind: EntKind::Support {
                        member: b.base_member(i).expect("countable base"),
                        coord: Box::new(f(i)),
                    },
                }),
                cofinal: uniform_chain_is_cofinal(index, &factor.space),
            }
        }
        None => Base::Opaque,
    };
    Ok(CoarsePresentation {
        ground,
        carrier: SetExpr::All,
        base,
        origin: Origin::BProduct {
            index: index.clone(),
            factor: Box::new(factor.space.clone()),
        },
    })
}

/// The B-product of doubletons pointed at 0; points are their supports.
pub fn macrocube(index: &Bornology) -> Result<CoarsePresentation> {
    b_product(index, &PointedFamily::doubletons().build()?)
}

/// The B-bouquet: copies of `spine` glued at the basepoint, with the
/// B-product structure restricted to the support-≤1 points.
pub fn bouquet(index: &Bornology, spine: &PointedBallean) -> Result<PointedBallean> {
    let ground = GroundSet::Wedge {
        index: Box::new(index.ground.clone()),
        spine: Box::new(spine.space.ground.clone()),
        basepoint: spine.basepoint.clone(),
    };
    let base = match index.base_member(0) {
        Some(_) => {
            let (b, f, g) = (index.clone(), factor_chain(&spine.space)?, ground.clone());
            Base::Chain {
                entourage: Arc::new(move |i| Entourage {
                    ground: g.clone(),
                    kind: EntKind::Wedge {
                        member: b.base_member(i).expect("countable base"),
                        spine: Box::new(f(i)),
                    },
                }),
                cofinal: uniform_chain_is_cofinal(index, &spine.space),
            }
        }
        None => Base::Opaque,
    };
    PointedBallean::new(
        CoarsePresentation {
            ground,
            carrier: SetExpr::All,
            base,
            origin: Origin::Bouquet {
                index: index.clone(),
                spine: Box::new(spine.space.clone()),
            },
        },
        Element::Base,
    )
}

/// Points of the comb carrier `(X × {e}) ∪ ⋃_{α ∈ A} {α} × X_α` inside
/// `X × ⋁X_α`.
pub fn comb_carrier(teeth: &SetExpr) -> SetExpr {
    let a = teeth.clone();
    SetExpr::oracle(format!("comb carrier over {teeth}"), move |p| match p {
        Element::Tuple(v) if v.len() == 2 => match (&v[0], &v[1]) {
            (_, Element::Base) => true,
            (x, Element::Tagged(alpha, _)) => x.nat() == Some(*alpha) && a.has(x),
            _ => false,
        },
        _ => false,
    })
}

/// The comb with handle `handle`, teeth at `teeth` and copies of `spine`;
/// the spine bornology is the one induced on `teeth` by the handle.
pub fn comb(handle: &CoarsePresentation, teeth: &SetExpr, spine: &PointedBallean) -> Result<CoarsePresentation> {
    if handle.ground != GroundSet::Naturals {
        return Err(Error::Unsupported("comb handles must live on the naturals".into()));
    }
    let induced = bounded_sets(handle).induced(teeth.clone());
    let wedge = bouquet(&induced, spine)?;
    let carrier = comb_carrier(teeth);
    let whole = product(vec![handle.clone(), wedge.space])?;
    let base = match &whole.base {
        Base::Chain { entourage, cofinal } => {
            let (f, c) = (entourage.clone(), carrier.clone());
            Base::Chain {
                entourage: Arc::new(move |i| f(i).restrict(c.clone())),
                cofinal: *cofinal,
            }
        }
        Base::Opaque => Base::Opaque,
    };
    Ok(CoarsePresentation {
        ground: whole.ground,
        carrier,
        base,
        origin: Origin::Comb {
            handle: Box::new(handle.clone()),
            teeth: teeth.clone(),
            spine: Box::new(spine.space.clone()),
        },
    })
}

/// `⇓B`: base `(B_n × B_n) ∪ Δ`.
pub fn smallest_compatible(b: &Bornology) -> CoarsePresentation {
    let base = match b.base_member(0) {
        Some(_) => {
            let (bb, g) = (b.clone(), b.ground.clone());
            Base::Chain {
                entourage: Arc::new(move |i| Entourage::block(g.clone(), bb.base_member(i).expect("countable base"))),
                cofinal: b.has_countable_base().is_true(),
            }
        }
        None => Base::Opaque,
    };
    CoarsePresentation {
        ground: b.ground.clone(),
        carrier: SetExpr::All,
        base,
        origin: Origin::Down(b.clone()),
    }
}

/// `{(n, 2n)}` symmetrised, a standard member of `⇑[ℕ]^{<ω}`.
pub fn doubling() -> Entourage {
    let ball = Arc::new(|x: &Element| match x.nat() {
        Some(n) => {
            let mut v = vec![n.saturating_mul(2)];
            if n % 2 == 0 {
                v.push(n / 2);
            }
            SetExpr::nats(v)
        }
        None => SetExpr::empty(),
    });
    let b = ball.clone();
    Entourage::ball_map(GroundSet::Naturals, "doubling", move |x| b(x), Some(ball))
}

/// `⇑B` presented by its documented cofinal family: the blocks of `B`
/// together with every registered entourage that passes
/// [`largest_membership`]. The doubling relation is registered by default on
/// the naturals.
pub fn largest_compatible(b: &Bornology, witnesses: &[Entourage]) -> CoarsePresentation {
    let mut registered: Vec<Entourage> = Vec::new();
    if b.ground == GroundSet::Naturals {
        registered.push(doubling());
    }
    registered.extend(witnesses.iter().filter(|w| w.ground == b.ground).cloned());
    registered.retain(|w| !largest_membership(b, w, crate::DEFAULT_HORIZON).is_false());
    let base = match b.base_member(0) {
        Some(_) => {
            let (bb, g, extra) = (b.clone(), b.ground.clone(), registered.clone());
            Base::Chain {
                entourage: Arc::new(move |i| {
                    let mut parts = vec![Entourage::block(g.clone(), bb.base_member(i).expect("countable base"))];
                    parts.extend(extra.iter().cloned());
                    Entourage::union(g.clone(), parts)
                }),
                cofinal: false,
            }
        }
        None => Base::Opaque,
    };
    CoarsePresentation {
        ground: b.ground.clone(),
        carrier: SetExpr::All,
        base,
        origin: Origin::Up(b.clone(), registered),
    }
}

/// Number of base members sampled by [`largest_membership`].
pub const MEMBERSHIP_SAMPLES: u64 = 48;

/// Whether `e` belongs to `⇑B`: `e = e⁻¹` and `e[B] ∈ B` for base members.
pub fn largest_membership(b: &Bornology, e: &Entourage, horizon: u64) -> Verdict {
    if e.ground != b.ground {
        return Verdict::note(format!("entourage lives on {}, bornology on {}", e.ground, b.ground));
    }
    if !e.is_symmetric() {
        let probe = horizon.min(256);
        let inv = e.invert().ok();
        for x in e.ground.elements_upto(probe) {
            let Some(ball) = e.ball_elements(&x) else { continue };
            if let Some(y) = ball.iter().find(|y| !e.relates(y, &x)) {
                return Verdict::falsified(Witness::Pair(x.clone(), y.clone()));
            }
            if let Some(back) = inv.as_ref().and_then(|i| i.ball_elements(&x)) {
                if let Some(y) = back.iter().find(|y| !e.relates(&x, y)) {
                    return Verdict::falsified(Witness::Pair(y.clone(), x.clone()));
                }
            }
        }
    }
    let members: Vec<SetExpr> = match &b.kind {
        BornKind::Explicit(list) => list.clone(),
        _ => (0..MEMBERSHIP_SAMPLES).filter_map(|n| b.base_member(n)).collect(),
    };
    if members.is_empty() {
        return Verdict::Unknown(horizon);
    }
    let mut verdict = Verdict::True;
    for m in members {
        let image = match e.apply(&m) {
            Ok(s) => s,
            Err(_) => return Verdict::Unknown(horizon),
        };
        match b.member(&image, horizon) {
            Verdict::True => {}
            Verdict::False(_) => {
                return Verdict::falsified(Witness::Note(format!("E[{m}] is not a member of {b}")));
            }
            Verdict::Unknown(h) => verdict = Verdict::Unknown(h),
        }
    }
    verdict
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coarse::{ball_points, finite_elements};
    use crate::DEFAULT_HORIZON as H;
    use std::collections::BTreeSet;

    fn n(x: u64) -> Element {
        Element::Nat(x)
    }

    fn sparse(coords: &[(u64, u64)]) -> Element {
        Element::Sparse(coords.iter().filter(|(_, v)| *v != 0).map(|&(a, v)| (a, n(v))).collect())
    }

    #[test]
    fn product_balls_are_rectangles() {
        let e = Entourage::product(vec![Entourage::metric(2), Entourage::metric(3)]);
        let ball = e.ball(&Element::pair(n(5), n(5)));
        let g = GroundSet::TupleSpace(vec![GroundSet::Naturals, GroundSet::Naturals]);
        let got = finite_elements(&ball, &g).unwrap();
        let want: BTreeSet<Element> = (3..=7)
            .flat_map(|a| (2..=8).map(move |b| Element::pair(n(a), n(b))))
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn powerset_b_product_is_the_product() {
        let idx = GroundSet::FinitePoints(3);
        let bp = b_product(&Bornology::powerset(idx), &PointedFamily::rays().build().unwrap()).unwrap();
        let pr = product(vec![CoarsePresentation::metric_nat(); 3]).unwrap();
        let pts: Vec<[u64; 3]> = (0..27).map(|k| [k % 3, (k / 3) % 3 * 2, k / 9 * 3]).collect();
        for i in [0, 1, 2, 4] {
            let (e, f) = (bp.entourage(i).unwrap(), pr.entourage(i).unwrap());
            for p in &pts {
                for q in &pts {
                    let sp = sparse(&[(0, p[0]), (1, p[1]), (2, p[2])]);
                    let sq = sparse(&[(0, q[0]), (1, q[1]), (2, q[2])]);
                    let tp = Element::Tuple(p.iter().map(|&v| n(v)).collect());
                    let tq = Element::Tuple(q.iter().map(|&v| n(v)).collect());
                    assert_eq!(e.relates(&sp, &sq), f.relates(&tp, &tq), "{p:?} {q:?} at {i}");
                }
            }
        }
    }

    #[test]
    fn coordinates_outside_the_member_must_agree() {
        let bp = b_product(&Bornology::finite_subsets(GroundSet::Naturals), &PointedFamily::rays().build().unwrap()).unwrap();
        let e = bp.entourage(2).unwrap();
        assert!(e.relates(&sparse(&[(1, 4)]), &sparse(&[(1, 6), (2, 1)])));
        assert!(!e.relates(&sparse(&[(5, 1)]), &sparse(&[])));
        assert!(bp.is_chain_indexable());
    }

    #[test]
    fn cantor_macrocube() {
        let m = macrocube(&Bornology::finite_subsets(GroundSet::Naturals)).unwrap();
        let e = m.entourage(2).unwrap();
        assert!(e.relates(&sparse(&[(0, 1), (1, 1)]), &sparse(&[(0, 1), (2, 1)])));
        assert!(m.is_chain_indexable());
        let full = macrocube(&Bornology::powerset(GroundSet::FinitePoints(4))).unwrap();
        let top = full.entourage(0).unwrap();
        assert!(top.relates(&sparse(&[]), &sparse(&[(0, 1), (1, 1), (2, 1), (3, 1)])));
    }

    #[test]
    fn infinite_members_break_the_uniform_chain() {
        let rays = PointedFamily::rays().build().unwrap();
        assert!(!b_product(&Bornology::evens_plus(), &rays).unwrap().is_chain_indexable());
        assert!(!b_product(&Bornology::powerset(GroundSet::Naturals), &rays).unwrap().is_chain_indexable());
        assert!(macrocube(&Bornology::evens_plus()).unwrap().is_chain_indexable());
    }

    #[test]
    fn bouquet_of_two_rays() {
        let idx = Bornology::powerset(GroundSet::FinitePoints(2));
        let w = bouquet(&idx, &PointedFamily::rays().build().unwrap()).unwrap();
        let got = ball_points(&w.space, 2, &Element::Base).unwrap();
        let want: BTreeSet<Element> = [
            Element::Base,
            Element::tagged(0, n(1)),
            Element::tagged(0, n(2)),
            Element::tagged(1, n(1)),
            Element::tagged(1, n(2)),
        ]
        .into();
        assert_eq!(got, want);
        let e = w.space.entourage(3).unwrap();
        assert!(!e.relates(&Element::tagged(0, n(4)), &Element::tagged(1, n(1))));
        assert!(e.relates(&Element::tagged(0, n(2)), &Element::tagged(1, n(3))));
        assert!(e.relates(&Element::tagged(0, n(9)), &Element::tagged(0, n(12))));
    }

    #[test]
    fn comb_handle_and_teeth() {
        let handle = CoarsePresentation::metric_nat();
        let teeth = SetExpr::generator("pow2").unwrap();
        let c = comb(&handle, &teeth, &PointedFamily::rays().build().unwrap()).unwrap();
        let on_handle = |x: u64| Element::pair(n(x), Element::Base);
        let e = c.entourage(3).unwrap();
        for x in 0..40 {
            for y in 0..40 {
                assert_eq!(e.relates(&on_handle(x), &on_handle(y)), x.abs_diff(y) <= 3);
            }
        }
        let tooth = Element::pair(n(2), Element::tagged(2, n(3)));
        assert!(e.relates(&tooth, &on_handle(4)));
        assert!(!e.relates(&tooth, &on_handle(6)));
        let high = Element::pair(n(2), Element::tagged(2, n(4)));
        assert!(!e.relates(&high, &on_handle(2)));
        assert!(!c.carrier.has(&Element::pair(n(3), Element::tagged(3, n(1)))));
    }

    #[test]
    fn block_structure() {
        let d = smallest_compatible(&Bornology::intervals());
        assert_eq!(ball_points(&d, 5, &n(3)).unwrap(), (0..=5).map(n).collect());
        assert_eq!(ball_points(&d, 5, &n(9)).unwrap(), [n(9)].into());
    }

    #[test]
    fn membership_in_the_largest_structure() {
        let fin = Bornology::finite_subsets(GroundSet::Naturals);
        assert!(largest_membership(&fin, &Entourage::metric(1), H).is_true());
        assert!(largest_membership(&fin, &doubling(), H).is_true());
        let evens = SetExpr::progression(2, 0);
        let star = Entourage::ball_map(
            GroundSet::Naturals,
            "zero-to-evens",
            move |x| if x.nat() == Some(0) { evens.clone() } else { SetExpr::nats([0]) },
            None,
        );
        assert!(largest_membership(&fin, &star, H).is_false());
        let one_way = Entourage::finite(GroundSet::Naturals, [(n(0), n(1))]);
        assert_eq!(largest_membership(&fin, &one_way, H), Verdict::falsified(Witness::Pair(n(0), n(1))));
    }
}
