//! Asymptotic disjointness, asymptotic neighbourhoods and separation.

use std::collections::BTreeSet;

use crate::coarse::{is_bounded, CoarsePresentation, Origin};
use crate::groundsets::{Element, GenKind, Generator, GroundSet, Periodic, SetExpr, SetOp, Verdict, Witness};

/// Distance from `x` to the nearest point of `s` on the naturals, searching
/// at most `horizon` steps for presentations without a direct rule.
pub fn nat_distance(s: &SetExpr, x: u64, horizon: u64) -> Option<u64> {
    if let Some(p) = s.exact() {
        let up = p.next_at_or_after(x).map(|y| y - x);
        let down = p.prev_at_or_before(x).map(|y| x - y);
        return up.into_iter().chain(down).min();
    }
    if let SetExpr::Sparse(g) = s {
        let i = g.index_at_least(x);
        let above = i.and_then(|i| g.nth(i)).map(|y| y - x);
        let below = match i {
            Some(0) => None,
            Some(i) => g.nth(i - 1).map(|y| x - y),
            None => g.iter().last().map(|y| x - y),
        };
        return above.into_iter().chain(below).min();
    }
    (0..=horizon).find(|&d| s.has(&Element::Nat(x + d)) || (d <= x && s.has(&Element::Nat(x - d))))
}

fn render_nat_set(p: &Periodic) -> String {
    if *p == Periodic::full() {
        "ℕ".to_string()
    } else {
        SetExpr::from_periodic(p.clone()).to_string()
    }
}

/// Cross gaps of the merged streams are eventually strictly increasing.
fn gap_growth(y: &SetExpr, z: &SetExpr, horizon: u64) -> Verdict {
    let mut merged: Vec<(u64, bool)> = y
        .enumerate_nats(horizon)
        .into_iter()
        .map(|v| (v, false))
        .chain(z.enumerate_nats(horizon).into_iter().map(|v| (v, true)))
        .collect();
    merged.sort();
    let gaps: Vec<u64> = merged
        .windows(2)
        .filter(|w| w[0].1 != w[1].1)
        .map(|w| w[1].0 - w[0].0)
        .collect();
    if gaps.len() < 6 {
        return Verdict::Unknown(horizon);
    }
    let tail = &gaps[gaps.len() / 2..];
    if tail.windows(2).all(|w| w[0] < w[1]) {
        Verdict::True
    } else {
        Verdict::Unknown(horizon)
    }
}

fn metric_disjoint(y: &SetExpr, z: &SetExpr, horizon: u64) -> Verdict {
    let g = GroundSet::Naturals;
    let (fy, fz) = (y.finiteness(&g, horizon), z.finiteness(&g, horizon));
    if fy.is_true() || fz.is_true() {
        return Verdict::True;
    }
    match (y.exact(), z.exact()) {
        (Some(p), Some(q)) => {
            // both infinite: the intersection is cofinite once r reaches a period
            for r in 0..=p.period().max(q.period()) {
                let meet = p.thicken(r).intersection(&q.thicken(r));
                if !meet.is_finite() {
                    return Verdict::falsified(Witness::Note(format!(
                        "E_{r}[Y] ∩ E_{r}[Z] = {}",
                        render_nat_set(&meet)
                    )));
                }
            }
            unreachable!("thickening by the period covers a tail")
        }
        (Some(p), None) if fz.is_false() => exact_meets_infinite(&p),
        (None, Some(q)) if fy.is_false() => exact_meets_infinite(&q),
        _ => match (y, z) {
            (SetExpr::Sparse(a), SetExpr::Sparse(b)) => {
                if a == b {
                    return Verdict::falsified(Witness::Note(format!("Y ∩ Z ⊇ {} is unbounded", a.name)));
                }
                match same_base_geometric(a, b) {
                    Some(true) => Verdict::True,
                    Some(false) => Verdict::falsified(Witness::Note(format!(
                        "{} and {} stay within bounded distance infinitely often",
                        a.name, b.name
                    ))),
                    None => gap_growth(y, z, horizon),
                }
            }
            _ => gap_growth(y, z, horizon),
        },
    }
}

/// For `c1 b^n + d1` and `c2 b^m + d2`: the streams stay at bounded distance
/// infinitely often iff `c1 / c2` is a power of `b`; otherwise the gaps grow
/// at least like `b^min(n, m)`.
fn same_base_geometric(a: &Generator, b: &Generator) -> Option<bool> {
    match (&a.kind, &b.kind) {
        (
            GenKind::Geometric { coef: c1, base: b1, .. },
            GenKind::Geometric { coef: c2, base: b2, .. },
        ) if b1 == b2 => {
            let (lo, mut hi) = ((*c1).min(*c2), (*c1).max(*c2));
            while hi > lo && hi % b1 == 0 {
                hi /= b1;
            }
            Some(hi != lo)
        }
        _ => None,
    }
}

fn exact_meets_infinite(p: &Periodic) -> Verdict {
    Verdict::falsified(Witness::Note(format!(
        "E_{}[Y] contains every point past {}, so E_{}[Y] ∩ E_{}[Z] is unbounded",
        p.period(),
        p.threshold(),
        p.period(),
        p.period()
    )))
}

/// The part of a bouquet subset lying on spine `alpha`, as a spine subset.
pub fn spine_part(s: &SetExpr, alpha: u64, basepoint: &Element) -> SetExpr {
    match s {
        SetExpr::Tagged(t, inner) if *t == alpha => (**inner).clone(),
        SetExpr::Tagged(..) => SetExpr::empty(),
        SetExpr::Finite(xs) => SetExpr::points(xs.iter().filter_map(|x| match x {
            Element::Tagged(t, v) if *t == alpha => Some((**v).clone()),
            Element::Base => Some(basepoint.clone()),
            _ => None,
        })),
        SetExpr::Union(ps) => {
            let mut parts: Vec<SetExpr> = ps
                .iter()
                .map(|p| spine_part(p, alpha, basepoint))
                .filter(|p| p.exact().map_or(true, |q| q != Periodic::empty()))
                .collect();
            if parts.len() <= 1 {
                return parts.pop().unwrap_or_else(SetExpr::empty);
            }
            parts
                .iter()
                .try_fold(SetExpr::empty(), |acc, p| acc.combine(p, SetOp::Union))
                .unwrap_or(SetExpr::Union(parts))
        }
        SetExpr::All => SetExpr::All,
        _ => {
            let (whole, b) = (s.clone(), basepoint.clone());
            SetExpr::oracle(format!("spine {alpha} of {s}"), move |v| {
                let lifted = if *v == b { Element::Base } else { Element::tagged(alpha, v.clone()) };
                whole.has(&lifted)
            })
        }
    }
}

fn mentioned_spines(s: &SetExpr) -> Option<BTreeSet<u64>> {
    match s {
        SetExpr::Tagged(t, _) => Some(BTreeSet::from([*t])),
        SetExpr::Union(ps) => ps.iter().map(mentioned_spines).try_fold(BTreeSet::new(), |mut acc, m| {
            acc.extend(m?);
            Some(acc)
        }),
        SetExpr::Finite(xs) => Some(
            xs.iter()
                .filter_map(|x| match x {
                    Element::Tagged(t, _) => Some(*t),
                    _ => None,
                })
                .collect(),
        ),
        _ => None,
    }
}

/// Spines of a bouquet that `Y` or `Z` can touch: every spine when the
/// index set is finite, otherwise the spines named in the presentations.
pub fn bouquet_spines(x: &CoarsePresentation, y: &SetExpr, z: &SetExpr) -> Option<(Vec<u64>, Element)> {
    match (&x.origin, &x.ground) {
        (Origin::Bouquet { .. }, GroundSet::Wedge { index, basepoint, .. }) => {
            let alphas = match index.size() {
                Some(k) => (0..k).collect(),
                None => {
                    let mut m = mentioned_spines(y)?;
                    m.extend(mentioned_spines(z)?);
                    m.into_iter().collect()
                }
            };
            Some((alphas, basepoint.clone()))
        }
        _ => None,
    }
}

/// Whether `E[Y] ∩ E[Z]` is bounded for every entourage `E`.
pub fn asymptotically_disjoint(x: &CoarsePresentation, y: &SetExpr, z: &SetExpr, horizon: u64) -> Verdict {
    if is_bounded(x, y, horizon).is_true() || is_bounded(x, z, horizon).is_true() {
        return Verdict::True;
    }
    match &x.origin {
        Origin::MetricNat => metric_disjoint(y, z, horizon),
        Origin::Down(b) => match y.combine(z, SetOp::Intersection) {
            Ok(meet) => b.member(&meet, horizon),
            Err(_) => Verdict::Unknown(horizon),
        },
        Origin::Bouquet { spine, .. } => match bouquet_spines(x, y, z) {
            Some((alphas, e)) => alphas
                .into_iter()
                .map(|a| asymptotically_disjoint(spine, &spine_part(y, a, &e), &spine_part(z, a, &e), horizon))
                .fold(Verdict::True, Verdict::and),
            None => Verdict::Unknown(horizon),
        },
        Origin::Subballean(parent, _) => match asymptotically_disjoint(parent, y, z, horizon) {
            Verdict::True => Verdict::True,
            _ => Verdict::Unknown(horizon),
        },
        _ => match y.combine(z, SetOp::Intersection) {
            Ok(meet) if is_bounded(x, &meet, horizon).is_false() => {
                Verdict::falsified(Witness::Note("Y ∩ Z is unbounded".into()))
            }
            _ => Verdict::Unknown(horizon),
        },
    }
}

/// Radii probed by the horizon checks on sparse sets.
const PROBE_RADII: [u64; 6] = [1, 2, 4, 8, 16, 32];

/// `E_r[Y] \ U` has no points in the upper half of the window for every
/// probed radius.
fn metric_neighbourhood_at_horizon(y: &SetExpr, u: &SetExpr, horizon: u64) -> Verdict {
    for r in PROBE_RADII {
        let escaping = (horizon / 2..=horizon).find(|&v| {
            !u.has(&Element::Nat(v)) && nat_distance(y, v, r).is_some_and(|d| d <= r)
        });
        if escaping.is_some() {
            return Verdict::Unknown(horizon);
        }
    }
    Verdict::True
}

fn metric_neighbourhood(y: &SetExpr, u: &SetExpr, horizon: u64) -> Verdict {
    let g = GroundSet::Naturals;
    if y.finiteness(&g, horizon).is_true() {
        return Verdict::True;
    }
    if let Some(q) = u.exact() {
        if q.complement().is_finite() {
            return Verdict::True;
        }
        if let Some(p) = y.exact() {
            for r in 0..=p.period().max(q.period()) {
                let rest = p.thicken(r).difference(&q);
                if !rest.is_finite() {
                    return Verdict::falsified(Witness::Note(format!(
                        "E_{r}[Y] \\ U = {} is unbounded",
                        render_nat_set(&rest)
                    )));
                }
            }
            return Verdict::True;
        }
        if y.finiteness(&g, horizon).is_false() {
            return Verdict::falsified(Witness::Note(format!(
                "E_{}[Y] meets the infinite complement of U near every point of Y",
                q.period()
            )));
        }
    }
    metric_neighbourhood_at_horizon(y, u, horizon)
}

/// Whether `E[Y] \ U` is bounded for every entourage `E`.
pub fn is_asymptotic_neighbourhood(x: &CoarsePresentation, y: &SetExpr, u: &SetExpr, horizon: u64) -> Verdict {
    if matches!(u, SetExpr::All) || is_bounded(x, y, horizon).is_true() {
        return Verdict::True;
    }
    match &x.origin {
        Origin::MetricNat => metric_neighbourhood(y, u, horizon),
        Origin::Down(b) => match y.combine(u, SetOp::Difference) {
            Ok(rest) => b.member(&rest, horizon),
            Err(_) => Verdict::Unknown(horizon),
        },
        _ => Verdict::Unknown(horizon),
    }
}

/// Outcome of [`asymptotically_separated`].
#[derive(Debug, Clone)]
pub struct Separation {
    pub verdict: Verdict,
    pub neighbourhoods: Option<(SetExpr, SetExpr)>,
}

/// The Voronoi split `{x : d(x, Y) <= d(x, Z)}` and its complement.
pub fn voronoi(y: &SetExpr, z: &SetExpr, horizon: u64) -> (SetExpr, SetExpr) {
    let closer = move |a: &SetExpr, b: &SetExpr, strict: bool| {
        let (a, b) = (a.clone(), b.clone());
        move |p: &Element| match p.nat() {
            Some(v) => {
                let da = nat_distance(&a, v, horizon).unwrap_or(u64::MAX);
                let db = nat_distance(&b, v, horizon).unwrap_or(u64::MAX);
                if strict {
                    da < db
                } else {
                    da <= db
                }
            }
            None => false,
        }
    };
    (
        SetExpr::oracle("voronoi cell of Y", closer(y, z, false)),
        SetExpr::oracle("voronoi cell of Z", closer(z, y, true)),
    )
}

/// Looks for disjoint asymptotic neighbourhoods of `Y` and `Z`.
pub fn asymptotically_separated(x: &CoarsePresentation, y: &SetExpr, z: &SetExpr, horizon: u64) -> Separation {
    let disjoint = asymptotically_disjoint(x, y, z, horizon);
    if let Verdict::False(w) = disjoint {
        return Separation {
            verdict: Verdict::False(w),
            neighbourhoods: None,
        };
    }
    let (u, v) = match &x.origin {
        Origin::MetricNat => voronoi(y, z, horizon),
        Origin::Down(_) => {
            let v = z.combine(y, SetOp::Difference).unwrap_or_else(|_| z.clone());
            (y.clone(), v)
        }
        _ => {
            return Separation {
                verdict: Verdict::Unknown(horizon),
                neighbourhoods: None,
            }
        }
    };
    let verdict = is_asymptotic_neighbourhood(x, y, &u, horizon).and(is_asymptotic_neighbourhood(x, z, &v, horizon));
    let verdict = match verdict {
        Verdict::False(_) => Verdict::Unknown(horizon),
        v => v,
    };
    Separation {
        neighbourhoods: verdict.is_true().then_some((u, v)),
        verdict,
    }
}
