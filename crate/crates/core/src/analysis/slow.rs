//! Slowly oscillating functions and separator synthesis.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;

use super::asymptotic::{asymptotically_disjoint, bouquet_spines, nat_distance, spine_part};
use crate::coarse::{ball_points, is_bounded, CoarsePresentation, Origin};
use crate::groundsets::{Element, GroundSet, SetExpr, SetOp, Verdict, Witness};
use crate::{Error, Result};

/// Exact values in `[0, 1]`.
pub type Value = Ratio<u64>;

/// Where a function came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Supplied,
    DistanceRatio,
    Indicator,
    Glued,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Supplied => "supplied",
            Provenance::DistanceRatio => "distance ratio",
            Provenance::Indicator => "indicator",
            Provenance::Glued => "glued",
        })
    }
}

type ValueFn = Arc<dyn Fn(&Element) -> Value + Send + Sync>;

/// A function `X -> [0, 1]` with rational values.
#[derive(Clone)]
pub struct SlowFunction {
    pub name: String,
    pub provenance: Provenance,
    map: ValueFn,
}

impl fmt::Debug for SlowFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SlowFunction({}, {})", self.name, self.provenance)
    }
}

impl fmt::Display for SlowFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl SlowFunction {
    pub fn new(name: impl Into<String>, f: impl Fn(&Element) -> Value + Send + Sync + 'static) -> Self {
        SlowFunction {
            name: name.into(),
            provenance: Provenance::Supplied,
            map: Arc::new(f),
        }
    }

    fn with(name: String, provenance: Provenance, map: ValueFn) -> Self {
        SlowFunction { name, provenance, map }
    }

    pub fn eval(&self, x: &Element) -> Value {
        (self.map)(x)
    }

    /// `1` on `s`, `0` elsewhere.
    pub fn indicator(s: &SetExpr) -> Self {
        let s2 = s.clone();
        SlowFunction::with(
            format!("indicator of {s}"),
            Provenance::Indicator,
            Arc::new(move |x| Value::from_integer(u64::from(s2.has(x)))),
        )
    }

    /// `d(x, Y) / (d(x, Y) + d(x, Z))` on the naturals. A set with no point
    /// within `horizon` of `x` counts as infinitely far away, so the value
    /// saturates at `0` or `1`.
    pub fn distance_ratio(y: &SetExpr, z: &SetExpr, horizon: u64) -> Self {
        let (y2, z2) = (y.clone(), z.clone());
        SlowFunction::with(
            format!("d(x, {y}) / (d(x, {y}) + d(x, {z}))"),
            Provenance::DistanceRatio,
            Arc::new(move |x| {
                let Some(v) = x.nat() else {
                    return Value::new(1, 2);
                };
                match (nat_distance(&y2, v, horizon), nat_distance(&z2, v, horizon)) {
                    (Some(a), Some(b)) if a + b > 0 => Value::new(a, a + b),
                    (None, Some(_)) => Value::from_integer(1),
                    (Some(_), None) => Value::from_integer(0),
                    _ => Value::new(1, 2),
                }
            }),
        )
    }

    /// `n mod 2`.
    pub fn parity() -> Self {
        SlowFunction::new("n mod 2", |x| Value::from_integer(x.nat().unwrap_or(0) % 2))
    }

    /// A triangle wave in `log2(1 + n)` with period 2, rounded to 20 bits.
    pub fn log_wave() -> Self {
        SlowFunction::new("log-wave", |x| {
            let t = ((1 + x.nat().unwrap_or(0)) as f64).log2() % 2.0;
            let tri = if t <= 1.0 { t } else { 2.0 - t };
            Value::new((tri * f64::from(1u32 << 20)).round() as u64, 1 << 20)
        })
    }
}

/// Base indices probed by [`is_slowly_oscillating`].
pub const PROBE_INDICES: [u64; 4] = [1, 2, 4, 8];

/// Largest number of centers swept.
pub const SWEEP_CAP: u64 = 1 << 14;

/// Outcome of [`is_slowly_oscillating`].
#[derive(Debug, Clone)]
pub struct SlowReport {
    pub verdict: Verdict,
    /// Per probed index, the largest center whose ball oscillates by at least
    /// `eps` (the exceptional bounded set lies at or below it).
    pub exceptional: Vec<(u64, Option<Element>)>,
}

/// Size of a point: the largest natural it mentions, ignoring spine tags.
fn norm(p: &Element) -> u64 {
    match p {
        Element::Nat(n) => *n,
        Element::Base => 0,
        Element::Tagged(_, s) => norm(s),
        Element::Tuple(v) => v.iter().map(norm).max().unwrap_or(0),
        Element::Sparse(c) => c.iter().map(|(a, v)| (*a).max(norm(v))).max().unwrap_or(0),
    }
}

/// Spines of a wedge examined by the sweep.
pub const SWEPT_SPINES: u64 = 4;

/// Carrier points examined: codes up to `sweep`, except on wedges where the
/// first [`SWEPT_SPINES`] spines are each swept up to `sweep`.
fn sweep_centers(x: &CoarsePresentation, sweep: u64) -> Vec<Element> {
    let pts: Vec<Element> = match &x.ground {
        GroundSet::Wedge { index, spine, basepoint } => {
            let k = index.size().unwrap_or(u64::MAX).min(SWEPT_SPINES);
            let mut v = vec![Element::Base];
            for a in 0..k {
                v.extend(
                    spine
                        .elements_upto(sweep)
                        .filter(|s| s != basepoint)
                        .map(|s| Element::tagged(a, s)),
                );
            }
            v
        }
        g => g.elements_upto(sweep).collect(),
    };
    pts.into_iter().filter(|p| x.carrier.has(p)).collect()
}

/// Checks that `diam f(E_i[x]) < eps` off a bounded set for the probed
/// indices. Violations on points larger than half the largest swept point
/// count as unbounded.
pub fn is_slowly_oscillating(x: &CoarsePresentation, f: &SlowFunction, eps: Value, horizon: u64) -> Result<SlowReport> {
    Ok(oscillation_grid(x, f, &[eps], horizon)?.remove(0))
}

/// [`is_slowly_oscillating`] for several `eps` at once; ball diameters are
/// computed once and shared.
pub fn oscillation_grid(x: &CoarsePresentation, f: &SlowFunction, grid: &[Value], horizon: u64) -> Result<Vec<SlowReport>> {
    if let Some(eps) = grid.iter().find(|e| **e <= Value::from_integer(0) || **e > Value::from_integer(1)) {
        return Err(Error::Domain(format!("eps must lie in (0, 1], got {eps}")));
    }
    let report = |verdict: Verdict, exceptional: Vec<(u64, Option<Element>)>| SlowReport { verdict, exceptional };
    if is_bounded(x, &SetExpr::All, horizon).is_true() {
        return Ok(grid.iter().map(|_| report(Verdict::True, Vec::new())).collect());
    }
    let sweep = horizon.min(SWEEP_CAP);
    let centers = sweep_centers(x, sweep);
    let top = centers.iter().map(norm).max().unwrap_or(0);
    let mut values: HashMap<Element, Value> = HashMap::new();
    let mut value = |p: Element| *values.entry(p).or_insert_with_key(|p| f.eval(p));
    // diameters[i][c] for probe index i and center c
    let mut diameters = Vec::new();
    for i in PROBE_INDICES {
        let mut row = Vec::with_capacity(centers.len());
        for p in &centers {
            let Some(ball) = ball_points(x, i, p) else {
                return Ok(grid.iter().map(|_| report(Verdict::Unknown(horizon), Vec::new())).collect());
            };
            let mut vals = ball.into_iter().map(&mut value);
            let first = vals.next().unwrap_or_default();
            let (lo, hi) = vals.fold((first, first), |(lo, hi), v| (lo.min(v), hi.max(v)));
            row.push(hi - lo);
        }
        diameters.push(row);
    }
    Ok(grid
        .iter()
        .map(|&eps| {
            let mut exceptional = Vec::new();
            for (i, row) in PROBE_INDICES.iter().zip(&diameters) {
                let bad: Vec<&Element> = centers.iter().zip(row).filter(|(_, d)| **d >= eps).map(|(p, _)| p).collect();
                let cofinal: Vec<String> = bad.iter().filter(|p| 2 * norm(p) > top).take(4).map(|p| p.to_string()).collect();
                if !cofinal.is_empty() {
                    return report(
                        Verdict::falsified(Witness::Note(format!(
                            "diam f(E_{i}[x]) >= {eps} at x = {}, ... up to {sweep}",
                            cofinal.join(", ")
                        ))),
                        exceptional,
                    );
                }
                exceptional.push((*i, bad.last().map(|p| (*p).clone())));
            }
            report(Verdict::True, exceptional)
        })
        .collect())
}

fn check_disjoint(x: &CoarsePresentation, y: &SetExpr, z: &SetExpr, horizon: u64) -> Result<()> {
    let meet = y.combine(z, SetOp::Intersection)?;
    if let Some(p) = meet.enumerate(&x.ground, horizon).into_iter().next() {
        return Err(Error::Precondition(format!("Y and Z share the point {p}")));
    }
    match asymptotically_disjoint(x, y, z, horizon) {
        Verdict::True => Ok(()),
        Verdict::False(w) => Err(Error::Precondition(format!(
            "Y and Z are not asymptotically disjoint{}",
            w.map(|w| format!(": {w}")).unwrap_or_default()
        ))),
        Verdict::Unknown(h) => Err(Error::Unsupported(format!(
            "asymptotic disjointness of Y and Z is undecided at horizon {h}"
        ))),
    }
}

/// A slowly oscillating `f` with `f = 0` on `Y` and `f = 1` on `Z`, for
/// disjoint, asymptotically disjoint `Y` and `Z`.
pub fn synthesize_separator(x: &CoarsePresentation, y: &SetExpr, z: &SetExpr, horizon: u64) -> Result<SlowFunction> {
    check_disjoint(x, y, z, horizon)?;
    separator_on(x, y, z, horizon)
}

fn separator_on(x: &CoarsePresentation, y: &SetExpr, z: &SetExpr, horizon: u64) -> Result<SlowFunction> {
    if is_bounded(x, &SetExpr::All, horizon).is_true() {
        return Ok(SlowFunction::indicator(z));
    }
    match &x.origin {
        Origin::MetricNat => Ok(SlowFunction::distance_ratio(y, z, horizon)),
        Origin::Down(_) => Ok(SlowFunction::indicator(z)),
        Origin::Subballean(parent, _) => separator_on(parent, y, z, horizon),
        Origin::Bouquet { spine, .. } => {
            let (alphas, e) = bouquet_spines(x, y, z).ok_or_else(|| {
                Error::Unsupported("separators on bouquets need a finite index or sets on named spines".into())
            })?;
            let parts = alphas
                .iter()
                .map(|&a| Ok((a, separator_on(spine, &spine_part(y, a, &e), &spine_part(z, a, &e), horizon)?)))
                .collect::<Result<BTreeMap<u64, SlowFunction>>>()?;
            // the common basepoint takes 1/2 unless Y or Z pins it
            let at_base = if y.has(&Element::Base) {
                Value::from_integer(0)
            } else if z.has(&Element::Base) {
                Value::from_integer(1)
            } else {
                Value::new(1, 2)
            };
            let names: Vec<String> = parts.iter().map(|(a, p)| format!("{a}: {}", p.name)).collect();
            Ok(SlowFunction::with(
                format!("glue[{}]", names.join("; ")),
                Provenance::Glued,
                Arc::new(move |p| match p {
                    Element::Tagged(a, v) => parts.get(a).map_or(at_base, |f| f.eval(v)),
                    _ => at_base,
                }),
            ))
        }
        other => Err(Error::Unsupported(format!(
            "no separator construction for {} balleans",
            other.label()
        ))),
    }
}
