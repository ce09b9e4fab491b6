//! Rule-derived verdicts checked against the executable oracles.

use std::fmt;

use crate::bornology::{Bornology, SymCard};
use crate::coarse::{bounded_sets, CoarsePresentation, Origin};
use crate::constructions::{BalleanExpr, PointedFamily};
use crate::groundsets::{GroundSet, SetExpr, SetOp, Verdict};
use crate::Result;

use super::asymptotic::asymptotically_disjoint;
use super::discrete::default_catalog;
use super::infer::{infer_rules, Finding, Tri};
use super::oracle::{executable, Property};
use super::slow::{oscillation_grid, synthesize_separator, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    /// The oracle reached the same verdict.
    Confirmed,
    /// No oracle verdict either way.
    Unconfirmed,
    Inconsistent(String),
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Confirmed => write!(f, "CONFIRMED"),
            Status::Unconfirmed => write!(f, "UNCONFIRMED"),
            Status::Inconsistent(why) => write!(f, "INCONSISTENT ({why})"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Check {
    pub property: Property,
    pub rule: Finding,
    pub oracle: String,
    pub status: Status,
}

#[derive(Debug, Clone)]
pub struct CrossReport {
    pub expr: String,
    pub checks: Vec<Check>,
}

impl CrossReport {
    pub fn inconsistencies(&self) -> usize {
        self.checks
            .iter()
            .filter(|c| matches!(c.status, Status::Inconsistent(_)))
            .count()
    }
}

impl fmt::Display for CrossReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "instance {}", self.expr)?;
        for c in &self.checks {
            writeln!(f, "  {}: {} | oracle {} | {}", c.property, c.rule, c.oracle, c.status)?;
        }
        write!(f, "  inconsistencies: {}", self.inconsistencies())
    }
}

/// The eps grid separators are verified on.
pub fn eps_grid() -> [Value; 3] {
    [Value::new(1, 2), Value::new(1, 4), Value::new(1, 8)]
}

fn describe(v: &Verdict) -> String {
    match v.witness() {
        Some(w) => format!("{} ({w})", v.label()),
        None => v.label().to_string(),
    }
}

/// Normality by separators: every disjoint, asymptotically disjoint catalog
/// pair must get a slowly oscillating separator.
fn separator_sweep(x: &CoarsePresentation, horizon: u64) -> (String, Status) {
    let catalog = default_catalog(&x.ground);
    let mut tried = 0;
    for (i, y) in catalog.iter().enumerate() {
        for z in &catalog[i + 1..] {
            let disjoint = y
                .combine(z, SetOp::Intersection)
                .is_ok_and(|m| m.enumerate(&x.ground, horizon).is_empty());
            if !disjoint || !asymptotically_disjoint(x, y, z, horizon).is_true() {
                continue;
            }
            let Ok(f) = synthesize_separator(x, y, z, horizon) else {
                continue;
            };
            tried += 1;
            let zero = Value::from_integer(0);
            let one = Value::from_integer(1);
            let pins = y.enumerate(&x.ground, horizon).iter().all(|p| f.eval(p) == zero)
                && z.enumerate(&x.ground, horizon).iter().all(|p| f.eval(p) == one);
            if !pins {
                return (format!("separator for ({y}, {z})"), Status::Inconsistent("separator misses Y or Z".into()));
            }
            let reports = match oscillation_grid(x, &f, &eps_grid(), horizon) {
                Ok(r) => r,
                Err(_) => return (format!("separator for ({y}, {z}) undecided"), Status::Unconfirmed),
            };
            for (eps, r) in eps_grid().iter().zip(reports) {
                match r.verdict {
                    Verdict::False(w) => {
                        let w = w.map(|w| w.to_string()).unwrap_or_default();
                        return (
                            format!("separator for ({y}, {z})"),
                            Status::Inconsistent(format!("not slowly oscillating at eps {eps}: {w}")),
                        );
                    }
                    Verdict::True => {}
                    Verdict::Unknown(_) => return (format!("separator for ({y}, {z}) undecided"), Status::Unconfirmed),
                }
            }
        }
    }
    if tried == 0 {
        ("no separable catalog pair".into(), Status::Unconfirmed)
    } else {
        (format!("{tried} separators verified"), Status::Confirmed)
    }
}

fn compare(rule: &Finding, v: &Verdict) -> Status {
    match (rule.value, v) {
        (Tri::True, Verdict::True) | (Tri::False, Verdict::False(_)) => Status::Confirmed,
        (Tri::True, Verdict::False(_)) | (Tri::False, Verdict::True) => {
            Status::Inconsistent(format!("rule {} against oracle {}", rule.value, describe(v)))
        }
        _ => Status::Unconfirmed,
    }
}

fn is_concrete(x: &CoarsePresentation) -> bool {
    match &x.origin {
        Origin::Abstract(_) => false,
        Origin::Product(fs) => fs.iter().all(is_concrete),
        _ => !bounded_sets(x).is_abstract(),
    }
}

/// Checks every rule-derived verdict on `e` against the executable oracles.
pub fn cross_validate(e: &BalleanExpr, horizon: u64) -> Result<CrossReport> {
    let x = e.build()?;
    let mut checks = Vec::new();
    for (p, rule) in infer_rules(e, horizon)? {
        let (oracle, status) = match p {
            Property::Metrizable if rule.value == Tri::True && is_concrete(&x) => {
                if x.is_chain_indexable() {
                    ("cofinal countable chain".to_string(), Status::Confirmed)
                } else {
                    (
                        "no cofinal chain".to_string(),
                        Status::Inconsistent("metrizable by rule but the presentation has no countable base".into()),
                    )
                }
            }
            Property::Normal if rule.value == Tri::True => separator_sweep(&x, horizon),
            _ => match executable(p, &x, horizon) {
                Some(v) => (describe(&v), compare(&rule, &v)),
                None => ("none".to_string(), Status::Unconfirmed),
            },
        };
        checks.push(Check {
            property: p,
            rule,
            oracle,
            status,
        });
    }
    Ok(CrossReport {
        expr: e.to_string(),
        checks,
    })
}

fn kappa() -> Bornology {
    let k = SymCard::declared("κ", true);
    Bornology::declare(GroundSet::Naturals, k.clone(), k.clone(), k, true).expect("ordered declaration")
}

/// The cross-validation corpus: products, B-products, macrocubes, bouquets,
/// combs, and both compatible extremes over two bornologies each.
pub fn corpus() -> Vec<BalleanExpr> {
    let fin = || Bornology::finite_subsets(GroundSet::Naturals);
    let rays = || Box::new(PointedFamily::rays());
    vec![
        BalleanExpr::Product(vec![BalleanExpr::MetricNat, BalleanExpr::MetricNat]),
        BalleanExpr::Product(vec![BalleanExpr::MetricNat, BalleanExpr::AbstractBallean(kappa())]),
        BalleanExpr::BProduct(fin(), rays()),
        BalleanExpr::BProduct(Bornology::evens_plus(), rays()),
        BalleanExpr::Macrocube(fin()),
        BalleanExpr::Bouquet(fin(), rays()),
        BalleanExpr::Bouquet(Bornology::evens_plus(), Box::new(PointedFamily::doubletons())),
        BalleanExpr::Comb {
            handle: Box::new(BalleanExpr::MetricNat),
            teeth: SetExpr::generator("pow4").expect("builtin"),
            spines: rays(),
        },
        BalleanExpr::Discrete(fin()),
        BalleanExpr::Discrete(Bornology::intervals()),
        BalleanExpr::Antidiscrete(fin()),
        BalleanExpr::Antidiscrete(Bornology::product(kappa(), fin())),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_HORIZON as H;

    #[test]
    fn corpus_is_consistent() {
        for e in corpus() {
            let r = cross_validate(&e, H).unwrap();
            assert_eq!(r.inconsistencies(), 0, "{r}");
        }
    }

    #[test]
    fn both_directions_of_the_b_product_equivalence() {
        let c = corpus();
        let yes = cross_validate(&c[2], H).unwrap();
        let no = cross_validate(&c[3], H).unwrap();
        let metr = |r: &CrossReport| r.checks.iter().find(|k| k.property == Property::Metrizable).cloned().unwrap();
        assert_eq!(metr(&yes).rule.value, Tri::True);
        assert_eq!(metr(&yes).status, Status::Confirmed);
        assert_eq!(metr(&no).rule.value, Tri::False);
        assert_eq!(metr(&no).status, Status::Confirmed);
    }
}
