//! Typed readers from syntax trees to library values.

use std::collections::BTreeMap;
use std::fmt;

use crate::analysis::{SlowFunction, Value};
use crate::bornology::{Bornology, SymCard};
use crate::coarse::Entourage;
use crate::constructions::{doubling, BalleanExpr, PointedFamily};
use crate::groundsets::{Element, GroundSet, Generator, Periodic, SetExpr};
use crate::Result;

use super::sexpr::Sexp;

/// A map into `[0, 1]` given by formula or by pieces.
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionExpr {
    Parity,
    LogWave,
    Indicator(SetExpr),
    /// `d(x, Y) / (d(x, Y) + d(x, Z))`.
    Ratio(SetExpr, SetExpr),
    /// The value of the first piece containing the point, else the default.
    Piecewise(Vec<(SetExpr, Value)>, Value),
}

impl FunctionExpr {
    pub fn to_slow(&self, horizon: u64) -> SlowFunction {
        match self {
            FunctionExpr::Parity => SlowFunction::parity(),
            FunctionExpr::LogWave => SlowFunction::log_wave(),
            FunctionExpr::Indicator(s) => SlowFunction::indicator(s),
            FunctionExpr::Ratio(y, z) => SlowFunction::distance_ratio(y, z, horizon),
            FunctionExpr::Piecewise(pieces, default) => {
                let (pieces, default) = (pieces.clone(), *default);
                SlowFunction::new(self.to_string(), move |x| {
                    pieces.iter().find(|(s, _)| s.has(x)).map_or(default, |(_, v)| *v)
                })
            }
        }
    }
}

impl fmt::Display for FunctionExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionExpr::Parity => write!(f, "(parity)"),
            FunctionExpr::LogWave => write!(f, "(log-wave)"),
            FunctionExpr::Indicator(s) => write!(f, "(indicator {s})"),
            FunctionExpr::Ratio(y, z) => write!(f, "(ratio {y} {z})"),
            FunctionExpr::Piecewise(pieces, default) => {
                write!(f, "(piecewise")?;
                for (s, v) in pieces {
                    write!(f, " ({s} {v})")?;
                }
                write!(f, " (else {default}))")
            }
        }
    }
}

/// A declared value.
#[derive(Debug, Clone)]
pub enum Decl {
    Set(SetExpr),
    Bornology(Bornology),
    Ballean(BalleanExpr),
    Family(PointedFamily),
    Entourage(Entourage),
    Function(FunctionExpr),
}

impl Decl {
    pub fn kind(&self) -> Kind {
        match self {
            Decl::Set(_) => Kind::Set,
            Decl::Bornology(_) => Kind::Bornology,
            Decl::Ballean(_) => Kind::Ballean,
            Decl::Family(_) => Kind::Family,
            Decl::Entourage(_) => Kind::Entourage,
            Decl::Function(_) => Kind::Function,
        }
    }
}

impl fmt::Display for Decl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decl::Set(s) => write!(f, "{s}"),
            Decl::Bornology(b) => write!(f, "{b}"),
            Decl::Ballean(x) => write!(f, "{x}"),
            Decl::Family(p) => write!(f, "{p}"),
            Decl::Entourage(e) => write!(f, "{e}"),
            Decl::Function(g) => write!(f, "{g}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Set,
    Bornology,
    Ballean,
    Family,
    Entourage,
    Function,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Set => "set",
            Kind::Bornology => "bornology",
            Kind::Ballean => "ballean",
            Kind::Family => "pointed family",
            Kind::Entourage => "entourage",
            Kind::Function => "function",
        })
    }
}

const SET_LABELS: &[&str] = &["set", "periodic", "ap", "interval", "gen", "union", "inter", "complement", "rect", "tag", "all"];
const BORNOLOGY_LABELS: &[&str] = &["finite-subsets", "chain", "powerset", "explicit", "abstract", "induced"];
const BALLEAN_LABELS: &[&str] = &[
    "metric-nat", "points", "down", "up", "abstract-ballean", "b-product", "macrocube", "bouquet", "comb", "sub",
];
const FAMILY_LABELS: &[&str] = &["rays", "doubletons", "family"];
const ENTOURAGE_LABELS: &[&str] = &["diagonal", "radius", "pairs", "ballmap", "block", "union-ent", "compose", "power", "restrict"];
const FUNCTION_LABELS: &[&str] = &["parity", "log-wave", "indicator", "ratio", "piecewise"];

/// Resolves names against the declarations seen so far.
pub struct Reader<'a> {
    pub env: &'a BTreeMap<String, Decl>,
}

fn arity(s: &Sexp, args: &[Sexp], lo: usize, hi: usize) -> Result<()> {
    if args.len() < lo || args.len() > hi {
        let (head, _) = s.node().unwrap_or(("?", &[]));
        let want = if lo == hi { lo.to_string() } else if hi == usize::MAX { format!("at least {lo}") } else { format!("{lo} to {hi}") };
        return Err(s.error(format!("arity mismatch: ({head} ..) takes {want} arguments, got {}", args.len())));
    }
    Ok(())
}

pub fn number(s: &Sexp) -> Result<u64> {
    s.atom()
        .and_then(|a| a.parse().ok())
        .ok_or_else(|| s.error(format!("expected a natural number, found {s}")))
}

fn numbers(s: &Sexp) -> Result<Vec<u64>> {
    match s {
        Sexp::List(items, _) => items.iter().map(number).collect(),
        _ => Err(s.error("expected a list of naturals")),
    }
}

pub fn value(s: &Sexp) -> Result<Value> {
    s.atom()
        .and_then(|a| a.parse::<Value>().ok())
        .ok_or_else(|| s.error(format!("expected a rational p/q, found {s}")))
}

fn card(s: &Sexp) -> Result<SymCard> {
    let a = s.atom().ok_or_else(|| s.error("expected a cardinal"))?;
    Ok(match a {
        "aleph0" | "omega" => SymCard::Aleph0,
        "aleph1+" => SymCard::AtLeastAleph1,
        _ if a.chars().all(|c| c.is_ascii_digit()) => SymCard::Fin(number(s)?),
        _ => match a.strip_suffix('+') {
            Some(name) if !name.is_empty() => SymCard::declared(name, true),
            _ => SymCard::declared(a, false),
        },
    })
}

pub fn ground(s: &Sexp) -> Result<GroundSet> {
    if let Some(a) = s.atom() {
        return match a {
            "nat" | "omega" => Ok(GroundSet::Naturals),
            _ => Err(s.error(format!("unknown ground set {a}"))),
        };
    }
    let (head, args) = s.node().ok_or_else(|| s.error("expected a ground set"))?;
    Ok(match head {
        "points" => {
            arity(s, args, 1, 1)?;
            GroundSet::FinitePoints(number(&args[0])?)
        }
        "tuple" => GroundSet::TupleSpace(args.iter().map(ground).collect::<Result<_>>()?),
        "tagged" => GroundSet::TaggedUnion(args.iter().map(ground).collect::<Result<_>>()?),
        "wedge" | "finsupp" => {
            arity(s, args, 3, 3)?;
            let (index, other, basepoint) = (Box::new(ground(&args[0])?), Box::new(ground(&args[1])?), element(&args[2])?);
            if head == "wedge" {
                GroundSet::Wedge { index, spine: other, basepoint }
            } else {
                GroundSet::FinSupp { index, factor: other, basepoint }
            }
        }
        _ => return Err(s.error(format!("unknown node label {head} for a ground set"))),
    })
}

pub fn element(s: &Sexp) -> Result<Element> {
    if let Some(a) = s.atom() {
        return if a == "e" { Ok(Element::Base) } else { Ok(Element::Nat(number(s)?)) };
    }
    let (head, args) = s.node().ok_or_else(|| s.error("expected an element"))?;
    Ok(match head {
        "pt" => Element::Tuple(args.iter().map(element).collect::<Result<_>>()?),
        "tag" => {
            arity(s, args, 2, 2)?;
            Element::tagged(number(&args[0])?, element(&args[1])?)
        }
        "supp" => {
            let mut coords = Vec::new();
            for c in args {
                match c {
                    Sexp::List(xs, _) if xs.len() == 2 => coords.push((number(&xs[0])?, element(&xs[1])?)),
                    _ => return Err(c.error("expected (index coordinate)")),
                }
            }
            coords.sort();
            Element::Sparse(coords)
        }
        _ => return Err(s.error(format!("unknown node label {head} for an element"))),
    })
}

impl Reader<'_> {
    /// The kind an expression would have, judged by its head or its name.
    pub fn kind_of(&self, s: &Sexp) -> Result<Kind> {
        if let Some(a) = s.atom() {
            return self
                .env
                .get(a)
                .map(Decl::kind)
                .ok_or_else(|| s.error(format!("unresolved name {a}")));
        }
        let (head, args) = s.node().ok_or_else(|| s.error("expected a labeled node"))?;
        let table: [(&[&str], Kind); 6] = [
            (SET_LABELS, Kind::Set),
            (BORNOLOGY_LABELS, Kind::Bornology),
            (BALLEAN_LABELS, Kind::Ballean),
            (FAMILY_LABELS, Kind::Family),
            (ENTOURAGE_LABELS, Kind::Entourage),
            (FUNCTION_LABELS, Kind::Function),
        ];
        if head == "product" {
            return match args.first() {
                Some(a) if self.kind_of(a)? == Kind::Bornology => Ok(Kind::Bornology),
                _ => Ok(Kind::Ballean),
            };
        }
        table
            .iter()
            .find(|(labels, _)| labels.contains(&head))
            .map(|(_, k)| *k)
            .ok_or_else(|| s.error(format!("unknown node label {head}")))
    }

    pub fn decl(&self, s: &Sexp) -> Result<Decl> {
        Ok(match self.kind_of(s)? {
            Kind::Set => Decl::Set(self.set(s)?),
            Kind::Bornology => Decl::Bornology(self.bornology(s)?),
            Kind::Ballean => Decl::Ballean(self.ballean(s)?),
            Kind::Family => Decl::Family(self.family(s)?),
            Kind::Entourage => Decl::Entourage(self.entourage(s)?),
            Kind::Function => Decl::Function(self.function(s)?),
        })
    }

    fn named(&self, s: &Sexp, want: Kind) -> Result<Option<&Decl>> {
        let Some(a) = s.atom() else { return Ok(None) };
        let d = self.env.get(a).ok_or_else(|| s.error(format!("unresolved name {a}")))?;
        if d.kind() != want {
            return Err(s.error(format!("{a} is a {}, expected a {want}", d.kind())));
        }
        Ok(Some(d))
    }

    fn node<'s>(&self, s: &'s Sexp, want: Kind) -> Result<(&'s str, &'s [Sexp])> {
        s.node().ok_or_else(|| s.error(format!("expected a {want}")))
    }

    pub fn set(&self, s: &Sexp) -> Result<SetExpr> {
        if let Some(Decl::Set(x)) = self.named(s, Kind::Set)? {
            return Ok(x.clone());
        }
        let (head, args) = self.node(s, Kind::Set)?;
        let sets = |xs: &[Sexp]| xs.iter().map(|x| self.set(x)).collect::<Result<Vec<_>>>();
        Ok(match head {
            "set" => SetExpr::Finite(args.iter().map(element).collect::<Result<_>>()?),
            "periodic" => {
                arity(s, args, 4, 4)?;
                let p = Periodic::new(numbers(&args[3])?, number(&args[0])?, numbers(&args[1])?, number(&args[2])?)
                    .ok_or_else(|| s.error("malformed periodic set"))?;
                SetExpr::Periodic(p)
            }
            "ap" => match args {
                [k1, p, k2, r] if k1.atom() == Some("period") && k2.atom() == Some("residue") => {
                    let (p, r) = (number(p)?, number(r)?);
                    if p == 0 || r >= p {
                        return Err(s.error("residue must lie below a positive period"));
                    }
                    SetExpr::progression(p, r)
                }
                _ => return Err(s.error("expected (ap period p residue r)")),
            },
            "interval" => {
                arity(s, args, 2, 2)?;
                SetExpr::interval(number(&args[0])?, number(&args[1])?)
            }
            "gen" => SetExpr::Sparse(self.generator(s, args)?),
            "union" => SetExpr::Union(sets(args)?),
            "inter" => SetExpr::Intersection(sets(args)?),
            "rect" => SetExpr::Rectangle(sets(args)?),
            "complement" => {
                arity(s, args, 1, 1)?;
                SetExpr::Complement(Box::new(self.set(&args[0])?))
            }
            "tag" => {
                arity(s, args, 2, 2)?;
                SetExpr::Tagged(number(&args[0])?, Box::new(self.set(&args[1])?))
            }
            "all" => {
                arity(s, args, 0, 0)?;
                SetExpr::All
            }
            _ => return Err(s.error(format!("unknown node label {head} for a set"))),
        })
    }

    fn generator(&self, s: &Sexp, args: &[Sexp]) -> Result<Generator> {
        let name = args.first().and_then(Sexp::atom).ok_or_else(|| s.error("expected (gen name ..)"))?;
        let g = match name {
            "geometric" => {
                arity(s, args, 4, 4)?;
                Generator::geometric(number(&args[1])?, number(&args[2])?, number(&args[3])?)
            }
            "poly" => {
                arity(s, args, 4, 4)?;
                let k = u32::try_from(number(&args[2])?).map_err(|_| args[2].error("degree too large"))?;
                Generator::polynomial(number(&args[1])?, k, number(&args[3])?)
            }
            _ => {
                arity(s, args, 1, 1)?;
                Generator::builtin(name)
            }
        };
        g.ok_or_else(|| s.error(format!("unknown or degenerate generator {name}")))
    }

    pub fn bornology(&self, s: &Sexp) -> Result<Bornology> {
        if let Some(Decl::Bornology(b)) = self.named(s, Kind::Bornology)? {
            return Ok(b.clone());
        }
        let (head, args) = self.node(s, Kind::Bornology)?;
        let ground_arg = |args: &[Sexp]| -> Result<GroundSet> {
            arity(s, args, 0, 1)?;
            args.first().map_or(Ok(GroundSet::Naturals), ground)
        };
        Ok(match head {
            "finite-subsets" => Bornology::finite_subsets(ground_arg(args)?),
            "powerset" => Bornology::powerset(ground_arg(args)?),
            "chain" => {
                arity(s, args, 1, 1)?;
                let name = args[0].atom().unwrap_or_default();
                Bornology::builtin_chain(name).ok_or_else(|| args[0].error(format!("unknown chain {}", args[0])))?
            }
            "explicit" => Bornology::explicit(GroundSet::Naturals, args.iter().map(|x| self.set(x)).collect::<Result<_>>()?),
            "abstract" => self.abstract_bornology(s, args)?,
            "product" => {
                arity(s, args, 2, 2)?;
                Bornology::product(self.bornology(&args[0])?, self.bornology(&args[1])?)
            }
            "induced" => {
                arity(s, args, 2, 2)?;
                self.bornology(&args[0])?.induced(self.set(&args[1])?)
            }
            _ => return Err(s.error(format!("unknown node label {head} for a bornology"))),
        })
    }

    fn abstract_bornology(&self, s: &Sexp, args: &[Sexp]) -> Result<Bornology> {
        let mut cards: [Option<SymCard>; 3] = [None, None, None];
        let mut unbounded = true;
        let mut i = 0;
        while i < args.len() {
            let slot = match args[i].atom() {
                Some(":add") => 0,
                Some(":cov") => 1,
                Some(":cof") => 2,
                Some(":bounded") => {
                    unbounded = false;
                    i += 1;
                    continue;
                }
                _ => return Err(args[i].error(format!("unexpected {} in abstract bornology", args[i]))),
            };
            let c = args.get(i + 1).ok_or_else(|| args[i].error("missing cardinal"))?;
            cards[slot] = Some(card(c)?);
            i += 2;
        }
        let [Some(add), Some(cov), Some(cof)] = cards else {
            return Err(s.error("abstract bornology needs :add, :cov and :cof"));
        };
        Bornology::declare(GroundSet::Naturals, add, cov, cof, unbounded).map_err(|e| s.error(e.to_string()))
    }

    pub fn family(&self, s: &Sexp) -> Result<PointedFamily> {
        if let Some(Decl::Family(p)) = self.named(s, Kind::Family)? {
            return Ok(p.clone());
        }
        let (head, args) = self.node(s, Kind::Family)?;
        Ok(match head {
            "rays" => {
                arity(s, args, 0, 0)?;
                PointedFamily::rays()
            }
            "doubletons" => {
                arity(s, args, 0, 0)?;
                PointedFamily::doubletons()
            }
            "family" => {
                arity(s, args, 2, 2)?;
                PointedFamily {
                    member: self.ballean(&args[0])?,
                    basepoint: element(&args[1])?,
                }
            }
            _ => return Err(s.error(format!("unknown node label {head} for a pointed family"))),
        })
    }

    pub fn ballean(&self, s: &Sexp) -> Result<BalleanExpr> {
        if let Some(Decl::Ballean(x)) = self.named(s, Kind::Ballean)? {
            return Ok(x.clone());
        }
        let (head, args) = self.node(s, Kind::Ballean)?;
        let one = |args: &[Sexp]| -> Result<Bornology> {
            arity(s, args, 1, 1)?;
            self.bornology(&args[0])
        };
        let two = |args: &[Sexp]| -> Result<(Bornology, Box<PointedFamily>)> {
            arity(s, args, 2, 2)?;
            Ok((self.bornology(&args[0])?, Box::new(self.family(&args[1])?)))
        };
        Ok(match head {
            "metric-nat" => {
                arity(s, args, 0, 0)?;
                BalleanExpr::MetricNat
            }
            "points" => {
                arity(s, args, 1, 1)?;
                BalleanExpr::Points(number(&args[0])?)
            }
            "down" => BalleanExpr::Discrete(one(args)?),
            "up" => BalleanExpr::Antidiscrete(one(args)?),
            "abstract-ballean" => BalleanExpr::AbstractBallean(one(args)?),
            "macrocube" => BalleanExpr::Macrocube(one(args)?),
            "b-product" => {
                let (b, f) = two(args)?;
                BalleanExpr::BProduct(b, f)
            }
            "bouquet" => {
                let (b, f) = two(args)?;
                BalleanExpr::Bouquet(b, f)
            }
            "product" => {
                arity(s, args, 1, usize::MAX)?;
                BalleanExpr::Product(args.iter().map(|x| self.ballean(x)).collect::<Result<_>>()?)
            }
            "comb" => {
                arity(s, args, 3, 3)?;
                BalleanExpr::Comb {
                    handle: Box::new(self.ballean(&args[0])?),
                    teeth: self.set(&args[1])?,
                    spines: Box::new(self.family(&args[2])?),
                }
            }
            "sub" => {
                arity(s, args, 2, 2)?;
                BalleanExpr::Subballean(Box::new(self.ballean(&args[0])?), self.set(&args[1])?)
            }
            _ => return Err(s.error(format!("unknown node label {head} for a ballean"))),
        })
    }

    pub fn entourage(&self, s: &Sexp) -> Result<Entourage> {
        if let Some(Decl::Entourage(e)) = self.named(s, Kind::Entourage)? {
            return Ok(e.clone());
        }
        let (head, args) = self.node(s, Kind::Entourage)?;
        let fail = |e: crate::Error| s.error(e.to_string());
        Ok(match head {
            "diagonal" => {
                arity(s, args, 0, 0)?;
                Entourage::diagonal(GroundSet::Naturals)
            }
            "radius" => {
                arity(s, args, 1, 1)?;
                Entourage::metric(number(&args[0])?)
            }
            "pairs" => {
                let mut pairs = Vec::new();
                for p in args {
                    match p {
                        Sexp::List(xs, _) if xs.len() == 2 => pairs.push((element(&xs[0])?, element(&xs[1])?)),
                        _ => return Err(p.error("expected (x y)")),
                    }
                }
                Entourage::finite(GroundSet::Naturals, pairs)
            }
            "ballmap" => match args {
                [n] if n.atom() == Some("doubling") => doubling(),
                [n] if n.atom() == Some("successor") => Entourage::successor(),
                _ => return Err(s.error("expected (ballmap doubling) or (ballmap successor)")),
            },
            "block" => {
                arity(s, args, 1, 1)?;
                Entourage::block(GroundSet::Naturals, self.set(&args[0])?)
            }
            "union-ent" => {
                arity(s, args, 1, usize::MAX)?;
                let parts: Vec<Entourage> = args.iter().map(|x| self.entourage(x)).collect::<Result<_>>()?;
                Entourage::union(parts[0].ground.clone(), parts)
            }
            "compose" => {
                arity(s, args, 2, 2)?;
                self.entourage(&args[0])?.compose(&self.entourage(&args[1])?).map_err(fail)?
            }
            "power" => {
                arity(s, args, 2, 2)?;
                let k = u32::try_from(number(&args[1])?).map_err(|_| args[1].error("exponent too large"))?;
                self.entourage(&args[0])?.power(k)
            }
            "restrict" => {
                arity(s, args, 2, 2)?;
                self.entourage(&args[0])?.restrict(self.set(&args[1])?)
            }
            _ => return Err(s.error(format!("unknown node label {head} for an entourage"))),
        })
    }

    pub fn function(&self, s: &Sexp) -> Result<FunctionExpr> {
        if let Some(Decl::Function(g)) = self.named(s, Kind::Function)? {
            return Ok(g.clone());
        }
        let (head, args) = self.node(s, Kind::Function)?;
        Ok(match head {
            "parity" => {
                arity(s, args, 0, 0)?;
                FunctionExpr::Parity
            }
            "log-wave" => {
                arity(s, args, 0, 0)?;
                FunctionExpr::LogWave
            }
            "indicator" => {
                arity(s, args, 1, 1)?;
                FunctionExpr::Indicator(self.set(&args[0])?)
            }
            "ratio" => {
                arity(s, args, 2, 2)?;
                FunctionExpr::Ratio(self.set(&args[0])?, self.set(&args[1])?)
            }
            "piecewise" => {
                let mut pieces = Vec::new();
                let mut default = None;
                for p in args {
                    match p {
                        Sexp::List(xs, _) if xs.len() == 2 && xs[0].atom() == Some("else") => default = Some(value(&xs[1])?),
                        Sexp::List(xs, _) if xs.len() == 2 && default.is_none() => pieces.push((self.set(&xs[0])?, value(&xs[1])?)),
                        _ => return Err(p.error("expected (set value) pieces ending with (else value)")),
                    }
                }
                let default = default.ok_or_else(|| s.error("piecewise function needs an (else value) piece"))?;
                let unit = Value::from_integer(1);
                if default > unit || pieces.iter().any(|(_, v)| *v > unit) {
                    return Err(s.error("function values must lie in [0, 1]"));
                }
                FunctionExpr::Piecewise(pieces, default)
            }
            _ => return Err(s.error(format!("unknown node label {head} for a function"))),
        })
    }
}
