//! Directive execution and report rendering.

use std::fmt::Write as _;

use crate::analysis::{
    asymptotically_disjoint, asymptotically_separated, cross_validate, corpus, eps_grid, executable, infer_properties,
    is_asymptotic_neighbourhood, oscillation_grid, synthesize_separator, Property, Status, Tri, Value,
};
use crate::bornology::Bornology;
use crate::coarse::{enumerate_structures, is_bounded, is_connected, is_large, CoarsePresentation, Entourage, Relation};
use crate::constructions::BalleanExpr;
use crate::groundsets::{SetExpr, Verdict};
use crate::{Error, Result, DEFAULT_HORIZON};

use super::document::{Arg, Command, Directive, InstanceDocument};
use super::reader::{Decl, FunctionExpr};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Plain,
    /// `name<TAB>property<TAB>verdict` per record.
    Lines,
}

#[derive(Debug, Clone)]
pub struct Options {
    pub horizon: u64,
    /// Overrides the default eps grid.
    pub eps: Option<Value>,
    /// Registered with every largest-structure node.
    pub witnesses: Vec<Entourage>,
    pub format: Format,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            horizon: DEFAULT_HORIZON,
            eps: None,
            witnesses: Vec::new(),
            format: Format::Plain,
        }
    }
}

impl Options {
    fn grid(&self) -> Vec<Value> {
        match self.eps {
            Some(e) => vec![e],
            None => eps_grid().to_vec(),
        }
    }
}

/// How a record counts towards the exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    True,
    False,
    Unknown,
    Error,
    /// Informational lines such as counts and cardinals.
    Info,
}

impl Outcome {
    fn of(v: &Verdict) -> Self {
        match v {
            Verdict::True => Outcome::True,
            Verdict::False(_) => Outcome::False,
            Verdict::Unknown(_) => Outcome::Unknown,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Record {
    pub name: String,
    pub property: String,
    pub outcome: Outcome,
    /// The verdict as printed, with its witness or citation.
    pub text: String,
    /// Whether plain output repeats the name before the property.
    pub show_name: bool,
}

impl Record {
    fn new(name: impl Into<String>, property: impl Into<String>, outcome: Outcome, text: impl Into<String>) -> Self {
        Record {
            name: name.into(),
            property: property.into(),
            outcome,
            text: text.into(),
            show_name: false,
        }
    }

    fn verdict(name: impl Into<String>, property: impl Into<String>, v: &Verdict) -> Self {
        Record::new(name, property, Outcome::of(v), v.to_string())
    }

    fn error(name: impl Into<String>, property: impl Into<String>, e: &Error) -> Self {
        Record::new(name, property, Outcome::Error, format!("ERROR ({e})"))
    }

    fn short(&self) -> &str {
        match self.outcome {
            Outcome::True => "TRUE",
            Outcome::False => "FALSE",
            Outcome::Unknown => "UNKNOWN",
            Outcome::Error => "ERROR",
            Outcome::Info => &self.text,
        }
    }
}

/// The result of one directive: verdict records, then supporting lines.
#[derive(Debug, Clone)]
pub struct Section {
    pub title: String,
    pub records: Vec<Record>,
    pub details: Vec<String>,
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub sections: Vec<Section>,
}

impl Report {
    pub fn records(&self) -> impl Iterator<Item = &Record> {
        self.sections.iter().flat_map(|s| &s.records)
    }

    /// 3 on any error, else 1 on any False, else 2 on any Unknown, else 0.
    pub fn exit_code(&self) -> i32 {
        exit_code(self.records().map(|r| r.outcome))
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        for s in &self.sections {
            match format {
                Format::Lines => {
                    for r in &s.records {
                        let _ = writeln!(out, "{}\t{}\t{}", r.name, r.property, r.short());
                    }
                }
                Format::Plain => {
                    if self.sections.len() > 1 {
                        let _ = writeln!(out, "== {}", s.title);
                    }
                    for r in &s.records {
                        if r.outcome == Outcome::Info && r.property == "count" {
                            let _ = writeln!(out, "{}", r.text);
                        } else if r.show_name && !r.name.is_empty() {
                            let _ = writeln!(out, "{} {}: {}", r.property, r.name, r.text);
                        } else {
                            let _ = writeln!(out, "{}: {}", r.property, r.text);
                        }
                    }
                    for d in &s.details {
                        let _ = writeln!(out, "  {d}");
                    }
                }
            }
        }
        out
    }
}

pub fn exit_code(outcomes: impl IntoIterator<Item = Outcome>) -> i32 {
    let all: Vec<Outcome> = outcomes.into_iter().collect();
    if all.contains(&Outcome::Error) {
        3
    } else if all.contains(&Outcome::False) {
        1
    } else if all.contains(&Outcome::Unknown) {
        2
    } else {
        0
    }
}

/// Runs every directive of `doc` in order.
pub fn run(doc: &InstanceDocument, opts: &Options) -> Report {
    Report {
        sections: doc.directives().map(|d| run_directive(d, opts)).collect(),
    }
}

pub fn run_directive(d: &Directive, opts: &Options) -> Section {
    let mut section = Section {
        title: d.to_string(),
        records: Vec::new(),
        details: Vec::new(),
    };
    let result = match d.command {
        Command::Check => check(d, opts, &mut section),
        Command::Infer => infer(d, opts, &mut section),
        Command::Separate => separate(d, opts, &mut section),
        Command::Invariants => invariants(d, opts, &mut section),
        Command::EnumerateFinite => enumerate(d, &mut section),
        Command::CrossValidate => cross(d, opts, &mut section),
    };
    if let Err(e) = result {
        section.records.push(Record::error(subject(d), d.word.clone().unwrap_or_else(|| d.command.name().into()), &e));
    }
    if matches!(d.command, Command::Check | Command::Separate | Command::CrossValidate) {
        for r in &mut section.records {
            r.show_name = true;
        }
    }
    section
}

fn subject(d: &Directive) -> String {
    let names: Vec<String> = d.args.iter().map(Arg::label).collect();
    names.join(" ")
}

fn want_set(a: &Arg) -> Result<SetExpr> {
    match &a.value {
        Decl::Set(s) => Ok(s.clone()),
        d => Err(Error::Precondition(format!("{a} is a {}, expected a set", d.kind()))),
    }
}

fn want_bornology(a: &Arg) -> Result<Bornology> {
    match &a.value {
        Decl::Bornology(b) => Ok(b.clone()),
        d => Err(Error::Precondition(format!("{a} is a {}, expected a bornology", d.kind()))),
    }
}

fn want_ballean(a: &Arg) -> Result<BalleanExpr> {
    match &a.value {
        Decl::Ballean(x) => Ok(x.clone()),
        d => Err(Error::Precondition(format!("{a} is a {}, expected a ballean", d.kind()))),
    }
}

fn want_function(a: &Arg) -> Result<FunctionExpr> {
    match &a.value {
        Decl::Function(g) => Ok(g.clone()),
        d => Err(Error::Precondition(format!("{a} is a {}, expected a function", d.kind()))),
    }
}

fn arity(d: &Directive, n: usize) -> Result<()> {
    if d.args.len() != n {
        return Err(Error::Precondition(format!(
            "{} {} takes {n} arguments, got {}",
            d.command.name(),
            d.word.as_deref().unwrap_or(""),
            d.args.len()
        )));
    }
    Ok(())
}

/// The ambient space: `:space`, else the naturals with their metric.
fn space(d: &Directive, opts: &Options) -> Result<(String, CoarsePresentation)> {
    let e = match &d.space {
        Some(a) => want_ballean(a)?,
        None => BalleanExpr::MetricNat,
    };
    Ok((e.to_string(), e.build_with(&opts.witnesses)?))
}

/// The ballean a structural predicate is about: its one argument, or the space.
fn subject_space(d: &Directive, opts: &Options) -> Result<(String, CoarsePresentation)> {
    match d.args.as_slice() {
        [] => space(d, opts),
        [a] => Ok((a.label(), want_ballean(a)?.build_with(&opts.witnesses)?)),
        _ => arity(d, 1).map(|_| unreachable!()),
    }
}

pub const PREDICATES: &[&str] = &[
    "bounded",
    "large",
    "connected",
    "metrizable",
    "discrete",
    "antidiscrete",
    "ultranormal",
    "asymptotically-disjoint",
    "neighbourhood",
    "separated",
    "slowly-oscillating",
    "bornology",
    "member",
];

fn check(d: &Directive, opts: &Options, out: &mut Section) -> Result<()> {
    let h = opts.horizon;
    let pred = d.word.as_deref().unwrap_or_default();
    let name = subject(d);
    match pred {
        "bounded" | "large" => {
            arity(d, 1)?;
            let y = want_set(&d.args[0])?;
            let (_, x) = space(d, opts)?;
            let v = if pred == "bounded" { is_bounded(&x, &y, h) } else { is_large(&x, &y, h) };
            out.records.push(Record::verdict(name, pred, &v));
        }
        "connected" | "metrizable" | "discrete" | "antidiscrete" | "ultranormal" => {
            let (label, x) = subject_space(d, opts)?;
            let v = match pred {
                "connected" => is_connected(&x, h),
                "antidiscrete" => crate::analysis::is_antidiscrete(&x, &opts.witnesses, h)?,
                "discrete" => crate::analysis::is_discrete(&x, h)?,
                _ => {
                    let p = Property::parse(pred).expect("listed property");
                    executable(p, &x, h).unwrap_or(Verdict::Unknown(h))
                }
            };
            out.records.push(Record::verdict(label, pred, &v));
        }
        "asymptotically-disjoint" | "neighbourhood" => {
            arity(d, 2)?;
            let (y, z) = (want_set(&d.args[0])?, want_set(&d.args[1])?);
            let (_, x) = space(d, opts)?;
            let v = if pred == "neighbourhood" {
                is_asymptotic_neighbourhood(&x, &y, &z, h)
            } else {
                asymptotically_disjoint(&x, &y, &z, h)
            };
            out.records.push(Record::verdict(name, pred, &v));
        }
        "separated" => {
            arity(d, 2)?;
            let (y, z) = (want_set(&d.args[0])?, want_set(&d.args[1])?);
            let (_, x) = space(d, opts)?;
            let s = asymptotically_separated(&x, &y, &z, h);
            out.records.push(Record::verdict(name, pred, &s.verdict));
            if let Some((u, v)) = s.neighbourhoods {
                out.details.push(format!("U = {u}"));
                out.details.push(format!("V = {v}"));
            }
        }
        "slowly-oscillating" => {
            arity(d, 1)?;
            let f = want_function(&d.args[0])?.to_slow(h);
            let (_, x) = space(d, opts)?;
            oscillation_records(&x, &f, &name, opts, out)?;
        }
        "bornology" => {
            arity(d, 1)?;
            let b = want_bornology(&d.args[0])?;
            let r = b.check(h);
            out.records.push(Record::verdict(name, "bornology-axioms", &Verdict::from_bool(r.passes())));
            out.details.extend(r.to_string().lines().map(str::to_string));
        }
        "member" => {
            arity(d, 2)?;
            let b = want_bornology(&d.args[0])?;
            let s = want_set(&d.args[1])?;
            out.records.push(Record::verdict(name, pred, &b.member(&s, h)));
        }
        _ => {
            return Err(Error::Unsupported(format!(
                "unknown predicate {pred}; expected one of {}",
                PREDICATES.join(", ")
            )))
        }
    }
    Ok(())
}

fn oscillation_records(
    x: &CoarsePresentation,
    f: &crate::analysis::SlowFunction,
    name: &str,
    opts: &Options,
    out: &mut Section,
) -> Result<()> {
    let grid = opts.grid();
    for (eps, r) in grid.iter().zip(oscillation_grid(x, f, &grid, opts.horizon)?) {
        out.records.push(Record::verdict(name, format!("slowly-oscillating eps={eps}"), &r.verdict));
        for (i, c) in &r.exceptional {
            if let Some(c) = c {
                out.details.push(format!("eps={eps} index {i}: oscillation up to {c}"));
            }
        }
    }
    Ok(())
}

fn infer(d: &Directive, opts: &Options, out: &mut Section) -> Result<()> {
    arity(d, 1)?;
    let e = want_ballean(&d.args[0])?;
    let report = infer_properties(&e, opts.horizon)?;
    let name = d.args[0].label();
    for (p, f) in &report.findings {
        let outcome = match f.value {
            Tri::True => Outcome::True,
            Tri::False => Outcome::False,
            Tri::Unknown => Outcome::Unknown,
        };
        out.records.push(Record::new(&name, p.name(), outcome, f.to_string()));
    }
    Ok(())
}

fn separate(d: &Directive, opts: &Options, out: &mut Section) -> Result<()> {
    arity(d, 2)?;
    let h = opts.horizon;
    let (y, z) = (want_set(&d.args[0])?, want_set(&d.args[1])?);
    let (_, x) = space(d, opts)?;
    let f = synthesize_separator(&x, &y, &z, h)?;
    let name = subject(d);
    let pts: Vec<_> = x.points_upto(h).collect();
    let zero = Value::from_integer(0);
    let one = Value::from_integer(1);
    let pins = pts.iter().filter(|p| y.has(p)).all(|p| f.eval(p) == zero)
        && pts.iter().filter(|p| z.has(p)).all(|p| f.eval(p) == one);
    out.records.push(Record::verdict(&name, "separates", &Verdict::from_bool(pins)));
    oscillation_records(&x, &f, &name, opts, out)?;
    out.details.push(format!("function: {f} ({})", f.provenance));
    for p in &pts {
        out.details.push(format!("{p}\t{}", f.eval(p)));
    }
    Ok(())
}

fn invariants(d: &Directive, opts: &Options, out: &mut Section) -> Result<()> {
    arity(d, 1)?;
    let b = want_bornology(&d.args[0])?;
    let inv = b.cardinal_invariants(opts.horizon)?;
    let name = d.args[0].label();
    for (k, c) in [("add", &inv.add), ("cov", &inv.cov), ("cof", &inv.cof)] {
        out.records.push(Record::new(&name, k, Outcome::Info, c.to_string()));
    }
    out.records.push(Record::verdict(&name, "add ≤ cov ≤ cof", &Verdict::from_bool(inv.ordered())));
    out.details.extend(inv.trace.iter().map(|t| format!("because {t}")));
    Ok(())
}

/// Largest number of points `enumerate-finite` accepts.
pub const ENUMERATION_CAP: usize = 4;

fn largest(family: &std::collections::BTreeSet<Relation>) -> Option<&Relation> {
    family.iter().max_by_key(|r| r.len())
}

fn enumerate(d: &Directive, out: &mut Section) -> Result<()> {
    let n: usize = d.word.as_deref().and_then(|w| w.parse().ok()).unwrap_or(0);
    if n > ENUMERATION_CAP {
        return Err(Error::Domain(format!("enumeration is limited to {ENUMERATION_CAP} points, got {n}")));
    }
    let all = enumerate_structures(n);
    let count = format!("{} coarse structures", all.len());
    out.records.push(Record::new(format!("{n} points"), "count", Outcome::Info, count));
    for (i, fam) in all.iter().enumerate() {
        if let Some(top) = largest(fam) {
            out.details.push(format!("{i}: largest entourage {top}"));
        }
    }
    Ok(())
}

fn cross(d: &Directive, opts: &Options, out: &mut Section) -> Result<()> {
    let targets = if d.word.as_deref() == Some("corpus") || d.args.is_empty() {
        corpus()
    } else {
        d.args.iter().map(want_ballean).collect::<Result<_>>()?
    };
    let mut total = 0;
    for e in &targets {
        let r = cross_validate(e, opts.horizon)?;
        total += r.inconsistencies();
        for c in &r.checks {
            let outcome = match c.status {
                Status::Confirmed | Status::Unconfirmed => Outcome::True,
                Status::Inconsistent(_) => Outcome::False,
            };
            let text = format!("{} | oracle {} | {}", c.rule, c.oracle, c.status);
            out.records.push(Record::new(r.expr.clone(), c.property.name(), outcome, text));
        }
    }
    out.details.push(format!("instances: {}, inconsistencies: {total}", targets.len()));
    Ok(())
}
