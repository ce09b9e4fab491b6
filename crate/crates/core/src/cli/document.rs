//! Instance documents: named declarations followed by directives.

use std::collections::BTreeMap;
use std::fmt;

use crate::Result;

use super::reader::{number, Decl, Kind, Reader};
use super::sexpr::{read_all, Pos, Sexp};

/// The commands a directive can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Check,
    Infer,
    Separate,
    Invariants,
    EnumerateFinite,
    CrossValidate,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::Check,
        Command::Infer,
        Command::Separate,
        Command::Invariants,
        Command::EnumerateFinite,
        Command::CrossValidate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Infer => "infer",
            Command::Separate => "separate",
            Command::Invariants => "invariants",
            Command::EnumerateFinite => "enumerate-finite",
            Command::CrossValidate => "cross-validate",
        }
    }

    pub fn parse(s: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == s)
    }
}

/// A directive argument: a declared name or an inline expression.
#[derive(Debug, Clone)]
pub struct Arg {
    pub name: Option<String>,
    pub value: Decl,
}

impl Arg {
    /// The label used in reports.
    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| self.value.to_string())
    }
}

impl fmt::Display for Arg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Debug, Clone)]
pub struct Directive {
    pub command: Command,
    /// The predicate of `check`, the point count of `enumerate-finite`.
    pub word: Option<String>,
    pub args: Vec<Arg>,
    /// The ambient ballean given by `:space`.
    pub space: Option<Arg>,
    pub pos: Pos,
}

impl fmt::Display for Directive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.command.name())?;
        if let Some(w) = &self.word {
            write!(f, " {w}")?;
        }
        for a in &self.args {
            write!(f, " {a}")?;
        }
        if let Some(s) = &self.space {
            write!(f, " :space {s}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone)]
pub enum Item {
    Def(String, Decl),
    Directive(Directive),
}

/// A parsed instance file.
#[derive(Debug, Clone, Default)]
pub struct InstanceDocument {
    pub items: Vec<Item>,
}

impl InstanceDocument {
    pub fn declarations(&self) -> impl Iterator<Item = (&str, &Decl)> {
        self.items.iter().filter_map(|i| match i {
            Item::Def(n, d) => Some((n.as_str(), d)),
            Item::Directive(_) => None,
        })
    }

    pub fn directives(&self) -> impl Iterator<Item = &Directive> {
        self.items.iter().filter_map(|i| match i {
            Item::Directive(d) => Some(d),
            Item::Def(..) => None,
        })
    }

    pub fn get(&self, name: &str) -> Option<&Decl> {
        self.declarations().find(|(n, _)| *n == name).map(|(_, d)| d)
    }

    /// Canonical text: one item per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for item in &self.items {
            match item {
                Item::Def(n, d) => out.push_str(&format!("(def {n} {d})\n")),
                Item::Directive(d) => out.push_str(&format!("{d}\n")),
            }
        }
        out
    }
}

fn is_name(a: &str) -> bool {
    a.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_') && a.chars().all(|c| c.is_alphanumeric() || "_-'".contains(c))
}

/// Parses a document. Declarations may only refer to earlier names.
pub fn parse(text: &str) -> Result<InstanceDocument> {
    let mut env: BTreeMap<String, Decl> = BTreeMap::new();
    let mut doc = InstanceDocument::default();
    for form in read_all(text)? {
        let (head, args) = form.node().ok_or_else(|| form.error("expected (def ..) or a directive"))?;
        if head == "def" {
            let [name, expr] = args else {
                return Err(form.error(format!("arity mismatch: (def name expr) takes 2 arguments, got {}", args.len())));
            };
            let n = name.atom().filter(|a| is_name(a)).ok_or_else(|| name.error(format!("invalid name {name}")))?;
            if env.contains_key(n) {
                return Err(name.error(format!("{n} is already declared")));
            }
            let decl = Reader { env: &env }.decl(expr)?;
            type_check(&decl, expr)?;
            env.insert(n.to_string(), decl.clone());
            doc.items.push(Item::Def(n.to_string(), decl));
        } else {
            let command = Command::parse(head).ok_or_else(|| form.error(format!("unknown node label {head}")))?;
            doc.items.push(Item::Directive(directive(command, &form, args, &env)?));
        }
    }
    Ok(doc)
}

/// Balleans are built once so that ground mismatches surface at their
/// declaration.
fn type_check(d: &Decl, at: &Sexp) -> Result<()> {
    match d {
        Decl::Ballean(x) => x.build().map(drop).map_err(|e| at.error(e.to_string())),
        Decl::Family(p) => p.build().map(drop).map_err(|e| at.error(e.to_string())),
        _ => Ok(()),
    }
}

fn arg(env: &BTreeMap<String, Decl>, s: &Sexp) -> Result<Arg> {
    let value = Reader { env }.decl(s)?;
    type_check(&value, s)?;
    Ok(Arg {
        name: s.atom().map(str::to_string),
        value,
    })
}

fn directive(command: Command, form: &Sexp, args: &[Sexp], env: &BTreeMap<String, Decl>) -> Result<Directive> {
    let mut rest = args;
    let mut space = None;
    if let Some(i) = rest.iter().position(|a| a.atom() == Some(":space")) {
        let s = rest.get(i + 1).ok_or_else(|| rest[i].error("missing ballean after :space"))?;
        if rest.len() != i + 2 {
            return Err(rest[i + 2].error("unexpected argument after :space"));
        }
        let a = arg(env, s)?;
        if a.value.kind() != Kind::Ballean {
            return Err(s.error(format!(":space expects a ballean, found a {}", a.value.kind())));
        }
        space = Some(a);
        rest = &rest[..i];
    }
    let mut word = None;
    match command {
        Command::Check => {
            let (w, tail) = rest.split_first().ok_or_else(|| form.error("check needs a predicate"))?;
            word = Some(w.atom().ok_or_else(|| w.error("expected a predicate name"))?.to_string());
            rest = tail;
        }
        Command::EnumerateFinite => {
            let [n] = rest else {
                return Err(form.error("arity mismatch: enumerate-finite takes 1 argument"));
            };
            word = Some(number(n)?.to_string());
            rest = &[];
        }
        Command::CrossValidate if rest.len() == 1 && rest[0].atom() == Some("corpus") && !env.contains_key("corpus") => {
            word = Some("corpus".into());
            rest = &[];
        }
        _ => {}
    }
    Ok(Directive {
        command,
        word,
        args: rest.iter().map(|s| arg(env, s)).collect::<Result<_>>()?,
        space,
        pos: form.pos(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;

    #[test]
    fn declarations_of_each_kind() {
        let doc = parse("(def Y (gen pow4)) (def Z (gen two-pow4))").unwrap();
        assert!(matches!(doc.get("Y"), Some(Decl::Set(_))));
        let doc = parse("(def B (finite-subsets))(def X (down B))").unwrap();
        assert_eq!(doc.get("X").unwrap().to_string(), "(down (finite-subsets))");
        let doc = parse("(def X (comb (metric-nat) (gen pow2) (rays)))").unwrap();
        assert!(matches!(doc.get("X"), Some(Decl::Ballean(_))));
    }

    #[test]
    fn products_are_classified_by_their_factors() {
        let doc = parse("(def K (abstract :add aleph0 :cov aleph0 :cof k+)) (def P (product K (finite-subsets)))").unwrap();
        assert!(matches!(doc.get("P"), Some(Decl::Bornology(_))));
        let doc = parse("(def P (product (metric-nat) (metric-nat)))").unwrap();
        assert!(matches!(doc.get("P"), Some(Decl::Ballean(_))));
    }

    fn parse_error(text: &str) -> (usize, usize, String) {
        match parse(text) {
            Err(Error::Parse { line, column, message }) => (line, column, message),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn errors_carry_positions() {
        let (l, c, m) = parse_error("(def X (down B))");
        assert_eq!((l, c), (1, 14));
        assert!(m.contains("unresolved name B"), "{m}");
        let (l, c, m) = parse_error("(def Y (gen pow4))\n(def X (frobnicate Y))");
        assert_eq!((l, c), (2, 8));
        assert!(m.contains("unknown node label"), "{m}");
        let (_, _, m) = parse_error("(def X (down))");
        assert!(m.contains("arity mismatch"), "{m}");
    }

    #[test]
    fn no_forward_references() {
        let (_, _, m) = parse_error("(def X (down B)) (def B (finite-subsets))");
        assert!(m.contains("unresolved name B"));
    }

    #[test]
    fn directives_keep_names() {
        let doc = parse("(def Y (gen pow4)) (def Z (gen two-pow4)) (check asymptotically-disjoint Y Z :space (metric-nat))").unwrap();
        let d = doc.directives().next().unwrap();
        assert_eq!(d.to_string(), "(check asymptotically-disjoint Y Z :space (metric-nat))");
        assert_eq!(d.args.len(), 2);
    }

    #[test]
    fn render_then_parse_is_stable() {
        let text = "(def B (finite-subsets omega))\n(def F (piecewise ((ap period 2 residue 0) 1/2) (else 1)))\n\
                    (def X (bouquet B (family (metric-nat) 0)))\n(infer X)\n(enumerate-finite 3)\n(cross-validate corpus)\n";
        let once = parse(text).unwrap().render();
        assert_eq!(parse(&once).unwrap().render(), once);
    }
}
