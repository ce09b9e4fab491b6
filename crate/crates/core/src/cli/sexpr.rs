//! Tokenizer and reader for the parenthesized instance syntax.

use std::fmt;

use crate::{Error, Result};

/// A 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl Pos {
    pub fn error(self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Sexp {
    Atom(String, Pos),
    List(Vec<Sexp>, Pos),
}

impl Sexp {
    pub fn pos(&self) -> Pos {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) => *p,
        }
    }

    pub fn atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(a, _) => Some(a),
            Sexp::List(..) => None,
        }
    }

    /// The head label and the arguments of a list node.
    pub fn node(&self) -> Option<(&str, &[Sexp])> {
        match self {
            Sexp::List(items, _) => match items.split_first() {
                Some((Sexp::Atom(h, _), rest)) => Some((h, rest)),
                _ => None,
            },
            Sexp::Atom(..) => None,
        }
    }

    pub fn error(&self, message: impl Into<String>) -> Error {
        self.pos().error(message)
    }
}

/// Structural equality, positions ignored.
impl PartialEq for Sexp {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Sexp::Atom(a, _), Sexp::Atom(b, _)) => a == b,
            (Sexp::List(a, _), Sexp::List(b, _)) => a == b,
            _ => false,
        }
    }
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexp::Atom(a, _) => f.write_str(a),
            Sexp::List(items, _) => {
                write!(f, "(")?;
                for (i, x) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Reads every top-level form. `;` starts a comment running to end of line.
pub fn read_all(text: &str) -> Result<Vec<Sexp>> {
    let mut stack: Vec<(Vec<Sexp>, Pos)> = Vec::new();
    let mut top = Vec::new();
    let mut atom: Option<(String, Pos)> = None;
    let mut pos = Pos { line: 1, column: 1 };
    let mut comment = false;

    let flush = |atom: &mut Option<(String, Pos)>, stack: &mut Vec<(Vec<Sexp>, Pos)>, top: &mut Vec<Sexp>| {
        if let Some((a, p)) = atom.take() {
            match stack.last_mut() {
                Some((items, _)) => items.push(Sexp::Atom(a, p)),
                None => top.push(Sexp::Atom(a, p)),
            }
        }
    };

    for c in text.chars() {
        let here = pos;
        if c == '\n' {
            pos.line += 1;
            pos.column = 1;
        } else {
            pos.column += 1;
        }
        if comment {
            comment = c != '\n';
            continue;
        }
        match c {
            ';' => {
                flush(&mut atom, &mut stack, &mut top);
                comment = true;
            }
            '(' => {
                flush(&mut atom, &mut stack, &mut top);
                stack.push((Vec::new(), here));
            }
            ')' => {
                flush(&mut atom, &mut stack, &mut top);
                let (items, start) = stack.pop().ok_or_else(|| here.error("unbalanced ')'"))?;
                let node = Sexp::List(items, start);
                match stack.last_mut() {
                    Some((items, _)) => items.push(node),
                    None => top.push(node),
                }
            }
            c if c.is_whitespace() => flush(&mut atom, &mut stack, &mut top),
            c => match &mut atom {
                Some((a, _)) => a.push(c),
                None => atom = Some((c.to_string(), here)),
            },
        }
    }
    flush(&mut atom, &mut stack, &mut top);
    if let Some((_, start)) = stack.last() {
        return Err(start.error("unclosed '('"));
    }
    Ok(top)
}

/// Reads exactly one form.
pub fn read_one(text: &str) -> Result<Sexp> {
    let mut all = read_all(text)?;
    match all.len() {
        1 => Ok(all.remove(0)),
        0 => Err(Pos { line: 1, column: 1 }.error("expected an expression")),
        _ => Err(all[1].error("expected a single expression")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_forms_and_comments() {
        let forms = read_all("(def Y (gen pow4)) ; note\n(def Z\n  (gen two-pow4))").unwrap();
        assert_eq!(forms.len(), 2);
        assert_eq!(forms[1].to_string(), "(def Z (gen two-pow4))");
        let (head, args) = forms[1].node().unwrap();
        assert_eq!(head, "def");
        assert_eq!(args[1].pos(), Pos { line: 3, column: 3 });
    }

    #[test]
    fn unbalanced_input_reports_positions() {
        match read_all("(a (b c)\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 1)),
            other => panic!("{other:?}"),
        }
        match read_all("(a))") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 4)),
            other => panic!("{other:?}"),
        }
    }
}
