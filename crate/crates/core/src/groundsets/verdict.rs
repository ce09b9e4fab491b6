use std::fmt;

use super::Element;

/// Evidence attached to a refutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Point(Element),
    Pair(Element, Element),
    Note(String),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Point(x) => write!(f, "{x}"),
            Witness::Pair(x, y) => write!(f, "({x}, {y})"),
            Witness::Note(s) => write!(f, "{s}"),
        }
    }
}

/// Three-valued answer of a decision or semi-decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    True,
    False(Option<Witness>),
    /// Undecided; carries the horizon that was searched.
    Unknown(u64),
}

impl Verdict {
    pub fn falsified(w: Witness) -> Self {
        Verdict::False(Some(w))
    }

    pub fn note(s: impl Into<String>) -> Self {
        Verdict::False(Some(Witness::Note(s.into())))
    }

    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::True
        } else {
            Verdict::False(None)
        }
    }

    pub fn is_true(&self) -> bool {
        matches!(self, Verdict::True)
    }

    pub fn is_false(&self) -> bool {
        matches!(self, Verdict::False(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::False(w) => w.as_ref(),
            _ => None,
        }
    }

    /// Kleene conjunction; the first refutation wins.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (f @ Verdict::False(_), _) | (_, f @ Verdict::False(_)) => f,
            (Verdict::Unknown(h), _) | (_, Verdict::Unknown(h)) => Verdict::Unknown(h),
            _ => Verdict::True,
        }
    }

    /// Kleene disjunction.
    pub fn or(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::True, _) | (_, Verdict::True) => Verdict::True,
            (Verdict::Unknown(h), _) | (_, Verdict::Unknown(h)) => Verdict::Unknown(h),
            (f, _) => f,
        }
    }

    /// Kleene negation; a negated refutation loses its witness.
    pub fn negate(self) -> Verdict {
        match self {
            Verdict::True => Verdict::False(None),
            Verdict::False(_) => Verdict::True,
            u => u,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::True => "TRUE",
            Verdict::False(_) => "FALSE",
            Verdict::Unknown(_) => "UNKNOWN",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::True => write!(f, "TRUE"),
            Verdict::False(None) => write!(f, "FALSE"),
            Verdict::False(Some(w)) => write!(f, "FALSE (witness: {w})"),
            Verdict::Unknown(h) => write!(f, "UNKNOWN (horizon {h})"),
        }
    }
}
