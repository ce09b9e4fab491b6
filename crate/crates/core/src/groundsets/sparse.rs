//! Strictly increasing generator-presented subsets of the naturals.

use std::fmt;
use std::sync::Arc;

use super::Periodic;

/// Shape of the `n`-th element.
#[derive(Clone)]
pub enum GenKind {
    /// `coef * base^n + offset`, `coef >= 1`, `base >= 2`.
    Geometric { coef: u64, base: u64, offset: u64 },
    /// `coef * n^degree + offset`, `coef >= 1`, `degree >= 1`.
    Polynomial { coef: u64, degree: u32, offset: u64 },
    /// Any strictly increasing map; `None` ends the stream (overflow).
    Custom(Arc<dyn Fn(u64) -> Option<u64> + Send + Sync>),
}

/// A named sparse set `{g(0) < g(1) < ...}`.
#[derive(Clone)]
pub struct Generator {
    pub name: String,
    pub kind: GenKind,
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Generator({})", self.name)
    }
}

impl PartialEq for Generator {
    fn eq(&self, other: &Self) -> bool {
        if self.name != other.name {
            return false;
        }
        match (&self.kind, &other.kind) {
            (GenKind::Custom(a), GenKind::Custom(b)) => Arc::ptr_eq(a, b),
            (GenKind::Custom(_), _) | (_, GenKind::Custom(_)) => false,
            _ => true,
        }
    }
}

impl Generator {
    pub fn geometric(coef: u64, base: u64, offset: u64) -> Option<Self> {
        if coef == 0 || base < 2 {
            return None;
        }
        let name = match (coef, base, offset) {
            (1, 2, 0) => "pow2".to_string(),
            (1, 4, 0) => "pow4".to_string(),
            (2, 4, 0) => "two-pow4".to_string(),
            _ => format!("geometric {coef} {base} {offset}"),
        };
        Some(Generator {
            name,
            kind: GenKind::Geometric { coef, base, offset },
        })
    }

    pub fn polynomial(coef: u64, degree: u32, offset: u64) -> Option<Self> {
        if coef == 0 || degree == 0 {
            return None;
        }
        let name = match (coef, degree, offset) {
            (1, 2, 0) => "squares".to_string(),
            _ => format!("poly {coef} {degree} {offset}"),
        };
        Some(Generator {
            name,
            kind: GenKind::Polynomial { coef, degree, offset },
        })
    }

    pub fn custom(name: impl Into<String>, f: impl Fn(u64) -> Option<u64> + Send + Sync + 'static) -> Self {
        Generator {
            name: name.into(),
            kind: GenKind::Custom(Arc::new(f)),
        }
    }

    /// Built-in generators by name.
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "pow2" => Self::geometric(1, 2, 0),
            "pow4" => Self::geometric(1, 4, 0),
            "two-pow4" => Self::geometric(2, 4, 0),
            "pow3" => Self::geometric(1, 3, 0),
            "squares" => Self::polynomial(1, 2, 0),
            "cubes" => Self::polynomial(1, 3, 0),
            _ => None,
        }
    }

    /// The `n`-th element, `None` past `u64`.
    pub fn nth(&self, n: u64) -> Option<u64> {
        match &self.kind {
            GenKind::Geometric { coef, base, offset } => u32::try_from(n)
                .ok()
                .and_then(|n| base.checked_pow(n))
                .and_then(|p| p.checked_mul(*coef))
                .and_then(|v| v.checked_add(*offset)),
            GenKind::Polynomial { coef, degree, offset } => n
                .checked_pow(*degree)
                .and_then(|p| p.checked_mul(*coef))
                .and_then(|v| v.checked_add(*offset)),
            GenKind::Custom(f) => f(n),
        }
    }

    /// Elements in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (0..).map_while(move |n| self.nth(n))
    }

    pub fn upto(&self, horizon: u64) -> Vec<u64> {
        self.iter().take_while(|&v| v <= horizon).collect()
    }

    /// Smallest index whose value is at least `x`.
    pub fn index_at_least(&self, x: u64) -> Option<u64> {
        if self.nth(0)? >= x {
            return Some(0);
        }
        let mut hi = 1u64;
        loop {
            match self.nth(hi) {
                Some(v) if v >= x => break,
                Some(_) => hi = hi.checked_mul(2)?,
                None => {
                    // shrink to the last defined index
                    let mut lo = hi / 2;
                    let mut top = hi;
                    while lo + 1 < top {
                        let mid = lo + (top - lo) / 2;
                        if self.nth(mid).is_some() {
                            lo = mid;
                        } else {
                            top = mid;
                        }
                    }
                    if self.nth(lo)? >= x {
                        hi = lo;
                        break;
                    }
                    return None;
                }
            }
        }
        let (mut lo, mut hi) = (hi / 2, hi);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.nth(mid).is_some_and(|v| v >= x) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Some(lo)
    }

    pub fn contains(&self, x: u64) -> bool {
        self.index_at_least(x)
            .and_then(|i| self.nth(i))
            .is_some_and(|v| v == x)
    }

    /// Linear generators are arithmetic progressions.
    pub fn as_periodic(&self) -> Option<Periodic> {
        match self.kind {
            GenKind::Polynomial { coef, degree: 1, offset } => {
                Some(Periodic::progression(coef, offset))
            }
            _ => None,
        }
    }

    /// Whether infinitely many elements fall into `p`.
    ///
    /// Exact for geometric and polynomial kinds: the residues of the
    /// generator modulo the period are eventually periodic in `n`.
    pub fn meets_infinitely(&self, p: &Periodic) -> Option<bool> {
        if p.is_finite() {
            return Some(false);
        }
        let m = p.period();
        let n0 = self.index_at_least(p.threshold())?;
        let hits = |residue: u64| p.residues().contains(&residue);
        match self.kind {
            GenKind::Geometric { coef, base, offset } => {
                // state b^n mod m cycles within m+1 steps after n0
                let mut state = mod_pow(base, n0, m);
                let mut seen = std::collections::BTreeSet::new();
                let mut steps = 0;
                let mut cycle = Vec::new();
                while seen.insert(state) {
                    cycle.push(state);
                    state = (state * (base % m)) % m;
                    steps += 1;
                    if steps > m + 1 {
                        break;
                    }
                }
                // states from the first repeated one onwards recur forever
                let start = cycle.iter().position(|&s| s == state).unwrap_or(0);
                Some(
                    cycle[start..]
                        .iter()
                        .any(|&s| hits((coef % m * s + offset) % m)),
                )
            }
            GenKind::Polynomial { coef, degree, offset } => Some((n0..n0 + m).any(|n| {
                let v = (coef % m) * mod_pow(n % m, degree as u64, m) % m;
                hits((v + offset) % m)
            })),
            GenKind::Custom(_) => None,
        }
    }
}

fn mod_pow(b: u64, e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut result: u128 = 1;
    let mut base = (b % m) as u128;
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % m128;
        }
        base = base * base % m128;
        e >>= 1;
    }
    result as u64
}

/// Whether two geometric generators agree infinitely often, decided exactly
/// for a shared base. `None` when the shapes are not comparable.
pub(crate) fn geometric_coincide_infinitely(a: &Generator, b: &Generator) -> Option<bool> {
    match (&a.kind, &b.kind) {
        (
            GenKind::Geometric { coef: c1, base: b1, offset: d1 },
            GenKind::Geometric { coef: c2, base: b2, offset: d2 },
        ) if b1 == b2 => Some(d1 == d2 && ratio_is_power(*c1, *c2, *b1)),
        _ => None,
    }
}

/// `c1 / c2` is an integral (possibly negative) power of `b`.
pub(crate) fn ratio_is_power(c1: u64, c2: u64, b: u64) -> bool {
    let (mut hi, lo) = if c1 >= c2 { (c1, c2) } else { (c2, c1) };
    loop {
        if hi == lo {
            return true;
        }
        if hi % b != 0 || hi < lo {
            return false;
        }
        hi /= b;
    }
}
