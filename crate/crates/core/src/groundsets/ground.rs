//! Countable ground sets and the canonical element codes.
//!
//! Every ground set carries an injective code `Element -> u64`. The code is
//! the total order used by every horizon-bounded sweep: "up to horizon h"
//! always means "elements whose code is at most h".

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// A point of some ground set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    Nat(u64),
    Tuple(Vec<Element>),
    Tagged(u64, Box<Element>),
    /// The identified basepoint of a wedge carrier.
    Base,
    /// A finitely supported family: `(index, coordinate)` pairs for the
    /// coordinates that differ from the basepoint, sorted by index.
    Sparse(Vec<(u64, Element)>),
}

impl Element {
    pub fn nat(&self) -> Option<u64> {
        match self {
            Element::Nat(n) => Some(*n),
            _ => None,
        }
    }

    pub fn pair(a: Element, b: Element) -> Element {
        Element::Tuple(vec![a, b])
    }

    pub fn tagged(tag: u64, inner: Element) -> Element {
        Element::Tagged(tag, Box::new(inner))
    }

    /// Support of a sparse element (indices off the basepoint).
    pub fn support(&self) -> Vec<u64> {
        match self {
            Element::Sparse(c) => c.iter().map(|(a, _)| *a).collect(),
            _ => Vec::new(),
        }
    }

    /// Coordinate `alpha` of a sparse element, `None` meaning the basepoint.
    pub fn coordinate(&self, alpha: u64) -> Option<&Element> {
        match self {
            Element::Sparse(c) => c
                .binary_search_by_key(&alpha, |(a, _)| *a)
                .ok()
                .map(|i| &c[i].1),
            _ => None,
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Nat(n) => write!(f, "{n}"),
            Element::Tuple(xs) => {
                write!(f, "(pt")?;
                for x in xs {
                    write!(f, " {x}")?;
                }
                write!(f, ")")
            }
            Element::Tagged(t, x) => write!(f, "(tag {t} {x})"),
            Element::Base => write!(f, "e"),
            Element::Sparse(c) => {
                write!(f, "(supp")?;
                for (a, x) in c {
                    write!(f, " ({a} {x})")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// A countable ground set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroundSet {
    Naturals,
    /// `{0, .., n-1}`.
    FinitePoints(u64),
    TupleSpace(Vec<GroundSet>),
    /// Disjoint union; the tag of a part is its position.
    TaggedUnion(Vec<GroundSet>),
    /// Copies of `spine` indexed by `index`, all glued at `basepoint`.
    /// Elements: `Base` or `Tagged(alpha, x)` with `x != basepoint`.
    Wedge {
        index: Box<GroundSet>,
        spine: Box<GroundSet>,
        basepoint: Element,
    },
    /// Finitely supported families over `index` with values in `factor`,
    /// relative to `basepoint`.
    FinSupp {
        index: Box<GroundSet>,
        factor: Box<GroundSet>,
        basepoint: Element,
    },
}

impl fmt::Display for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroundSet::Naturals => write!(f, "nat"),
            GroundSet::FinitePoints(n) => write!(f, "(points {n})"),
            GroundSet::TupleSpace(gs) => {
                write!(f, "(tuple")?;
                for g in gs {
                    write!(f, " {g}")?;
                }
                write!(f, ")")
            }
            GroundSet::TaggedUnion(gs) => {
                write!(f, "(tagged")?;
                for g in gs {
                    write!(f, " {g}")?;
                }
                write!(f, ")")
            }
            GroundSet::Wedge { index, spine, basepoint } => {
                write!(f, "(wedge {index} {spine} {basepoint})")
            }
            GroundSet::FinSupp { index, factor, basepoint } => {
                write!(f, "(finsupp {index} {factor} {basepoint})")
            }
        }
    }
}

fn enc_err(g: &GroundSet, x: &Element) -> Error {
    Error::Encoding(format!("{x} is not an element of {g}"))
}

fn overflow(g: &GroundSet) -> Error {
    Error::Encoding(format!("element code overflows u64 in {g}"))
}

fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).map_or(true, |s| s > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|s| s <= n) {
        r += 1;
    }
    r
}

/// Bijective pairing of `[0,na) x [0,nb)` (either side possibly infinite).
fn pair(a: u64, na: Option<u64>, b: u64, nb: Option<u64>) -> Option<u64> {
    match (na, nb) {
        (Some(na), _) => b.checked_mul(na)?.checked_add(a),
        (None, Some(nb)) => a.checked_mul(nb)?.checked_add(b),
        (None, None) => {
            if a < b {
                b.checked_mul(b)?.checked_add(a)
            } else {
                a.checked_mul(a)?.checked_add(a)?.checked_add(b)
            }
        }
    }
}

fn unpair(z: u64, na: Option<u64>, nb: Option<u64>) -> Option<(u64, u64)> {
    let (a, b) = match (na, nb) {
        (Some(0), _) | (_, Some(0)) => return None,
        (Some(na), _) => (z % na, z / na),
        (None, Some(nb)) => (z / nb, z % nb),
        (None, None) => {
            let s = isqrt(z);
            let r = z - s * s;
            if r < s {
                (r, s)
            } else {
                (s, r - s)
            }
        }
    };
    if nb.is_some_and(|nb| b >= nb) || na.is_some_and(|na| a >= na) {
        return None;
    }
    Some((a, b))
}

fn prime_table() -> &'static [u64] {
    static TABLE: OnceLock<Vec<u64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        const LIMIT: usize = 1 << 20;
        let mut sieve = vec![true; LIMIT];
        let mut out = Vec::new();
        for i in 2..LIMIT {
            if sieve[i] {
                out.push(i as u64);
                let mut j = i * i;
                while j < LIMIT {
                    sieve[j] = false;
                    j += i;
                }
            }
        }
        out
    })
}

/// The `k`-th prime (0-based).
pub(crate) fn nth_prime(k: u64) -> u64 {
    let table = prime_table();
    if let Some(p) = table.get(k as usize) {
        return *p;
    }
    let mut count = table.len() as u64 - 1;
    let mut p = *table.last().expect("nonempty");
    loop {
        p += 2;
        if (2..).take_while(|d| d * d <= p).all(|d| p % d != 0) {
            count += 1;
            if count == k {
                return p;
            }
        }
    }
}

fn prime_index(p: u64) -> Option<u64> {
    prime_table().binary_search(&p).ok().map(|i| i as u64)
}

impl GroundSet {
    /// Number of elements; `None` for infinite grounds.
    pub fn size(&self) -> Option<u64> {
        match self {
            GroundSet::Naturals => None,
            GroundSet::FinitePoints(n) => Some(*n),
            GroundSet::TupleSpace(gs) => gs
                .iter()
                .try_fold(1u64, |acc, g| g.size().and_then(|s| acc.checked_mul(s))),
            GroundSet::TaggedUnion(gs) => gs
                .iter()
                .try_fold(0u64, |acc, g| g.size().and_then(|s| acc.checked_add(s))),
            GroundSet::Wedge { index, spine, .. } => {
                let per = spine.size()?.checked_sub(1)?;
                index.size()?.checked_mul(per)?.checked_add(1)
            }
            GroundSet::FinSupp { index, factor, .. } => {
                let n = index.size()?;
                let f = factor.size()?;
                u32::try_from(n).ok().and_then(|n| f.checked_pow(n))
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        self.size().is_some()
    }

    fn tuple_tail_size(gs: &[GroundSet]) -> Option<u64> {
        GroundSet::TupleSpace(gs.to_vec()).size()
    }

    /// Canonical code of `x`.
    pub fn encode(&self, x: &Element) -> Result<u64> {
        match (self, x) {
            (GroundSet::Naturals, Element::Nat(n)) => Ok(*n),
            (GroundSet::FinitePoints(k), Element::Nat(n)) if n < k => Ok(*n),
            (GroundSet::TupleSpace(gs), Element::Tuple(xs)) if gs.len() == xs.len() => {
                if gs.is_empty() {
                    return Ok(0);
                }
                let mut acc = gs
                    .last()
                    .expect("nonempty")
                    .encode(xs.last().expect("nonempty"))?;
                for i in (0..gs.len() - 1).rev() {
                    let a = gs[i].encode(&xs[i])?;
                    let tail = Self::tuple_tail_size(&gs[i + 1..]);
                    acc = pair(a, gs[i].size(), acc, tail).ok_or_else(|| overflow(self))?;
                }
                Ok(acc)
            }
            (GroundSet::TaggedUnion(gs), Element::Tagged(t, inner)) => {
                let t = *t as usize;
                let part = gs.get(t).ok_or_else(|| enc_err(self, x))?;
                let c = part.encode(inner)?;
                let finite_total: u64 = gs.iter().filter_map(|g| g.size()).sum();
                if part.is_finite() {
                    let offset: u64 = gs[..t].iter().filter_map(|g| g.size()).sum();
                    Ok(offset + c)
                } else {
                    let infinite: Vec<usize> =
                        (0..gs.len()).filter(|&i| !gs[i].is_finite()).collect();
                    let pos = infinite.iter().position(|&i| i == t).expect("infinite part") as u64;
                    let m = infinite.len() as u64;
                    c.checked_mul(m)
                        .and_then(|v| v.checked_add(pos + finite_total))
                        .ok_or_else(|| overflow(self))
                }
            }
            (GroundSet::Wedge { .. }, Element::Base) => Ok(0),
            (GroundSet::Wedge { index, spine, basepoint }, Element::Tagged(a, inner)) => {
                if **inner == *basepoint {
                    return Err(enc_err(self, x));
                }
                let ac = index.encode(&Element::Nat(*a))?;
                let bp = spine.encode(basepoint)?;
                let c = spine.encode(inner)?;
                let j = if c < bp { c } else { c - 1 };
                let rest = spine.size().map(|s| s - 1);
                pair(ac, index.size(), j, rest)
                    .and_then(|v| v.checked_add(1))
                    .ok_or_else(|| overflow(self))
            }
            (GroundSet::FinSupp { index, factor, basepoint }, Element::Sparse(coords)) => {
                let bp = factor.encode(basepoint)?;
                let mut prev: Option<u64> = None;
                let mut acc: u64 = if factor.is_finite() { 0 } else { 1 };
                for (alpha, v) in coords {
                    if prev.is_some_and(|p| p >= *alpha) || *v == *basepoint {
                        return Err(enc_err(self, x));
                    }
                    prev = Some(*alpha);
                    index.encode(&Element::Nat(*alpha))?;
                    let c = factor.encode(v)?;
                    let s = if c < bp { c + 1 } else { c };
                    let term = match factor.size() {
                        Some(f) => u32::try_from(*alpha)
                            .ok()
                            .and_then(|a| f.checked_pow(a))
                            .and_then(|p| p.checked_mul(s)),
                        None => u32::try_from(s)
                            .ok()
                            .and_then(|s| nth_prime(*alpha).checked_pow(s)),
                    }
                    .ok_or_else(|| overflow(self))?;
                    acc = if factor.is_finite() {
                        acc.checked_add(term)
                    } else {
                        acc.checked_mul(term)
                    }
                    .ok_or_else(|| overflow(self))?;
                }
                Ok(if factor.is_finite() { acc } else { acc - 1 })
            }
            _ => Err(enc_err(self, x)),
        }
    }

    /// Element with code `n`, if any (codes may be sparse for some grounds).
    pub fn decode(&self, n: u64) -> Option<Element> {
        if self.size().is_some_and(|s| n >= s) {
            return None;
        }
        match self {
            GroundSet::Naturals | GroundSet::FinitePoints(_) => Some(Element::Nat(n)),
            GroundSet::TupleSpace(gs) => {
                let mut out = Vec::with_capacity(gs.len());
                let mut z = n;
                for i in 0..gs.len() {
                    if i + 1 == gs.len() {
                        out.push(gs[i].decode(z)?);
                    } else {
                        let (a, rest) =
                            unpair(z, gs[i].size(), Self::tuple_tail_size(&gs[i + 1..]))?;
                        out.push(gs[i].decode(a)?);
                        z = rest;
                    }
                }
                Some(Element::Tuple(out))
            }
            GroundSet::TaggedUnion(gs) => {
                let mut offset = 0;
                for (t, g) in gs.iter().enumerate() {
                    if let Some(s) = g.size() {
                        if n < offset + s {
                            return Some(Element::tagged(t as u64, g.decode(n - offset)?));
                        }
                        offset += s;
                    }
                }
                let infinite: Vec<usize> = (0..gs.len()).filter(|&i| !gs[i].is_finite()).collect();
                if infinite.is_empty() {
                    return None;
                }
                let r = n - offset;
                let m = infinite.len() as u64;
                let t = infinite[(r % m) as usize];
                Some(Element::tagged(t as u64, gs[t].decode(r / m)?))
            }
            GroundSet::Wedge { index, spine, basepoint } => {
                if n == 0 {
                    return Some(Element::Base);
                }
                let bp = spine.encode(basepoint).ok()?;
                let (ac, j) = unpair(n - 1, index.size(), spine.size().map(|s| s - 1))?;
                let alpha = index.decode(ac)?.nat()?;
                let c = if j < bp { j } else { j + 1 };
                Some(Element::tagged(alpha, spine.decode(c)?))
            }
            GroundSet::FinSupp { index, factor, basepoint } => {
                let bp = factor.encode(basepoint).ok()?;
                let unshift = |s: u64| if s <= bp { s - 1 } else { s };
                let mut coords = Vec::new();
                match factor.size() {
                    Some(f) if f >= 2 => {
                        let mut z = n;
                        let mut alpha = 0;
                        while z > 0 {
                            let s = z % f;
                            if s != 0 {
                                index.decode(alpha)?;
                                coords.push((alpha, factor.decode(unshift(s))?));
                            }
                            z /= f;
                            alpha += 1;
                        }
                    }
                    Some(_) => {
                        if n != 0 {
                            return None;
                        }
                    }
                    None => {
                        let mut z = n.checked_add(1)?;
                        let mut alpha = 0;
                        while z > 1 {
                            let p = nth_prime(alpha);
                            if p * p > z && z > 1 {
                                let k = prime_index(z)?;
                                index.decode(k)?;
                                coords.push((k, factor.decode(unshift(1))?));
                                break;
                            }
                            let mut s = 0;
                            while z % p == 0 {
                                z /= p;
                                s += 1;
                            }
                            if s > 0 {
                                index.decode(alpha)?;
                                coords.push((alpha, factor.decode(unshift(s))?));
                            }
                            alpha += 1;
                        }
                    }
                }
                Some(Element::Sparse(coords))
            }
        }
    }

    /// Whether `x` is a well-formed element of this ground.
    pub fn has(&self, x: &Element) -> bool {
        self.encode(x).is_ok()
    }

    /// All elements with code at most `horizon`, in code order.
    pub fn elements_upto(&self, horizon: u64) -> impl Iterator<Item = Element> + '_ {
        let top = match self.size() {
            Some(0) => None,
            Some(s) => Some(horizon.min(s - 1)),
            None => Some(horizon),
        };
        top.into_iter()
            .flat_map(|t| 0..=t)
            .filter_map(move |n| self.decode(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grounds() -> Vec<GroundSet> {
        let ray = GroundSet::Naturals;
        vec![
            GroundSet::Naturals,
            GroundSet::FinitePoints(5),
            GroundSet::TupleSpace(vec![ray.clone(), ray.clone()]),
            GroundSet::TupleSpace(vec![GroundSet::FinitePoints(3), ray.clone(), ray.clone()]),
            GroundSet::TaggedUnion(vec![GroundSet::FinitePoints(2), ray.clone(), ray.clone()]),
            GroundSet::Wedge {
                index: Box::new(GroundSet::FinitePoints(2)),
                spine: Box::new(ray.clone()),
                basepoint: Element::Nat(0),
            },
            GroundSet::Wedge {
                index: Box::new(ray.clone()),
                spine: Box::new(ray.clone()),
                basepoint: Element::Nat(3),
            },
            GroundSet::FinSupp {
                index: Box::new(ray.clone()),
                factor: Box::new(GroundSet::FinitePoints(2)),
                basepoint: Element::Nat(0),
            },
            GroundSet::FinSupp {
                index: Box::new(ray.clone()),
                factor: Box::new(ray),
                basepoint: Element::Nat(0),
            },
        ]
    }

    #[test]
    fn finite_points_encode_identity() {
        let g = GroundSet::FinitePoints(4);
        let xs: Vec<_> = g.elements_upto(100).collect();
        assert_eq!(xs, (0..4).map(Element::Nat).collect::<Vec<_>>());
        assert!(g.encode(&Element::Nat(4)).is_err());
    }

    #[test]
    fn codes_are_injective_and_ordered() {
        for g in grounds() {
            let xs: Vec<_> = g.elements_upto(400).collect();
            for x in &xs {
                let c = g.encode(x).unwrap();
                assert_eq!(g.decode(c).as_ref(), Some(x), "{g}");
            }
            let mut codes: Vec<_> = xs.iter().map(|x| g.encode(x).unwrap()).collect();
            let n = codes.len();
            codes.dedup();
            assert_eq!(codes.len(), n);
        }
    }

    #[test]
    fn wedge_has_single_basepoint() {
        let g = &grounds()[5];
        assert_eq!(g.decode(0), Some(Element::Base));
        assert!(g.encode(&Element::tagged(0, Element::Nat(0))).is_err());
    }

    #[test]
    fn prime_coding_of_sparse_families() {
        let g = &grounds()[8];
        // 2^1 * 3^2 - 1 = 17
        let x = Element::Sparse(vec![(0, Element::Nat(1)), (1, Element::Nat(2))]);
        assert_eq!(g.encode(&x).unwrap(), 17);
        assert_eq!(g.decode(17), Some(x));
    }

    proptest! {
        #[test]
        fn roundtrip_decode_encode(gi in 0usize..9, n in 0u64..5000) {
            let g = &grounds()[gi];
            if let Some(x) = g.decode(n) {
                prop_assert_eq!(g.encode(&x).unwrap(), n);
            }
        }

        #[test]
        fn szudzik_pairs_roundtrip(a in 0u64..100_000, b in 0u64..100_000) {
            let z = pair(a, None, b, None).unwrap();
            prop_assert_eq!(unpair(z, None, None), Some((a, b)));
        }
    }
}
