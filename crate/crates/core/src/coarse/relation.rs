//! Binary relations on small finite sets, stored as bit matrices.
//!
//! Backs the axiom checker, the enumeration of all coarse structures on a
//! few points and the brute-force closure used to validate `generate`.

use std::collections::BTreeSet;
use std::fmt;

/// Largest point count a [`Relation`] supports (`n * n <= 64`).
pub const MAX_POINTS: usize = 8;

/// A relation on `{0, .., n-1}`; bit `x * n + y` holds `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Relation {
    n: usize,
    bits: u64,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_POINTS, "relations support at most {MAX_POINTS} points");
        Relation { n, bits: 0 }
    }

    pub fn from_bits(n: usize, bits: u64) -> Self {
        let mut r = Self::empty(n);
        r.bits = bits & Self::full(n).bits;
        r
    }

    pub fn full(n: usize) -> Self {
        let mut r = Self::empty(n);
        r.bits = if n * n == 64 { u64::MAX } else { (1u64 << (n * n)) - 1 };
        r
    }

    pub fn diagonal(n: usize) -> Self {
        Self::from_pairs(n, (0..n).map(|i| (i, i)))
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut r = Self::empty(n);
        for (x, y) in pairs {
            r.insert(x, y);
        }
        r
    }

    pub fn points(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn insert(&mut self, x: usize, y: usize) {
        assert!(x < self.n && y < self.n);
        self.bits |= 1 << (x * self.n + y);
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        x < self.n && y < self.n && self.bits & (1 << (x * self.n + y)) != 0
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        (0..n * n)
            .filter(move |b| self.bits & (1 << b) != 0)
            .map(move |b| (b / n, b % n))
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn union(&self, other: &Relation) -> Relation {
        Relation::from_bits(self.n, self.bits | other.bits)
    }

    /// `{(x, y) : exists z, (x, z) in self and (z, y) in other}`.
    pub fn compose(&self, other: &Relation) -> Relation {
        let mut r = Relation::empty(self.n);
        for (x, z) in self.pairs() {
            for y in 0..self.n {
                if other.contains(z, y) {
                    r.insert(x, y);
                }
            }
        }
        r
    }

    pub fn inverse(&self) -> Relation {
        Relation::from_pairs(self.n, self.pairs().map(|(x, y)| (y, x)))
    }

    pub fn contains_diagonal(&self) -> bool {
        Relation::diagonal(self.n).is_subset(self)
    }

    /// The ball `{y : (x, y) in self}`.
    pub fn ball(&self, x: usize) -> BTreeSet<usize> {
        (0..self.n).filter(|&y| self.contains(x, y)).collect()
    }

    /// Every relation `R` with `diagonal ∪ lower ⊆ R ⊆ self`.
    pub fn intermediates(&self) -> impl Iterator<Item = Relation> + '_ {
        let base = Relation::diagonal(self.n).bits;
        let free: Vec<u64> = (0..64)
            .map(|b| 1u64 << b)
            .filter(|m| self.bits & m != 0 && base & m == 0)
            .collect();
        let count = 1u64 << free.len();
        (0..count).map(move |mask| {
            let mut bits = base & self.bits;
            for (i, m) in free.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    bits |= m;
                }
            }
            Relation::from_bits(self.n, bits)
        })
    }

    /// All relations on `n` points that contain the diagonal.
    pub fn all_reflexive(n: usize) -> impl Iterator<Item = Relation> {
        Relation::full(n).intermediates().collect::<Vec<_>>().into_iter()
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(pairs")?;
        for (x, y) in self.pairs() {
            write!(f, " ({x} {y})")?;
        }
        write!(f, ")")
    }
}

/// A family of relations on a common finite set.
pub type Family = BTreeSet<Relation>;

/// Outcome of checking the coarse-structure axioms on an explicit family.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AxiomReport {
    /// Set when the family has no members, so not even the diagonal.
    pub empty: bool,
    /// A member missing part of the diagonal.
    pub diagonal: Option<Relation>,
    /// Members whose composite is missing.
    pub composition: Option<(Relation, Relation)>,
    /// A member whose inverse is missing.
    pub inversion: Option<Relation>,
    /// A member and an intermediate relation above the diagonal that is missing.
    pub downward: Option<(Relation, Relation)>,
}

impl AxiomReport {
    pub fn passes(&self) -> bool {
        !self.empty
            && self.diagonal.is_none()
            && self.composition.is_none()
            && self.inversion.is_none()
            && self.downward.is_none()
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.empty {
            writeln!(f, "nonempty: FAIL the family has no members")?;
        }
        match &self.diagonal {
            None => writeln!(f, "diagonal: PASS")?,
            Some(r) => writeln!(f, "diagonal: FAIL {r}")?,
        }
        match &self.composition {
            None => writeln!(f, "composition: PASS")?,
            Some((a, b)) => writeln!(f, "composition: FAIL {a} {b}")?,
        }
        match &self.inversion {
            None => writeln!(f, "inversion: PASS")?,
            Some(r) => writeln!(f, "inversion: FAIL {r}")?,
        }
        match &self.downward {
            None => write!(f, "downward: PASS"),
            Some((a, b)) => write!(f, "downward: FAIL {a} {b}"),
        }
    }
}

/// Checks the four coarse-structure axioms, reporting the first violation
/// of each in the canonical (bit) order.
pub fn check_axioms(family: &Family) -> AxiomReport {
    let mut report = AxiomReport {
        empty: family.is_empty(),
        diagonal: family.iter().find(|e| !e.contains_diagonal()).copied(),
        ..AxiomReport::default()
    };
    'outer: for a in family {
        for b in family {
            if !family.contains(&a.compose(b)) {
                report.composition = Some((*a, *b));
                break 'outer;
            }
        }
    }
    report.inversion = family.iter().find(|e| !family.contains(&e.inverse())).copied();
    'down: for e in family {
        if !e.contains_diagonal() {
            continue;
        }
        for sub in e.intermediates() {
            if !family.contains(&sub) {
                report.downward = Some((*e, sub));
                break 'down;
            }
        }
    }
    report
}

/// Principal down-set `{R : diagonal ⊆ R ⊆ top}`.
pub fn down_closure(top: &Relation) -> Family {
    top.intermediates().collect()
}

/// Every coarse structure on `n` points (`n <= 4`).
///
/// A coarse structure on a finite set contains the composite of all its
/// members, which is then its largest member `T`; so the structures are the
/// principal down-sets of the reflexive `T` with `T∘T ⊆ T` and `T⁻¹ = T`.
pub fn enumerate_structures(n: usize) -> Vec<Family> {
    assert!(n <= 4, "enumeration is limited to four points");
    Relation::all_reflexive(n)
        .filter(|t| t.compose(t).is_subset(t) && t.inverse() == *t)
        .map(|t| down_closure(&t))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// Closure of `generators` under composition, inversion and passing to
/// intermediate relations above the diagonal, computed naively.
pub fn brute_force_closure(n: usize, generators: &[Relation]) -> Family {
    let diag = Relation::diagonal(n);
    let mut semigroup: BTreeSet<Relation> = generators.iter().map(|g| g.union(&diag)).collect();
    semigroup.insert(diag);
    loop {
        let current: Vec<Relation> = semigroup.iter().copied().collect();
        let mut grew = false;
        for a in &current {
            grew |= semigroup.insert(a.inverse());
            for b in &current {
                grew |= semigroup.insert(a.compose(b));
            }
        }
        if !grew {
            break;
        }
    }
    semigroup.iter().flat_map(|top| top.intermediates()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_follows_pair_convention() {
        let e = Relation::from_pairs(3, [(0, 1)]);
        let f = Relation::from_pairs(3, [(1, 2)]);
        assert_eq!(e.compose(&f), Relation::from_pairs(3, [(0, 2)]));
        assert!(f.compose(&e).is_empty());
    }

    #[test]
    fn swap_composed_with_itself() {
        let swap = Relation::from_pairs(3, [(0, 1), (1, 0)]).union(&Relation::diagonal(3));
        let sq = swap.compose(&swap);
        let want = Relation::from_pairs(3, [(0, 0), (0, 1), (1, 0), (1, 1)]).union(&Relation::diagonal(3));
        assert_eq!(sq, want);
    }

    #[test]
    fn powerset_above_diagonal_is_coarse() {
        let fam: Family = Relation::all_reflexive(3).collect();
        assert!(check_axioms(&fam).passes());
    }

    #[test]
    fn missing_inverse_is_reported() {
        let d = Relation::diagonal(2);
        let up = d.union(&Relation::from_pairs(2, [(0, 1)]));
        let fam: Family = [d, up].into_iter().collect();
        let report = check_axioms(&fam);
        assert_eq!(report.inversion, Some(up));
        assert!(report.diagonal.is_none());
    }

    #[test]
    fn two_points_have_two_structures() {
        // oracle: every family of the four reflexive relations on 2 points
        let reflexive: Vec<Relation> = Relation::all_reflexive(2).collect();
        assert_eq!(reflexive.len(), 4);
        let mut count = 0;
        for mask in 1u32..16 {
            let fam: Family = (0..4).filter(|i| mask & (1 << i) != 0).map(|i| reflexive[i]).collect();
            if check_axioms(&fam).passes() {
                count += 1;
            }
        }
        assert_eq!(count, 2);
        assert_eq!(enumerate_structures(2).len(), 2);
    }

    #[test]
    fn structure_counts_are_bell_numbers() {
        let counts: Vec<usize> = (1..=4).map(|n| enumerate_structures(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 15]);
    }

    #[test]
    fn principal_shortcut_agrees_with_axiom_check() {
        for n in 1..=3 {
            let via_check: BTreeSet<Family> = Relation::all_reflexive(n)
                .map(|t| down_closure(&t))
                .filter(|f| check_axioms(f).passes())
                .collect();
            let fast: BTreeSet<Family> = enumerate_structures(n).into_iter().collect();
            assert_eq!(via_check, fast, "n = {n}");
        }
    }

    #[test]
    fn closure_of_single_pair() {
        let g = Relation::from_pairs(3, [(0, 1)]);
        let fam = brute_force_closure(3, &[g]);
        assert!(check_axioms(&fam).passes());
        let top = fam.iter().copied().fold(Relation::empty(3), |a, b| a.union(&b));
        assert_eq!(top, Relation::from_pairs(3, [(0, 0), (0, 1), (1, 0), (1, 1), (2, 2)]));
    }
}
