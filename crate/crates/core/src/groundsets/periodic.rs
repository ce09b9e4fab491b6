//! Eventually periodic subsets of the naturals, kept in canonical form.

use std::collections::BTreeSet;

use num_integer::Integer;

/// `{x < threshold : x in prelude} ∪ {x >= threshold : x mod period in residues}`.
///
/// Values built through [`Periodic::new`] or any operation are canonical:
/// minimal period, then minimal threshold, so structural equality is set
/// equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Periodic {
    prelude: BTreeSet<u64>,
    period: u64,
    residues: BTreeSet<u64>,
    threshold: u64,
}

impl Periodic {
    /// Canonicalizing constructor. Prelude entries at or above the threshold
    /// and residues outside `0..period` are rejected by `None`.
    pub fn new(
        prelude: impl IntoIterator<Item = u64>,
        period: u64,
        residues: impl IntoIterator<Item = u64>,
        threshold: u64,
    ) -> Option<Self> {
        let prelude: BTreeSet<u64> = prelude.into_iter().collect();
        let residues: BTreeSet<u64> = residues.into_iter().collect();
        if period == 0
            || prelude.iter().any(|&x| x >= threshold)
            || residues.iter().any(|&r| r >= period)
        {
            return None;
        }
        let mut p = Periodic {
            prelude,
            period,
            residues,
            threshold,
        };
        p.normalize();
        Some(p)
    }

    /// The arithmetic progression `{residue + k*period}`.
    pub fn progression(period: u64, residue: u64) -> Self {
        let r = residue % period.max(1);
        Self::tabulate(residue, period.max(1), |x| x >= residue && x % period.max(1) == r)
    }

    pub fn finite(xs: impl IntoIterator<Item = u64>) -> Self {
        let xs: BTreeSet<u64> = xs.into_iter().collect();
        let t = xs.last().map_or(0, |m| m + 1);
        Self::new(xs, 1, [], t).expect("valid")
    }

    pub fn full() -> Self {
        Self::new([], 1, [0], 0).expect("valid")
    }

    pub fn empty() -> Self {
        Self::finite([])
    }

    /// `[lo, hi]`, empty when `lo > hi`.
    pub fn interval(lo: u64, hi: u64) -> Self {
        if lo > hi {
            Self::empty()
        } else {
            Self::finite(lo..=hi)
        }
    }

    /// Builds the set whose membership is `f` below `threshold` and whose
    /// tail is read off one period starting at `threshold`.
    pub fn tabulate(threshold: u64, period: u64, f: impl Fn(u64) -> bool) -> Self {
        let prelude = (0..threshold).filter(|&x| f(x));
        let residues = (threshold..threshold + period)
            .filter(|&x| f(x))
            .map(|x| x % period);
        Self::new(prelude, period, residues, threshold).expect("valid")
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    pub fn residues(&self) -> &BTreeSet<u64> {
        &self.residues
    }

    pub fn prelude(&self) -> &BTreeSet<u64> {
        &self.prelude
    }

    pub fn contains(&self, x: u64) -> bool {
        if x < self.threshold {
            self.prelude.contains(&x)
        } else {
            self.residues.contains(&(x % self.period))
        }
    }

    pub fn is_finite(&self) -> bool {
        self.residues.is_empty()
    }

    /// Largest element of a finite set.
    pub fn max(&self) -> Option<u64> {
        if self.is_finite() {
            self.prelude.last().copied()
        } else {
            None
        }
    }

    fn normalize(&mut self) {
        let p = self.period;
        let d = (1..=p)
            .filter(|d| p % d == 0)
            .find(|&d| (0..p).all(|r| self.residues.contains(&r) == self.residues.contains(&(r % d))))
            .unwrap_or(p);
        if d != p {
            self.residues = self.residues.iter().filter(|&&r| r < d).copied().collect();
            self.period = d;
        }
        while self.threshold > 0 {
            let x = self.threshold - 1;
            let tail = self.residues.contains(&(x % self.period));
            if self.prelude.contains(&x) != tail {
                break;
            }
            self.prelude.remove(&x);
            self.threshold = x;
        }
    }

    /// Pointwise Boolean combination.
    pub fn zip_with(&self, other: &Periodic, f: impl Fn(bool, bool) -> bool) -> Periodic {
        let period = self.period.lcm(&other.period);
        let threshold = self.threshold.max(other.threshold);
        Self::tabulate(threshold, period, |x| f(self.contains(x), other.contains(x)))
    }

    pub fn union(&self, other: &Periodic) -> Periodic {
        self.zip_with(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &Periodic) -> Periodic {
        self.zip_with(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &Periodic) -> Periodic {
        self.zip_with(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> Periodic {
        Self::tabulate(self.threshold, self.period, |x| !self.contains(x))
    }

    /// `{y : |x - y| <= r for some x in self}`.
    pub fn thicken(&self, r: u64) -> Periodic {
        let lo = |x: u64| x.saturating_sub(r);
        Self::tabulate(self.threshold + r, self.period, |x| {
            (lo(x)..=x + r).any(|y| self.contains(y))
        })
    }

    /// First element at or above `x`.
    pub fn next_at_or_after(&self, x: u64) -> Option<u64> {
        if let Some(&y) = self.prelude.range(x..).next() {
            return Some(y);
        }
        if self.residues.is_empty() {
            return None;
        }
        let start = x.max(self.threshold);
        (start..start + self.period).find(|&y| self.contains(y))
    }

    /// Last element at or below `x`.
    pub fn prev_at_or_before(&self, x: u64) -> Option<u64> {
        if x >= self.threshold && !self.residues.is_empty() {
            let lo = x.saturating_sub(self.period - 1).max(self.threshold);
            if let Some(y) = (lo..=x).rev().find(|&y| self.contains(y)) {
                return Some(y);
            }
        }
        let cap = x.min(self.threshold.saturating_sub(1));
        if self.threshold == 0 {
            return None;
        }
        self.prelude.range(..=cap).next_back().copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_periodic() -> impl Strategy<Value = Periodic> {
        (1u64..7, 0u64..12, proptest::collection::vec(any::<bool>(), 18)).prop_map(
            |(p, t, bits)| Periodic::tabulate(t, p, |x| bits[(x as usize) % 18] || x % p == 0),
        )
    }

    #[test]
    fn canonical_progressions() {
        let evens = Periodic::progression(2, 0);
        assert_eq!(evens.period(), 2);
        assert_eq!(evens.threshold(), 0);
        let all = evens.union(&Periodic::progression(2, 1));
        assert_eq!(all, Periodic::full());
        let none = evens.intersection(&Periodic::progression(2, 1));
        assert_eq!(none, Periodic::empty());
    }

    #[test]
    fn period_folding() {
        // residues {0,2} mod 4 fold to {0} mod 2
        let p = Periodic::new([], 4, [0, 2], 0).unwrap();
        assert_eq!(p, Periodic::progression(2, 0));
    }

    #[test]
    fn thicken_evens_by_one_is_everything() {
        assert_eq!(Periodic::progression(2, 0).thicken(1), Periodic::full());
        assert_eq!(Periodic::finite([5]).thicken(3), Periodic::interval(2, 8));
    }

    #[test]
    fn neighbours() {
        let p = Periodic::progression(3, 1);
        assert_eq!(p.next_at_or_after(5), Some(7));
        assert_eq!(p.prev_at_or_before(5), Some(4));
        assert_eq!(p.prev_at_or_before(0), None);
        assert_eq!(Periodic::interval(3, 1), Periodic::empty());
    }

    proptest! {
        #[test]
        fn normalization_is_idempotent(p in arb_periodic()) {
            let again = Periodic::new(p.prelude().clone(), p.period(), p.residues().clone(), p.threshold()).unwrap();
            prop_assert_eq!(again, p);
        }

        #[test]
        fn boolean_ops_are_pointwise(a in arb_periodic(), b in arb_periodic()) {
            let u = a.union(&b);
            let i = a.intersection(&b);
            let d = a.difference(&b);
            let c = a.complement();
            for x in 0..1000 {
                prop_assert_eq!(u.contains(x), a.contains(x) || b.contains(x));
                prop_assert_eq!(i.contains(x), a.contains(x) && b.contains(x));
                prop_assert_eq!(d.contains(x), a.contains(x) && !b.contains(x));
                prop_assert_eq!(c.contains(x), !a.contains(x));
            }
        }
    }
}
