//! Canonically ordered subsets of a dense ground set `0..n`.

use alloc::vec::Vec;
use core::fmt;

/// A subset of the ground set, stored sorted and duplicate free.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(from = "Vec<usize>", into = "Vec<usize>"))]
pub struct ElementSet(Vec<usize>);

impl ElementSet {
    pub fn new() -> Self {
        ElementSet(Vec::new())
    }

    /// `0..n`.
    pub fn full(n: usize) -> Self {
        ElementSet((0..n).collect())
    }

    pub fn singleton(x: usize) -> Self {
        ElementSet(alloc::vec![x])
    }

    /// Builds a set from any iterator, sorting and deduplicating.
    pub fn from_iter_unsorted<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut v: Vec<usize> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        ElementSet(v)
    }

    /// Set whose members are the one-bits of `mask`.
    pub fn from_mask(mask: u64) -> Self {
        let mut v = Vec::with_capacity(mask.count_ones() as usize);
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            v.push(i);
            m &= m - 1;
        }
        ElementSet(v)
    }

    /// Characteristic bitmask; all members must be below 64.
    pub fn to_mask(&self) -> u64 {
        self.0.iter().fold(0u64, |m, &x| {
            debug_assert!(x < 64);
            m | (1u64 << x)
        })
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = usize> + ExactSizeIterator + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn max_element(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn insert(&mut self, x: usize) -> bool {
        match self.0.binary_search(&x) {
            Ok(_) => false,
            Err(pos) => {
                self.0.insert(pos, x);
                true
            }
        }
    }

    pub fn remove(&mut self, x: usize) -> bool {
        match self.0.binary_search(&x) {
            Ok(pos) => {
                self.0.remove(pos);
                true
            }
            Err(_) => false,
        }
    }

    /// `self - x + y`.
    pub fn exchange(&self, x: usize, y: usize) -> Self {
        let mut out = self.clone();
        out.remove(x);
        out.insert(y);
        out
    }

    pub fn with(&self, x: usize) -> Self {
        let mut out = self.clone();
        out.insert(x);
        out
    }

    pub fn without(&self, x: usize) -> Self {
        let mut out = self.clone();
        out.remove(x);
        out
    }

    pub fn union(&self, other: &Self) -> Self {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                core::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                core::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                core::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        ElementSet(out)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        ElementSet(self.0.iter().copied().filter(|&x| other.contains(x)).collect())
    }

    pub fn difference(&self, other: &Self) -> Self {
        ElementSet(self.0.iter().copied().filter(|&x| !other.contains(x)).collect())
    }

    pub fn symmetric_difference(&self, other: &Self) -> Self {
        self.difference(other).union(&other.difference(self))
    }

    /// `0..n` minus `self`.
    pub fn complement(&self, n: usize) -> Self {
        ElementSet((0..n).filter(|&x| !self.contains(x)).collect())
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.0.iter().all(|&x| other.contains(x))
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.0.iter().all(|&x| !other.contains(x))
    }

    /// Applies `f` to every member and re-canonicalises.
    pub fn map<F: FnMut(usize) -> usize>(&self, f: F) -> Self {
        Self::from_iter_unsorted(self.0.iter().copied().map(f))
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

impl From<Vec<usize>> for ElementSet {
    fn from(v: Vec<usize>) -> Self {
        Self::from_iter_unsorted(v)
    }
}

impl From<ElementSet> for Vec<usize> {
    fn from(s: ElementSet) -> Self {
        s.0
    }
}

impl<const N: usize> From<[usize; N]> for ElementSet {
    fn from(a: [usize; N]) -> Self {
        Self::from_iter_unsorted(a)
    }
}

impl FromIterator<usize> for ElementSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self::from_iter_unsorted(iter)
    }
}

impl<'a> IntoIterator for &'a ElementSet {
    type Item = usize;
    type IntoIter = core::iter::Copied<core::slice::Iter<'a, usize>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}

/// Compact bitset key used by the independence memo.
pub(crate) fn bit_key(set: &ElementSet) -> Vec<u64> {
    let words = set.max_element().map_or(0, |m| m / 64 + 1);
    let mut key = alloc::vec![0u64; words];
    for x in set.iter() {
        key[x / 64] |= 1u64 << (x % 64);
    }
    key
}
