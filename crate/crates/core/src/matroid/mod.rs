//! Independence oracles over a dense ground set `0..n`.
//!
//! A [`Matroid`] is an immutable, cheaply clonable handle. Concrete families
//! (free, uniform, partition, laminar, transversal, graphic) answer queries
//! directly; derived constructions (dual, deletion, contraction, parallel
//! extension, direct sum, union, maximum-weight-basis restriction) wrap inner
//! handles. Expensive wrappers memoise answers keyed by the queried subset.

mod descriptor;
mod families;

pub use descriptor::{build_matroid, LaminarSet, MatroidDescriptor};

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use spin::{Mutex, Once};

use crate::error::{Error, Result};
use crate::set::{bit_key, ElementSet};

const MEMO_CAPACITY: usize = 1 << 18;

/// Matroid independence oracle.
#[derive(Clone)]
pub struct Matroid(Arc<Node>);

struct Node {
    n: usize,
    kind: Kind,
    full_rank: Once<usize>,
    memo: Option<Mutex<BTreeMap<Vec<u64>, bool>>>,
}

/// Internal representation; also used by the bijection dispatch in `sbo`.
pub(crate) enum Kind {
    Free,
    Uniform {
        k: usize,
    },
    Partition {
        class_of: Vec<usize>,
        classes: Vec<ElementSet>,
        bounds: Vec<usize>,
    },
    /// Sets ordered innermost first.
    Laminar {
        sets: Vec<(ElementSet, usize)>,
    },
    Transversal {
        sets: Vec<ElementSet>,
    },
    Graphic {
        vertices: usize,
        edges: Vec<(usize, usize)>,
    },
    /// Explicit list of bases; not validated as a matroid by construction.
    BasisFamily {
        bases: Vec<ElementSet>,
    },
    Dual {
        inner: Matroid,
    },
    /// Element `i` is `kept[i]` of the inner ground set.
    Deletion {
        inner: Matroid,
        kept: Vec<usize>,
    },
    Contraction {
        inner: Matroid,
        kept: Vec<usize>,
        contracted_basis: ElementSet,
    },
    /// Element `inner.n() + j` is a parallel copy of `originals[j]`.
    Parallel {
        inner: Matroid,
        originals: Vec<usize>,
    },
    DirectSum {
        parts: Vec<Matroid>,
        offsets: Vec<usize>,
    },
    Union {
        parts: [Matroid; 2],
    },
    /// Bases are the maximum-weight bases of `inner` for weights whose
    /// level sets, heaviest first, are `levels`.
    MaxWeightBases {
        inner: Matroid,
        levels: Vec<ElementSet>,
        prefix_bases: Vec<ElementSet>,
    },
}

impl Kind {
    fn name(&self) -> &'static str {
        match self {
            Kind::Free => "free",
            Kind::Uniform { .. } => "uniform",
            Kind::Partition { .. } => "partition",
            Kind::Laminar { .. } => "laminar",
            Kind::Transversal { .. } => "transversal",
            Kind::Graphic { .. } => "graphic",
            Kind::BasisFamily { .. } => "basis_family",
            Kind::Dual { .. } => "dual",
            Kind::Deletion { .. } => "delete",
            Kind::Contraction { .. } => "contract",
            Kind::Parallel { .. } => "parallel",
            Kind::DirectSum { .. } => "direct_sum",
            Kind::Union { .. } => "union",
            Kind::MaxWeightBases { .. } => "max_weight_bases",
        }
    }

    fn memoised(&self) -> bool {
        matches!(
            self,
            Kind::Transversal { .. }
                | Kind::BasisFamily { .. }
                | Kind::Dual { .. }
                | Kind::Contraction { .. }
                | Kind::Union { .. }
                | Kind::MaxWeightBases { .. }
        )
    }
}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matroid({}, n={})", self.0.kind.name(), self.0.n)
    }
}

impl Matroid {
    fn from_kind(n: usize, kind: Kind) -> Self {
        let memo = kind.memoised().then(|| Mutex::new(BTreeMap::new()));
        Matroid(Arc::new(Node {
            n,
            kind,
            full_rank: Once::new(),
            memo,
        }))
    }

    pub(crate) fn kind(&self) -> &Kind {
        &self.0.kind
    }

    /// Short family name, e.g. `"partition"` or `"dual"`.
    pub fn family(&self) -> &'static str {
        self.0.kind.name()
    }

    /// Ground set size.
    pub fn n(&self) -> usize {
        self.0.n
    }

    pub fn ground(&self) -> ElementSet {
        ElementSet::full(self.0.n)
    }

    fn check_range(&self, x: &ElementSet) -> Result<()> {
        match x.max_element() {
            Some(m) if m >= self.0.n => Err(Error::OutOfRange {
                element: m,
                n: self.0.n,
            }),
            _ => Ok(()),
        }
    }

    /// Independence test.
    pub fn is_independent(&self, x: &ElementSet) -> Result<bool> {
        self.check_range(x)?;
        Ok(self.indep(x))
    }

    /// Rank `r(X)`, the size of a largest independent subset of `X`.
    pub fn rank(&self, x: &ElementSet) -> Result<usize> {
        self.check_range(x)?;
        Ok(self.rank_of(x))
    }

    /// Rank of the whole ground set.
    pub fn full_rank(&self) -> usize {
        *self.0.full_rank.call_once(|| self.rank_of(&self.ground()))
    }

    pub fn is_basis(&self, x: &ElementSet) -> Result<bool> {
        self.check_range(x)?;
        Ok(self.basis(x))
    }

    /// Greedy extension of `containing` to a maximal independent subset of
    /// `within`, scanning `within` in ascending order.
    pub fn find_basis(&self, within: &ElementSet, containing: &ElementSet) -> Result<ElementSet> {
        self.check_range(within)?;
        if !containing.is_subset(within) {
            return Err(Error::PreconditionViolated(format!(
                "seed {containing} is not inside {within}"
            )));
        }
        if !self.indep(containing) {
            return Err(Error::SeedDependent(containing.clone()));
        }
        Ok(self.extend(containing, within))
    }

    pub(crate) fn basis(&self, x: &ElementSet) -> bool {
        x.len() == self.full_rank() && self.indep(x)
    }

    pub(crate) fn rank_of(&self, x: &ElementSet) -> usize {
        self.extend(&ElementSet::new(), x).len()
    }

    /// Greedy growth of an independent `seed` inside `within`.
    pub(crate) fn extend(&self, seed: &ElementSet, within: &ElementSet) -> ElementSet {
        let mut current = seed.clone();
        for x in within.iter() {
            if current.contains(x) {
                continue;
            }
            let cand = current.with(x);
            if self.indep(&cand) {
                current = cand;
            }
        }
        current
    }

    /// Unchecked independence query; all members must be `< n`.
    pub(crate) fn indep(&self, x: &ElementSet) -> bool {
        let Some(memo) = &self.0.memo else {
            return self.compute_indep(x);
        };
        let key = bit_key(x);
        if let Some(&hit) = memo.lock().get(&key) {
            return hit;
        }
        let ans = self.compute_indep(x);
        let mut guard = memo.lock();
        if guard.len() < MEMO_CAPACITY {
            guard.insert(key, ans);
        }
        ans
    }

    fn compute_indep(&self, x: &ElementSet) -> bool {
        match &self.0.kind {
            Kind::Free => true,
            Kind::Uniform { k } => x.len() <= *k,
            Kind::Partition {
                class_of, bounds, ..
            } => families::partition_independent(class_of, bounds, x),
            Kind::Laminar { sets } => sets
                .iter()
                .all(|(members, cap)| x.iter().filter(|&e| members.contains(e)).count() <= *cap),
            Kind::Transversal { sets } => families::transversal_independent(sets, x),
            Kind::Graphic { vertices, edges } => families::forest(*vertices, edges, x),
            Kind::BasisFamily { bases } => bases.iter().any(|b| x.is_subset(b)),
            Kind::Dual { inner } => {
                let rest = x.complement(self.0.n);
                inner.rank_of(&rest) == inner.full_rank()
            }
            Kind::Deletion { inner, kept } => inner.indep(&x.map(|e| kept[e])),
            Kind::Contraction {
                inner,
                kept,
                contracted_basis,
                ..
            } => inner.indep(&x.map(|e| kept[e]).union(contracted_basis)),
            Kind::Parallel { inner, originals } => {
                let base = inner.n();
                let mut image = ElementSet::new();
                for e in x.iter() {
                    let o = if e < base { e } else { originals[e - base] };
                    if !image.insert(o) {
                        return false;
                    }
                }
                inner.indep(&image)
            }
            Kind::DirectSum { parts, offsets } => parts.iter().zip(offsets).all(|(part, &off)| {
                let local: ElementSet = x
                    .iter()
                    .filter(|&e| e >= off && e < off + part.n())
                    .map(|e| e - off)
                    .collect();
                part.indep(&local)
            }),
            Kind::Union { parts } => {
                let refs = [&parts[0], &parts[1]];
                crate::algos::partition_into_independent(&refs, x).is_ok()
            }
            Kind::MaxWeightBases {
                inner,
                levels,
                prefix_bases,
                ..
            } => levels.iter().zip(prefix_bases).all(|(level, prefix)| {
                let part = x.intersection(level);
                part.is_empty() || inner.indep(&part.union(prefix))
            }),
        }
    }

    // ------------------------------------------------------------------
    // Concrete families
    // ------------------------------------------------------------------

    /// Every subset independent.
    pub fn free(n: usize) -> Self {
        Self::from_kind(n, Kind::Free)
    }

    pub fn uniform(n: usize, k: usize) -> Result<Self> {
        if k > n {
            return Err(Error::MalformedDescriptor(format!(
                "uniform rank {k} exceeds ground size {n}"
            )));
        }
        Ok(Self::from_kind(n, Kind::Uniform { k }))
    }

    /// Partition matroid; the classes must partition `0..n` where `n` is the
    /// total class size.
    pub fn partition(classes: &[Vec<usize>], bounds: &[usize]) -> Result<Self> {
        let (n, class_of, classes) = families::check_partition(classes, bounds)?;
        Ok(Self::from_kind(
            n,
            Kind::Partition {
                class_of,
                classes,
                bounds: bounds.to_vec(),
            },
        ))
    }

    pub fn laminar(n: usize, sets: &[(Vec<usize>, usize)]) -> Result<Self> {
        let sets = families::check_laminar(n, sets)?;
        Ok(Self::from_kind(n, Kind::Laminar { sets }))
    }

    /// Transversal matroid of a set system: `X` is independent iff its
    /// elements can be matched to distinct sets containing them.
    pub fn transversal(n: usize, sets: &[Vec<usize>]) -> Result<Self> {
        let mut out = Vec::with_capacity(sets.len());
        for s in sets {
            if let Some(&bad) = s.iter().find(|&&e| e >= n) {
                return Err(Error::MalformedDescriptor(format!(
                    "transversal set member {bad} >= n = {n}"
                )));
            }
            out.push(ElementSet::from_iter_unsorted(s.iter().copied()));
        }
        Ok(Self::from_kind(n, Kind::Transversal { sets: out }))
    }

    /// Cycle matroid of a multigraph; element `i` is `edges[i]`.
    pub fn graphic(vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= vertices || v >= vertices) {
            return Err(Error::MalformedDescriptor(format!(
                "edge ({u},{v}) has an endpoint >= {vertices}"
            )));
        }
        Ok(Self::from_kind(
            edges.len(),
            Kind::Graphic {
                vertices,
                edges: edges.to_vec(),
            },
        ))
    }

    /// Set system given by its bases (independent sets are their subsets).
    /// The family is taken as is; use [`crate::verify::is_basis_family`] to
    /// check the basis axioms.
    pub fn from_bases(n: usize, bases: &[ElementSet]) -> Result<Self> {
        if bases.is_empty() {
            return Err(Error::MalformedDescriptor("empty basis family".into()));
        }
        for b in bases {
            if b.max_element().is_some_and(|m| m >= n) {
                return Err(Error::MalformedDescriptor(format!("basis {b} leaves 0..{n}")));
            }
        }
        let mut bases = bases.to_vec();
        bases.sort();
        bases.dedup();
        Ok(Self::from_kind(n, Kind::BasisFamily { bases }))
    }

    // ------------------------------------------------------------------
    // Derived constructions
    // ------------------------------------------------------------------

    /// Dual matroid: `X` independent iff `r(S \ X) = r(S)`.
    pub fn dual(&self) -> Self {
        Self::from_kind(self.n(), Kind::Dual { inner: self.clone() })
    }

    /// Deletes `removed`; the remaining elements are renumbered densely in
    /// ascending order (see [`Matroid::kept_elements`]).
    pub fn delete(&self, removed: &ElementSet) -> Result<Self> {
        self.check_range(removed)?;
        let kept = removed.complement(self.n()).into_vec();
        Ok(Self::from_kind(
            kept.len(),
            Kind::Deletion {
                inner: self.clone(),
                kept,
            },
        ))
    }

    /// Contracts `contracted`, renumbering the rest as for [`Matroid::delete`].
    /// Rank obeys `r'(X) = r(X ∪ T) - r(T)`.
    pub fn contract(&self, contracted: &ElementSet) -> Result<Self> {
        self.check_range(contracted)?;
        let kept = contracted.complement(self.n()).into_vec();
        let contracted_basis = self.extend(&ElementSet::new(), contracted);
        Ok(Self::from_kind(
            kept.len(),
            Kind::Contraction {
                inner: self.clone(),
                kept,
                contracted_basis,
            },
        ))
    }

    /// For deletions and contractions, the original index of each element.
    pub fn kept_elements(&self) -> Option<&[usize]> {
        match &self.0.kind {
            Kind::Deletion { kept, .. } | Kind::Contraction { kept, .. } => Some(kept),
            _ => None,
        }
    }

    /// Adds a parallel copy of each listed element. The copy of
    /// `originals[j]` gets index `n + j`.
    pub fn add_parallel(&self, originals: &[usize]) -> Result<Self> {
        if let Some(&bad) = originals.iter().find(|&&e| e >= self.n()) {
            return Err(Error::OutOfRange {
                element: bad,
                n: self.n(),
            });
        }
        Ok(Self::from_kind(
            self.n() + originals.len(),
            Kind::Parallel {
                inner: self.clone(),
                originals: originals.to_vec(),
            },
        ))
    }

    /// Parallel copy of every element; the copy of `s` is `n + s`.
    pub fn add_parallel_all(&self) -> Self {
        let all: Vec<usize> = (0..self.n()).collect();
        self.add_parallel(&all).expect("all elements are in range")
    }

    /// Maps an element of a parallel extension back to its original.
    pub fn parallel_original(&self, e: usize) -> Option<usize> {
        match &self.0.kind {
            Kind::Parallel { inner, originals } => {
                Some(if e < inner.n() { e } else { originals[e - inner.n()] })
            }
            _ => None,
        }
    }

    /// Direct sum; part `i` occupies a contiguous block of indices after parts `0..i`.
    pub fn direct_sum(parts: &[Matroid]) -> Self {
        let mut offsets = Vec::with_capacity(parts.len());
        let mut n = 0;
        for p in parts {
            offsets.push(n);
            n += p.n();
        }
        Self::from_kind(
            n,
            Kind::DirectSum {
                parts: parts.to_vec(),
                offsets,
            },
        )
    }

    /// Matroid union `M1 + M2` on a shared ground set; independence is
    /// decided by matroid partitioning.
    pub fn union(first: &Matroid, second: &Matroid) -> Result<Self> {
        if first.n() != second.n() {
            return Err(Error::GroundMismatch(first.n(), second.n()));
        }
        Ok(Self::from_kind(
            first.n(),
            Kind::Union {
                parts: [first.clone(), second.clone()],
            },
        ))
    }

    pub(crate) fn max_weight_bases(
        &self,
        levels: Vec<ElementSet>,
        prefix_bases: Vec<ElementSet>,
    ) -> Self {
        Self::from_kind(
            self.n(),
            Kind::MaxWeightBases {
                inner: self.clone(),
                levels,
                prefix_bases,
            },
        )
    }
}
