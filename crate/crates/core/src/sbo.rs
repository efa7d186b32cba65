//! Strongly-base-orderable bijections.
//!
//! For bases `B1`, `B2` of `M`, a bijection `f: B1 -> B2` is *SBO* when
//! `(B1 \ X) ∪ f(X)` is a basis for every `X ⊆ B1`. Constructions below fix
//! common elements (`f(x) = x` on `B1 ∩ B2`) and then pair the differences
//! family by family. Families without a structural construction fall back to
//! an exhaustive search over pairings of the differences (at most eight).

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::matroid::{Kind, Matroid};
use crate::set::ElementSet;

/// Largest `|B1 \ B2|` for which pairings are searched exhaustively.
pub const BRUTE_FORCE_LIMIT: usize = 8;

/// Bijection between two bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SboBijection {
    source: ElementSet,
    target: ElementSet,
    map: BTreeMap<usize, usize>,
}

impl SboBijection {
    /// Checks that `pairs` is a bijection from `source` onto `target`.
    pub fn new(source: ElementSet, target: ElementSet, pairs: &[(usize, usize)]) -> Result<Self> {
        let map: BTreeMap<usize, usize> = pairs.iter().copied().collect();
        let keys: ElementSet = map.keys().copied().collect();
        let values: ElementSet = map.values().copied().collect();
        if map.len() != pairs.len() || keys != source || values != target || values.len() != map.len() {
            return Err(Error::PreconditionViolated(format!(
                "pairs do not form a bijection {source} -> {target}"
            )));
        }
        Ok(SboBijection { source, target, map })
    }

    pub fn identity(basis: ElementSet) -> Self {
        let map = basis.iter().map(|x| (x, x)).collect();
        SboBijection {
            source: basis.clone(),
            target: basis,
            map,
        }
    }

    pub fn source(&self) -> &ElementSet {
        &self.source
    }

    pub fn target(&self) -> &ElementSet {
        &self.target
    }

    pub fn apply(&self, x: usize) -> Option<usize> {
        self.map.get(&x).copied()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.map.iter().map(|(&a, &b)| (a, b))
    }

    /// `(B1 \ X) ∪ f(X)`.
    pub fn swap(&self, x: &ElementSet) -> ElementSet {
        let moved: ElementSet = x.iter().filter_map(|e| self.apply(e)).collect();
        self.source.difference(x).union(&moved)
    }

    fn inverse(&self) -> BTreeMap<usize, usize> {
        self.map.iter().map(|(&a, &b)| (b, a)).collect()
    }
}

/// Validation strategy for [`validate_sbo_bijection`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValidationMode {
    /// Every subset of the source basis.
    Exhaustive,
    /// `count` uniformly random subsets from a seeded generator.
    Sample { count: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SboValidation {
    pub valid: bool,
    /// First subset `X` (in enumeration order) whose swap is not a basis.
    pub counterexample: Option<ElementSet>,
    pub checked: usize,
}

/// Checks the SBO property of `f` against the oracle of `m`.
pub fn validate_sbo_bijection(m: &Matroid, f: &SboBijection, mode: ValidationMode) -> SboValidation {
    let members: Vec<usize> = f.source.iter().collect();
    let subset = |mask: u64| -> ElementSet {
        members
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect()
    };
    let mut checked = 0;
    let mut check = |x: ElementSet| -> Option<SboValidation> {
        checked += 1;
        if m.basis(&f.swap(&x)) {
            None
        } else {
            Some(SboValidation {
                valid: false,
                counterexample: Some(x),
                checked,
            })
        }
    };
    match mode {
        ValidationMode::Exhaustive => {
            assert!(members.len() < 64, "exhaustive validation needs |B1| < 64");
            for mask in 0..1u64 << members.len() {
                if let Some(bad) = check(subset(mask)) {
                    return bad;
                }
            }
        }
        ValidationMode::Sample { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..count {
                let x: ElementSet = members
                    .iter()
                    .copied()
                    .filter(|_| rng.next_u32() & 1 == 1)
                    .collect();
                if let Some(bad) = check(x) {
                    return bad;
                }
            }
        }
    }
    SboValidation {
        valid: true,
        counterexample: None,
        checked,
    }
}

/// Fast validation that only ranges over subsets of `B1 \ B2`; sound for
/// bijections that fix the common elements.
fn valid_on_difference(m: &Matroid, f: &SboBijection) -> bool {
    let diff: Vec<usize> = f.source.difference(&f.target).into_vec();
    if diff.iter().any(|&x| f.apply(x) == Some(x)) || f.source.intersection(&f.target).iter().any(|x| f.apply(x) != Some(x)) {
        return validate_sbo_bijection(m, f, ValidationMode::Exhaustive).valid;
    }
    (0..1u64 << diff.len()).all(|mask| {
        let x: ElementSet = diff
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        m.basis(&f.swap(&x))
    })
}

/// Whether `m` belongs to a family with a structural bijection construction.
pub fn sbo_supported(m: &Matroid) -> bool {
    match m.kind() {
        Kind::Free | Kind::Uniform { .. } | Kind::Partition { .. } | Kind::Laminar { .. } => true,
        Kind::Transversal { .. } | Kind::Graphic { .. } | Kind::BasisFamily { .. } | Kind::Union { .. } => false,
        Kind::Dual { inner }
        | Kind::Deletion { inner, .. }
        | Kind::Contraction { inner, .. }
        | Kind::Parallel { inner, .. }
        | Kind::MaxWeightBases { inner, .. } => sbo_supported(inner),
        Kind::DirectSum { parts, .. } => parts.iter().all(sbo_supported),
    }
}

/// An SBO bijection `B1 -> B2`.
pub fn sbo_bijection(m: &Matroid, b1: &ElementSet, b2: &ElementSet) -> Result<SboBijection> {
    for b in [b1, b2] {
        if !m.is_basis(b)? {
            return Err(Error::NotBases(b.clone()));
        }
    }
    if let Some(pairs) = construct(m, b1, b2) {
        let f = assemble(b1, b2, &pairs)?;
        // Lifting through parallel copies has no structural guarantee of its own.
        if !matches!(m.kind(), Kind::Parallel { .. }) || valid_on_difference(m, &f) {
            return Ok(f);
        }
    }
    brute_force(m, b1, b2)
}

fn assemble(b1: &ElementSet, b2: &ElementSet, diff_pairs: &[(usize, usize)]) -> Result<SboBijection> {
    let mut pairs: Vec<(usize, usize)> = b1.intersection(b2).iter().map(|x| (x, x)).collect();
    pairs.extend_from_slice(diff_pairs);
    SboBijection::new(b1.clone(), b2.clone(), &pairs)
}

fn pair_ascending(left: &ElementSet, right: &ElementSet) -> Vec<(usize, usize)> {
    left.iter().zip(right.iter()).collect()
}

/// Pairs for `B1 \ B2 -> B2 \ B1`, or `None` if no structural construction applies.
fn construct(m: &Matroid, b1: &ElementSet, b2: &ElementSet) -> Option<Vec<(usize, usize)>> {
    let d1 = b1.difference(b2);
    let d2 = b2.difference(b1);
    match m.kind() {
        Kind::Free | Kind::Uniform { .. } => Some(pair_ascending(&d1, &d2)),
        Kind::Partition { classes, .. } => Some(
            classes
                .iter()
                .flat_map(|c| pair_ascending(&d1.intersection(c), &d2.intersection(c)))
                .collect(),
        ),
        Kind::Laminar { sets } => Some(laminar_pairs(sets, &d1, &d2)),
        Kind::Transversal { .. } | Kind::Graphic { .. } | Kind::BasisFamily { .. } | Kind::Union { .. } => None,
        Kind::MaxWeightBases { inner, .. } => construct(inner, b1, b2),
        Kind::Dual { inner } => {
            let c1 = b1.complement(m.n());
            let c2 = b2.complement(m.n());
            // An SBO map C2 -> C1 of the primal restricted to C2 \ C1 = B1 \ B2.
            construct(inner, &c2, &c1)
        }
        Kind::Deletion { inner, kept } => {
            let lift = |s: &ElementSet| s.map(|e| kept[e]);
            let (l1, l2) = (lift(b1), lift(b2));
            let completed = inner.extend(&l1, &inner.ground());
            let extra = completed.difference(&l1);
            let pairs = construct(inner, &completed, &l2.union(&extra))?;
            Some(unlift(&pairs, kept))
        }
        Kind::Contraction {
            inner,
            kept,
            contracted_basis,
            ..
        } => {
            let lift = |s: &ElementSet| s.map(|e| kept[e]).union(contracted_basis);
            let pairs = construct(inner, &lift(b1), &lift(b2))?;
            Some(unlift(&pairs, kept))
        }
        Kind::Parallel { inner, originals } => {
            let base = inner.n();
            let orig = |e: usize| if e < base { e } else { originals[e - base] };
            let p1 = b1.map(orig);
            let p2 = b2.map(orig);
            if p1.len() != b1.len() || p2.len() != b2.len() {
                return None;
            }
            let inner_pairs: BTreeMap<usize, usize> = construct(inner, &p1, &p2)?.into_iter().collect();
            let by_image: BTreeMap<usize, usize> = b2.iter().map(|e| (orig(e), e)).collect();
            Some(
                d1.iter()
                    .map(|e| {
                        let o = orig(e);
                        let image = inner_pairs.get(&o).copied().unwrap_or(o);
                        (e, by_image[&image])
                    })
                    .collect(),
            )
        }
        Kind::DirectSum { parts, offsets } => {
            let mut pairs = Vec::new();
            for (part, &off) in parts.iter().zip(offsets) {
                let local = |s: &ElementSet| -> ElementSet {
                    s.iter()
                        .filter(|&e| e >= off && e < off + part.n())
                        .map(|e| e - off)
                        .collect()
                };
                let sub = construct(part, &local(b1), &local(b2))?;
                pairs.extend(sub.into_iter().map(|(a, b)| (a + off, b + off)));
            }
            Some(pairs)
        }
    }
}

fn unlift(pairs: &[(usize, usize)], kept: &[usize]) -> Vec<(usize, usize)> {
    let index: BTreeMap<usize, usize> = kept.iter().enumerate().map(|(i, &o)| (o, i)).collect();
    pairs.iter().map(|(a, b)| (index[a], index[b])).collect()
}

/// Innermost sets first; inside each set, unmatched `B1`-only elements are
/// paired with unmatched `B2`-only elements in ascending order. Whatever is
/// left is paired at the root.
fn laminar_pairs(sets: &[(ElementSet, usize)], d1: &ElementSet, d2: &ElementSet) -> Vec<(usize, usize)> {
    let mut free1 = d1.clone();
    let mut free2 = d2.clone();
    let mut pairs = Vec::new();
    let mut pair_within = |scope: Option<&ElementSet>, free1: &mut ElementSet, free2: &mut ElementSet| {
        let (l, r) = match scope {
            Some(s) => (free1.intersection(s), free2.intersection(s)),
            None => (free1.clone(), free2.clone()),
        };
        for (a, b) in l.iter().zip(r.iter()) {
            pairs.push((a, b));
            free1.remove(a);
            free2.remove(b);
        }
    };
    for (members, _) in sets {
        pair_within(Some(members), &mut free1, &mut free2);
    }
    pair_within(None, &mut free1, &mut free2);
    pairs
}

fn brute_force(m: &Matroid, b1: &ElementSet, b2: &ElementSet) -> Result<SboBijection> {
    let d1 = b1.difference(b2);
    let mut d2: Vec<usize> = b2.difference(b1).into_vec();
    if d1.len() > BRUTE_FORCE_LIMIT {
        return Err(Error::NotSupported(format!(
            "{} matroid with |B1 \\ B2| = {} > {BRUTE_FORCE_LIMIT}",
            m.family(),
            d1.len()
        )));
    }
    loop {
        let pairs: Vec<(usize, usize)> = d1.iter().zip(d2.iter().copied()).collect();
        let f = assemble(b1, b2, &pairs)?;
        if valid_on_difference(m, &f) {
            return Ok(f);
        }
        if !next_permutation(&mut d2) {
            break;
        }
    }
    Err(Error::NotSupported(format!(
        "no strongly base orderable bijection exists between {b1} and {b2} in this {} matroid",
        m.family()
    )))
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Cycles of the merge multigraph on `X` whose edges are `{x, f1(x)}` and
/// `{x, f2(x)}`. Each cycle starts at its smallest vertex and follows an
/// `f1` edge first, so consecutive edges alternate `f1`, `f2`, `f1`, ...
pub fn merge_cycles(x: &ElementSet, f1: &SboBijection, f2: &SboBijection) -> Vec<Vec<usize>> {
    let inv1 = f1.inverse();
    let inv2 = f2.inverse();
    let partner1 = |v: usize| f1.apply(v).or_else(|| inv1.get(&v).copied());
    let partner2 = |v: usize| f2.apply(v).or_else(|| inv2.get(&v).copied());
    let mut visited = ElementSet::new();
    let mut cycles = Vec::new();
    for start in x.iter() {
        if visited.contains(start) {
            continue;
        }
        let mut cycle = vec![start];
        visited.insert(start);
        let mut v = start;
        let mut use_first = true;
        loop {
            let next = if use_first { partner1(v) } else { partner2(v) };
            let Some(next) = next else { break };
            use_first = !use_first;
            if next == start {
                break;
            }
            if !visited.insert(next) {
                break;
            }
            cycle.push(next);
            v = next;
        }
        cycles.push(cycle);
    }
    cycles
}

/// Splits `X` into two disjoint common bases of `m1` and `m2`, given a
/// partition of `X` into two bases of each matroid and SBO bijections
/// `f1: I1 -> I2` and `f2: J1 -> J2`.
///
/// The merge multigraph is a disjoint union of even cycles alternating
/// `f1`- and `f2`-pairs; colouring each cycle alternately (smallest vertex
/// first) picks exactly one end of every pair, so each colour class is a
/// swap `(I1 \ A) ∪ f1(A)` and likewise for `f2`.
pub fn dm_merge_two(
    m1: &Matroid,
    m2: &Matroid,
    x: &ElementSet,
    bases_m1: (&ElementSet, &ElementSet),
    bases_m2: (&ElementSet, &ElementSet),
    f1: &SboBijection,
    f2: &SboBijection,
) -> Result<(ElementSet, ElementSet)> {
    let fail = |what: String| Err(Error::PreconditionViolated(what));
    for (m, (a, b), name) in [(m1, bases_m1, "M1"), (m2, bases_m2, "M2")] {
        if !a.is_disjoint(b) || &a.union(b) != x {
            return fail(format!("{name} bases {a}, {b} do not partition {x}"));
        }
        if !m.is_basis(a)? || !m.is_basis(b)? {
            return fail(format!("{a} or {b} is not a basis of {name}"));
        }
    }
    if f1.source() != bases_m1.0 || f1.target() != bases_m1.1 {
        return fail("f1 does not map I1 onto I2".into());
    }
    if f2.source() != bases_m2.0 || f2.target() != bases_m2.1 {
        return fail("f2 does not map J1 onto J2".into());
    }

    let mut z1 = ElementSet::new();
    for cycle in merge_cycles(x, f1, f2) {
        if cycle.len() % 2 != 0 {
            return fail(format!("odd merge cycle {cycle:?}"));
        }
        z1 = z1.union(&cycle.iter().step_by(2).copied().collect());
    }
    let z2 = x.difference(&z1);
    for z in [&z1, &z2] {
        if !m1.basis(z) || !m2.basis(z) {
            return fail(format!(
                "merged part {z} is not a common basis; the bijections are not strongly base orderable"
            ));
        }
    }
    Ok((z1, z2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[usize]) -> ElementSet {
        ElementSet::from_iter_unsorted(xs.iter().copied())
    }

    fn p2() -> Matroid {
        Matroid::partition(&[vec![0, 1], vec![2, 3]], &[1, 1]).unwrap()
    }

    #[test]
    fn identity_on_equal_bases() {
        let b = set(&[0, 2]);
        let f = sbo_bijection(&p2(), &b, &b).unwrap();
        assert_eq!(f, SboBijection::identity(b));
    }

    #[test]
    fn partition_pairs_by_class() {
        let f = sbo_bijection(&p2(), &set(&[0, 2]), &set(&[1, 3])).unwrap();
        assert_eq!(f.apply(0), Some(1));
        assert_eq!(f.apply(2), Some(3));
        let v = validate_sbo_bijection(&p2(), &f, ValidationMode::Exhaustive);
        assert!(v.valid);
        assert_eq!(v.checked, 4);
    }

    #[test]
    fn not_bases_rejected() {
        assert_eq!(
            sbo_bijection(&p2(), &set(&[0, 1]), &set(&[1, 3])),
            Err(Error::NotBases(set(&[0, 1])))
        );
    }

    #[test]
    fn wrong_swap_on_k4_has_witness() {
        let k4 = Matroid::graphic(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        // paths 0-1-2-3 and 2-0-3-1
        let b1 = set(&[0, 3, 5]);
        let b2 = set(&[1, 2, 4]);
        assert!(k4.basis(&b1) && k4.basis(&b2));
        // f(0)=4: swapping edge (0,1) for (1,3) closes the triangle 1-2-3
        let f = SboBijection::new(b1, b2, &[(0, 4), (3, 1), (5, 2)]).unwrap();
        let v = validate_sbo_bijection(&k4, &f, ValidationMode::Exhaustive);
        assert!(!v.valid);
        let x = v.counterexample.unwrap();
        assert!(!k4.basis(&f.swap(&x)));
    }

    #[test]
    fn sampled_validation_finds_nothing_on_valid_map() {
        let f = sbo_bijection(&p2(), &set(&[0, 2]), &set(&[1, 3])).unwrap();
        let v = validate_sbo_bijection(&p2(), &f, ValidationMode::Sample { count: 20, seed: 3 });
        assert!(v.valid);
        assert_eq!(v.checked, 20);
    }

    #[test]
    fn bijection_constructor_rejects_non_bijections() {
        assert!(SboBijection::new(set(&[0, 1]), set(&[2, 3]), &[(0, 2), (1, 2)]).is_err());
        assert!(SboBijection::new(set(&[0, 1]), set(&[2, 3]), &[(0, 2)]).is_err());
    }

    #[test]
    fn merge_equal_partitions() {
        let u = Matroid::uniform(4, 2).unwrap();
        let (i1, i2) = (set(&[0, 1]), set(&[2, 3]));
        let f = sbo_bijection(&u, &i1, &i2).unwrap();
        let (z1, z2) = dm_merge_two(&u, &u, &u.ground(), (&i1, &i2), (&i1, &i2), &f, &f).unwrap();
        assert!(z1 == i1 || z1 == i2);
        assert_eq!(z1.union(&z2), u.ground());
    }

    #[test]
    fn merge_crossed_uniform_partitions() {
        let u = Matroid::uniform(4, 2).unwrap();
        let (i1, i2) = (set(&[0, 1]), set(&[2, 3]));
        let (j1, j2) = (set(&[0, 2]), set(&[1, 3]));
        let f1 = sbo_bijection(&u, &i1, &i2).unwrap();
        let f2 = sbo_bijection(&u, &j1, &j2).unwrap();
        let (z1, z2) = dm_merge_two(&u, &u, &u.ground(), (&i1, &i2), (&j1, &j2), &f1, &f2).unwrap();
        assert!(z1.is_disjoint(&z2));
        assert_eq!(z1.len(), 2);
        assert!(u.basis(&z1) && u.basis(&z2));
    }

    #[test]
    fn merge_rejects_bad_partition() {
        let u = Matroid::uniform(4, 2).unwrap();
        let (i1, i2) = (set(&[0, 1]), set(&[1, 3]));
        let f = SboBijection::new(i1.clone(), i2.clone(), &[(0, 3), (1, 1)]).unwrap();
        assert!(matches!(
            dm_merge_two(&u, &u, &u.ground(), (&i1, &i2), (&i1, &i2), &f, &f),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn support_classification() {
        assert!(sbo_supported(&p2().dual().add_parallel_all()));
        assert!(!sbo_supported(&Matroid::graphic(3, &[(0, 1)]).unwrap()));
    }

    #[test]
    fn permutations_enumerate_all() {
        let mut v = vec![0, 1, 2, 3];
        let mut count = 1;
        while next_permutation(&mut v) {
            count += 1;
        }
        assert_eq!(count, 24);
    }
}
