//! Exhaustive verifiers and seeded instance generation.
//!
//! Every check enumerates bases or subsets and compares exact rational sums.
//! Enumeration is guarded: basis scans need `n <= 20`, subset scans
//! `n <= 12`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gs::{weighted_rank_valuation, ValuationTable};
use crate::matroid::{LaminarSet, Matroid, MatroidDescriptor};
use crate::rational::{Rational, RationalVector};
use crate::set::ElementSet;

pub const MAX_BASIS_SCAN: usize = 20;
pub const MAX_SUBSET_SCAN: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Conjecture {
    /// Rank valuations, arbitrary bundles.
    C0,
    /// Market form with bases.
    C1,
    /// Two-basis form.
    C2,
    /// Weighted market form.
    C3,
    /// Gross-substitutes valuations.
    C7,
}

impl Conjecture {
    pub fn as_str(self) -> &'static str {
        match self {
            Conjecture::C0 => "C0",
            Conjecture::C1 => "C1",
            Conjecture::C2 => "C2",
            Conjecture::C3 => "C3",
            Conjecture::C7 => "C7",
        }
    }

    /// Accepts `"2"` or `"C2"`.
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim_start_matches(['C', 'c']) {
            "0" => Some(Conjecture::C0),
            "1" => Some(Conjecture::C1),
            "2" => Some(Conjecture::C2),
            "3" => Some(Conjecture::C3),
            "7" => Some(Conjecture::C7),
            _ => None,
        }
    }
}

/// A failed condition: the set a buyer may pick, the resulting second set
/// where relevant, and what went wrong.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    /// `1` when buyer 1 arrives first, `2` otherwise.
    pub condition: u8,
    pub chosen: ElementSet,
    pub response: Option<ElementSet>,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub conjecture: Conjecture,
    pub pass: bool,
    /// Sorted.
    pub violations: Vec<Violation>,
    /// Whether buyer 1's optimal set is a single bundle.
    pub argmin_singleton: Option<bool>,
    /// Whether buyer 2's optimal set is a single bundle.
    pub argmax_singleton: Option<bool>,
    pub sizes: Vec<(&'static str, usize)>,
}

impl VerificationReport {
    pub fn new(conjecture: Conjecture) -> Self {
        VerificationReport {
            conjecture,
            pass: false,
            violations: Vec::new(),
            argmin_singleton: None,
            argmax_singleton: None,
            sizes: Vec::new(),
        }
    }

    pub fn finish(mut self) -> Self {
        self.violations.sort();
        self.pass = self.violations.is_empty();
        self
    }

    fn violate(&mut self, condition: u8, chosen: &ElementSet, response: Option<ElementSet>, message: String) {
        self.violations.push(Violation {
            condition,
            chosen: chosen.clone(),
            response,
            message,
        });
    }
}

fn guard(n: usize, limit: usize, what: &str) -> Result<()> {
    if n > limit {
        return Err(Error::TooLarge {
            guard: format!("{what} needs n <= {limit}, got {n}"),
        });
    }
    Ok(())
}

fn check_prices(n: usize, p: &RationalVector) -> Result<()> {
    if p.len() != n {
        return Err(Error::PreconditionViolated(format!(
            "price vector has length {} but ground set has {n} elements",
            p.len()
        )));
    }
    Ok(())
}

/// All bases in lexicographic order of their sorted element lists.
pub fn enumerate_bases(m: &Matroid) -> Result<Vec<ElementSet>> {
    guard(m.n(), MAX_BASIS_SCAN, "basis enumeration")?;
    let r = m.full_rank();
    let mut out = Vec::new();
    let mut stack = ElementSet::new();
    fn dfs(m: &Matroid, r: usize, next: usize, current: &mut ElementSet, out: &mut Vec<ElementSet>) {
        if current.len() == r {
            out.push(current.clone());
            return;
        }
        for e in next..m.n() {
            if m.n() - e < r - current.len() {
                break;
            }
            current.insert(e);
            if m.indep(current) {
                dfs(m, r, e + 1, current, out);
            }
            current.remove(e);
        }
    }
    dfs(m, r, 0, &mut stack, &mut out);
    Ok(out)
}

/// Nonempty, equicardinal, and closed under the basis exchange axiom.
pub fn is_basis_family(family: &[ElementSet]) -> bool {
    let Some(first) = family.first() else { return false };
    let set: BTreeSet<&ElementSet> = family.iter().collect();
    if family.iter().any(|b| b.len() != first.len()) {
        return false;
    }
    family.iter().all(|a| {
        family.iter().all(|b| {
            a.difference(b)
                .iter()
                .all(|x| b.difference(a).iter().any(|y| set.contains(&a.exchange(x, y))))
        })
    })
}

fn extremes(family: &[ElementSet], value: impl Fn(&ElementSet) -> Rational, max: bool) -> Vec<&ElementSet> {
    let values: Vec<Rational> = family.iter().map(&value).collect();
    let best = if max { values.iter().max() } else { values.iter().min() };
    let Some(best) = best.cloned() else { return Vec::new() };
    family.iter().zip(&values).filter(|(_, v)| **v == best).map(|(b, _)| b).collect()
}

/// Two-basis conditions on explicit families: cheapest members of `fam1`
/// lie in `fam2`, most expensive members of `fam2` lie in `fam1`.
pub fn verify_conjecture2_family(
    n: usize,
    fam1: &[ElementSet],
    fam2: &[ElementSet],
    p: &RationalVector,
) -> Result<VerificationReport> {
    check_prices(n, p)?;
    let in1: BTreeSet<&ElementSet> = fam1.iter().collect();
    let in2: BTreeSet<&ElementSet> = fam2.iter().collect();
    if in1.intersection(&in2).next().is_none() {
        return Err(Error::NoFeasiblePair);
    }
    let mut report = VerificationReport::new(Conjecture::C2);
    let lows = extremes(fam1, |b| p.sum_over(b), false);
    let highs = extremes(fam2, |b| p.sum_over(b), true);
    for b in &lows {
        if !in2.contains(b) {
            report.violate(1, b, None, format!("cheapest basis {b} of M1 is not a basis of M2"));
        }
    }
    for b in &highs {
        if !in1.contains(b) {
            report.violate(2, b, None, format!("most expensive basis {b} of M2 is not a basis of M1"));
        }
    }
    report.argmin_singleton = Some(lows.len() == 1);
    report.argmax_singleton = Some(highs.len() == 1);
    report.sizes = vec![("bases1", fam1.len()), ("bases2", fam2.len()), ("argmin", lows.len()), ("argmax", highs.len())];
    Ok(report.finish())
}

/// Market conditions on explicit families: every cheapest member of either
/// family leaves a member of the other.
pub fn verify_conjecture1_family(
    n: usize,
    fam1: &[ElementSet],
    fam2: &[ElementSet],
    p: &RationalVector,
) -> Result<VerificationReport> {
    check_prices(n, p)?;
    let in1: BTreeSet<&ElementSet> = fam1.iter().collect();
    let in2: BTreeSet<&ElementSet> = fam2.iter().collect();
    if !fam1.iter().any(|b| in2.contains(&b.complement(n))) {
        return Err(Error::NoFeasiblePair);
    }
    let mut report = VerificationReport::new(Conjecture::C1);
    let first = extremes(fam1, |b| p.sum_over(b), false);
    let second = extremes(fam2, |b| p.sum_over(b), false);
    for b in &first {
        let rest = b.complement(n);
        if !in2.contains(&rest) {
            report.violate(1, b, Some(rest), "remaining items are not a basis of M2".into());
        }
    }
    for b in &second {
        let rest = b.complement(n);
        if !in1.contains(&rest) {
            report.violate(2, b, Some(rest), "remaining items are not a basis of M1".into());
        }
    }
    report.argmin_singleton = Some(first.len() == 1);
    report.argmax_singleton = Some(second.len() == 1);
    report.sizes = vec![("bases1", fam1.len()), ("bases2", fam2.len()), ("argmin1", first.len()), ("argmin2", second.len())];
    Ok(report.finish())
}

/// Weighted market conditions on explicit families.
pub fn verify_conjecture3_family(
    n: usize,
    fam1: &[ElementSet],
    w1: &RationalVector,
    fam2: &[ElementSet],
    w2: &RationalVector,
    p: &RationalVector,
) -> Result<VerificationReport> {
    check_prices(n, p)?;
    check_prices(n, w1)?;
    check_prices(n, w2)?;
    let in1: BTreeSet<&ElementSet> = fam1.iter().collect();
    let in2: BTreeSet<&ElementSet> = fam2.iter().collect();
    let welfare = |x: &ElementSet| w1.sum_over(x) + w2.sum_over(&x.complement(n));
    let optimum = fam1
        .iter()
        .filter(|b| in2.contains(&b.complement(n)))
        .map(welfare)
        .max()
        .ok_or(Error::NoFeasiblePair)?;
    let mut report = VerificationReport::new(Conjecture::C3);
    let first = extremes(fam1, |b| w1.sum_over(b) - p.sum_over(b), true);
    let second = extremes(fam2, |b| w2.sum_over(b) - p.sum_over(b), true);
    for b in &first {
        let rest = b.complement(n);
        if !in2.contains(&rest) {
            report.violate(1, b, Some(rest), "remaining items are not a basis of M2".into());
        } else if welfare(b) != optimum {
            report.violate(1, b, Some(rest), format!("welfare {} below optimum {optimum}", welfare(b)));
        }
    }
    for b in &second {
        let rest = b.complement(n);
        if !in1.contains(&rest) {
            report.violate(2, b, Some(rest), "remaining items are not a basis of M1".into());
        } else if welfare(&rest) != optimum {
            report.violate(2, b, Some(rest.clone()), format!("welfare {} below optimum {optimum}", welfare(&rest)));
        }
    }
    report.argmin_singleton = Some(first.len() == 1);
    report.argmax_singleton = Some(second.len() == 1);
    report.sizes = vec![("bases1", fam1.len()), ("bases2", fam2.len()), ("argmax1", first.len()), ("argmax2", second.len())];
    Ok(report.finish())
}

fn ground_of(m1: &Matroid, m2: &Matroid) -> Result<usize> {
    if m1.n() != m2.n() {
        return Err(Error::GroundMismatch(m1.n(), m2.n()));
    }
    Ok(m1.n())
}

pub fn verify_conjecture1(m1: &Matroid, m2: &Matroid, p: &RationalVector) -> Result<VerificationReport> {
    let n = ground_of(m1, m2)?;
    verify_conjecture1_family(n, &enumerate_bases(m1)?, &enumerate_bases(m2)?, p)
}

pub fn verify_conjecture2(m1: &Matroid, m2: &Matroid, p: &RationalVector) -> Result<VerificationReport> {
    let n = ground_of(m1, m2)?;
    verify_conjecture2_family(n, &enumerate_bases(m1)?, &enumerate_bases(m2)?, p)
}

pub fn verify_conjecture3(
    m1: &Matroid,
    w1: &RationalVector,
    m2: &Matroid,
    w2: &RationalVector,
    p: &RationalVector,
) -> Result<VerificationReport> {
    let n = ground_of(m1, m2)?;
    verify_conjecture3_family(n, &enumerate_bases(m1)?, w1, &enumerate_bases(m2)?, w2, p)
}

/// Both arrival orders over all subsets: every utility-maximising first pick
/// followed by every best response reaches the maximum total rank.
pub fn verify_conjecture0(m1: &Matroid, m2: &Matroid, p: &RationalVector) -> Result<VerificationReport> {
    let n = ground_of(m1, m2)?;
    guard(n, MAX_SUBSET_SCAN, "subset scan")?;
    check_prices(n, p)?;
    let size = 1usize << n;
    let full = size - 1;
    let rank_table = |m: &Matroid| -> Vec<usize> { (0..size).map(|x| m.rank_of(&ElementSet::from_mask(x as u64))).collect() };
    let ranks = [rank_table(m1), rank_table(m2)];
    let mut cost = vec![Rational::zero(); size];
    for x in 1..size {
        let low = x.trailing_zeros() as usize;
        cost[x] = &cost[x & (x - 1)] + &p[low];
    }
    let optimum = (0..size).map(|x| ranks[0][x] + ranks[1][full ^ x]).max().expect("nonempty");

    let best_within = |r: &[usize], within: usize| -> Vec<usize> {
        let mut subs = Vec::new();
        let mut y = within;
        loop {
            subs.push(y);
            if y == 0 {
                break;
            }
            y = (y - 1) & within;
        }
        let utility = |y: usize| Rational::from_integer(r[y].into()) - &cost[y];
        let best = subs.iter().map(|&y| utility(y)).max().expect("nonempty");
        subs.into_iter().filter(|&y| utility(y) == best).collect()
    };

    let mut report = VerificationReport::new(Conjecture::C0);
    let mut counts = [0usize; 2];
    for (first, second, condition) in [(0usize, 1usize, 1u8), (1, 0, 2)] {
        let picks = best_within(&ranks[first], full);
        counts[first] = picks.len();
        for &x in &picks {
            for y in best_within(&ranks[second], full ^ x) {
                let total = ranks[first][x] + ranks[second][y];
                if total != optimum {
                    report.violate(
                        condition,
                        &ElementSet::from_mask(x as u64),
                        Some(ElementSet::from_mask(y as u64)),
                        format!("total rank {total} below optimum {optimum}"),
                    );
                }
            }
        }
    }
    report.argmin_singleton = Some(counts[0] == 1);
    report.argmax_singleton = Some(counts[1] == 1);
    report.sizes = vec![("subsets", size), ("picks1", counts[0]), ("picks2", counts[1])];
    Ok(report.finish())
}

/// Strict inequalities `p(a) < p(b)` forced by the market conditions when
/// each family has exactly one member whose complement lies in the other.
pub fn forced_inequalities(n: usize, fam1: &[ElementSet], fam2: &[ElementSet]) -> Option<Vec<(usize, usize)>> {
    let mut out = BTreeSet::new();
    for (own, other) in [(fam1, fam2), (fam2, fam1)] {
        let other: BTreeSet<&ElementSet> = other.iter().collect();
        let good: Vec<&ElementSet> = own.iter().filter(|b| other.contains(&b.complement(n))).collect();
        let [good] = good.as_slice() else { return None };
        for b in own.iter().filter(|b| b != good) {
            let (a, c) = (good.difference(b), b.difference(good));
            if a.len() == 1 && c.len() == 1 {
                out.insert((a.as_slice()[0], c.as_slice()[0]));
            }
        }
    }
    Some(out.into_iter().collect())
}

/// Whether every assignment of the distinct values `1..=n` to the elements
/// fails the market conditions.
pub fn all_orderings_fail(n: usize, fam1: &[ElementSet], fam2: &[ElementSet]) -> Result<bool> {
    let mut perm: Vec<i64> = (1..=n as i64).collect();
    loop {
        let p = RationalVector::from_integers(perm.iter().copied());
        if verify_conjecture1_family(n, fam1, fam2, &p)?.pass {
            return Ok(false);
        }
        // next lexicographic permutation
        let Some(i) = (1..perm.len()).rev().find(|&i| perm[i - 1] < perm[i]) else {
            return Ok(true);
        };
        let j = (i..perm.len()).rev().find(|&j| perm[j] > perm[i - 1]).expect("pivot");
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
}

/// Whether the forced inequalities close into a directed cycle.
pub fn inequalities_cyclic(n: usize, ineq: &[(usize, usize)]) -> bool {
    // repeatedly drop elements with no incoming inequality
    let mut alive: Vec<bool> = vec![true; n];
    loop {
        let source = (0..n).find(|&v| alive[v] && !ineq.iter().any(|&(a, b)| b == v && alive[a]));
        match source {
            Some(v) => alive[v] = false,
            None => return alive.iter().any(|&a| a),
        }
    }
}

/// The non-matroid families `{0,2},{0,3},{1,2},{1,3}` and `{1,3},{0,1},{2,3}`
/// on four items admit no market prices.
pub fn remark_families() -> (Vec<ElementSet>, Vec<ElementSet>) {
    let s = |a: usize, b: usize| ElementSet::from([a, b]);
    (vec![s(0, 2), s(0, 3), s(1, 2), s(1, 3)], vec![s(1, 3), s(0, 1), s(2, 3)])
}

/// Reproduces the nonexistence argument: derives the four forced
/// inequalities, checks they are cyclic, and confirms all 24 orderings fail.
pub fn remark_counterexample_check() -> bool {
    let (fam1, fam2) = remark_families();
    let Some(ineq) = forced_inequalities(4, &fam1, &fam2) else { return false };
    ineq == [(0, 1), (1, 2), (2, 3), (3, 0)]
        && inequalities_cyclic(4, &ineq)
        && all_orderings_fail(4, &fam1, &fam2).unwrap_or(false)
}

// ----------------------------------------------------------------------
// Instance generation
// ----------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InstanceKind {
    /// `M1` a partition matroid of pairs, `M2` uniform, graphic, laminar or
    /// transversal, with a planted common basis.
    PartitionVsAny,
    /// Partition or laminar matroids with a planted common basis.
    SboPair,
    /// Integral weights in `[-10, 10]` and a planted disjoint spanning pair.
    Weighted,
    /// Two matroids from the supported classes, no planted structure needed.
    RankValuation,
    /// Weighted matroid rank valuations as dense tables.
    GsTable,
}

impl InstanceKind {
    pub const ALL: [InstanceKind; 5] = [
        InstanceKind::PartitionVsAny,
        InstanceKind::SboPair,
        InstanceKind::Weighted,
        InstanceKind::RankValuation,
        InstanceKind::GsTable,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            InstanceKind::PartitionVsAny => "partition-vs-any",
            InstanceKind::SboPair => "sbo-pair",
            InstanceKind::Weighted => "weighted",
            InstanceKind::RankValuation => "rank-valuation",
            InstanceKind::GsTable => "gs-table",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub kind: InstanceKind,
    pub n: usize,
    pub matroid1: MatroidDescriptor,
    pub matroid2: MatroidDescriptor,
    pub weights1: Option<RationalVector>,
    pub weights2: Option<RationalVector>,
    pub valuations: Option<[ValuationTable; 2]>,
}

impl Instance {
    pub fn matroids(&self) -> Result<(Matroid, Matroid)> {
        Ok((self.matroid1.build()?, self.matroid2.build()?))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Family {
    Uniform,
    Graphic,
    Laminar,
    Transversal,
    Partition,
}

fn any_subset(rng: &mut ChaCha8Rng, n: usize) -> ElementSet {
    let k = rng.gen_range(0..=n);
    random_subset(rng, n, k)
}

fn random_subset(rng: &mut ChaCha8Rng, n: usize, k: usize) -> ElementSet {
    let mut all: Vec<usize> = (0..n).collect();
    all.shuffle(rng);
    all.into_iter().take(k).collect()
}

/// Classes of size one or two and one chosen element per class.
fn pair_partition(rng: &mut ChaCha8Rng, n: usize) -> (MatroidDescriptor, ElementSet) {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut classes = Vec::new();
    let mut i = 0;
    while i < n {
        let size = if i + 1 < n && rng.gen_bool(0.6) { 2 } else { 1 };
        let mut class = order[i..i + size].to_vec();
        class.sort_unstable();
        classes.push(class);
        i += size;
    }
    let chosen: ElementSet = classes.iter().map(|c| *c.choose(rng).expect("nonempty class")).collect();
    let bounds = vec![1; classes.len()];
    (MatroidDescriptor::Partition { classes, bounds }, chosen)
}

/// A random matroid of the given family in which `basis` is a basis.
fn with_basis(rng: &mut ChaCha8Rng, n: usize, basis: &ElementSet, family: Family) -> MatroidDescriptor {
    let r = basis.len();
    let rest: Vec<usize> = basis.complement(n).into_vec();
    match family {
        Family::Graphic if r > 0 => {
            let mut b: Vec<usize> = basis.iter().collect();
            b.shuffle(rng);
            let mut edges = vec![[0usize; 2]; n];
            for (k, &e) in b.iter().enumerate() {
                edges[e] = [rng.gen_range(0..=k), k + 1];
            }
            for &e in &rest {
                let u = rng.gen_range(0..=r);
                let mut v = rng.gen_range(0..r);
                if v >= u {
                    v += 1;
                }
                edges[e] = [u.min(v), u.max(v)];
            }
            MatroidDescriptor::Graphic { vertices: r + 1, edges }
        }
        Family::Uniform | Family::Graphic => MatroidDescriptor::Uniform { n, k: r },
        Family::Transversal if r > 0 => {
            let b: Vec<usize> = basis.iter().collect();
            let sets = b
                .iter()
                .map(|&e| {
                    let mut s: Vec<usize> = (0..n).filter(|&x| x == e || rng.gen_bool(0.3)).collect();
                    s.sort_unstable();
                    s
                })
                .collect();
            MatroidDescriptor::Transversal { n, sets }
        }
        Family::Transversal => MatroidDescriptor::Transversal { n, sets: Vec::new() },
        Family::Partition => {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(rng);
            let mut classes = Vec::new();
            let mut i = 0;
            while i < n {
                let size = rng.gen_range(1..=3).min(n - i);
                let mut class = order[i..i + size].to_vec();
                class.sort_unstable();
                classes.push(class);
                i += size;
            }
            let bounds = classes.iter().map(|c| c.iter().filter(|&&e| basis.contains(e)).count()).collect();
            MatroidDescriptor::Partition { classes, bounds }
        }
        Family::Laminar => {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(rng);
            let mut sets = vec![LaminarSet {
                members: (0..n).collect(),
                cap: r,
            }];
            let cap_for = |rng: &mut ChaCha8Rng, members: &[usize]| {
                let inside = members.iter().filter(|&&e| basis.contains(e)).count();
                (inside + usize::from(rng.gen_bool(0.3))).min(members.len())
            };
            // disjoint blocks of the shuffled order, each possibly with one nested block
            let mut start = 0;
            while start + 1 < n {
                let len = rng.gen_range(2..=(n - start).min(4));
                if len >= n {
                    break;
                }
                let mut block = order[start..start + len].to_vec();
                block.sort_unstable();
                let cap = cap_for(rng, &block);
                if len > 2 && rng.gen_bool(0.5) {
                    let mut inner = order[start..start + len - 1].to_vec();
                    inner.sort_unstable();
                    let inner_cap = cap_for(rng, &inner);
                    sets.push(LaminarSet { members: inner, cap: inner_cap });
                }
                sets.push(LaminarSet { members: block, cap });
                start += len + rng.gen_range(0..=1);
            }
            MatroidDescriptor::Laminar { n, sets }
        }
    }
}

fn any_family(rng: &mut ChaCha8Rng) -> Family {
    *[Family::Uniform, Family::Graphic, Family::Laminar, Family::Transversal]
        .choose(rng)
        .expect("nonempty")
}

fn sbo_family(rng: &mut ChaCha8Rng) -> Family {
    *[Family::Partition, Family::Laminar].choose(rng).expect("nonempty")
}

fn integer_weights(rng: &mut ChaCha8Rng, n: usize, lo: i64, hi: i64) -> RationalVector {
    RationalVector::from_integers((0..n).map(|_| rng.gen_range(lo..=hi)))
}

/// Two matroids on `n` elements with a planted pair `(B, S \ B)` of bases,
/// drawn from combinations the pipelines support.
fn planted_market(rng: &mut ChaCha8Rng, n: usize) -> (MatroidDescriptor, MatroidDescriptor) {
    if rng.gen_bool(0.5) {
        let (m1, b1) = pair_partition(rng, n);
        let fam = any_family(rng);
        (m1, with_basis(rng, n, &b1.complement(n), fam))
    } else {
        let b1 = any_subset(rng, n);
        let (f1, f2) = (sbo_family(rng), sbo_family(rng));
        let m1 = with_basis(rng, n, &b1, f1);
        let m2 = with_basis(rng, n, &b1.complement(n), f2);
        (m1, m2)
    }
}

/// A reproducible instance satisfying the hypothesis of its kind.
pub fn gen_instance(kind: InstanceKind, n: usize, seed: u64) -> Result<Instance> {
    if kind == InstanceKind::GsTable {
        guard(n, crate::gs::MAX_GS_ELEMENTS, "gs-table generation")?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rng = &mut rng;
    let mut instance = Instance {
        kind,
        n,
        matroid1: MatroidDescriptor::Free { n },
        matroid2: MatroidDescriptor::Free { n },
        weights1: None,
        weights2: None,
        valuations: None,
    };
    match kind {
        InstanceKind::PartitionVsAny => {
            let (m1, b) = pair_partition(rng, n);
            let fam = any_family(rng);
            instance.matroid1 = m1;
            instance.matroid2 = with_basis(rng, n, &b, fam);
        }
        InstanceKind::SboPair => {
            let b = any_subset(rng, n);
            let (f1, f2) = (sbo_family(rng), sbo_family(rng));
            instance.matroid1 = with_basis(rng, n, &b, f1);
            instance.matroid2 = with_basis(rng, n, &b, f2);
        }
        InstanceKind::Weighted => {
            (instance.matroid1, instance.matroid2) = planted_market(rng, n);
            instance.weights1 = Some(integer_weights(rng, n, -10, 10));
            instance.weights2 = Some(integer_weights(rng, n, -10, 10));
        }
        InstanceKind::RankValuation => {
            if rng.gen_bool(0.5) {
                let (m1, _) = pair_partition(rng, n);
                let b2 = any_subset(rng, n);
                let fam = any_family(rng);
                instance.matroid1 = m1;
                instance.matroid2 = with_basis(rng, n, &b2, fam);
            } else {
                let b1 = any_subset(rng, n);
                let b2 = any_subset(rng, n);
                let (f1, f2) = (sbo_family(rng), sbo_family(rng));
                instance.matroid1 = with_basis(rng, n, &b1, f1);
                instance.matroid2 = with_basis(rng, n, &b2, f2);
            }
        }
        InstanceKind::GsTable => {
            let families = [Family::Uniform, Family::Partition, Family::Laminar, Family::Graphic];
            let pick = |rng: &mut ChaCha8Rng| {
                let b = any_subset(rng, n);
                let fam = *families.choose(rng).expect("nonempty");
                with_basis(rng, n, &b, fam)
            };
            instance.matroid1 = pick(rng);
            instance.matroid2 = pick(rng);
            let w1 = integer_weights(rng, n, 0, 5);
            let w2 = integer_weights(rng, n, 0, 5);
            let (m1, m2) = instance.matroids()?;
            instance.valuations = Some([weighted_rank_valuation(&m1, &w1)?, weighted_rank_valuation(&m2, &w2)?]);
            instance.weights1 = Some(w1);
            instance.weights2 = Some(w2);
        }
    }
    Ok(instance)
}
