//! Exchange digraphs between two common bases and the prices read off a
//! topological order.
//!
//! Vertices are `B1 ∩ B2` (left) and `S \ (B1 ∪ B2)` (right). A left-to-right
//! edge `(x, y)` records a valid exchange `B1 - x + y` in `M1`, a right-to-left
//! edge `(y, x)` a valid exchange `B2 - x + y` in `M2`. The union variant
//! replaces both tests by membership of `X0 - x + y` in the bases of `2M+`.

use alloc::collections::{BTreeMap, BinaryHeap, VecDeque};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::algos::Partitioner;
use crate::error::{Error, Result};
use crate::matroid::{Kind, Matroid};
use crate::rational::{int, RationalVector};
use crate::set::ElementSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DigraphKind {
    /// Exchanges in `M1`, `M2` directly.
    D,
    /// Exchanges in the sums of parallel extensions.
    DPlus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExchangeDigraph {
    pub left: ElementSet,
    pub right: ElementSet,
    /// Sorted, without duplicates.
    pub edges: Vec<(usize, usize)>,
    pub kind: DigraphKind,
    pub b1: ElementSet,
    pub b2: ElementSet,
    /// The union basis `X0`, for [`DigraphKind::DPlus`] only.
    pub x0: Option<ElementSet>,
}

impl ExchangeDigraph {
    pub fn vertices(&self) -> ElementSet {
        self.left.union(&self.right)
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.edges.binary_search(&(from, to)).is_ok()
    }

    fn adjacency(&self) -> BTreeMap<usize, Vec<usize>> {
        let mut adj: BTreeMap<usize, Vec<usize>> = self.vertices().iter().map(|v| (v, Vec::new())).collect();
        for &(a, b) in &self.edges {
            adj.entry(a).or_default().push(b);
        }
        adj
    }
}

fn sides(b1: &ElementSet, b2: &ElementSet, n: usize) -> (ElementSet, ElementSet) {
    (b1.intersection(b2), b1.union(b2).complement(n))
}

/// The digraph on `V = (B1 ∩ B2) ∪ (S \ (B1 ∪ B2))` with one oracle call per
/// candidate edge.
pub fn build_exchange_digraph(
    m1: &Matroid,
    m2: &Matroid,
    b1: &ElementSet,
    b2: &ElementSet,
) -> Result<ExchangeDigraph> {
    let n = crate::algos::same_ground(m1, m2)?;
    for b in [b1, b2] {
        if !m1.is_basis(b)? || !m2.is_basis(b)? {
            return Err(Error::NotCommonBases(b.clone()));
        }
    }
    let (left, right) = sides(b1, b2, n);
    let mut edges = Vec::new();
    for x in left.iter() {
        for y in right.iter() {
            if m1.basis(&b1.exchange(x, y)) {
                edges.push((x, y));
            }
            if m2.basis(&b2.exchange(x, y)) {
                edges.push((y, x));
            }
        }
    }
    edges.sort_unstable();
    Ok(ExchangeDigraph {
        left,
        right,
        edges,
        kind: DigraphKind::D,
        b1: b1.clone(),
        b2: b2.clone(),
        x0: None,
    })
}

/// `X0 = (B1 ∪ B2) ∪ (B1 ∩ B2)'` where `x'` is `x + n`.
pub fn union_basis(b1: &ElementSet, b2: &ElementSet, n: usize) -> ElementSet {
    b1.union(b2).union(&b1.intersection(b2).map(|x| x + n))
}

fn parallel_inner(m: &Matroid) -> Result<(&Matroid, usize)> {
    match m.kind() {
        Kind::Parallel { inner, originals } if originals.len() == inner.n() && originals.iter().enumerate().all(|(i, &o)| i == o) => {
            Ok((inner, inner.n()))
        }
        _ => Err(Error::PreconditionViolated(format!(
            "expected a full parallel extension, got a {} matroid",
            m.family()
        ))),
    }
}

/// Membership tests `X0 - x + y ∈ 2B+` warm-started from a fixed split of
/// `X0` into two bases.
struct UnionTester<'a> {
    base: Partitioner<'a>,
}

impl<'a> UnionTester<'a> {
    fn new(m: &'a Matroid, parts: [ElementSet; 2]) -> Self {
        UnionTester {
            base: Partitioner::with_parts(&[m, m], parts.into()),
        }
    }

    fn exchange_ok(&self, x: usize, y: usize) -> bool {
        let mut p = self.base.clone();
        p.remove(x);
        p.insert(y).is_ok()
    }
}

/// The digraph `D+` for common bases `B1`, `B2` of `M1`, `M2`, given the full
/// parallel extensions `M1+`, `M2+`.
pub fn build_union_exchange_digraph(
    m1p: &Matroid,
    m2p: &Matroid,
    x0: &ElementSet,
    b1: &ElementSet,
    b2: &ElementSet,
) -> Result<ExchangeDigraph> {
    let (m1, n) = parallel_inner(m1p)?;
    let (m2, n2) = parallel_inner(m2p)?;
    if n != n2 {
        return Err(Error::GroundMismatch(n, n2));
    }
    if x0 != &union_basis(b1, b2, n) {
        return Err(Error::PreconditionViolated(format!(
            "X0 {x0} is not (B1 ∪ B2) ∪ (B1 ∩ B2)'"
        )));
    }
    let d = build_exchange_digraph(m1, m2, b1, b2)?;
    // B1 and its complement in X0 are both bases of each extension.
    let second = x0.difference(b1);
    for m in [m1p, m2p] {
        if !m.basis(&second) {
            return Err(Error::NotUnionBasis(x0.clone()));
        }
    }
    let t1 = UnionTester::new(m1p, [b1.clone(), second.clone()]);
    let t2 = UnionTester::new(m2p, [b1.clone(), second]);
    let mut edges = Vec::new();
    for x in d.left.iter() {
        for y in d.right.iter() {
            if t1.exchange_ok(x, y) {
                edges.push((x, y));
            }
            if t2.exchange_ok(x, y) {
                edges.push((y, x));
            }
        }
    }
    edges.sort_unstable();
    if let Some(missing) = d.edges.iter().find(|e| edges.binary_search(e).is_err()) {
        return Err(Error::InternalInvariantBroken(format!(
            "edge {missing:?} of D is missing from D+"
        )));
    }
    Ok(ExchangeDigraph {
        edges,
        kind: DigraphKind::DPlus,
        x0: Some(x0.clone()),
        ..d
    })
}

/// A directed cycle with the fewest vertices, or `None` if `g` is acyclic.
/// The cycle starts at the smallest vertex that lies on some shortest cycle;
/// breadth-first search visits successors in ascending order.
pub fn shortest_dicycle(g: &ExchangeDigraph) -> Option<Vec<usize>> {
    let adj = g.adjacency();
    let mut best: Option<Vec<usize>> = None;
    for &s in adj.keys() {
        let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
        let mut dist: BTreeMap<usize, usize> = BTreeMap::from([(s, 0)]);
        let mut queue = VecDeque::from([s]);
        let mut closing = None;
        'bfs: while let Some(u) = queue.pop_front() {
            if best.as_ref().is_some_and(|b| dist[&u] + 1 >= b.len()) {
                break;
            }
            for &v in &adj[&u] {
                if v == s {
                    closing = Some(u);
                    break 'bfs;
                }
                if !dist.contains_key(&v) {
                    dist.insert(v, dist[&u] + 1);
                    parent.insert(v, u);
                    queue.push_back(v);
                }
            }
        }
        if let Some(mut u) = closing {
            let mut cycle = vec![u];
            while u != s {
                u = parent[&u];
                cycle.push(u);
            }
            cycle.reverse();
            best = Some(cycle);
        }
    }
    best
}

/// Prices `0` on `B1 \ B2`, `n + 1` on `B2 \ B1`, and distinct values
/// `1, 2, ...` on `V` increasing along every edge. Ties in the topological
/// order go to the smallest element.
pub fn assign_prices(g: &ExchangeDigraph, b1: &ElementSet, b2: &ElementSet, n: usize) -> Result<RationalVector> {
    let adj = g.adjacency();
    let mut indegree: BTreeMap<usize, usize> = adj.keys().map(|&v| (v, 0)).collect();
    for &(_, b) in &g.edges {
        *indegree.get_mut(&b).expect("edge endpoint is a vertex") += 1;
    }
    let mut ready: BinaryHeap<Reverse<usize>> = indegree
        .iter()
        .filter(|(_, &d)| d == 0)
        .map(|(&v, _)| Reverse(v))
        .collect();
    let mut p = RationalVector::zeros(n);
    let mut next = 1i64;
    while let Some(Reverse(v)) = ready.pop() {
        p[v] = int(next);
        next += 1;
        for &w in &adj[&v] {
            let d = indegree.get_mut(&w).expect("edge endpoint is a vertex");
            *d -= 1;
            if *d == 0 {
                ready.push(Reverse(w));
            }
        }
    }
    if (next - 1) as usize != adj.len() {
        let cycle = shortest_dicycle(g).expect("peeling stalled, so a cycle exists");
        return Err(Error::CyclicInput { cycle });
    }
    let top = int(n as i64 + 1);
    for x in b2.difference(b1).iter() {
        p[x] = top.clone();
    }
    Ok(p)
}
