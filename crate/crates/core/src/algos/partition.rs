use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matroid::Matroid;
use crate::set::ElementSet;

/// Incremental matroid partitioning: maintains disjoint sets `parts[i]`,
/// each independent in `matroids[i]`, and inserts elements one at a time
/// along shortest augmenting paths.
#[derive(Clone, Debug)]
pub struct Partitioner<'a> {
    matroids: Vec<&'a Matroid>,
    parts: Vec<ElementSet>,
}

impl<'a> Partitioner<'a> {
    pub fn new(matroids: &[&'a Matroid]) -> Self {
        Partitioner {
            matroids: matroids.to_vec(),
            parts: vec![ElementSet::new(); matroids.len()],
        }
    }

    /// Starts from given parts; the caller guarantees disjointness and independence.
    pub fn with_parts(matroids: &[&'a Matroid], parts: Vec<ElementSet>) -> Self {
        debug_assert_eq!(matroids.len(), parts.len());
        Partitioner {
            matroids: matroids.to_vec(),
            parts,
        }
    }

    pub fn parts(&self) -> &[ElementSet] {
        &self.parts
    }

    pub fn into_parts(self) -> Vec<ElementSet> {
        self.parts
    }

    fn owner(&self, e: usize) -> Option<usize> {
        self.parts.iter().position(|p| p.contains(e))
    }

    /// Removes `e` from whichever part holds it.
    pub fn remove(&mut self, e: usize) -> bool {
        match self.owner(e) {
            Some(i) => self.parts[i].remove(e),
            None => false,
        }
    }

    /// Inserts `x` (not currently in any part). On failure returns the set `T`
    /// of elements reachable from `x`, which satisfies `sum_i r_i(T) = |T| - 1`.
    pub fn insert(&mut self, x: usize) -> core::result::Result<(), ElementSet> {
        debug_assert!(self.owner(x).is_none());
        // node -> (predecessor node, part label of the edge into it)
        let mut pred: Vec<(usize, usize)> = Vec::new();
        let mut nodes: Vec<usize> = vec![x];
        let mut visited = ElementSet::singleton(x);
        let mut queue = VecDeque::from([0usize]);
        pred.push((usize::MAX, usize::MAX));

        while let Some(idx) = queue.pop_front() {
            let u = nodes[idx];
            let own = self.owner(u);
            for (i, m) in self.matroids.iter().enumerate() {
                if own == Some(i) {
                    continue;
                }
                if m.indep(&self.parts[i].with(u)) {
                    self.apply(&nodes, &pred, idx, i);
                    return Ok(());
                }
            }
            for (i, m) in self.matroids.iter().enumerate() {
                if own == Some(i) {
                    continue;
                }
                for z in self.parts[i].iter() {
                    if visited.contains(z) {
                        continue;
                    }
                    if m.indep(&self.parts[i].exchange(z, u)) {
                        visited.insert(z);
                        nodes.push(z);
                        pred.push((idx, i));
                        queue.push_back(nodes.len() - 1);
                    }
                }
            }
        }
        Err(visited)
    }

    fn apply(&mut self, nodes: &[usize], pred: &[(usize, usize)], end: usize, sink_part: usize) {
        // Walk back: nodes[end] joins sink_part; each node joins the part it
        // displaced its successor from.
        let mut moves: Vec<(usize, usize)> = vec![(nodes[end], sink_part)];
        let mut cur = end;
        while pred[cur].0 != usize::MAX {
            let (prev, label) = pred[cur];
            moves.push((nodes[prev], label));
            cur = prev;
        }
        for &(e, _) in &moves {
            self.remove(e);
        }
        for &(e, part) in &moves {
            self.parts[part].insert(e);
        }
    }
}

/// Partitions `x` into sets independent in the respective matroids, or
/// returns a set `T ⊆ x` with `sum_i r_i(T) < |T|`.
pub fn partition_into_independent(
    matroids: &[&Matroid],
    x: &ElementSet,
) -> core::result::Result<Vec<ElementSet>, ElementSet> {
    let mut p = Partitioner::new(matroids);
    for e in x.iter() {
        p.insert(e)?;
    }
    Ok(p.into_parts())
}

/// Splits `x` into `k` disjoint bases of `M` restricted to `x`.
pub fn partition_into_bases(m: &Matroid, x: &ElementSet, k: usize) -> Result<Vec<ElementSet>> {
    if k == 0 {
        return Err(Error::PreconditionViolated("k must be at least 1".into()));
    }
    let copies: Vec<&Matroid> = vec![m; k];
    let parts = partition_into_independent(&copies, x).map_err(|witness| Error::Infeasible {
        k,
        witness,
        reason: "k * r(T) < |T|",
    })?;
    let r = m.rank(x)?;
    if x.len() != k * r {
        return Err(Error::Infeasible {
            k,
            witness: x.clone(),
            reason: "|X| < k * r(X)",
        });
    }
    Ok(parts)
}

/// Whether `x0` is the disjoint union of two bases of `M` (a basis of `M + M`).
pub fn union_is_basis(m: &Matroid, x0: &ElementSet) -> bool {
    if x0.len() != 2 * m.full_rank() || x0.max_element().is_some_and(|e| e >= m.n()) {
        return false;
    }
    partition_into_independent(&[m, m], x0).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> Matroid {
        Matroid::graphic(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn uniform_splits_into_pairs() {
        let m = Matroid::uniform(4, 2).unwrap();
        let parts = partition_into_bases(&m, &m.ground(), 2).unwrap();
        assert_eq!(parts.len(), 2);
        assert!(parts[0].is_disjoint(&parts[1]));
        assert!(parts.iter().all(|p| m.is_basis(p).unwrap()));
    }

    #[test]
    fn k4_has_two_edge_disjoint_spanning_trees() {
        let m = k4();
        let parts = partition_into_bases(&m, &m.ground(), 2).unwrap();
        assert_eq!(parts[0].union(&parts[1]), m.ground());
        assert!(parts.iter().all(|p| p.len() == 3 && m.is_basis(p).unwrap()));
    }

    #[test]
    fn overfull_reports_rank_deficient_witness() {
        let m = Matroid::uniform(4, 1).unwrap();
        match partition_into_bases(&m, &m.ground(), 2) {
            Err(Error::Infeasible { witness, k, .. }) => {
                assert!(k * m.rank(&witness).unwrap() < witness.len());
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn underfull_is_infeasible() {
        let m = Matroid::uniform(4, 3).unwrap();
        assert!(matches!(
            partition_into_bases(&m, &m.ground(), 2),
            Err(Error::Infeasible { .. })
        ));
        assert!(!union_is_basis(&m, &m.ground()));
    }

    #[test]
    fn zero_parts_rejected() {
        let m = Matroid::uniform(2, 1).unwrap();
        assert!(partition_into_bases(&m, &m.ground(), 0).is_err());
    }
}
