use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matroid::Matroid;
use crate::set::ElementSet;

pub(crate) fn same_ground(m1: &Matroid, m2: &Matroid) -> Result<usize> {
    if m1.n() != m2.n() {
        return Err(Error::GroundMismatch(m1.n(), m2.n()));
    }
    Ok(m1.n())
}

/// One shortest augmenting path in the exchange graph of `current`, or
/// `None` when `current` is a maximum common independent set.
///
/// Arcs: `y -> x` when `I - y + x` is independent in `M1`, `x -> y` when it
/// is independent in `M2` (`y` in `I`, `x` outside). Sources are `x` with
/// `I + x` independent in `M1`, sinks those with `I + x` independent in `M2`.
/// Breadth-first search visits sources and neighbours in ascending order.
fn augment(m1: &Matroid, m2: &Matroid, current: &ElementSet) -> Option<ElementSet> {
    let n = m1.n();
    let outside = current.complement(n);
    let mut pred = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    let sinks: Vec<bool> = (0..n)
        .map(|x| !current.contains(x) && m2.indep(&current.with(x)))
        .collect();
    for x in outside.iter() {
        if m1.indep(&current.with(x)) {
            seen[x] = true;
            queue.push_back(x);
        }
    }
    while let Some(u) = queue.pop_front() {
        if sinks[u] {
            let mut path = ElementSet::singleton(u);
            let mut v = u;
            while pred[v] != usize::MAX {
                v = pred[v];
                path.insert(v);
            }
            return Some(current.symmetric_difference(&path));
        }
        if current.contains(u) {
            for x in outside.iter() {
                if !seen[x] && m1.indep(&current.exchange(u, x)) {
                    seen[x] = true;
                    pred[x] = u;
                    queue.push_back(x);
                }
            }
        } else {
            for y in current.iter() {
                if !seen[y] && m2.indep(&current.exchange(y, u)) {
                    seen[y] = true;
                    pred[y] = u;
                    queue.push_back(y);
                }
            }
        }
    }
    None
}

/// Maximum-cardinality common independent set, by repeated shortest augmentation from the empty set.
pub fn max_common_independent(m1: &Matroid, m2: &Matroid) -> Result<ElementSet> {
    same_ground(m1, m2)?;
    let mut current = ElementSet::new();
    while let Some(next) = augment(m1, m2, &current) {
        current = next;
    }
    Ok(current)
}

/// A common basis, or `NoCommonBasis` carrying a maximum common independent set.
pub fn common_basis(m1: &Matroid, m2: &Matroid) -> Result<ElementSet> {
    let best = max_common_independent(m1, m2)?;
    if best.len() == m1.full_rank() && best.len() == m2.full_rank() {
        Ok(best)
    } else {
        Err(Error::NoCommonBasis { witness: best })
    }
}
