use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::set::ElementSet;

pub(super) fn partition_independent(class_of: &[usize], bounds: &[usize], x: &ElementSet) -> bool {
    let mut used = vec![0usize; bounds.len()];
    for e in x.iter() {
        let c = class_of[e];
        used[c] += 1;
        if used[c] > bounds[c] {
            return false;
        }
    }
    true
}

/// Returns `(n, class_of, classes)`.
pub(super) fn check_partition(
    classes: &[Vec<usize>],
    bounds: &[usize],
) -> Result<(usize, Vec<usize>, Vec<ElementSet>)> {
    if classes.len() != bounds.len() {
        return Err(Error::MalformedDescriptor(format!(
            "{} classes but {} bounds",
            classes.len(),
            bounds.len()
        )));
    }
    let n: usize = classes.iter().map(Vec::len).sum();
    let mut class_of = vec![usize::MAX; n];
    let mut sets = Vec::with_capacity(classes.len());
    for (c, (class, &bound)) in classes.iter().zip(bounds).enumerate() {
        if bound > class.len() {
            return Err(Error::MalformedDescriptor(format!(
                "bound {bound} exceeds size {} of class {c}",
                class.len()
            )));
        }
        for &e in class {
            if e >= n {
                return Err(Error::MalformedDescriptor(format!(
                    "element {e} outside 0..{n}; classes must partition the ground set"
                )));
            }
            if class_of[e] != usize::MAX {
                return Err(Error::MalformedDescriptor(format!(
                    "element {e} appears in two classes"
                )));
            }
            class_of[e] = c;
        }
        sets.push(ElementSet::from_iter_unsorted(class.iter().copied()));
    }
    Ok((n, class_of, sets))
}

/// Validates a laminar family and orders it innermost first.
pub(super) fn check_laminar(n: usize, sets: &[(Vec<usize>, usize)]) -> Result<Vec<(ElementSet, usize)>> {
    let mut out: Vec<(ElementSet, usize)> = Vec::with_capacity(sets.len());
    for (members, cap) in sets {
        if let Some(&bad) = members.iter().find(|&&e| e >= n) {
            return Err(Error::MalformedDescriptor(format!(
                "laminar member {bad} >= n = {n}"
            )));
        }
        out.push((ElementSet::from_iter_unsorted(members.iter().copied()), *cap));
    }
    for i in 0..out.len() {
        for j in i + 1..out.len() {
            let (a, b) = (&out[i].0, &out[j].0);
            if !(a.is_disjoint(b) || a.is_subset(b) || b.is_subset(a)) {
                return Err(Error::MalformedDescriptor(format!(
                    "sets {a} and {b} cross; family is not laminar"
                )));
            }
        }
    }
    out.sort_by_key(|(s, _)| s.len());
    Ok(out)
}

/// Bipartite matching of the elements of `x` into distinct sets (Kuhn's algorithm).
pub(super) fn transversal_independent(sets: &[ElementSet], x: &ElementSet) -> bool {
    if x.len() > sets.len() {
        return false;
    }
    let elems = x.as_slice();
    let adj: Vec<Vec<usize>> = elems
        .iter()
        .map(|&e| (0..sets.len()).filter(|&s| sets[s].contains(e)).collect())
        .collect();
    let mut owner: Vec<Option<usize>> = vec![None; sets.len()];
    for i in 0..elems.len() {
        let mut seen = vec![false; sets.len()];
        if !augment(i, &adj, &mut owner, &mut seen) {
            return false;
        }
    }
    true
}

fn augment(i: usize, adj: &[Vec<usize>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
    for &s in &adj[i] {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        match owner[s] {
            None => {
                owner[s] = Some(i);
                return true;
            }
            Some(j) => {
                if augment(j, adj, owner, seen) {
                    owner[s] = Some(i);
                    return true;
                }
            }
        }
    }
    false
}

/// Whether the selected edges form a forest.
pub(super) fn forest(vertices: usize, edges: &[(usize, usize)], x: &ElementSet) -> bool {
    let mut parent: Vec<usize> = (0..vertices).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for e in x.iter() {
        let (u, v) = edges[e];
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru == rv {
            return false;
        }
        parent[ru] = rv;
    }
    true
}
