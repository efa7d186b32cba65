use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use super::intersection::same_ground;
use crate::error::{Error, Result};
use crate::matroid::Matroid;
use crate::rational::{Rational, RationalVector};
use crate::set::ElementSet;

/// Frank weight splitting `w = w1 + w2` certified by a common basis that is
/// simultaneously `w1`-maximum in `M1` and `w2`-maximum in `M2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSplit {
    pub w1: RationalVector,
    pub w2: RationalVector,
    pub optimum: ElementSet,
}

fn check_len(m: &Matroid, w: &RationalVector) -> Result<()> {
    if w.len() != m.n() {
        return Err(Error::PreconditionViolated(format!(
            "weight vector has length {} but ground set has {} elements",
            w.len(),
            m.n()
        )));
    }
    Ok(())
}

/// Greedy maximum-weight basis; equal weights are taken in ascending index order.
pub fn max_weight_basis(m: &Matroid, w: &RationalVector) -> Result<ElementSet> {
    check_len(m, w)?;
    let mut order: Vec<usize> = (0..m.n()).collect();
    order.sort_by(|&a, &b| w[b].cmp(&w[a]).then(a.cmp(&b)));
    let mut basis = ElementSet::new();
    for e in order {
        let cand = basis.with(e);
        if m.indep(&cand) {
            basis = cand;
        }
    }
    Ok(basis)
}

/// Path cost: sum of node lengths, then number of arcs.
type Cost = (Rational, usize);

/// One weighted augmentation: a path from sources to sinks minimising
/// `(length, arcs)` where nodes outside `I` cost `-w` and nodes inside cost `w`.
fn weighted_augment(
    m1: &Matroid,
    m2: &Matroid,
    w: &RationalVector,
    current: &ElementSet,
) -> Result<Option<ElementSet>> {
    let n = m1.n();
    let inside: Vec<usize> = current.iter().collect();
    let outside: Vec<usize> = current.complement(n).into_vec();
    let length = |v: usize| -> Rational {
        if current.contains(v) {
            w[v].clone()
        } else {
            -w[v].clone()
        }
    };

    let mut arcs: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &y in &inside {
        for &x in &outside {
            let swapped = current.exchange(y, x);
            if m1.indep(&swapped) {
                arcs[y].push(x);
            }
            if m2.indep(&swapped) {
                arcs[x].push(y);
            }
        }
    }

    let mut dist: Vec<Option<Cost>> = vec![None; n];
    let mut pred = vec![usize::MAX; n];
    for &x in &outside {
        if m1.indep(&current.with(x)) {
            dist[x] = Some((length(x), 0));
        }
    }
    let mut rounds = 0;
    loop {
        let mut changed = false;
        for u in 0..n {
            let Some((du, au)) = dist[u].clone() else {
                continue;
            };
            for &v in &arcs[u] {
                let cand = (&du + length(v), au + 1);
                if dist[v].as_ref().is_none_or(|d| cand < *d) {
                    dist[v] = Some(cand);
                    pred[v] = u;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
        rounds += 1;
        if rounds > n + 1 {
            return Err(Error::InternalInvariantBroken(
                "negative cycle in weighted exchange graph".into(),
            ));
        }
    }

    let mut best: Option<(Cost, usize)> = None;
    for &x in &outside {
        if !m2.indep(&current.with(x)) {
            continue;
        }
        if let Some(d) = &dist[x] {
            if best.as_ref().is_none_or(|(bd, _)| d < bd) {
                best = Some((d.clone(), x));
            }
        }
    }
    let Some((_, end)) = best else {
        return Ok(None);
    };
    let mut path = ElementSet::singleton(end);
    let mut v = end;
    while pred[v] != usize::MAX {
        v = pred[v];
        path.insert(v);
    }
    Ok(Some(current.symmetric_difference(&path)))
}

/// Longest-path potentials on the exchange graph of an optimal common basis.
/// `w2 = pi` and `w1 = w - pi` make `basis` maximum for both parts.
fn split_potentials(
    m1: &Matroid,
    m2: &Matroid,
    w: &RationalVector,
    basis: &ElementSet,
) -> Result<RationalVector> {
    let n = m1.n();
    // (from, to, length): y -> x of length w(x) - w(y) for M1 exchanges,
    // x -> y of length 0 for M2 exchanges.
    let mut edges: Vec<(usize, usize, Rational)> = Vec::new();
    for y in basis.iter() {
        for x in basis.complement(n).iter() {
            let swapped = basis.exchange(y, x);
            if m1.indep(&swapped) {
                edges.push((y, x, &w[x] - &w[y]));
            }
            if m2.indep(&swapped) {
                edges.push((x, y, Rational::zero()));
            }
        }
    }
    let mut pi = RationalVector::zeros(n);
    for round in 0..=n + 1 {
        let mut changed = false;
        for (from, to, len) in &edges {
            let cand = &pi[*from] + len;
            if cand > pi[*to] {
                pi[*to] = cand;
                changed = true;
            }
        }
        if !changed {
            return Ok(pi);
        }
        if round == n + 1 {
            break;
        }
    }
    Err(Error::InternalInvariantBroken(
        "improving exchange cycle at a supposedly optimal common basis".into(),
    ))
}

/// Maximum `w`-weight common basis together with an optimal weight splitting.
/// Integral weights give an integral split.
pub fn max_weight_common_basis_split(
    m1: &Matroid,
    m2: &Matroid,
    w: &RationalVector,
) -> Result<WeightSplit> {
    same_ground(m1, m2)?;
    check_len(m1, w)?;
    let mut current = ElementSet::new();
    while let Some(next) = weighted_augment(m1, m2, w, &current)? {
        current = next;
    }
    if current.len() != m1.full_rank() || current.len() != m2.full_rank() {
        return Err(Error::NoCommonBasis { witness: current });
    }
    let pi = split_potentials(m1, m2, w, &current)?;
    Ok(WeightSplit {
        w1: w.sub(&pi),
        w2: pi,
        optimum: current,
    })
}

/// A common basis minimising the overlap with `anchor`, itself a common basis.
pub fn min_overlap_common_basis(
    m1: &Matroid,
    m2: &Matroid,
    anchor: &ElementSet,
) -> Result<ElementSet> {
    same_ground(m1, m2)?;
    if !(m1.is_basis(anchor)? && m2.is_basis(anchor)?) {
        return Err(Error::NotCommonBases(anchor.clone()));
    }
    let w = RationalVector::indicator(m1.n(), anchor).neg();
    Ok(max_weight_common_basis_split(m1, m2, &w)?.optimum)
}

/// The matroid whose bases are exactly the `q`-maximum bases of `m`.
///
/// With weight levels `l_1 > ... > l_k`, level sets `S_j` and prefixes
/// `U_j = S_1 ∪ ... ∪ S_j`, a set `I` is independent iff for every `j`,
/// `r(U_{j-1} ∪ (I ∩ S_j)) - r(U_{j-1}) = |I ∩ S_j|`.
pub fn restrict_to_max_weight_bases(m: &Matroid, q: &RationalVector) -> Result<Matroid> {
    check_len(m, q)?;
    let mut values: Vec<&Rational> = q.iter().collect();
    values.sort();
    values.dedup();
    values.reverse();
    let mut levels = Vec::with_capacity(values.len());
    let mut prefix_bases = Vec::with_capacity(values.len());
    let mut prefix = ElementSet::new();
    for v in values {
        let level: ElementSet = (0..m.n()).filter(|&e| &q[e] == v).collect();
        prefix_bases.push(m.extend(&ElementSet::new(), &prefix));
        prefix = prefix.union(&level);
        levels.push(level);
    }
    Ok(m.max_weight_bases(levels, prefix_bases))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2() -> Matroid {
        Matroid::partition(&[vec![0, 1], vec![2, 3]], &[1, 1]).unwrap()
    }

    #[test]
    fn greedy_top_k() {
        let u = Matroid::uniform(4, 2).unwrap();
        let w = RationalVector::from_integers([3, 1, 2, 0]);
        assert_eq!(max_weight_basis(&u, &w).unwrap(), ElementSet::from([0, 2]));
        let w = RationalVector::from_integers([0, 5, 0, 5]);
        assert_eq!(max_weight_basis(&p2(), &w).unwrap(), ElementSet::from([1, 3]));
    }

    #[test]
    fn min_overlap_on_p2() {
        let u = Matroid::uniform(4, 2).unwrap();
        let got = min_overlap_common_basis(&p2(), &u, &ElementSet::from([0, 2])).unwrap();
        assert_eq!(got, ElementSet::from([1, 3]));
    }

    #[test]
    fn unique_common_basis_is_its_own_min_overlap() {
        let a = Matroid::partition(&[vec![0], vec![1, 2]], &[1, 0]).unwrap();
        let b = Matroid::uniform(3, 1).unwrap();
        let anchor = ElementSet::from([0]);
        assert_eq!(min_overlap_common_basis(&a, &b, &anchor).unwrap(), anchor);
    }

    #[test]
    fn zero_weights_zero_split() {
        let u = Matroid::uniform(4, 2).unwrap();
        let s = max_weight_common_basis_split(&p2(), &u, &RationalVector::zeros(4)).unwrap();
        assert_eq!(s.w1, RationalVector::zeros(4));
        assert_eq!(s.w2, RationalVector::zeros(4));
    }

    #[test]
    fn split_on_p2_uniform() {
        let u = Matroid::uniform(4, 2).unwrap();
        let w = RationalVector::from_integers([1, 0, 1, 0]);
        let s = max_weight_common_basis_split(&p2(), &u, &w).unwrap();
        assert_eq!(w.sum_over(&s.optimum), crate::rational::int(2));
        assert_eq!(s.w1.add(&s.w2), w);
        let g1 = max_weight_basis(&p2(), &s.w1).unwrap();
        let g2 = max_weight_basis(&u, &s.w2).unwrap();
        assert_eq!(s.w1.sum_over(&g1), s.w1.sum_over(&s.optimum));
        assert_eq!(s.w2.sum_over(&g2), s.w2.sum_over(&s.optimum));
    }

    #[test]
    fn constant_weights_keep_the_matroid() {
        let u = Matroid::uniform(4, 2).unwrap();
        let hat = restrict_to_max_weight_bases(&u, &RationalVector::from_integers([7; 4])).unwrap();
        for mask in 0u64..16 {
            let x = ElementSet::from_mask(mask);
            assert_eq!(hat.indep(&x), u.indep(&x));
        }
    }

    #[test]
    fn restriction_keeps_only_top_pair() {
        let u = Matroid::uniform(4, 2).unwrap();
        let hat = restrict_to_max_weight_bases(&u, &RationalVector::from_integers([2, 2, 1, 0])).unwrap();
        let bases: Vec<u64> = (0u64..16)
            .filter(|&m| hat.basis(&ElementSet::from_mask(m)))
            .collect();
        assert_eq!(bases, vec![0b0011]);
    }
}
