//! End-to-end pricing.
//!
//! The two-basis form works with common bases of `(M1, M2)`: prices make
//! `B1` the unique cheapest basis of `M1` and `B2` the unique most expensive
//! basis of `M2`. The market form (disjoint bases covering `S`) is the
//! two-basis form on `(M1, M2*)`.

use alloc::format;
use alloc::vec::Vec;

use num_traits::One;

use crate::algos::{
    common_basis, max_common_independent, max_weight_common_basis_split, min_overlap_common_basis,
    partition_into_bases, restrict_to_max_weight_bases, same_ground,
};
use crate::error::{Error, Result};
use crate::exchange::{
    assign_prices, build_exchange_digraph, build_union_exchange_digraph, shortest_dicycle, union_basis,
};
use crate::matroid::Matroid;
use crate::rational::{common_denominator_of, int, Rational, RationalVector};
use crate::sbo::{dm_merge_two, sbo_bijection, sbo_supported};
use crate::set::ElementSet;

/// Which construction produced a price vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PricingMode {
    /// Exchange digraph with one matroid a partition matroid of pairs.
    Partition,
    /// Exchange digraph reached through the strongly-base-orderable loop.
    Sbo,
    /// Exchange digraph for matroids outside both supported classes; it
    /// happened to be acyclic.
    Exchange,
    Weighted,
    RankValuation,
    Gs,
}

impl PricingMode {
    pub fn as_str(self) -> &'static str {
        match self {
            PricingMode::Partition => "partition",
            PricingMode::Sbo => "sbo",
            PricingMode::Exchange => "exchange",
            PricingMode::Weighted => "weighted",
            PricingMode::RankValuation => "rank-valuation",
            PricingMode::Gs => "gs",
        }
    }
}

/// How the two-basis prices are obtained.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Method {
    /// Partition path if either matroid has the pair-partition shape, then the
    /// SBO loop if both are supported, otherwise the plain exchange digraph.
    #[default]
    Auto,
    Partition,
    Sbo,
}

/// Weight-splitting data of the weighted reduction, in the units of the
/// input weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedCertificate {
    pub q1: RationalVector,
    pub q2: RationalVector,
    /// Unweighted prices on the restricted matroids.
    pub p_hat: RationalVector,
    /// Effective multiplier of `p_hat` in the output.
    pub epsilon: Rational,
    /// Lower bound on every nonzero gap `|q_i(X) - q_i(Y)|`.
    pub delta: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PricingResult {
    pub prices: RationalVector,
    pub mode: PricingMode,
    pub b1: ElementSet,
    pub b2: ElementSet,
    pub iterations: usize,
    pub weighted: Option<WeightedCertificate>,
}

/// State of the strongly-base-orderable loop.
#[derive(Clone, Debug)]
pub struct SboLoopState {
    pub b1: ElementSet,
    pub b2: ElementSet,
    pub m1_plus: Matroid,
    pub m2_plus: Matroid,
    pub x0: ElementSet,
}

impl SboLoopState {
    pub fn new(m1: &Matroid, m2: &Matroid, b1: ElementSet, b2: ElementSet) -> Self {
        let x0 = union_basis(&b1, &b2, m1.n());
        SboLoopState {
            b1,
            b2,
            m1_plus: m1.add_parallel_all(),
            m2_plus: m2.add_parallel_all(),
            x0,
        }
    }

    pub fn overlap(&self) -> usize {
        self.b1.intersection(&self.b2).len()
    }
}

/// Whether the bases of `m` are exactly the sets meeting every class of some
/// partition into parts of size one or two in one element, up to loops.
///
/// Decided by oracle: there are no parallel classes of size three or more,
/// and the rank equals the number of non-loop parallel classes.
pub fn is_pair_partition(m: &Matroid) -> bool {
    let loops: Vec<bool> = (0..m.n()).map(|e| !m.indep(&ElementSet::singleton(e))).collect();
    let mut class_of: Vec<Option<usize>> = alloc::vec![None; m.n()];
    let mut classes = 0;
    for e in 0..m.n() {
        if loops[e] || class_of[e].is_some() {
            continue;
        }
        let mut size = 1;
        class_of[e] = Some(classes);
        for f in e + 1..m.n() {
            if !loops[f] && !m.indep(&ElementSet::from([e, f])) {
                if class_of[f].is_some() {
                    return false;
                }
                class_of[f] = Some(classes);
                size += 1;
            }
        }
        if size > 2 {
            return false;
        }
        classes += 1;
    }
    m.full_rank() == classes
}

fn disjoint_pair(m1: &Matroid, m2_dual: &Matroid) -> Result<ElementSet> {
    common_basis(m1, m2_dual).map_err(|e| match e {
        Error::NoCommonBasis { .. } => Error::NoDisjointSpanningPair,
        other => other,
    })
}

/// Exchange digraph on a minimum-overlap pair. A cycle either breaks an
/// invariant (`strict`) or is reported as unresolved.
fn exchange_path(m1: &Matroid, m2: &Matroid, mode: PricingMode, strict: bool) -> Result<PricingResult> {
    let n = same_ground(m1, m2)?;
    let b1 = common_basis(m1, m2)?;
    let b2 = min_overlap_common_basis(m1, m2, &b1)?;
    let d = build_exchange_digraph(m1, m2, &b1, &b2)?;
    let prices = match assign_prices(&d, &b1, &b2, n) {
        Ok(p) => p,
        Err(Error::CyclicInput { cycle }) if strict => {
            return Err(Error::InternalInvariantBroken(format!(
                "exchange digraph has the cycle {cycle:?} although M1 is a partition matroid of pairs"
            )))
        }
        Err(Error::CyclicInput { cycle }) => return Err(Error::Unresolved { b1, b2, cycle }),
        Err(e) => return Err(e),
    };
    Ok(PricingResult {
        prices,
        mode,
        b1,
        b2,
        iterations: 1,
        weighted: None,
    })
}

/// Two-basis prices when `M1` is a partition matroid with classes of size at
/// most two and unit bounds.
pub fn price_conjecture2_partition(m1: &Matroid, m2: &Matroid) -> Result<PricingResult> {
    same_ground(m1, m2)?;
    if !is_pair_partition(m1) {
        return Err(Error::PreconditionViolated(
            "M1 is not a partition matroid with classes of size at most 2 and unit bounds".into(),
        ));
    }
    exchange_path(m1, m2, PricingMode::Partition, true)
}

/// Reverses the roles: prices for `(M2, M1)` mirrored by `p -> n + 1 - p`.
fn mirrored(r: PricingResult, n: usize) -> PricingResult {
    let top = int(n as i64 + 1);
    PricingResult {
        prices: r.prices.iter().map(|p| &top - p).collect(),
        b1: r.b2,
        b2: r.b1,
        ..r
    }
}

fn partition_either(m1: &Matroid, m2: &Matroid) -> Option<Result<PricingResult>> {
    if is_pair_partition(m1) {
        Some(price_conjecture2_partition(m1, m2))
    } else if is_pair_partition(m2) {
        Some(price_conjecture2_partition(m2, m1).map(|r| mirrored(r, m1.n())))
    } else {
        None
    }
}

/// Two-basis prices for matroids with strongly-base-orderable bijections.
pub fn price_conjecture2_sbo(m1: &Matroid, m2: &Matroid) -> Result<PricingResult> {
    price_conjecture2_sbo_traced(m1, m2).map(|(r, _)| r)
}

/// As [`price_conjecture2_sbo`], also returning `|B1 ∩ B2|` at the start of
/// every iteration.
pub fn price_conjecture2_sbo_traced(m1: &Matroid, m2: &Matroid) -> Result<(PricingResult, Vec<usize>)> {
    let n = same_ground(m1, m2)?;
    let b = common_basis(m1, m2)?;
    let mut trace = Vec::new();
    let mut state = SboLoopState::new(m1, m2, b.clone(), b);
    let project = |z: &ElementSet| z.map(|e| if e < n { e } else { e - n });
    let broken = |what: &str, e: Error| Error::InternalInvariantBroken(format!("{what}: {e}"));
    for iteration in 1..=n + 1 {
        trace.push(state.overlap());
        let dp = build_union_exchange_digraph(&state.m1_plus, &state.m2_plus, &state.x0, &state.b1, &state.b2)?;
        let Some(cycle) = shortest_dicycle(&dp) else {
            let d = build_exchange_digraph(m1, m2, &state.b1, &state.b2)?;
            let prices = assign_prices(&d, &state.b1, &state.b2, n)
                .map_err(|e| broken("D is cyclic while D+ is acyclic", e))?;
            let result = PricingResult {
                prices,
                mode: PricingMode::Sbo,
                b1: state.b1,
                b2: state.b2,
                iterations: iteration,
                weighted: None,
            };
            return Ok((result, trace));
        };
        let xnew = state.x0.symmetric_difference(&cycle.iter().copied().collect());
        let split = |m: &Matroid| -> Result<(ElementSet, ElementSet)> {
            let mut parts = partition_into_bases(m, &xnew, 2)
                .map_err(|e| broken("X0 plus a shortest cycle is not a union basis", e))?;
            let second = parts.pop().expect("two parts");
            Ok((parts.pop().expect("two parts"), second))
        };
        let (i1, i2) = split(&state.m1_plus)?;
        let (j1, j2) = split(&state.m2_plus)?;
        let f1 = sbo_bijection(&state.m1_plus, &i1, &i2)?;
        let f2 = sbo_bijection(&state.m2_plus, &j1, &j2)?;
        let (z1, z2) = dm_merge_two(&state.m1_plus, &state.m2_plus, &xnew, (&i1, &i2), (&j1, &j2), &f1, &f2)?;
        let (b1, b2) = (project(&z1), project(&z2));
        let before = state.overlap();
        state = SboLoopState::new(m1, m2, b1, b2);
        for b in [&state.b1, &state.b2] {
            if !(m1.basis(b) && m2.basis(b)) {
                return Err(Error::InternalInvariantBroken(format!("projected set {b} is not a common basis")));
            }
        }
        if state.overlap() >= before {
            return Err(Error::InternalInvariantBroken(format!(
                "overlap did not decrease ({before} -> {})",
                state.overlap()
            )));
        }
    }
    Err(Error::InternalInvariantBroken("loop exceeded |S| iterations".into()))
}

/// Two-basis prices for common bases of `(M1, M2)`.
pub fn price_conjecture2(m1: &Matroid, m2: &Matroid, method: Method) -> Result<PricingResult> {
    same_ground(m1, m2)?;
    match method {
        Method::Partition => partition_either(m1, m2).unwrap_or_else(|| {
            Err(Error::PreconditionViolated(
                "neither matroid is a partition matroid with classes of size at most 2 and unit bounds".into(),
            ))
        }),
        Method::Sbo => price_conjecture2_sbo(m1, m2),
        Method::Auto => {
            if let Some(r) = partition_either(m1, m2) {
                r
            } else if sbo_supported(m1) && sbo_supported(m2) {
                price_conjecture2_sbo(m1, m2)
            } else {
                exchange_path(m1, m2, PricingMode::Exchange, false)
            }
        }
    }
}

/// Market-form prices: every cheapest basis of either buyer leaves a basis of
/// the other. `b1` and `b2` are the unique cheapest bases of `M1` and `M2`.
pub fn price_conjecture1(m1: &Matroid, m2: &Matroid, method: Method) -> Result<PricingResult> {
    let n = same_ground(m1, m2)?;
    let m2d = m2.dual();
    disjoint_pair(m1, &m2d)?;
    let to_market = |r: PricingResult| PricingResult {
        b2: r.b2.complement(n),
        ..r
    };
    if method != Method::Sbo {
        if let Some(r) = partition_either(m1, &m2d) {
            return r.map(to_market);
        }
        // The market form is symmetric in the two buyers.
        if let Some(r) = partition_either(m2, &m1.dual()) {
            return r.map(|r| {
                let r = to_market(r);
                PricingResult {
                    b1: r.b2.clone(),
                    b2: r.b1.clone(),
                    ..r
                }
            });
        }
    }
    price_conjecture2(m1, &m2d, method).map(to_market)
}

/// Bases `B1` of `M1` and `B2` of `M2` maximising `|B1 ∪ B2|`.
pub fn max_union_bases(m1: &Matroid, m2: &Matroid) -> Result<(ElementSet, ElementSet)> {
    let n = same_ground(m1, m2)?;
    let m2d = m2.dual();
    let i = max_common_independent(m1, &m2d)?;
    let ground = ElementSet::full(n);
    let b1 = m1.find_basis(&ground, &i)?;
    let c = m2d.find_basis(&ground, &i)?;
    Ok((b1, c.complement(n)))
}

/// Prices for two buyers valuing bundles by matroid rank.
pub fn price_rank_valuations(m1: &Matroid, m2: &Matroid, method: Method) -> Result<PricingResult> {
    let n = same_ground(m1, m2)?;
    let (h1, h2) = max_union_bases(m1, m2)?;
    let common = h1.intersection(&h2);
    let outside = h1.union(&h2).complement(n);

    let reduce = |m: &Matroid| -> Result<(Matroid, Vec<usize>)> {
        let d = m.delete(&outside)?;
        let kept: Vec<usize> = d.kept_elements().map_or_else(|| (0..n).collect(), <[usize]>::to_vec);
        let local: ElementSet = kept
            .iter()
            .enumerate()
            .filter(|(_, o)| common.contains(**o))
            .map(|(i, _)| i)
            .collect();
        let c = d.contract(&local)?;
        let kept2 = c.kept_elements().map_or_else(|| (0..d.n()).collect(), <[usize]>::to_vec);
        Ok((c, kept2.iter().map(|&i| kept[i]).collect()))
    };
    let (r1, original) = reduce(m1)?;
    let (r2, _) = reduce(m2)?;

    let mut prices = RationalVector::zeros(n);
    for e in outside.iter() {
        prices[e] = Rational::one();
    }
    let (mut b1, mut b2) = (common.clone(), common.clone());
    let mut iterations = 0;
    if !original.is_empty() {
        let sub = price_conjecture1(&r1, &r2, method)?;
        let (lo, hi) = (sub.prices.min().expect("nonempty").clone(), sub.prices.max().expect("nonempty").clone());
        let alpha = Rational::one() / (int(2) * (Rational::one() + &hi - &lo));
        let beta = Rational::new(1.into(), 4.into()) - &alpha * &lo;
        for (i, &o) in original.iter().enumerate() {
            prices[o] = &alpha * &sub.prices[i] + &beta;
        }
        let lift = |s: &ElementSet| s.map(|i| original[i]);
        b1 = b1.union(&lift(&sub.b1));
        b2 = b2.union(&lift(&sub.b2));
        iterations = sub.iterations;
    }
    Ok(PricingResult {
        prices,
        mode: PricingMode::RankValuation,
        b1,
        b2,
        iterations,
        weighted: None,
    })
}

/// Prices for two buyers choosing bases with additive weights.
pub fn price_weighted(
    m1: &Matroid,
    w1: &RationalVector,
    m2: &Matroid,
    w2: &RationalVector,
    method: Method,
) -> Result<PricingResult> {
    let n = same_ground(m1, m2)?;
    for w in [w1, w2] {
        if w.len() != n {
            return Err(Error::PreconditionViolated(format!(
                "weight vector has length {} but ground set has {n} elements",
                w.len()
            )));
        }
    }
    let m2d = m2.dual();
    disjoint_pair(m1, &m2d)?;
    let scale = Rational::from_integer(common_denominator_of(&[w1, w2]));
    let (sw1, sw2) = (w1.scale(&scale), w2.scale(&scale));
    let split = max_weight_common_basis_split(m1, &m2d, &sw1.sub(&sw2))?;
    let (q1, q2) = (split.w1, split.w2);
    if !(q1.is_integral() && q2.is_integral()) {
        return Err(Error::InternalInvariantBroken("weight split of integral weights is not integral".into()));
    }
    let h1 = restrict_to_max_weight_bases(m1, &q1)?;
    let h2 = restrict_to_max_weight_bases(&m2d, &q2)?;
    let hat = price_conjecture2(&h1, &h2, method)?;
    let epsilon = Rational::one() / (Rational::one() + int(2) * hat.prices.sum_abs());
    if !(&epsilon * hat.prices.sum_abs() < Rational::new(1.into(), 2.into())) {
        return Err(Error::InternalInvariantBroken("epsilon bound fails".into()));
    }
    let prices = sw1.sub(&q1).add(&hat.prices.scale(&epsilon)).scale(&scale.recip());
    let inv = scale.recip();
    Ok(PricingResult {
        prices,
        mode: PricingMode::Weighted,
        b1: hat.b1,
        b2: hat.b2.complement(n),
        iterations: hat.iterations,
        weighted: Some(WeightedCertificate {
            q1: q1.scale(&inv),
            q2: q2.scale(&inv),
            p_hat: hat.prices,
            epsilon: &epsilon * &inv,
            delta: inv,
        }),
    })
}

/// Edge weights of a bipartite graph whose lightest edge at every `u` and
/// heaviest edge at every `v` each form a perfect matching.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteWeights {
    pub weights: RationalVector,
    /// Edge index chosen at each `u`.
    pub lightest: Vec<usize>,
    /// Edge index chosen at each `v`.
    pub heaviest: Vec<usize>,
    pub result: PricingResult,
}

fn stars(count: usize, ends: impl Iterator<Item = usize>) -> Option<Vec<Vec<usize>>> {
    let mut stars = alloc::vec![Vec::new(); count];
    for (i, end) in ends.enumerate() {
        stars.get_mut(end)?.push(i);
    }
    stars.iter().all(|s| !s.is_empty()).then_some(stars)
}

/// Unique extreme edge of every star, or `None` on a tie.
pub fn extreme_edges(stars: &[Vec<usize>], w: &RationalVector, heaviest: bool) -> Option<Vec<usize>> {
    stars
        .iter()
        .map(|star| {
            let pick = |a: &usize, b: &usize| if heaviest { w[*a].cmp(&w[*b]) } else { w[*b].cmp(&w[*a]) };
            let best = *star.iter().max_by(|a, b| pick(a, b))?;
            (star.iter().filter(|&&e| w[e] == w[best]).count() == 1).then_some(best)
        })
        .collect()
}

/// Weights on the edges of a bipartite graph `(U, V; E)` with a perfect matching.
pub fn bipartite_edge_weights(u_count: usize, v_count: usize, edges: &[(usize, usize)]) -> Result<BipartiteWeights> {
    let malformed = |what: &str| Error::MalformedDescriptor(format!("graph: {what}"));
    if edges.iter().any(|&(u, v)| u >= u_count || v >= v_count) {
        return Err(malformed("edge endpoint out of range"));
    }
    if u_count != v_count {
        return Err(Error::NoPerfectMatching);
    }
    let (Some(u_stars), Some(v_stars)) = (
        stars(u_count, edges.iter().map(|e| e.0)),
        stars(v_count, edges.iter().map(|e| e.1)),
    ) else {
        return Err(Error::NoPerfectMatching);
    };
    let ones = alloc::vec![1; u_count];
    let m1 = Matroid::partition(&u_stars, &ones)?;
    let m2 = Matroid::partition(&v_stars, &ones)?;
    let result = match price_conjecture2_sbo(&m1, &m2) {
        Err(Error::NoCommonBasis { .. }) => return Err(Error::NoPerfectMatching),
        other => other?,
    };
    let weights = result.prices.clone();
    let lightest = extreme_edges(&u_stars, &weights, false)
        .ok_or_else(|| Error::InternalInvariantBroken("tie among lightest edges".into()))?;
    let heaviest = extreme_edges(&v_stars, &weights, true)
        .ok_or_else(|| Error::InternalInvariantBroken("tie among heaviest edges".into()))?;
    Ok(BipartiteWeights {
        weights,
        lightest,
        heaviest,
        result,
    })
}

/// Whether `choice` (one edge per vertex on one side) is a perfect matching.
pub fn is_perfect_matching(u_count: usize, v_count: usize, edges: &[(usize, usize)], choice: &[usize]) -> bool {
    if u_count != v_count || choice.len() != u_count {
        return false;
    }
    let mut seen_u = alloc::vec![false; u_count];
    let mut seen_v = alloc::vec![false; v_count];
    for &e in choice {
        let Some(&(u, v)) = edges.get(e) else { return false };
        if seen_u[u] || seen_v[v] {
            return false;
        }
        seen_u[u] = true;
        seen_v[v] = true;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use num_traits::Zero;

    fn set(xs: &[usize]) -> ElementSet {
        ElementSet::from_iter_unsorted(xs.iter().copied())
    }

    fn p2() -> Matroid {
        Matroid::partition(&[vec![0, 1], vec![2, 3]], &[1, 1]).unwrap()
    }

    #[test]
    fn partition_against_uniform() {
        let r = price_conjecture2_partition(&p2(), &Matroid::uniform(4, 2).unwrap()).unwrap();
        assert_eq!(r.prices, RationalVector::from_integers([0, 5, 0, 5]));
        assert_eq!((r.b1, r.b2), (set(&[0, 2]), set(&[1, 3])));
    }

    #[test]
    fn shape_detection() {
        assert!(is_pair_partition(&p2()));
        assert!(is_pair_partition(&Matroid::partition(&[vec![0], vec![1, 2]], &[1, 1]).unwrap()));
        assert!(!is_pair_partition(&Matroid::uniform(4, 2).unwrap()));
        assert!(!is_pair_partition(&Matroid::partition(&[vec![0, 1, 2]], &[1]).unwrap()));
        assert!(is_pair_partition(&p2().contract(&set(&[0])).unwrap()));
        assert!(!is_pair_partition(&p2().dual().dual().add_parallel_all()));
    }

    #[test]
    fn sbo_loop_reaches_disjoint_bases() {
        let m2 = Matroid::laminar(4, &[(vec![0, 1, 2, 3], 2), (vec![0, 1], 1)]).unwrap();
        let r = price_conjecture2_sbo(&p2(), &m2).unwrap();
        assert!(r.b1.is_disjoint(&r.b2));
        assert!(r.iterations <= 4);
    }

    #[test]
    fn weighted_zero_weights_scale_unweighted() {
        let z = RationalVector::zeros(4);
        let u = Matroid::uniform(4, 2).unwrap();
        let r = price_weighted(&p2(), &z, &u, &z, Method::Auto).unwrap();
        let cert = r.weighted.unwrap();
        assert!(cert.q1.iter().chain(cert.q2.iter()).all(Zero::is_zero));
        assert_eq!(r.prices, cert.p_hat.scale(&cert.epsilon));
    }

    #[test]
    fn bipartite_four_cycle() {
        let edges = [(0, 0), (0, 1), (1, 0), (1, 1)];
        let bw = bipartite_edge_weights(2, 2, &edges).unwrap();
        assert!(is_perfect_matching(2, 2, &edges, &bw.lightest));
        assert!(is_perfect_matching(2, 2, &edges, &bw.heaviest));
    }

    #[test]
    fn bipartite_without_matching() {
        assert_eq!(bipartite_edge_weights(2, 2, &[(0, 0), (1, 0)]), Err(Error::NoPerfectMatching));
        assert_eq!(bipartite_edge_weights(2, 1, &[(0, 0), (1, 0)]), Err(Error::NoPerfectMatching));
    }

    #[test]
    fn market_form_needs_disjoint_pair() {
        let u = Matroid::uniform(3, 2).unwrap();
        assert_eq!(price_conjecture1(&u, &u, Method::Auto), Err(Error::NoDisjointSpanningPair));
    }

    #[test]
    fn market_form_reports_cheapest_bases() {
        let u = Matroid::uniform(4, 2).unwrap();
        let r = price_conjecture1(&p2(), &u, Method::Auto).unwrap();
        assert_eq!(r.prices, RationalVector::from_integers([0, 5, 0, 5]));
        assert_eq!((r.b1, r.b2), (set(&[0, 2]), set(&[0, 2])));
    }
}
