//! Library results against brute-force enumeration.

use proptest::prelude::*;

use tiefree_core::algos::{common_basis, max_weight_common_basis_split, partition_into_bases};
use tiefree_core::pipelines::{price_conjecture1, price_conjecture2, Method};
use tiefree_core::verify::{
    all_orderings_fail, enumerate_bases, forced_inequalities, gen_instance, inequalities_cyclic, remark_families,
    verify_conjecture1, verify_conjecture1_family, verify_conjecture2, verify_conjecture3, InstanceKind,
};
use tiefree_core::{ElementSet, Error, Matroid, MatroidDescriptor, Rational, RationalVector};

fn subsets(n: usize) -> impl Iterator<Item = ElementSet> {
    (0..1u64 << n).map(ElementSet::from_mask)
}

fn indep(m: &Matroid, x: &ElementSet) -> bool {
    m.is_independent(x).unwrap()
}

fn brute_rank(m: &Matroid, x: &ElementSet) -> usize {
    subsets(m.n()).filter(|y| y.is_subset(x) && indep(m, y)).map(|y| y.len()).max().unwrap()
}

fn brute_bases(m: &Matroid) -> Vec<ElementSet> {
    let r = subsets(m.n()).filter(|y| indep(m, y)).map(|y| y.len()).max().unwrap();
    let mut out: Vec<ElementSet> = subsets(m.n()).filter(|y| y.len() == r && indep(m, y)).collect();
    out.sort_by(|a, b| a.as_slice().cmp(b.as_slice()));
    out
}

fn generated(kind: InstanceKind, n: usize, seed: u64) -> (Matroid, Matroid) {
    gen_instance(kind, n, seed).unwrap().matroids().unwrap()
}

fn kinds() -> impl Strategy<Value = InstanceKind> {
    prop::sample::select(vec![InstanceKind::PartitionVsAny, InstanceKind::SboPair, InstanceKind::RankValuation])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_matches_enumeration(kind in kinds(), n in 1usize..8, seed in any::<u64>(), mask in any::<u64>()) {
        let (m1, m2) = generated(kind, n, seed);
        let x = ElementSet::from_mask(mask & ((1 << n) - 1));
        for m in [&m1, &m2, &m1.dual(), &Matroid::union(&m1, &m2).unwrap()] {
            prop_assert_eq!(m.rank(&x).unwrap(), brute_rank(m, &x));
        }
    }

    #[test]
    fn dual_rank_formula(kind in kinds(), n in 1usize..9, seed in any::<u64>(), mask in any::<u64>()) {
        let (m, _) = generated(kind, n, seed);
        let x = ElementSet::from_mask(mask & ((1 << n) - 1));
        let full = m.full_rank();
        let rest = m.rank(&x.complement(n)).unwrap();
        prop_assert_eq!(m.dual().rank(&x).unwrap(), x.len() + rest - full);
    }

    #[test]
    fn bases_match_enumeration(kind in kinds(), n in 1usize..9, seed in any::<u64>()) {
        let (m1, m2) = generated(kind, n, seed);
        for m in [&m1, &m2] {
            prop_assert_eq!(enumerate_bases(m).unwrap(), brute_bases(m));
        }
    }

    #[test]
    fn common_basis_exists_iff_enumeration_finds_one(n in 1usize..8, seed in any::<u64>()) {
        let (m1, _) = generated(InstanceKind::RankValuation, n, seed);
        let (_, m2) = generated(InstanceKind::RankValuation, n, seed.wrapping_add(1));
        let b2 = brute_bases(&m2);
        let expected = brute_bases(&m1).into_iter().any(|b| b2.contains(&b));
        match common_basis(&m1, &m2) {
            Ok(b) => {
                prop_assert!(expected);
                prop_assert!(m1.is_basis(&b).unwrap() && m2.is_basis(&b).unwrap());
            }
            Err(Error::NoCommonBasis { .. }) => prop_assert!(!expected),
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn split_optimum_matches_enumeration(n in 1usize..8, seed in any::<u64>(), w in prop::collection::vec(-10i64..=10, 8)) {
        let (m1, m2) = generated(InstanceKind::SboPair, n, seed);
        let w = RationalVector::from_integers(w.into_iter().take(n));
        let split = max_weight_common_basis_split(&m1, &m2, &w).unwrap();
        let b2 = brute_bases(&m2);
        let best = brute_bases(&m1).into_iter().filter(|b| b2.contains(b)).map(|b| w.sum_over(&b)).max().unwrap();
        prop_assert_eq!(w.sum_over(&split.optimum), best);
    }

    #[test]
    fn two_bases_partition_matches_enumeration(kind in kinds(), n in 1usize..8, seed in any::<u64>(), mask in any::<u64>()) {
        let (m, _) = generated(kind, n, seed);
        let x = ElementSet::from_mask(mask & ((1 << n) - 1));
        // bases of the restriction to x
        let r = brute_rank(&m, &x);
        let bases: Vec<ElementSet> = subsets(n).filter(|y| y.is_subset(&x) && y.len() == r && indep(&m, y)).collect();
        let expected = bases.iter().any(|a| bases.iter().any(|b| a.is_disjoint(b) && a.union(b) == x));
        match partition_into_bases(&m, &x, 2) {
            Ok(parts) => {
                prop_assert!(expected);
                prop_assert!(parts[0].is_disjoint(&parts[1]) && parts[0].union(&parts[1]) == x);
            }
            Err(_) => prop_assert!(!expected),
        }
    }

    #[test]
    fn market_form_is_two_basis_form_on_the_dual(n in 1usize..8, seed in any::<u64>(), p in prop::collection::vec(-5i64..=5, 8)) {
        let inst = gen_instance(InstanceKind::Weighted, n, seed).unwrap();
        let (m1, m2) = inst.matroids().unwrap();
        let p = RationalVector::from_integers(p.into_iter().take(n));
        let c1 = verify_conjecture1(&m1, &m2, &p).unwrap();
        let c2 = verify_conjecture2(&m1, &m2.dual(), &p).unwrap();
        prop_assert_eq!(c1.pass, c2.pass);
    }

    #[test]
    fn zero_weights_reduce_to_market_form(n in 1usize..8, seed in any::<u64>(), p in prop::collection::vec(-5i64..=5, 8)) {
        let inst = gen_instance(InstanceKind::Weighted, n, seed).unwrap();
        let (m1, m2) = inst.matroids().unwrap();
        let p = RationalVector::from_integers(p.into_iter().take(n));
        let zero = RationalVector::zeros(n);
        let c3 = verify_conjecture3(&m1, &zero, &m2, &zero, &p).unwrap();
        let c1 = verify_conjecture1(&m1, &m2, &p).unwrap();
        prop_assert_eq!(c3.pass, c1.pass);
        prop_assert_eq!(c3.violations.len(), c1.violations.len());
    }

    #[test]
    fn market_prices_verify(n in 1usize..9, seed in any::<u64>()) {
        let inst = gen_instance(InstanceKind::Weighted, n, seed).unwrap();
        let (m1, m2) = inst.matroids().unwrap();
        let r = price_conjecture1(&m1, &m2, Method::Auto).unwrap();
        prop_assert!(verify_conjecture1(&m1, &m2, &r.prices).unwrap().pass);
    }
}

#[test]
fn k4_spanning_tree_count() {
    let k4 = Matroid::graphic(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
    // Cayley: 4^(4-2)
    assert_eq!(enumerate_bases(&k4).unwrap().len(), 16);
    assert_eq!(brute_bases(&k4).len(), 16);
}

#[test]
fn relabelled_counterexample_also_fails() {
    let (f1, f2) = remark_families();
    let perm = [2, 0, 3, 1];
    let relabel = |f: &[ElementSet]| -> Vec<ElementSet> { f.iter().map(|b| b.map(|e| perm[e])).collect() };
    let (g1, g2) = (relabel(&f1), relabel(&f2));
    let ineq = forced_inequalities(4, &g1, &g2).unwrap();
    assert_eq!(ineq.len(), 4);
    assert!(inequalities_cyclic(4, &ineq));
    assert!(all_orderings_fail(4, &g1, &g2).unwrap());
}

#[test]
fn counterexample_with_a_matroid_family_is_priceable() {
    let (f1, _) = remark_families();
    let m1 = Matroid::from_bases(4, &f1).unwrap();
    let m2 = Matroid::uniform(4, 2).unwrap();
    let r = price_conjecture1(&m1, &m2, Method::Auto).unwrap();
    let f2 = enumerate_bases(&m2).unwrap();
    assert!(verify_conjecture1_family(4, &f1, &f2, &r.prices).unwrap().pass);
    assert!(!all_orderings_fail(4, &f1, &f2).unwrap());
}

#[test]
fn random_prices_mostly_fail() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let mut failures = 0;
    let mut total = 0;
    for seed in 0..60 {
        let (m1, m2) = generated(InstanceKind::PartitionVsAny, 8, seed);
        if enumerate_bases(&m1).unwrap() == enumerate_bases(&m2).unwrap() {
            continue;
        }
        let p = RationalVector::from_integers((0..8).map(|_| rng.gen_range(0..3)));
        total += 1;
        failures += usize::from(!verify_conjecture2(&m1, &m2, &p).unwrap().pass);
    }
    assert!(failures * 2 > total, "{failures} of {total}");
}

#[test]
fn sbo_pair_generator_plants_a_common_basis() {
    let inst = gen_instance(InstanceKind::SboPair, 10, 7).unwrap();
    for d in [&inst.matroid1, &inst.matroid2] {
        assert!(matches!(d, MatroidDescriptor::Partition { .. } | MatroidDescriptor::Laminar { .. }));
    }
    let (m1, m2) = inst.matroids().unwrap();
    assert!(common_basis(&m1, &m2).is_ok());
}

#[test]
fn generators_satisfy_their_hypotheses() {
    for seed in 0..40 {
        for kind in [InstanceKind::PartitionVsAny, InstanceKind::SboPair] {
            let (m1, m2) = generated(kind, 1 + seed as usize % 12, seed);
            assert!(common_basis(&m1, &m2).is_ok(), "{kind:?} {seed}");
        }
        let (m1, m2) = generated(InstanceKind::Weighted, 1 + seed as usize % 12, seed);
        assert!(common_basis(&m1, &m2.dual()).is_ok(), "weighted {seed}");
    }
}

#[test]
fn partition_instance_prices_with_every_method_that_applies() {
    let (m1, m2) = generated(InstanceKind::PartitionVsAny, 8, 42);
    for method in [Method::Auto, Method::Partition] {
        let r = price_conjecture2(&m1, &m2, method).unwrap();
        assert!(verify_conjecture2(&m1, &m2, &r.prices).unwrap().pass);
    }
}

#[test]
fn half_price_single_element() {
    let m = Matroid::uniform(1, 1).unwrap();
    let p = RationalVector::from(vec![Rational::new(1.into(), 2.into())]);
    assert!(tiefree_core::verify::verify_conjecture0(&m, &m, &p).unwrap().pass);
}
