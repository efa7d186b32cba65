//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tiefree_core::algos::{max_weight_basis, max_weight_common_basis_split, min_overlap_common_basis};
use tiefree_core::exchange::{build_exchange_digraph, shortest_dicycle};
use tiefree_core::gs::{argmax_set, check_mnat_exc, intersection_split, price_gs, reflect, verify_gs_prices, ValuationTable};
use tiefree_core::pipelines::{
    bipartite_edge_weights, is_perfect_matching, price_conjecture2_partition, price_conjecture2_sbo_traced,
    price_rank_valuations, price_weighted, Method,
};
use tiefree_core::sbo::{dm_merge_two, sbo_bijection, SboBijection};
use tiefree_core::verify::{
    enumerate_bases, gen_instance, remark_counterexample_check, verify_conjecture0, verify_conjecture2,
    verify_conjecture3, InstanceKind,
};
use tiefree_core::{ElementSet, Matroid, Rational, RationalVector};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn instance(kind: InstanceKind, n: usize, seed: u64) -> Result<(Matroid, Matroid), String> {
    gen_instance(kind, n, seed)
        .and_then(|i| i.matroids())
        .map_err(|e| format!("seed {seed}: generation failed: {e}"))
}

fn partition_soundness() -> Outcome {
    let mut slowest = Duration::ZERO;
    for seed in 0..200u64 {
        let n = 2 + (seed as usize % 11);
        let (m1, m2) = instance(InstanceKind::PartitionVsAny, n, seed)?;
        let start = Instant::now();
        let r = price_conjecture2_partition(&m1, &m2).map_err(|e| format!("seed {seed}: {e}"))?;
        let report = verify_conjecture2(&m1, &m2, &r.prices).map_err(|e| format!("seed {seed}: {e}"))?;
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        if !report.pass {
            return Err(format!("seed {seed}: {:?}", report.violations));
        }
        if report.argmin_singleton != Some(true) || report.argmax_singleton != Some(true) {
            return Err(format!("seed {seed}: optimal basis not unique"));
        }
        if elapsed >= Duration::from_secs(1) {
            return Err(format!("seed {seed}: took {elapsed:?}"));
        }
    }
    Ok(format!("200/200 verified, slowest {slowest:?}"))
}

fn acyclicity() -> Outcome {
    let mut runs = 0;
    for seed in 0..400u64 {
        let n = 2 + (seed as usize % 11);
        let (m1, m2) = instance(InstanceKind::PartitionVsAny, n, seed)?;
        let r = price_conjecture2_partition(&m1, &m2).map_err(|e| format!("seed {seed}: {e}"))?;
        let d = build_exchange_digraph(&m1, &m2, &r.b1, &r.b2).map_err(|e| format!("seed {seed}: {e}"))?;
        if let Some(cycle) = shortest_dicycle(&d) {
            return Err(format!("seed {seed}: cycle {cycle:?}"));
        }
        runs += 1;
    }
    Ok(format!("{runs} digraphs, 0 cycles"))
}

fn sbo_pipeline() -> Outcome {
    let mut longest = 0;
    for seed in 0..200u64 {
        let n = 2 + (seed as usize % 11);
        let (m1, m2) = instance(InstanceKind::SboPair, n, seed)?;
        let (r, trace) = price_conjecture2_sbo_traced(&m1, &m2).map_err(|e| format!("seed {seed}: {e}"))?;
        let report = verify_conjecture2(&m1, &m2, &r.prices).map_err(|e| format!("seed {seed}: {e}"))?;
        if !report.pass {
            return Err(format!("seed {seed}: {:?}", report.violations));
        }
        if r.iterations > n.max(1) {
            return Err(format!("seed {seed}: {} iterations for n = {n}", r.iterations));
        }
        if trace.windows(2).any(|w| w[1] >= w[0]) {
            return Err(format!("seed {seed}: overlap trace {trace:?}"));
        }
        longest = longest.max(r.iterations);
    }
    Ok(format!("200/200 verified, at most {longest} iterations"))
}

/// Random swap along an SBO bijection: both sides stay bases.
fn shuffled_pair(m: &Matroid, a: &ElementSet, b: &ElementSet, rng: &mut ChaCha8Rng) -> Result<(ElementSet, ElementSet), String> {
    let f: SboBijection = sbo_bijection(m, a, b).map_err(|e| e.to_string())?;
    let y: ElementSet = a.iter().filter(|_| rng.gen_bool(0.5)).collect();
    let fy = y.map(|e| f.apply(e).expect("bijection covers a"));
    Ok((a.difference(&y).union(&fy), b.difference(&fy).union(&y)))
}

fn dm_merge() -> Outcome {
    for seed in 0..100u64 {
        let n = 2 + (seed as usize % 7);
        let (m1, m2) = instance(InstanceKind::SboPair, n, seed)?;
        let fail = |e: String| format!("seed {seed}: {e}");
        let b = tiefree_core::algos::common_basis(&m1, &m2).map_err(|e| fail(e.to_string()))?;
        let b2 = min_overlap_common_basis(&m1, &m2, &b).map_err(|e| fail(e.to_string()))?;
        let (p1, p2) = (m1.add_parallel_all(), m2.add_parallel_all());
        let x = b.union(&b2.map(|e| e + n));
        let (a, c) = (b.clone(), b2.map(|e| e + n));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (i1, i2) = shuffled_pair(&p1, &a, &c, &mut rng).map_err(fail)?;
        let (j1, j2) = shuffled_pair(&p2, &a, &c, &mut rng).map_err(fail)?;
        for (m, s, t) in [(&p1, &i1, &i2), (&p2, &j1, &j2)] {
            if !(m.is_basis(s) == Ok(true) && m.is_basis(t) == Ok(true)) {
                return Err(fail("swap did not give bases".into()));
            }
        }
        let f1 = sbo_bijection(&p1, &i1, &i2).map_err(|e| fail(e.to_string()))?;
        let f2 = sbo_bijection(&p2, &j1, &j2).map_err(|e| fail(e.to_string()))?;
        let (z1, z2) = dm_merge_two(&p1, &p2, &x, (&i1, &i2), (&j1, &j2), &f1, &f2).map_err(|e| fail(e.to_string()))?;
        let ok = z1.is_disjoint(&z2)
            && z1.union(&z2) == x
            && [&z1, &z2].iter().all(|z| p1.is_basis(z) == Ok(true) && p2.is_basis(z) == Ok(true));
        if !ok {
            return Err(fail(format!("merge gave {z1} and {z2}")));
        }
    }
    Ok("100/100 merges give disjoint common bases".into())
}

fn random_weights(rng: &mut ChaCha8Rng, n: usize) -> RationalVector {
    RationalVector::from_integers((0..n).map(|_| rng.gen_range(-10..=10)))
}

fn frank_split() -> Outcome {
    for seed in 0..100u64 {
        let n = 1 + (seed as usize % 10);
        let kind = if seed % 2 == 0 { InstanceKind::SboPair } else { InstanceKind::PartitionVsAny };
        let (m1, m2) = instance(kind, n, seed)?;
        let fail = |e: String| format!("seed {seed}: {e}");
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xF4A);
        let w = random_weights(&mut rng, n);
        let split = max_weight_common_basis_split(&m1, &m2, &w).map_err(|e| fail(e.to_string()))?;
        if !(split.w1.is_integral() && split.w2.is_integral()) {
            return Err(fail("split not integral".into()));
        }
        if split.w1.add(&split.w2) != w {
            return Err(fail("split does not sum to w".into()));
        }
        for (m, q) in [(&m1, &split.w1), (&m2, &split.w2)] {
            let greedy = max_weight_basis(m, q).map_err(|e| fail(e.to_string()))?;
            if q.sum_over(&greedy) != q.sum_over(&split.optimum) {
                return Err(fail("optimum is not a greedy maximiser".into()));
            }
        }
        let (f1, f2) = (enumerate_bases(&m1).map_err(|e| fail(e.to_string()))?, enumerate_bases(&m2).map_err(|e| fail(e.to_string()))?);
        let in2: BTreeSet<&ElementSet> = f2.iter().collect();
        let common: Vec<ElementSet> = f1.iter().filter(|b| in2.contains(b)).cloned().collect();
        let best = |fam: &[ElementSet], q: &RationalVector| -> BTreeSet<ElementSet> {
            let top = fam.iter().map(|b| q.sum_over(b)).max();
            fam.iter().filter(|b| Some(q.sum_over(b)) == top).cloned().collect()
        };
        let lhs = best(&common, &w);
        let rhs: BTreeSet<ElementSet> = best(&f1, &split.w1).intersection(&best(&f2, &split.w2)).cloned().collect();
        if lhs != rhs {
            return Err(fail("argmax sets differ".into()));
        }
    }
    Ok("100/100 splits integral and exact".into())
}

fn weighted_pipeline() -> Outcome {
    for seed in 0..100u64 {
        let n = 1 + (seed as usize % 10);
        let fail = |e: String| format!("seed {seed}: {e}");
        let inst = gen_instance(InstanceKind::Weighted, n, seed).map_err(|e| fail(e.to_string()))?;
        let (m1, m2) = inst.matroids().map_err(|e| fail(e.to_string()))?;
        let (w1, w2) = (inst.weights1.clone().unwrap(), inst.weights2.clone().unwrap());
        let r = price_weighted(&m1, &w1, &m2, &w2, Method::Auto).map_err(|e| fail(e.to_string()))?;
        let report = verify_conjecture3(&m1, &w1, &m2, &w2, &r.prices).map_err(|e| fail(e.to_string()))?;
        if !report.pass {
            return Err(fail(format!("{:?}", report.violations)));
        }
        let cert = r.weighted.ok_or_else(|| fail("no certificate".into()))?;
        let half = Rational::new(1.into(), 2.into());
        if !(&cert.epsilon / &cert.delta * cert.p_hat.sum_abs() < half) {
            return Err(fail("epsilon bound fails".into()));
        }
    }
    Ok("100/100 verified, epsilon bound exact".into())
}

fn rank_valuations() -> Outcome {
    for seed in 0..100u64 {
        let n = 1 + (seed as usize % 10);
        let (m1, m2) = instance(InstanceKind::RankValuation, n, seed)?;
        let r = price_rank_valuations(&m1, &m2, Method::Auto).map_err(|e| format!("seed {seed}: {e}"))?;
        let report = verify_conjecture0(&m1, &m2, &r.prices).map_err(|e| format!("seed {seed}: {e}"))?;
        if !report.pass {
            return Err(format!("seed {seed}: {:?}", report.violations));
        }
    }
    Ok("100/100 verified over all maximisers, both orders".into())
}

fn counterexample() -> Outcome {
    if remark_counterexample_check() {
        Ok("all 24 orderings fail".into())
    } else {
        Err("a price vector was found".into())
    }
}

fn welfare_argmax(v1: &ValuationTable, v2star: &ValuationTable) -> Vec<u32> {
    let values: Vec<(u32, Rational)> = (0..=v1.full_mask())
        .filter_map(|x| Some((x, v1.get(x).finite()? + v2star.get(x).finite()?)))
        .collect();
    let top = values.iter().map(|(_, v)| v.clone()).max();
    values.into_iter().filter(|(_, v)| Some(v) == top.as_ref()).map(|(x, _)| x).collect()
}

fn gross_substitutes() -> Outcome {
    let mut searched = 0;
    for seed in 0..50u64 {
        let n = 1 + (seed as usize % 6);
        let fail = |e: String| format!("seed {seed}: {e}");
        let inst = gen_instance(InstanceKind::GsTable, n, seed).map_err(|e| fail(e.to_string()))?;
        let [v1, v2] = inst.valuations.clone().unwrap();
        if check_mnat_exc(&v1).is_err() || check_mnat_exc(&v2).is_err() {
            return Err(fail("exchange property fails".into()));
        }
        let v2star = reflect(&v2);
        let q = intersection_split(&v1, &v2star).map_err(|e| fail(e.to_string()))?;
        let second: BTreeSet<u32> = argmax_set(&v2star, &q.neg()).into_iter().collect();
        let both: Vec<u32> = argmax_set(&v1, &q).into_iter().filter(|x| second.contains(x)).collect();
        if both != welfare_argmax(&v1, &v2star) {
            return Err(fail("split certificate inexact".into()));
        }
        let g = price_gs(&v1, &v2).map_err(|e| fail(e.to_string()))?;
        searched += usize::from(!g.from_matroids);
        let report = verify_gs_prices(&v1, &v2, &g.prices).map_err(|e| fail(e.to_string()))?;
        if !report.pass {
            return Err(fail(format!("{:?}", report.violations)));
        }
    }
    Ok(format!("50/50 verified, {searched} via search"))
}

fn check_bipartite(u: usize, v: usize, edges: &[(usize, usize)]) -> Result<(), String> {
    let w = bipartite_edge_weights(u, v, edges).map_err(|e| e.to_string())?;
    if is_perfect_matching(u, v, edges, &w.lightest) && is_perfect_matching(u, v, edges, &w.heaviest) {
        Ok(())
    } else {
        Err("selection is not a perfect matching".into())
    }
}

fn bipartite() -> Outcome {
    let c4 = [(0, 0), (0, 1), (1, 0), (1, 1)];
    check_bipartite(2, 2, &c4).map_err(|e| format!("C4: {e}"))?;
    let k33: Vec<(usize, usize)> = (0..3).flat_map(|u| (0..3).map(move |v| (u, v))).collect();
    check_bipartite(3, 3, &k33).map_err(|e| format!("K3,3: {e}"))?;
    for seed in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rng.gen_range(1..=6);
        let mut perm: Vec<usize> = (0..k).collect();
        perm.shuffle(&mut rng);
        let mut edges: Vec<(usize, usize)> = perm.iter().enumerate().map(|(u, &v)| (u, v)).collect();
        for (u, &matched) in perm.iter().enumerate() {
            for v in 0..k {
                if matched != v && rng.gen_bool(0.4) {
                    edges.push((u, v));
                }
            }
        }
        edges.shuffle(&mut rng);
        check_bipartite(k, k, &edges).map_err(|e| format!("seed {seed}: {e}"))?;
    }
    Ok("C4, K3,3 and 50 random graphs".into())
}

/// Exhaustive (I1)-(I3) and dual involution.
fn axioms(m: &Matroid) -> Result<(), String> {
    let n = m.n();
    let size = 1u64 << n;
    let table: Vec<bool> = (0..size).map(|x| m.is_independent(&ElementSet::from_mask(x)) == Ok(true)).collect();
    if !table[0] {
        return Err("empty set dependent".into());
    }
    for x in 0..size as usize {
        if table[x] && (0..n).any(|e| x >> e & 1 == 1 && !table[x & !(1 << e)]) {
            return Err(format!("not closed under subsets at {x:#b}"));
        }
    }
    let indep: Vec<usize> = (0..size as usize).filter(|&x| table[x]).collect();
    for &i in &indep {
        for &j in &indep {
            if i.count_ones() == j.count_ones() + 1 && !(0..n).any(|e| i >> e & 1 == 1 && j >> e & 1 == 0 && table[j | 1 << e]) {
                return Err(format!("augmentation fails for {i:#b}, {j:#b}"));
            }
        }
    }
    let dd = m.dual().dual();
    if (0..size).any(|x| (dd.is_independent(&ElementSet::from_mask(x)) == Ok(true)) != table[x as usize]) {
        return Err("dual is not an involution".into());
    }
    Ok(())
}

fn axiom_suite() -> Outcome {
    let mut checked = 0;
    let mut run = |name: &str, m: Result<Matroid, tiefree_core::Error>| -> Result<(), String> {
        let m = m.map_err(|e| format!("{name}: {e}"))?;
        axioms(&m).map_err(|e| format!("{name}: {e}"))?;
        checked += 1;
        Ok(())
    };
    let k4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    run("free", Ok(Matroid::free(5)))?;
    run("uniform", Matroid::uniform(10, 4))?;
    run("graphic K4", Matroid::graphic(4, &k4))?;
    run("partition", Matroid::partition(&[vec![0, 1, 2], vec![3, 4], vec![5, 6, 7, 8, 9]], &[2, 1, 3]))?;
    run("laminar", Matroid::laminar(8, &[(vec![0, 1, 2, 3, 4, 5, 6, 7], 4), (vec![0, 1, 2], 1), (vec![3, 4, 5], 2)]))?;
    run("transversal", Matroid::transversal(7, &[vec![0, 1], vec![1, 2, 3], vec![3, 4, 5, 6]]))?;
    for seed in 0..20u64 {
        let n = 3 + (seed as usize % 6);
        for kind in [InstanceKind::PartitionVsAny, InstanceKind::SboPair, InstanceKind::RankValuation] {
            let (m1, m2) = instance(kind, n, seed)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let some: ElementSet = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
            for m in [&m1, &m2] {
                run("generated", Ok(m.clone()))?;
                run("dual", Ok(m.dual()))?;
                run("deletion", m.delete(&some))?;
                run("contraction", m.contract(&some))?;
                if n <= 5 {
                    run("parallel", Ok(m.add_parallel_all()))?;
                }
                run("max-weight bases", tiefree_core::algos::restrict_to_max_weight_bases(m, &random_weights(&mut rng, n)))?;
            }
            if n <= 5 {
                run("direct sum", Ok(Matroid::direct_sum(&[m1.clone(), m2.clone()])))?;
            }
            run("union", Matroid::union(&m1, &m2))?;
        }
    }
    Ok(format!("{checked} matroids"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("partition pipeline soundness", partition_soundness),
        ("exchange digraph acyclicity", acyclicity),
        ("sbo pipeline", sbo_pipeline),
        ("two-basis merge", dm_merge),
        ("weight splitting", frank_split),
        ("weighted pipeline", weighted_pipeline),
        ("rank-valuation pipeline", rank_valuations),
        ("non-matroid counterexample", counterexample),
        ("gross substitutes", gross_substitutes),
        ("bipartite weights", bipartite),
        ("matroid axioms", axiom_suite),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({:.2?})", i + 1, start.elapsed()),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
