//! Gross-substitutes valuations on `{0,1}^S` at desk scale.
//!
//! Points are bitmasks: bit `i` set means element `i` is in the bundle.
//! Prices are found by splitting the welfare problem with an integral price
//! `q`, solving the unweighted problem on the two argmax families, and adding
//! a small multiple of that solution to `q`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matroid::Matroid;
use crate::pipelines::{price_conjecture1, Method};
use crate::rational::{int, Rational, RationalVector};
use crate::set::ElementSet;
use crate::verify::{is_basis_family, verify_conjecture1_family, Conjecture, VerificationReport, Violation};

/// Largest ground set a table may have.
pub const MAX_GS_ELEMENTS: usize = 16;

/// Trials in the randomised search for unweighted prices.
pub const DEFAULT_TRIALS: usize = 10_000;

/// A rational or minus infinity, ordered with `NegInf` below everything.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtRational {
    NegInf,
    Finite(Rational),
}

impl ExtRational {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtRational::NegInf => None,
            ExtRational::Finite(r) => Some(r),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtRational::Finite(_))
    }

    /// Max-plus addition: `-inf` absorbs.
    pub fn plus(&self, other: &ExtRational) -> ExtRational {
        match (self, other) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => ExtRational::Finite(a + b),
            _ => ExtRational::NegInf,
        }
    }

    pub fn offset(&self, c: &Rational) -> ExtRational {
        match self {
            ExtRational::Finite(a) => ExtRational::Finite(a + c),
            ExtRational::NegInf => ExtRational::NegInf,
        }
    }
}

impl PartialOrd for ExtRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRational::NegInf, ExtRational::NegInf) => Ordering::Equal,
            (ExtRational::NegInf, _) => Ordering::Less,
            (_, ExtRational::NegInf) => Ordering::Greater,
            (ExtRational::Finite(a), ExtRational::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::NegInf => f.write_str("-inf"),
            ExtRational::Finite(r) => write!(f, "{r}"),
        }
    }
}

impl From<Rational> for ExtRational {
    fn from(r: Rational) -> Self {
        ExtRational::Finite(r)
    }
}

/// Dense table of a function `{0,1}^S -> Q ∪ {-inf}` indexed by bitmask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuationTable {
    n: usize,
    values: Vec<ExtRational>,
}

impl ValuationTable {
    pub fn new(n: usize, values: Vec<ExtRational>) -> Result<Self> {
        if n > MAX_GS_ELEMENTS {
            return Err(Error::TooLarge {
                guard: format!("valuation tables need n <= {MAX_GS_ELEMENTS}, got {n}"),
            });
        }
        if values.len() != 1 << n {
            return Err(Error::MalformedDescriptor(format!(
                "valuation table for n = {n} needs {} entries, got {}",
                1usize << n,
                values.len()
            )));
        }
        if values.iter().all(|v| !v.is_finite()) {
            return Err(Error::MalformedDescriptor("valuation has an empty domain".into()));
        }
        Ok(ValuationTable { n, values })
    }

    pub fn from_fn(n: usize, f: impl FnMut(u32) -> ExtRational) -> Result<Self> {
        if n > MAX_GS_ELEMENTS {
            return Self::new(n, Vec::new());
        }
        Self::new(n, (0..1u32 << n).map(f).collect())
    }

    /// `0` on `masks`, `-inf` elsewhere.
    pub fn indicator(n: usize, masks: &[u32]) -> Result<Self> {
        let set: BTreeSet<u32> = masks.iter().copied().collect();
        Self::from_fn(n, |x| {
            if set.contains(&x) {
                ExtRational::Finite(Rational::zero())
            } else {
                ExtRational::NegInf
            }
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, mask: u32) -> &ExtRational {
        &self.values[mask as usize]
    }

    pub fn values(&self) -> &[ExtRational] {
        &self.values
    }

    pub fn full_mask(&self) -> u32 {
        ((1u64 << self.n) - 1) as u32
    }

    /// Points with a finite value, ascending.
    pub fn domain(&self) -> Vec<u32> {
        (0..self.values.len() as u32).filter(|&x| self.get(x).is_finite()).collect()
    }
}

/// `v(X) = max { w(I) : I ⊆ X independent in m }`.
pub fn weighted_rank_valuation(m: &Matroid, w: &RationalVector) -> Result<ValuationTable> {
    if w.len() != m.n() {
        return Err(Error::PreconditionViolated("weight vector length differs from ground set".into()));
    }
    ValuationTable::from_fn(m.n(), |x| {
        let mut order: Vec<usize> = ElementSet::from_mask(x as u64)
            .iter()
            .filter(|&e| w[e].is_positive())
            .collect();
        order.sort_by(|&a, &b| w[b].cmp(&w[a]).then(a.cmp(&b)));
        let mut chosen = ElementSet::new();
        let mut total = Rational::zero();
        for e in order {
            if m.indep(&chosen.with(e)) {
                chosen.insert(e);
                total += &w[e];
            }
        }
        ExtRational::Finite(total)
    })
}

/// Points `x`, `y` and element `i` violating the exchange property.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExcWitness {
    pub x: u32,
    pub y: u32,
    pub i: usize,
}

/// Exhaustive check of the M♮ exchange property. The first violation in
/// `(x, y, i)` order is returned.
pub fn check_mnat_exc(v: &ValuationTable) -> core::result::Result<(), ExcWitness> {
    let dom = v.domain();
    for &x in &dom {
        for &y in &dom {
            let lhs = v.get(x).plus(v.get(y));
            let plus = x & !y;
            let minus = y & !x;
            for i in (0..v.n()).filter(|i| plus >> i & 1 == 1) {
                let bi = 1u32 << i;
                let holds = (v.get(x ^ bi).plus(v.get(y | bi)) >= lhs)
                    || (0..v.n()).filter(|j| minus >> j & 1 == 1).any(|j| {
                        let bj = 1u32 << j;
                        v.get((x ^ bi) | bj).plus(v.get((y | bi) ^ bj)) >= lhs
                    });
                if !holds {
                    return Err(ExcWitness { x, y, i });
                }
            }
        }
    }
    Ok(())
}

/// `x -> v(1 - x)`.
pub fn reflect(v: &ValuationTable) -> ValuationTable {
    let full = v.full_mask();
    ValuationTable {
        n: v.n,
        values: (0..v.values.len() as u32).map(|x| v.get(x ^ full).clone()).collect(),
    }
}

fn dot(q: &RationalVector, x: u32) -> Rational {
    (0..q.len()).filter(|i| x >> i & 1 == 1).map(|i| &q[i]).sum()
}

/// `max_x v(x) - q·x`.
pub fn max_utility(v: &ValuationTable, q: &RationalVector) -> Rational {
    v.domain()
        .into_iter()
        .map(|x| v.get(x).finite().expect("domain point") - dot(q, x))
        .max()
        .expect("nonempty domain")
}

/// `argmax_x v(x) - q·x`, ascending.
pub fn argmax_set(v: &ValuationTable, q: &RationalVector) -> Vec<u32> {
    let best = max_utility(v, q);
    v.domain()
        .into_iter()
        .filter(|&x| v.get(x).finite().expect("domain point") - dot(q, x) == best)
        .collect()
}

fn welfare_argmax(v1: &ValuationTable, v2star: &ValuationTable) -> Option<(Rational, Vec<u32>)> {
    let sums: Vec<(u32, Rational)> = (0..v1.values.len() as u32)
        .filter_map(|x| match v1.get(x).plus(v2star.get(x)) {
            ExtRational::Finite(r) => Some((x, r)),
            ExtRational::NegInf => None,
        })
        .collect();
    let best = sums.iter().map(|(_, r)| r).max()?.clone();
    let arg = sums.into_iter().filter(|(_, r)| *r == best).map(|(x, _)| x).collect();
    Some((best, arg))
}

fn table_denominator(v: &ValuationTable) -> num_bigint::BigInt {
    v.values
        .iter()
        .filter_map(ExtRational::finite)
        .fold(num_bigint::BigInt::one(), |acc, r| num_integer::Integer::lcm(&acc, r.denom()))
}

fn scaled(v: &ValuationTable, c: &Rational) -> ValuationTable {
    ValuationTable {
        n: v.n,
        values: v
            .values
            .iter()
            .map(|e| match e {
                ExtRational::Finite(r) => ExtRational::Finite(r * c),
                ExtRational::NegInf => ExtRational::NegInf,
            })
            .collect(),
    }
}

/// A price `q` with
/// `argmax (v1 + v2star) = argmax (v1 - q·x) ∩ argmax (v2star + q·x)`,
/// found by steepest descent of
/// `g(q) = max (v1 - q·x) + max (v2star + q·x)` over directions `±χ_A`.
pub fn intersection_split(v1: &ValuationTable, v2star: &ValuationTable) -> Result<RationalVector> {
    if v1.n() != v2star.n() {
        return Err(Error::GroundMismatch(v1.n(), v2star.n()));
    }
    let n = v1.n();
    let (target, optimal) = welfare_argmax(v1, v2star)
        .ok_or_else(|| Error::PreconditionViolated("v1 + v2* has no finite point".into()))?;
    let lcm = Rational::from_integer(num_integer::Integer::lcm(&table_denominator(v1), &table_denominator(v2star)));
    let (s1, s2) = (scaled(v1, &lcm), scaled(v2star, &lcm));
    let scaled_target = &target * &lcm;
    let g = |q: &RationalVector| max_utility(&s1, q) + max_utility(&s2, &q.neg());

    let mut q = RationalVector::zeros(n);
    let mut current = g(&q);
    while current > scaled_target {
        let mut best: Option<(Rational, RationalVector)> = None;
        for a in 1..1u32 << n {
            for sign in [1i64, -1] {
                let dir: RationalVector = (0..n).map(|i| int(if a >> i & 1 == 1 { sign } else { 0 })).collect();
                let mut step = int(1);
                let mut cand = q.add(&dir);
                let mut value = g(&cand);
                if value >= current {
                    continue;
                }
                loop {
                    step *= int(2);
                    let further = q.add(&dir.scale(&step));
                    let fv = g(&further);
                    if fv >= value {
                        break;
                    }
                    cand = further;
                    value = fv;
                }
                if best.as_ref().is_none_or(|(bv, _)| value < *bv) {
                    best = Some((value, cand));
                }
            }
        }
        match best {
            Some((value, cand)) => {
                current = value;
                q = cand;
            }
            None => {
                return Err(Error::NotMnatConcave(format!(
                    "descent stalled at g = {} above the welfare optimum {}",
                    current / &lcm,
                    target
                )))
            }
        }
    }
    let q = q.scale(&lcm.recip());
    let mut both: Vec<u32> = argmax_set(v1, &q);
    let second: BTreeSet<u32> = argmax_set(v2star, &q.neg()).into_iter().collect();
    both.retain(|x| second.contains(x));
    if both != optimal {
        return Err(Error::NotMnatConcave(
            "argmax sets do not intersect in the welfare maximisers".into(),
        ));
    }
    Ok(q)
}

/// Output of [`price_gs`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GsPricing {
    pub prices: RationalVector,
    pub q: RationalVector,
    pub p_hat: RationalVector,
    pub epsilon: Rational,
    pub delta: Rational,
    /// `argmax v1 - q·x`.
    pub q1: Vec<u32>,
    /// Complements of `argmax v2* + q·x`.
    pub q2: Vec<u32>,
    /// Whether `p_hat` came from the matroid pipeline rather than search.
    pub from_matroids: bool,
}

fn masks_to_sets(masks: &[u32]) -> Vec<ElementSet> {
    masks.iter().map(|&m| ElementSet::from_mask(m as u64)).collect()
}

/// Unweighted market prices for the 0/1 families `q1`, `q2`.
fn unweighted_prices(n: usize, q1: &[u32], q2: &[u32], trials: usize, seed: u64) -> Result<(RationalVector, bool)> {
    let (f1, f2) = (masks_to_sets(q1), masks_to_sets(q2));
    if is_basis_family(&f1) && is_basis_family(&f2) {
        let m1 = Matroid::from_bases(n, &f1)?;
        let m2 = Matroid::from_bases(n, &f2)?;
        for method in [Method::Auto, Method::Sbo] {
            if let Ok(r) = price_conjecture1(&m1, &m2, method) {
                return Ok((r.prices, true));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..trials {
        let range = (n + t / 100) as i64;
        let mut pool: Vec<i64> = (-range..=range).collect();
        pool.shuffle(&mut rng);
        let p: RationalVector = pool.iter().take(n).map(|&v| int(v)).collect();
        if verify_conjecture1_family(n, &f1, &f2, &p)?.pass {
            return Ok((p, false));
        }
    }
    Err(Error::SearchExhausted { trials })
}

fn min_positive_gap(values: &mut Vec<Rational>) -> Option<Rational> {
    values.sort();
    values.dedup();
    values.windows(2).map(|w| &w[1] - &w[0]).min()
}

/// Prices for two gross-substitutes buyers that survive arbitrary
/// tie-breaking, or `SearchExhausted` if the unweighted subproblem was not
/// solved within `trials` random attempts.
pub fn price_gs_with(v1: &ValuationTable, v2: &ValuationTable, trials: usize, seed: u64) -> Result<GsPricing> {
    if v1.n() != v2.n() {
        return Err(Error::GroundMismatch(v1.n(), v2.n()));
    }
    let n = v1.n();
    for (v, name) in [(v1, "v1"), (v2, "v2")] {
        if let Err(w) = check_mnat_exc(v) {
            return Err(Error::NotMnatConcave(format!(
                "{name}: exchange fails at x = {:?}, y = {:?}, i = {}",
                ElementSet::from_mask(w.x as u64).as_slice(),
                ElementSet::from_mask(w.y as u64).as_slice(),
                w.i
            )));
        }
    }
    let v2star = reflect(v2);
    let q = intersection_split(v1, &v2star)?;
    let full = v1.full_mask();
    let q1 = argmax_set(v1, &q);
    let mut q2: Vec<u32> = argmax_set(&v2star, &q.neg()).into_iter().map(|x| x ^ full).collect();
    q2.sort_unstable();
    let (p_hat, from_matroids) = unweighted_prices(n, &q1, &q2, trials, seed)?;

    let utilities = |v: &ValuationTable| -> Vec<Rational> {
        v.domain()
            .into_iter()
            .map(|x| v.get(x).finite().expect("domain point") - dot(&q, x))
            .collect()
    };
    let delta = [v1, v2]
        .into_iter()
        .filter_map(|v| min_positive_gap(&mut utilities(v)))
        .min()
        .unwrap_or_else(Rational::one);
    let epsilon = &delta / (Rational::one() + int(2) * p_hat.sum_abs());
    let prices = q.add(&p_hat.scale(&epsilon));
    Ok(GsPricing {
        prices,
        q,
        p_hat,
        epsilon,
        delta,
        q1,
        q2,
        from_matroids,
    })
}

/// [`price_gs_with`] with the default trial budget and seed `0`.
pub fn price_gs(v1: &ValuationTable, v2: &ValuationTable) -> Result<GsPricing> {
    price_gs_with(v1, v2, DEFAULT_TRIALS, 0)
}

/// Checks both arrival orders: every utility-maximising first pick must be
/// part of a welfare-maximising split.
pub fn verify_gs_prices(v1: &ValuationTable, v2: &ValuationTable, p: &RationalVector) -> Result<VerificationReport> {
    if v1.n() != v2.n() {
        return Err(Error::GroundMismatch(v1.n(), v2.n()));
    }
    if p.len() != v1.n() {
        return Err(Error::PreconditionViolated("price vector length differs from ground set".into()));
    }
    let full = v1.full_mask();
    let v2star = reflect(v2);
    let (opt, optimal) = welfare_argmax(v1, &v2star).ok_or(Error::NoFeasiblePair)?;
    let optimal: BTreeSet<u32> = optimal.into_iter().collect();
    let mut report = VerificationReport::new(Conjecture::C7);
    let first = argmax_set(v1, p);
    let second = argmax_set(v2, p);
    for &x in &first {
        if !optimal.contains(&x) {
            let got = v1.get(x).plus(v2.get(x ^ full));
            report.violations.push(Violation {
                condition: 1,
                chosen: ElementSet::from_mask(x as u64),
                response: Some(ElementSet::from_mask((x ^ full) as u64)),
                message: format!("welfare {got} below optimum {opt}"),
            });
        }
    }
    for &x in &second {
        if !optimal.contains(&(x ^ full)) {
            let got = v1.get(x ^ full).plus(v2.get(x));
            report.violations.push(Violation {
                condition: 2,
                chosen: ElementSet::from_mask(x as u64),
                response: Some(ElementSet::from_mask((x ^ full) as u64)),
                message: format!("welfare {got} below optimum {opt}"),
            });
        }
    }
    report.argmin_singleton = Some(first.len() == 1);
    report.argmax_singleton = Some(second.len() == 1);
    report.sizes.push(("domain1", v1.domain().len()));
    report.sizes.push(("domain2", v2.domain().len()));
    report.sizes.push(("optimal", optimal.len()));
    Ok(report.finish())
}
