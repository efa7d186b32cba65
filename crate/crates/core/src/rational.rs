//! Exact rational scalars and per-element rational vectors.

use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::set::ElementSet;

/// Arbitrary-precision rational. No floating point is used anywhere in the crate.
pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"3"`, `"-2"` or `"1/2"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let t = s.trim();
    if t.is_empty() {
        return None;
    }
    let r: Rational = t.parse().ok()?;
    Some(r)
}

/// A value for each ground element (prices, weights, weight splits).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RationalVector(Vec<Rational>);

impl RationalVector {
    pub fn zeros(n: usize) -> Self {
        RationalVector(alloc::vec![Rational::zero(); n])
    }

    pub fn from_integers<I: IntoIterator<Item = i64>>(vals: I) -> Self {
        RationalVector(vals.into_iter().map(int).collect())
    }

    /// Indicator vector of `set` over `0..n`.
    pub fn indicator(n: usize, set: &ElementSet) -> Self {
        let mut v = Self::zeros(n);
        for x in set {
            v[x] = Rational::one();
        }
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Rational> {
        self.0
    }

    /// `v(X) = sum of v(x) over x in X`.
    pub fn sum_over(&self, set: &ElementSet) -> Rational {
        set.iter().fold(Rational::zero(), |acc, x| acc + &self.0[x])
    }

    pub fn sum_abs(&self) -> Rational {
        self.0.iter().fold(Rational::zero(), |acc, x| acc + x.abs())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "vector length mismatch");
        RationalVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "vector length mismatch");
        RationalVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Self {
        RationalVector(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        RationalVector(self.0.iter().map(|a| a * c).collect())
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|a| a.is_integer())
    }

    /// Least common multiple of all denominators (1 for an integral vector).
    pub fn common_denominator(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::one(), |acc, a| acc.lcm(a.denom()))
    }

    pub fn min(&self) -> Option<&Rational> {
        self.0.iter().min()
    }

    pub fn max(&self) -> Option<&Rational> {
        self.0.iter().max()
    }

    /// Keeps only the coordinates listed in `keep`, in order.
    pub fn restrict(&self, keep: &[usize]) -> Self {
        RationalVector(keep.iter().map(|&i| self.0[i].clone()).collect())
    }
}

impl Index<usize> for RationalVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl IndexMut<usize> for RationalVector {
    fn index_mut(&mut self, i: usize) -> &mut Rational {
        &mut self.0[i]
    }
}

impl From<Vec<Rational>> for RationalVector {
    fn from(v: Vec<Rational>) -> Self {
        RationalVector(v)
    }
}

impl FromIterator<Rational> for RationalVector {
    fn from_iter<I: IntoIterator<Item = Rational>>(iter: I) -> Self {
        RationalVector(iter.into_iter().collect())
    }
}

/// Least common multiple of the denominators of several vectors.
pub fn common_denominator_of(vectors: &[&RationalVector]) -> BigInt {
    vectors
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(&v.common_denominator()))
}
