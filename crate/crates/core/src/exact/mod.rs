//! Exact integer and rational linear algebra, normal forms, and lattice
//! primitives. Nothing in this crate uses floating point.

mod hnf;
mod lattice;
mod matrix;
mod module;
mod reduce;

pub use hnf::{hnf, snf, AbelianInvariants};
pub use lattice::{discriminant_group, lattice_dual, EvenLattice, LatticeVector};
pub use matrix::{IntMatrix, Matrix, RatMatrix};
pub use module::{index_of, Index, LinearMap, RatRow, SparseRow, ZModule};
pub use reduce::{lll_gram, min_norm, short_vectors, MinNorm};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn rat_int(v: i64) -> Rat {
    Rat::from_integer(Int::from(v))
}

pub fn lcm(a: &Int, b: &Int) -> Int {
    if a.is_zero() || b.is_zero() {
        return Int::zero();
    }
    a.lcm(b)
}

/// Least common multiple of the denominators of `values` (1 for an empty list).
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rat>) -> Int {
    values
        .into_iter()
        .fold(Int::one(), |acc, v| acc.lcm(v.denom()))
}

/// Rounds to the nearest integer, ties towards +infinity.
pub(crate) fn round_div(num: &Int, den: &Int) -> Int {
    // floor((2n + d) / 2d) for d > 0
    let (n, d) = if den.is_negative() {
        (-num.clone(), -den.clone())
    } else {
        (num.clone(), den.clone())
    };
    let two = Int::from(2);
    (&two * &n + &d).div_floor(&(&two * &d))
}

/// Extended gcd: returns (g, x, y) with g = x a + y b, g >= 0.
pub(crate) fn xgcd(a: &Int, b: &Int) -> (Int, Int, Int) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Generalised binomial coefficient C(e, k) for rational e.
pub fn binomial_rat(e: &Rat, k: u32) -> Rat {
    let mut acc = Rat::one();
    for j in 0..k {
        acc *= e - Rat::from_integer(Int::from(j));
        acc /= Rat::from_integer(Int::from(j + 1));
    }
    acc
}

/// Ordinary binomial coefficient C(n, k) for n >= 0, as a big integer.
pub fn binomial(n: u64, k: u64) -> Int {
    if k > n {
        return Int::zero();
    }
    let k = k.min(n - k);
    let mut acc = Int::one();
    for j in 0..k {
        acc *= Int::from(n - j);
        acc /= Int::from(j + 1);
    }
    acc
}

pub fn factorial(n: u64) -> Int {
    (1..=n).fold(Int::one(), |acc, j| acc * Int::from(j))
}

pub fn is_integral(r: &Rat) -> bool {
    r.denom().is_one()
}

/// "p/q", or "p" for integers.
pub fn rat_string(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn ser_rat<S: serde::Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rat_string(r))
}

pub fn ser_rats<S: serde::Serializer>(v: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(rat_string))
}

pub fn ser_int<S: serde::Serializer>(v: &Int, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn ser_ints<S: serde::Serializer>(v: &[Int], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(Int::to_string))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_is_nearest() {
        assert_eq!(round_div(&int(7), &int(2)), int(4));
        assert_eq!(round_div(&int(-7), &int(2)), int(-3));
        assert_eq!(round_div(&int(5), &int(3)), int(2));
        assert_eq!(round_div(&int(-5), &int(-3)), int(2));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), int(10));
        assert_eq!(binomial(2, 5), int(0));
        assert_eq!(binomial_rat(&rat(1, 2), 2), rat(-1, 8));
        assert_eq!(binomial_rat(&rat_int(-2), 3), rat_int(-4));
    }
}

