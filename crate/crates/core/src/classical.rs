//! The flat-torus baseline: Gauss map, the geometric construction of
//! convergents `e_n = a_n e_{n-1} + e_{n-2}`, and intermediate convergents.
//!
//! Slopes are exact: rationals, elements of ℚ(√2), or any real quadratic
//! irrational through [`Surd`]. Every decision is a sign test.

use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{QuadNum, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassicalError {
    #[error("Gauss map input {0} is outside (0, 1)")]
    OutOfUnitInterval(String),
    #[error("slope {0} must be positive")]
    NonPositiveSlope(String),
}

/// Exact real numbers closed under the operations the construction needs.
pub trait ExactReal: Clone + fmt::Display {
    fn from_integer(n: BigInt) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn mul_int(&self, n: &BigInt) -> Self;
    /// `None` on zero.
    fn recip(&self) -> Option<Self>;
    fn floor(&self) -> BigInt;
    fn signum(&self) -> i8;
}

impl ExactReal for Rational {
    fn from_integer(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn mul_int(&self, n: &BigInt) -> Self {
        self * Rational::from_integer(n.clone())
    }
    fn recip(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| Rational::recip(self))
    }
    fn floor(&self) -> BigInt {
        Rational::floor(self).to_integer()
    }
    fn signum(&self) -> i8 {
        if Signed::is_positive(self) {
            1
        } else if Signed::is_negative(self) {
            -1
        } else {
            0
        }
    }
}

impl ExactReal for QuadNum {
    fn from_integer(n: BigInt) -> Self {
        QuadNum::from_bigint(n)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn mul_int(&self, n: &BigInt) -> Self {
        self * &QuadNum::from_bigint(n.clone())
    }
    fn recip(&self) -> Option<Self> {
        self.inv().ok()
    }
    fn floor(&self) -> BigInt {
        QuadNum::floor(self)
    }
    fn signum(&self) -> i8 {
        QuadNum::signum(self)
    }
}

/// `a + b√d` for a fixed non-square `d > 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Surd {
    a: Rational,
    b: Rational,
    d: u64,
}

impl Surd {
    /// Panics if `d` is a perfect square.
    pub fn new(a: Rational, b: Rational, d: u64) -> Self {
        assert!(d > 1 && d.sqrt() * d.sqrt() != d, "{d} must be a non-square");
        Surd { a, b, d }
    }

    /// `(1 + √5)/2`.
    pub fn golden_ratio() -> Self {
        let half = Rational::new(1.into(), 2.into());
        Surd::new(half.clone(), half, 5)
    }

    fn lift(&self, n: Rational) -> Surd {
        Surd { a: n, b: Rational::zero(), d: self.d }
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}√{}", self.a, self.b, self.d)
    }
}

impl ExactReal for Surd {
    /// Lifts into ℚ(√5); other fields go through [`Surd::new`].
    fn from_integer(n: BigInt) -> Self {
        Surd { a: Rational::from_integer(n), b: Rational::zero(), d: 5 }
    }
    fn add(&self, other: &Self) -> Self {
        let other = if other.b.is_zero() { self.lift(other.a.clone()) } else { other.clone() };
        assert_eq!(self.d, other.d, "mixed quadratic fields");
        Surd { a: &self.a + &other.a, b: &self.b + &other.b, d: self.d }
    }
    fn sub(&self, other: &Self) -> Self {
        let neg = Surd { a: -&other.a, b: -&other.b, d: other.d };
        ExactReal::add(self, &neg)
    }
    fn mul(&self, other: &Self) -> Self {
        if other.b.is_zero() || self.b.is_zero() {
            let d = if self.b.is_zero() { other.d } else { self.d };
            return Surd { a: &self.a * &other.a, b: &self.a * &other.b + &self.b * &other.a, d };
        }
        assert_eq!(self.d, other.d, "mixed quadratic fields");
        let d = Rational::from_integer(self.d.into());
        Surd { a: &self.a * &other.a + &self.b * &other.b * d, b: &self.a * &other.b + &self.b * &other.a, d: self.d }
    }
    fn mul_int(&self, n: &BigInt) -> Self {
        let n = Rational::from_integer(n.clone());
        Surd { a: &self.a * &n, b: &self.b * &n, d: self.d }
    }
    fn recip(&self) -> Option<Self> {
        if ExactReal::signum(self) == 0 {
            return None;
        }
        let d = Rational::from_integer(self.d.into());
        let norm = &self.a * &self.a - &self.b * &self.b * d;
        Some(Surd { a: &self.a / &norm, b: -&self.b / &norm, d: self.d })
    }
    fn floor(&self) -> BigInt {
        let q = self.a.denom().lcm(self.b.denom());
        let p = (&self.a * Rational::from_integer(q.clone())).to_integer();
        let r = (&self.b * Rational::from_integer(q.clone())).to_integer();
        let root = (&r * &r * BigInt::from(self.d)).sqrt();
        let approx = if r.is_negative() { -root } else { root };
        let mut n = (p + approx).div_floor(&q);
        loop {
            let diff = self.sub(&self.lift(Rational::from_integer(n.clone())));
            if diff.signum() < 0 {
                n -= 1;
            } else if diff.sub(&self.lift(Rational::one())).signum() >= 0 {
                n += 1;
            } else {
                return n;
            }
        }
    }
    fn signum(&self) -> i8 {
        let sa = ExactReal::signum(&self.a);
        let sb = ExactReal::signum(&self.b);
        if sa == 0 || sa == sb {
            return sb;
        }
        if sb == 0 {
            return sa;
        }
        let a2 = &self.a * &self.a;
        let db2 = &self.b * &self.b * Rational::from_integer(self.d.into());
        if a2 > db2 {
            sa
        } else {
            sb
        }
    }
}

/// A vector `(p, q)` of ℤ², with `p/q` approximating the slope.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct LatticeVec {
    pub p: BigInt,
    pub q: BigInt,
}

impl LatticeVec {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Self {
        LatticeVec { p: p.into(), q: q.into() }
    }

    pub fn cross(&self, other: &LatticeVec) -> BigInt {
        &self.p * &other.q - &self.q * &other.p
    }

    fn add_scaled(&self, k: &BigInt, other: &LatticeVec) -> LatticeVec {
        LatticeVec { p: &self.p + k * &other.p, q: &self.q + k * &other.q }
    }

    /// `cross((α, 1), (p, q)) = α·q − p`; positive when the vector lies to the
    /// left of the line.
    pub fn side_of<T: ExactReal>(&self, alpha: &T) -> T {
        alpha.mul_int(&self.q).sub(&T::from_integer(self.p.clone()))
    }
}

impl fmt::Display for LatticeVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

/// One Gauss map step `x ↦ {1/x}`, returning the digit `⌊1/x⌋`.
pub fn gauss_step<T: ExactReal>(x: &T) -> Result<(BigInt, T), ClassicalError> {
    let one = T::from_integer(BigInt::one());
    if x.signum() <= 0 || x.sub(&one).signum() >= 0 {
        return Err(ClassicalError::OutOfUnitInterval(x.to_string()));
    }
    let inv = x.recip().expect("nonzero");
    let digit = inv.floor();
    let rest = inv.sub(&T::from_integer(digit.clone()));
    Ok((digit, rest))
}

/// Two consecutive vectors of the geometric construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergentPair {
    pub e_prev: LatticeVec,
    pub e_curr: LatticeVec,
    /// `n` such that `e_curr = e_n`.
    pub index: i64,
    /// `a_n` (absent for the starting basis).
    pub digit: Option<BigInt>,
}

impl ConvergentPair {
    /// `e_{-2} = (0, 1)`, `e_{-1} = (1, 0)`.
    pub fn start() -> Self {
        ConvergentPair { e_prev: LatticeVec::new(0, 1), e_curr: LatticeVec::new(1, 0), index: -1, digit: None }
    }
}

/// Iterator over the geometric construction: each step adds `e_{n-1}` to
/// `e_{n-2}` as often as possible without crossing the line in direction
/// `(α, 1)`. Stops after a vector lands on the line (rational slopes).
pub struct GeometricConvergents<T> {
    alpha: T,
    state: ConvergentPair,
    halted: bool,
}

impl<T: ExactReal> GeometricConvergents<T> {
    pub fn new(alpha: T) -> Result<Self, ClassicalError> {
        if alpha.signum() <= 0 {
            return Err(ClassicalError::NonPositiveSlope(alpha.to_string()));
        }
        Ok(GeometricConvergents { alpha, state: ConvergentPair::start(), halted: false })
    }

    pub fn halted(&self) -> bool {
        self.halted
    }
}

impl<T: ExactReal> Iterator for GeometricConvergents<T> {
    type Item = ConvergentPair;

    fn next(&mut self) -> Option<ConvergentPair> {
        if self.halted {
            return None;
        }
        let older = self.state.e_prev.side_of(&self.alpha);
        let newer = self.state.e_curr.side_of(&self.alpha);
        // older + a·newer keeps the sign of `older` (or vanishes) for a ≤ |older|/|newer|
        let inv = newer.recip().expect("e_(n-1) never lies on the line while running");
        let digit = older.mul(&inv).mul_int(&BigInt::from(-1)).floor();
        let next = self.state.e_prev.add_scaled(&digit, &self.state.e_curr);
        if next.side_of(&self.alpha).signum() == 0 {
            self.halted = true;
        }
        let pair = ConvergentPair {
            e_prev: self.state.e_curr.clone(),
            e_curr: next,
            index: self.state.index + 1,
            digit: Some(digit),
        };
        self.state = pair.clone();
        Some(pair)
    }
}

/// Result of running the geometric construction for a fixed number of steps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Convergents {
    /// `a_0, a_1, …`
    pub digits: Vec<BigInt>,
    /// `e_0, e_1, …`
    pub vectors: Vec<LatticeVec>,
    /// Set when the last vector lies on the line (rational slope).
    pub halted: bool,
}

/// `e_0 … e_{n-1}`, fewer if the construction halts first.
pub fn geometric_convergents<T: ExactReal>(alpha: &T, n: usize) -> Result<Convergents, ClassicalError> {
    let mut iter = GeometricConvergents::new(alpha.clone())?;
    let mut digits = Vec::new();
    let mut vectors = Vec::new();
    for pair in iter.by_ref().take(n) {
        digits.push(pair.digit.expect("every step has a digit"));
        vectors.push(pair.e_curr);
    }
    Ok(Convergents { digits, vectors, halted: iter.halted() })
}

/// For each step `m < n`, the vectors `i·e_{m-1} + e_{m-2}` with
/// `1 ≤ i < a_m`.
pub fn intermediate_convergents<T: ExactReal>(alpha: &T, n: usize) -> Result<Vec<Vec<LatticeVec>>, ClassicalError> {
    let mut prev = ConvergentPair::start();
    let mut groups = Vec::new();
    for pair in GeometricConvergents::new(alpha.clone())?.take(n) {
        let digit = pair.digit.clone().expect("digit");
        let mut group = Vec::new();
        let mut i = BigInt::one();
        while i < digit {
            group.push(prev.e_prev.add_scaled(&i, &prev.e_curr));
            i += 1;
        }
        groups.push(group);
        prev = pair;
    }
    Ok(groups)
}

/// Intermediate and full convergents merged in the order the additive
/// (Farey) algorithm visits them, without the starting basis.
pub fn additive_convergents<T: ExactReal>(alpha: &T, count: usize) -> Result<Vec<LatticeVec>, ClassicalError> {
    let mut out = Vec::new();
    let mut steps = 0usize;
    let start = LatticeVec::new(0, 1);
    let mut prev = ConvergentPair::start();
    for pair in GeometricConvergents::new(alpha.clone())? {
        let digit = pair.digit.clone().expect("digit");
        let mut i = BigInt::one();
        while i < digit {
            out.push(prev.e_prev.add_scaled(&i, &prev.e_curr));
            i += 1;
        }
        if pair.e_curr != start {
            out.push(pair.e_curr.clone());
        }
        prev = pair;
        steps += 1;
        if out.len() >= count || steps > count + 1 {
            break;
        }
    }
    out.truncate(count);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> QuadNum {
        s.parse().unwrap()
    }

    fn vecs(v: &[(i64, i64)]) -> Vec<LatticeVec> {
        v.iter().map(|&(p, q)| LatticeVec::new(p, q)).collect()
    }

    #[test]
    fn sqrt2_convergents() {
        let c = geometric_convergents(&q("√2"), 4).unwrap();
        assert_eq!(c.vectors, vecs(&[(1, 1), (3, 2), (7, 5), (17, 12)]));
        assert_eq!(c.digits, vec![1.into(), 2.into(), 2.into(), 2.into()]);
        assert!(!c.halted);
    }

    #[test]
    fn golden_ratio_gives_fibonacci() {
        let c = geometric_convergents(&Surd::golden_ratio(), 8).unwrap();
        let fib = [1i64, 1, 2, 3, 5, 8, 13, 21, 34, 55];
        let expected: Vec<_> = (0..8).map(|n| LatticeVec::new(fib[n + 1], fib[n])).collect();
        assert_eq!(c.vectors, expected);
        assert!(c.digits.iter().all(|d| *d == BigInt::one()));
    }

    #[test]
    fn rational_slope_halts_on_the_line() {
        let two = Rational::from_integer(2.into());
        let c = geometric_convergents(&two, 5).unwrap();
        assert_eq!(c.vectors, vecs(&[(2, 1)]));
        assert!(c.halted);

        let c = geometric_convergents(&Rational::new(7.into(), 5.into()), 10).unwrap();
        assert_eq!(c.vectors.last(), Some(&LatticeVec::new(7, 5)));
        assert!(c.halted);
    }

    #[test]
    fn small_slope_has_zero_leading_digit() {
        let c = geometric_convergents(&q("√2-1"), 3).unwrap();
        assert_eq!(c.digits[0], BigInt::zero());
        assert_eq!(c.vectors, vecs(&[(0, 1), (1, 2), (2, 5)]));
    }

    #[test]
    fn gauss_examples() {
        let half = Rational::new(1.into(), 2.into());
        assert_eq!(gauss_step(&half).unwrap(), (2.into(), Rational::zero()));
        assert_eq!(gauss_step(&q("√2-1")).unwrap(), (2.into(), q("√2-1")));
        let two_fifths = Rational::new(2.into(), 5.into());
        assert_eq!(gauss_step(&two_fifths).unwrap(), (2.into(), half));
        assert!(gauss_step(&q("1")).is_err());
        assert!(gauss_step(&q("0")).is_err());
    }

    #[test]
    fn intermediates_between_convergents() {
        let groups = intermediate_convergents(&q("√2"), 3).unwrap();
        assert_eq!(groups[0], vec![]);
        assert_eq!(groups[1], vecs(&[(2, 1)]));
        assert_eq!(groups[2], vecs(&[(4, 3)]));
        let merged = additive_convergents(&q("√2"), 7).unwrap();
        assert_eq!(merged, vecs(&[(1, 1), (2, 1), (3, 2), (4, 3), (7, 5), (10, 7), (17, 12)]));
    }

    #[test]
    fn surd_floor_and_sign() {
        let g = Surd::golden_ratio();
        assert_eq!(ExactReal::floor(&g), BigInt::one());
        assert_eq!(ExactReal::signum(&g.sub(&Surd::from_integer(2.into()))), -1);
        let inv = g.recip().unwrap();
        // 1/φ = φ − 1
        assert_eq!(inv, g.sub(&Surd::from_integer(1.into())));
        let s7 = Surd::new(Rational::zero(), Rational::one(), 7);
        assert_eq!(ExactReal::floor(&s7), BigInt::from(2));
    }

    /// Convergents are best approximations: no fraction with a smaller
    /// denominator is closer, checked by brute force.
    #[test]
    fn convergents_are_best_approximations() {
        let alpha = q("√2");
        let c = geometric_convergents(&alpha, 8).unwrap();
        for v in &c.vectors {
            let err = v.side_of(&alpha).abs();
            let qn: i64 = (&v.q).try_into().unwrap();
            for den in 1..qn {
                let num = (&alpha * &QuadNum::from_int(den)).floor();
                for p in [num.clone(), num + 1] {
                    let other = LatticeVec { p, q: den.into() }.side_of(&alpha).abs();
                    assert!(other > err, "{v} beaten by denominator {den}");
                }
            }
        }
    }
}
