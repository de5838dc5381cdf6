//! Exact elements `a + b√2` of the quadratic field ℚ(√2).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{parse_rational, Rational};
use super::NumericsError;

/// An element `a + b√2` of ℚ(√2).
///
/// Both coordinates are reduced rationals, so two values are equal exactly
/// when their coordinates are equal.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QuadNum {
    a: Rational,
    b: Rational,
}

impl QuadNum {
    pub fn new(a: Rational, b: Rational) -> Self {
        QuadNum { a, b }
    }

    /// `a + b√2` from integer coordinates.
    pub fn from_ints(a: i64, b: i64) -> Self {
        QuadNum::new(Rational::from_integer(a.into()), Rational::from_integer(b.into()))
    }

    pub fn from_int(n: i64) -> Self {
        QuadNum::from_ints(n, 0)
    }

    pub fn from_bigint(n: BigInt) -> Self {
        QuadNum::new(Rational::from_integer(n), Rational::zero())
    }

    pub fn from_rational(a: Rational) -> Self {
        QuadNum::new(a, Rational::zero())
    }

    /// `p/q` as an element of the field.
    pub fn ratio(p: i64, q: i64) -> Self {
        QuadNum::from_rational(Rational::new(p.into(), q.into()))
    }

    pub fn zero() -> Self {
        QuadNum::default()
    }

    pub fn one() -> Self {
        QuadNum::from_int(1)
    }

    pub fn sqrt2() -> Self {
        QuadNum::from_ints(0, 1)
    }

    /// `1/√2 = √2/2`.
    pub fn half_sqrt2() -> Self {
        QuadNum::new(Rational::zero(), Rational::new(1.into(), 2.into()))
    }

    /// Rational coordinate.
    pub fn a(&self) -> &Rational {
        &self.a
    }

    /// Coefficient of `√2`.
    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Sign of the real number `a + b√2`: -1, 0 or +1.
    ///
    /// When `a` and `b` disagree in sign the larger of `a²` and `2b²` wins.
    pub fn signum(&self) -> i8 {
        let sa = rational_sign(&self.a);
        let sb = rational_sign(&self.b);
        if sa == 0 || sa == sb {
            return sb;
        }
        if sb == 0 {
            return sa;
        }
        // compare |a| with |b|√2 over a common denominator, without gcds
        let a = self.a.numer() * self.b.denom();
        let b = self.b.numer() * self.a.denom();
        match (&a * &a).cmp(&(&b * &b * 2u32)) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            // a² = 2b² has no rational solution besides 0
            Ordering::Equal => unreachable!("a² = 2b² with a, b nonzero rationals"),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> QuadNum {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Galois conjugate `a - b√2`.
    pub fn conjugate(&self) -> QuadNum {
        QuadNum::new(self.a.clone(), -&self.b)
    }

    /// Field norm `a² - 2b²`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * Rational::from_integer(2.into())
    }

    /// Multiplicative inverse through the conjugate.
    pub fn inv(&self) -> Result<QuadNum, NumericsError> {
        if self.is_zero() {
            return Err(NumericsError::DivisionByZero);
        }
        let n = self.norm();
        let c = self.conjugate();
        Ok(QuadNum::new(c.a / &n, c.b / n))
    }

    pub fn checked_div(&self, rhs: &QuadNum) -> Result<QuadNum, NumericsError> {
        Ok(self * &rhs.inv()?)
    }

    pub fn mul_rational(&self, r: &Rational) -> QuadNum {
        QuadNum::new(&self.a * r, &self.b * r)
    }

    pub fn pow(&self, exp: u32) -> QuadNum {
        let mut acc = QuadNum::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// The nonnegative square root, when it lies in ℚ(√2).
    pub fn sqrt_exact(&self) -> Option<QuadNum> {
        if self.is_negative() {
            return None;
        }
        if self.b.is_zero() {
            let half = &self.a / Rational::from_integer(2.into());
            return rational_sqrt(&self.a)
                .map(QuadNum::from_rational)
                .or_else(|| rational_sqrt(&half).map(|d| QuadNum::new(Rational::zero(), d)));
        }
        // (c + d√2)² = a + b√2  ⇔  c² + 2d² = a, 2cd = b
        let disc = rational_sqrt(&self.norm())?;
        let two = Rational::from_integer(2.into());
        [(&self.a + &disc) / &two, (&self.a - &disc) / &two]
            .iter()
            .filter_map(rational_sqrt)
            .filter(|c| !c.is_zero())
            .map(|c| QuadNum::new(c.clone(), &self.b / (&c * &two)))
            .map(|y| if y.is_negative() { -y } else { y })
            .find(|y| &(y * y) == self)
    }

    /// Largest integer `n` with `n <= self`.
    pub fn floor(&self) -> BigInt {
        // Write self = (p + r√2)/q with integers, estimate with an integer
        // square root, then correct by exact comparison.
        let q = self.a.denom().lcm(self.b.denom());
        let p = (&self.a * Rational::from_integer(q.clone())).to_integer();
        let r = (&self.b * Rational::from_integer(q.clone())).to_integer();
        let root = (&r * &r * BigInt::from(2)).sqrt();
        let approx = if r.is_negative() { -root } else { root };
        let mut n = (p + approx).div_floor(&q);
        loop {
            let diff = self - &QuadNum::from_bigint(n.clone());
            if diff.is_negative() {
                n -= 1;
            } else if (&diff - &QuadNum::one()).signum() >= 0 {
                n += 1;
            } else {
                return n;
            }
        }
    }

    /// Correctly rounded decimal rendering with `digits` fractional digits
    /// (ties, possible only for rationals, round away from zero).
    pub fn to_decimal(&self, digits: usize) -> String {
        let digits = digits.max(1);
        let negative = self.is_negative();
        let magnitude = self.abs();
        let scale = BigInt::from(10).pow(digits as u32);
        let half = QuadNum::ratio(1, 2);
        let scaled = &magnitude.mul_rational(&Rational::from_integer(scale.clone())) + &half;
        let n = scaled.floor();
        let (int_part, frac_part) = n.div_rem(&scale);
        let sign = if negative && !n.is_zero() { "-" } else { "" };
        format!("{sign}{int_part}.{:0>width$}", frac_part.to_string(), width = digits)
    }

    /// Nearest `f64`; display and layout only.
    pub fn to_f64(&self) -> f64 {
        let s = self.to_decimal(20);
        s.parse().unwrap_or(f64::NAN)
    }
}

fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| Rational::new(n, d))
}

fn rational_sign(r: &Rational) -> i8 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

impl PartialOrd for QuadNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadNum {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl From<i64> for QuadNum {
    fn from(n: i64) -> Self {
        QuadNum::from_int(n)
    }
}

impl From<Rational> for QuadNum {
    fn from(r: Rational) -> Self {
        QuadNum::from_rational(r)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<QuadNum> for QuadNum {
            type Output = QuadNum;
            fn $method(self, rhs: QuadNum) -> QuadNum {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&QuadNum> for QuadNum {
            type Output = QuadNum;
            fn $method(self, rhs: &QuadNum) -> QuadNum {
                (&self).$method(rhs)
            }
        }
        impl $trait<QuadNum> for &QuadNum {
            type Output = QuadNum;
            fn $method(self, rhs: QuadNum) -> QuadNum {
                self.$method(&rhs)
            }
        }
    };
}

impl Add<&QuadNum> for &QuadNum {
    type Output = QuadNum;
    fn add(self, rhs: &QuadNum) -> QuadNum {
        QuadNum::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl Sub<&QuadNum> for &QuadNum {
    type Output = QuadNum;
    fn sub(self, rhs: &QuadNum) -> QuadNum {
        QuadNum::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl Mul<&QuadNum> for &QuadNum {
    type Output = QuadNum;
    fn mul(self, rhs: &QuadNum) -> QuadNum {
        // one reduction per coordinate instead of one per rational operation
        let (pa, qa) = (self.a.numer(), self.a.denom());
        let (pb, qb) = (self.b.numer(), self.b.denom());
        let (ra, sa) = (rhs.a.numer(), rhs.a.denom());
        let (rb, sb) = (rhs.b.numer(), rhs.b.denom());
        let a = Rational::new(pa * ra * qb * sb + pb * rb * qa * sa * 2u32, qa * sa * qb * sb);
        let b = Rational::new(pa * rb * qb * sa + pb * ra * qa * sb, qa * qb * sa * sb);
        QuadNum::new(a, b)
    }
}

/// Panics on division by zero, like the integer operators; use
/// [`QuadNum::checked_div`] for a `Result`.
impl Div<&QuadNum> for &QuadNum {
    type Output = QuadNum;
    fn div(self, rhs: &QuadNum) -> QuadNum {
        self.checked_div(rhs).expect("QuadNum division by zero")
    }
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl AddAssign<&QuadNum> for QuadNum {
    fn add_assign(&mut self, rhs: &QuadNum) {
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl SubAssign<&QuadNum> for QuadNum {
    fn sub_assign(&mut self, rhs: &QuadNum) {
        self.a -= &rhs.a;
        self.b -= &rhs.b;
    }
}

impl MulAssign<&QuadNum> for QuadNum {
    fn mul_assign(&mut self, rhs: &QuadNum) {
        *self = &*self * rhs;
    }
}

impl Neg for QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        QuadNum::new(-self.a, -self.b)
    }
}

impl Neg for &QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        QuadNum::new(-&self.a, -&self.b)
    }
}

impl Zero for QuadNum {
    fn zero() -> Self {
        QuadNum::default()
    }
    fn is_zero(&self) -> bool {
        QuadNum::is_zero(self)
    }
}

impl One for QuadNum {
    fn one() -> Self {
        QuadNum::from_int(1)
    }
}

impl fmt::Display for QuadNum {
    /// `3-2√2`, `1/2√2` (meaning (1/2)·√2), `-1+√2`, `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if !self.a.is_zero() {
            write!(f, "{}", self.a)?;
            if self.b.is_positive() {
                write!(f, "+")?;
            }
        }
        if self.b.is_one() {
            write!(f, "√2")
        } else if (-&self.b).is_one() {
            write!(f, "-√2")
        } else {
            write!(f, "{}√2", self.b)
        }
    }
}

impl fmt::Debug for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadNum({self})")
    }
}

impl FromStr for QuadNum {
    type Err = NumericsError;

    /// Accepts sums of signed terms, each a rational optionally followed by
    /// `√2` (also spelled `sqrt2`, `sqrt(2)` or `r2`, with an optional `*`).
    /// Parenthesized coefficients such as `(1/2)√2` are allowed.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let cleaned = cleaned.replace("sqrt(2)", "√2").replace("sqrt2", "√2").replace("r2", "√2");
        if cleaned.is_empty() {
            return Err(NumericsError::Parse(s.to_string()));
        }
        let mut terms = Vec::new();
        let mut current = String::new();
        let mut depth = 0usize;
        for (i, ch) in cleaned.chars().enumerate() {
            match ch {
                '(' => depth += 1,
                ')' => depth = depth.saturating_sub(1),
                _ => {}
            }
            if (ch == '+' || ch == '-') && i > 0 && depth == 0 && !current.is_empty() {
                terms.push(std::mem::take(&mut current));
            }
            current.push(ch);
        }
        terms.push(current);

        let mut value = QuadNum::zero();
        for term in terms {
            value += &parse_term(&term).ok_or_else(|| NumericsError::Parse(s.to_string()))?;
        }
        Ok(value)
    }
}

fn parse_term(term: &str) -> Option<QuadNum> {
    let (negative, body) = match term.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, term.strip_prefix('+').unwrap_or(term)),
    };
    let (coeff, irrational) = match body.strip_suffix("√2") {
        Some(c) => (c.strip_suffix('*').unwrap_or(c), true),
        None => (body, false),
    };
    let coeff = coeff.strip_prefix('(').and_then(|c| c.strip_suffix(')')).unwrap_or(coeff);
    let r = if coeff.is_empty() {
        if !irrational {
            return None;
        }
        Rational::one()
    } else {
        parse_rational(coeff).ok()?
    };
    let r = if negative { -r } else { r };
    Some(if irrational { QuadNum::new(Rational::zero(), r) } else { QuadNum::from_rational(r) })
}

#[derive(Serialize, Deserialize)]
struct QuadNumRepr {
    a: String,
    b: String,
}

impl Serialize for QuadNum {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        QuadNumRepr { a: self.a.to_string(), b: self.b.to_string() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QuadNum {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = QuadNumRepr::deserialize(deserializer)?;
        let a = parse_rational(&repr.a).map_err(serde::de::Error::custom)?;
        let b = parse_rational(&repr.b).map_err(serde::de::Error::custom)?;
        Ok(QuadNum::new(a, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> QuadNum {
        s.parse().unwrap()
    }

    #[test]
    fn sign_examples() {
        assert_eq!(QuadNum::zero().signum(), 0);
        assert_eq!(q("1-√2").signum(), -1);
        assert_eq!(q("3-2√2").signum(), 1);
        assert_eq!(q("-3+2√2").signum(), -1);
        assert_eq!(q("-1/2√2").signum(), -1);
    }

    #[test]
    fn field_examples() {
        assert_eq!(q("1+√2") * q("-1+√2"), QuadNum::one());
        assert_eq!(q("1+√2").inv().unwrap(), q("-1+√2"));
        let h = QuadNum::half_sqrt2();
        assert_eq!(&h * &h, QuadNum::ratio(1, 2));
        assert_eq!(QuadNum::zero().inv(), Err(NumericsError::DivisionByZero));
        assert!(QuadNum::one().checked_div(&QuadNum::zero()).is_err());
    }

    #[test]
    fn exact_square_roots() {
        let q = |s: &str| s.parse::<QuadNum>().unwrap();
        assert_eq!(q("3+2√2").sqrt_exact(), Some(q("1+√2")));
        assert_eq!(q("3-2√2").sqrt_exact(), Some(q("√2-1")));
        assert_eq!(q("2").sqrt_exact(), Some(q("√2")));
        assert_eq!(q("9/4").sqrt_exact(), Some(q("3/2")));
        assert_eq!(q("1+√2").sqrt_exact(), None);
        assert_eq!(q("-1").sqrt_exact(), None);
        assert_eq!(q("0").sqrt_exact(), Some(q("0")));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(q("1+√2").to_decimal(5), "2.41421");
        assert_eq!(QuadNum::zero().to_decimal(3), "0.000");
        assert_eq!(q("3-2√2").to_decimal(5), "0.17157");
        assert_eq!(q("-1-√2").to_decimal(3), "-2.414");
        assert_eq!(QuadNum::ratio(1, 8).to_decimal(2), "0.13");
        assert_eq!(QuadNum::ratio(-1, 10000).to_decimal(3), "0.000");
        assert_eq!(q("1000000√2").to_decimal(1), "1414213.6");
    }

    #[test]
    fn floor_near_integers() {
        assert_eq!(q("√2").floor(), BigInt::from(1));
        assert_eq!(q("-√2").floor(), BigInt::from(-2));
        assert_eq!(q("3-2√2").floor(), BigInt::from(0));
        assert_eq!(QuadNum::from_int(-4).floor(), BigInt::from(-4));
        assert_eq!(q("99/70-√2").floor(), BigInt::from(0));
    }

    #[test]
    fn parse_and_display() {
        for text in ["3-2√2", "-1+√2", "1/2√2", "0", "-√2", "7/3", "1/2+3/4√2"] {
            assert_eq!(q(text).to_string(), text);
        }
        assert_eq!(q("(1/2)√2"), QuadNum::half_sqrt2());
        assert_eq!(q("1 + sqrt(2)"), q("1+√2"));
        assert_eq!(q("2*r2"), q("2√2"));
        assert!("abc".parse::<QuadNum>().is_err());
        assert!("".parse::<QuadNum>().is_err());
    }

    #[test]
    fn json_shape() {
        let v = serde_json::to_value(q("1/2-3√2")).unwrap();
        assert_eq!(v, serde_json::json!({"a": "1/2", "b": "-3"}));
        let back: QuadNum = serde_json::from_value(v).unwrap();
        assert_eq!(back, q("1/2-3√2"));
    }
}
