//! Planar vectors, 2×2 matrices and the projective line over ℚ(√2).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::{NumericsError, QuadNum};

#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: QuadNum,
    pub y: QuadNum,
}

impl Vec2 {
    pub fn new(x: QuadNum, y: QuadNum) -> Self {
        Vec2 { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Vec2::new(x.into(), y.into())
    }

    pub fn zero() -> Self {
        Vec2::default()
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// `x₁y₂ − y₁x₂`; positive when `other` is counter-clockwise from `self`.
    pub fn cross(&self, other: &Vec2) -> QuadNum {
        &self.x * &other.y - &self.y * &other.x
    }

    pub fn dot(&self, other: &Vec2) -> QuadNum {
        &self.x * &other.x + &self.y * &other.y
    }

    pub fn norm2(&self) -> QuadNum {
        self.dot(self)
    }

    pub fn scale(&self, k: &QuadNum) -> Vec2 {
        Vec2::new(&self.x * k, &self.y * k)
    }

    pub fn scale_int(&self, k: i64) -> Vec2 {
        self.scale(&QuadNum::from_int(k))
    }

    /// Mirror image under `(x, y) ↦ (−x, y)`.
    pub fn reflect(&self) -> Vec2 {
        Vec2::new(-&self.x, self.y.clone())
    }

    /// Same direction: parallel and pointing the same way.
    pub fn same_ray(&self, other: &Vec2) -> bool {
        self.cross(other).is_zero() && self.dot(other).is_positive()
    }
}

impl fmt::Debug for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add<&Vec2> for &Vec2 {
    type Output = Vec2;
    fn add(self, rhs: &Vec2) -> Vec2 {
        Vec2::new(&self.x + &rhs.x, &self.y + &rhs.y)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        &self + &rhs
    }
}

impl Sub<&Vec2> for &Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: &Vec2) -> Vec2 {
        Vec2::new(&self.x - &rhs.x, &self.y - &rhs.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        &self - &rhs
    }
}

impl Neg for &Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-&self.x, -&self.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        -&self
    }
}

/// `[[a, b], [c, d]]` acting on column vectors.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat2 {
    pub a: QuadNum,
    pub b: QuadNum,
    pub c: QuadNum,
    pub d: QuadNum,
}

impl Mat2 {
    pub fn new(a: QuadNum, b: QuadNum, c: QuadNum, d: QuadNum) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Mat2::from_ints(1, 0, 0, 1)
    }

    /// The reflection `(x, y) ↦ (−x, y)`.
    pub fn reflection() -> Self {
        Mat2::from_ints(-1, 0, 0, 1)
    }

    pub fn det(&self) -> QuadNum {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> QuadNum {
        &self.a + &self.d
    }

    pub fn apply(&self, v: &Vec2) -> Vec2 {
        Vec2::new(&self.a * &v.x + &self.b * &v.y, &self.c * &v.x + &self.d * &v.y)
    }

    pub fn scale(&self, k: &QuadNum) -> Mat2 {
        Mat2::new(&self.a * k, &self.b * k, &self.c * k, &self.d * k)
    }

    pub fn inverse(&self) -> Result<Mat2, NumericsError> {
        let inv_det = self.det().inv()?;
        Ok(Mat2::new(&self.d * &inv_det, -&self.b * &inv_det, -&self.c * &inv_det, &self.a * &inv_det))
    }

    pub fn is_orientation_reversing(&self) -> bool {
        self.det().is_negative()
    }
}

impl Mul<&Mat2> for &Mat2 {
    type Output = Mat2;
    fn mul(self, n: &Mat2) -> Mat2 {
        Mat2::new(
            &self.a * &n.a + &self.b * &n.c,
            &self.a * &n.b + &self.b * &n.d,
            &self.c * &n.a + &self.d * &n.c,
            &self.c * &n.b + &self.d * &n.d,
        )
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        &self * &rhs
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// A point of ℝP¹ = ℝ ∪ {∞} with finite part in ℚ(√2).
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProjVal {
    Finite(QuadNum),
    Infinity,
}

impl ProjVal {
    pub fn finite(&self) -> Option<&QuadNum> {
        match self {
            ProjVal::Finite(q) => Some(q),
            ProjVal::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ProjVal::Infinity)
    }

    /// Inverse slope `x / y` of a nonzero vector (∞ when `y = 0`).
    pub fn from_vec(v: &Vec2) -> ProjVal {
        if v.y.is_zero() {
            ProjVal::Infinity
        } else {
            ProjVal::Finite(&v.x / &v.y)
        }
    }
}

impl From<QuadNum> for ProjVal {
    fn from(q: QuadNum) -> Self {
        ProjVal::Finite(q)
    }
}

impl fmt::Display for ProjVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjVal::Finite(q) => write!(f, "{q}"),
            ProjVal::Infinity => write!(f, "∞"),
        }
    }
}

impl fmt::Debug for ProjVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ProjVal({self})")
    }
}

/// Möbius action `u ↦ (a·u + b)/(c·u + d)` on ℝP¹. `m` must be invertible.
pub fn moebius(m: &Mat2, u: &ProjVal) -> ProjVal {
    debug_assert!(!m.det().is_zero(), "moebius needs an invertible matrix");
    match u {
        ProjVal::Infinity => {
            if m.c.is_zero() {
                ProjVal::Infinity
            } else {
                ProjVal::Finite(&m.a / &m.c)
            }
        }
        ProjVal::Finite(u) => {
            let den = &m.c * u + &m.d;
            if den.is_zero() {
                ProjVal::Infinity
            } else {
                ProjVal::Finite((&m.a * u + &m.b) / den)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moebius_basic() {
        let id = Mat2::identity();
        let u = ProjVal::Finite("3-√2".parse().unwrap());
        assert_eq!(moebius(&id, &u), u);
        assert_eq!(moebius(&id, &ProjVal::Infinity), ProjVal::Infinity);
        // pole and image of infinity
        let m = Mat2::from_ints(2, 1, 1, -1);
        assert_eq!(moebius(&m, &ProjVal::Finite(1.into())), ProjVal::Infinity);
        assert_eq!(moebius(&m, &ProjVal::Infinity), ProjVal::Finite(2.into()));
    }

    #[test]
    fn inverse_and_det() {
        let m = Mat2::new("√2".parse().unwrap(), 1.into(), 1.into(), "√2".parse().unwrap());
        assert_eq!(m.det(), QuadNum::one());
        assert_eq!(&m * &m.inverse().unwrap(), Mat2::identity());
        assert!(Mat2::from_ints(1, 2, 2, 4).inverse().is_err());
    }

    #[test]
    fn cross_orientation() {
        let e1 = Vec2::from_ints(1, 0);
        let e2 = Vec2::from_ints(0, 1);
        assert_eq!(e1.cross(&e2), QuadNum::one());
        assert!(e1.same_ray(&e1.scale_int(3)));
        assert!(!e1.same_ray(&e1.scale_int(-3)));
    }
}
