//! The octagon Farey map.
//!
//! Directions in the closed upper half-plane are cut into eight sectors
//! `Σ̄_0 … Σ̄_7` of angle `π/8`. The map acts on `Σ̄_j` by the matrix `γν_j`,
//! where `ν_j` folds `Σ̄_j` onto `Σ̄_0` and `γ` opens `Σ̄_0` onto
//! `Σ̄ = Σ̄_1 ∪ … ∪ Σ̄_7`. Expansions record the itinerary.

use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{moebius, Mat2, ProjVal, QuadNum, Rational, Vec2};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FareyError {
    #[error("direction must be a nonzero vector")]
    ZeroDirection,
    #[error("direction {0} points into the lower half-plane")]
    LowerHalfPlane(String),
    #[error("sector index {0} is out of range 0..=7")]
    BadSector(i64),
    #[error("inadmissible prefix: {0}")]
    Inadmissible(String),
    #[error("expansion is not terminating")]
    NotTerminating,
}

/// A direction `θ ∈ [0, π]`, stored as a vector so that `θ = 0` and `θ = π`
/// stay apart even though both have `u = ∞`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec2", into = "Vec2")]
pub struct Direction(Vec2);

impl Direction {
    pub fn new(v: Vec2) -> Result<Self, FareyError> {
        if v.is_zero() {
            return Err(FareyError::ZeroDirection);
        }
        if v.y.is_negative() {
            return Err(FareyError::LowerHalfPlane(v.to_string()));
        }
        Ok(Direction(v))
    }

    /// The direction `(u, 1)` with inverse slope `u`.
    pub fn from_u(u: QuadNum) -> Self {
        Direction(Vec2::new(u, QuadNum::one()))
    }

    pub fn theta_zero() -> Self {
        Direction(Vec2::from_ints(1, 0))
    }

    pub fn theta_pi() -> Self {
        Direction(Vec2::from_ints(-1, 0))
    }

    pub fn vec(&self) -> &Vec2 {
        &self.0
    }

    /// Inverse slope `u = cot θ`.
    pub fn u(&self) -> ProjVal {
        ProjVal::from_vec(&self.0)
    }

    pub fn is_theta_zero(&self) -> bool {
        self.0.y.is_zero() && self.0.x.is_positive()
    }

    pub fn is_theta_pi(&self) -> bool {
        self.0.y.is_zero() && self.0.x.is_negative()
    }

    /// Order by angle.
    pub fn theta_cmp(&self, other: &Direction) -> Ordering {
        if self.0.same_ray(&other.0) {
            return Ordering::Equal;
        }
        if self.is_theta_zero() || other.is_theta_pi() {
            return Ordering::Less;
        }
        if self.is_theta_pi() || other.is_theta_zero() {
            return Ordering::Greater;
        }
        if self.0.cross(&other.0).is_positive() {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    /// Image under a matrix mapping this direction into the closed upper
    /// half-plane. Flips the sign if the image points down.
    pub fn transform(&self, m: &Mat2) -> Direction {
        let w = m.apply(&self.0);
        if w.y.is_negative() {
            Direction(-w)
        } else {
            Direction(w)
        }
    }
}

impl TryFrom<Vec2> for Direction {
    type Error = FareyError;
    fn try_from(v: Vec2) -> Result<Self, FareyError> {
        Direction::new(v)
    }
}

impl From<Direction> for Vec2 {
    fn from(d: Direction) -> Vec2 {
        d.0
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_theta_zero() {
            write!(f, "θ=0")
        } else if self.is_theta_pi() {
            write!(f, "θ=π")
        } else {
            write!(f, "u={}", self.u())
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct SectorIndex(u8);

impl SectorIndex {
    pub fn new(j: i64) -> Result<Self, FareyError> {
        if (0..8).contains(&j) {
            Ok(SectorIndex(j as u8))
        } else {
            Err(FareyError::BadSector(j))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = SectorIndex> {
        (0..8).map(SectorIndex)
    }

    /// `ν_j` is orientation reversing exactly for odd `j`.
    pub fn is_odd(self) -> bool {
        self.0 % 2 == 1
    }
}

impl TryFrom<u8> for SectorIndex {
    type Error = FareyError;
    fn try_from(j: u8) -> Result<Self, FareyError> {
        SectorIndex::new(j.into())
    }
}

impl From<SectorIndex> for u8 {
    fn from(j: SectorIndex) -> u8 {
        j.0
    }
}

impl fmt::Display for SectorIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Tables {
    nu: [Mat2; 8],
    gamma: Mat2,
    branch: [Mat2; 8],
    inverse_branch: [Mat2; 8],
    boundary_u: [QuadNum; 7],
}

fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let s = QuadNum::half_sqrt2();
        let n = -&s;
        let z = QuadNum::zero;
        let o = QuadNum::one;
        let nu = [
            Mat2::identity(),
            Mat2::new(s.clone(), s.clone(), s.clone(), n.clone()),
            Mat2::new(s.clone(), s.clone(), n.clone(), s.clone()),
            Mat2::new(z(), o(), o(), z()),
            Mat2::new(z(), o(), -o(), z()),
            Mat2::new(n.clone(), s.clone(), s.clone(), s.clone()),
            Mat2::new(n.clone(), s.clone(), n.clone(), n.clone()),
            Mat2::reflection(),
        ];
        let two_silver = QuadNum::from_ints(2, 2);
        let gamma = Mat2::new(-o(), two_silver, z(), o());
        let branch = nu.clone().map(|m| &gamma * &m);
        let inverse_branch = branch.clone().map(|m| m.inverse().expect("γν_j is invertible"));
        let boundary_u = [
            QuadNum::from_ints(1, 1),
            QuadNum::one(),
            QuadNum::from_ints(-1, 1),
            QuadNum::zero(),
            QuadNum::from_ints(1, -1),
            QuadNum::from_int(-1),
            QuadNum::from_ints(-1, -1),
        ];
        Tables { nu, gamma, branch, inverse_branch, boundary_u }
    })
}

/// `ν_j`, mapping `Σ̄_j` linearly onto `Σ̄_0`.
pub fn nu(j: SectorIndex) -> &'static Mat2 {
    &tables().nu[j.0 as usize]
}

/// `γ = [[-1, 2(1+√2)], [0, 1]]`.
pub fn gamma() -> &'static Mat2 {
    &tables().gamma
}

/// `γν_j`, the branch of the map on `Σ̄_j`.
pub fn branch(j: SectorIndex) -> &'static Mat2 {
    &tables().branch[j.0 as usize]
}

/// `(γν_j)⁻¹ = ν_j⁻¹γ`.
pub fn inverse_branch(j: SectorIndex) -> &'static Mat2 {
    &tables().inverse_branch[j.0 as usize]
}

/// Direction of angle `jπ/8` for `j ∈ 0..=8`.
pub fn boundary_direction(j: usize) -> Direction {
    match j {
        0 => Direction::theta_zero(),
        8 => Direction::theta_pi(),
        1..=7 => Direction::from_u(tables().boundary_u[j - 1].clone()),
        _ => panic!("boundary index {j} out of range"),
    }
}

/// Is `d` one of the nine angles `jπ/8`?
pub fn is_sector_endpoint(d: &Direction) -> bool {
    d.0.y.is_zero() || matches!(classify(d), Classification::Boundary(..))
}

/// Where a direction sits relative to the sectors.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Classification {
    Interior(SectorIndex),
    /// On the common endpoint of two consecutive sectors.
    Boundary(SectorIndex, SectorIndex),
}

impl Classification {
    pub fn sectors(self) -> Vec<SectorIndex> {
        match self {
            Classification::Interior(j) => vec![j],
            Classification::Boundary(i, j) => vec![i, j],
        }
    }
}

/// All sectors `j` whose closure contains `d`.
pub fn classify(d: &Direction) -> Classification {
    let v = d.vec();
    if v.y.is_zero() {
        let j = if v.x.is_positive() { 0 } else { 7 };
        return Classification::Interior(SectorIndex(j));
    }
    // y > 0, so b ≷ x/y exactly when b·y ≷ x
    let mut above = 0u8;
    for (i, b) in tables().boundary_u.iter().enumerate() {
        match (b * &v.y).cmp(&v.x) {
            Ordering::Greater => above += 1,
            Ordering::Equal => return Classification::Boundary(SectorIndex(i as u8), SectorIndex(i as u8 + 1)),
            Ordering::Less => break,
        }
    }
    Classification::Interior(SectorIndex(above))
}

/// Which sector to use on a boundary between two.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TiePolicy {
    #[default]
    Lowest,
    Highest,
}

impl TiePolicy {
    /// Sector 0 is only allowed for the first digit.
    fn choose(self, c: Classification, first: bool) -> SectorIndex {
        match c {
            Classification::Interior(j) => j,
            Classification::Boundary(i, _) if i.0 == 0 && !first => SectorIndex(1),
            Classification::Boundary(i, j) => match self {
                TiePolicy::Lowest => i,
                TiePolicy::Highest => j,
            },
        }
    }
}

/// `fold(d) = ν_j d ∈ Σ̄_0` with `j` chosen by the policy.
pub fn fold(d: &Direction, policy: TiePolicy) -> (SectorIndex, Direction) {
    let j = policy.choose(classify(d), true);
    (j, d.transform(nu(j)))
}

/// One step `d ↦ γν_j d` under the default policy.
pub fn farey_step(d: &Direction) -> (SectorIndex, Direction) {
    farey_step_with(d, TiePolicy::Lowest, true)
}

/// One step; `first` permits digit 0 on the `Σ̄_0 | Σ̄_1` boundary.
pub fn farey_step_with(d: &Direction, policy: TiePolicy, first: bool) -> (SectorIndex, Direction) {
    let j = policy.choose(classify(d), first);
    (j, d.transform(branch(j)))
}

/// Möbius form of one branch in the `u` coordinate.
pub fn farey_step_u(j: SectorIndex, u: &ProjVal) -> ProjVal {
    moebius(branch(j), u)
}

/// The itinerary `[s₀; s₁, …]`, truncated.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FareyExpansion {
    pub entries: Vec<SectorIndex>,
    /// Some iterate fell on the common endpoint of two sectors, so the
    /// itinerary depends on the tie policy.
    pub boundary_hit: bool,
    /// Some iterate is an angle `jπ/8`; the tail is then constantly 1 or 7.
    pub terminating: bool,
}

impl FareyExpansion {
    pub fn digits(&self) -> Vec<u8> {
        self.entries.iter().map(|s| s.0).collect()
    }
}

impl fmt::Display for FareyExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some((first, rest)) = self.entries.split_first() else {
            return write!(f, "[]");
        };
        write!(f, "[{first}")?;
        for (k, s) in rest.iter().enumerate() {
            write!(f, "{}{s}", if k == 0 { "; " } else { ", " })?;
        }
        write!(f, "]")
    }
}

/// First `depth` entries under the lowest-index tie policy.
pub fn expand(d: &Direction, depth: usize) -> FareyExpansion {
    expand_with(d, depth, TiePolicy::Lowest)
}

pub fn expand_with(d: &Direction, depth: usize, policy: TiePolicy) -> FareyExpansion {
    let mut entries = Vec::with_capacity(depth);
    let mut boundary_hit = false;
    let mut terminating = false;
    let mut cur = d.clone();
    for k in 0..depth {
        let c = classify(&cur);
        boundary_hit |= matches!(c, Classification::Boundary(..));
        terminating |= is_sector_endpoint(&cur);
        let j = policy.choose(c, k == 0);
        entries.push(j);
        cur = cur.transform(branch(j));
    }
    terminating |= depth > 0 && is_sector_endpoint(&cur);
    FareyExpansion { entries, boundary_hit, terminating }
}

/// A closed arc of directions `[lo, hi]` in angle order.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Rp1Interval {
    pub lo: Direction,
    pub hi: Direction,
}

impl Rp1Interval {
    /// Orders the endpoints by angle.
    pub fn new(a: Direction, b: Direction) -> Self {
        if a.theta_cmp(&b) == Ordering::Greater {
            Rp1Interval { lo: b, hi: a }
        } else {
            Rp1Interval { lo: a, hi: b }
        }
    }

    /// `Σ̄_j`.
    pub fn sector(j: SectorIndex) -> Self {
        let j = j.0 as usize;
        Rp1Interval::new(boundary_direction(j), boundary_direction(j + 1))
    }

    /// `u` bounds as `(smaller, larger)`; angle and `u` run opposite ways.
    pub fn u_bounds(&self) -> (ProjVal, ProjVal) {
        let small = if self.hi.is_theta_pi() { ProjVal::Infinity } else { self.hi.u() };
        (small, self.lo.u())
    }

    pub fn contains(&self, d: &Direction) -> bool {
        self.lo.theta_cmp(d) != Ordering::Greater && d.theta_cmp(&self.hi) != Ordering::Greater
    }

    pub fn is_subset_of(&self, other: &Rp1Interval) -> bool {
        other.contains(&self.lo) && other.contains(&self.hi)
    }

    pub fn map(&self, m: &Mat2) -> Rp1Interval {
        Rp1Interval::new(self.lo.transform(m), self.hi.transform(m))
    }

    /// Exact test for `hi − lo < eps` in angle, for `0 < eps < 1`.
    ///
    /// Uses `sin Δ < eps − eps³/6 ≤ sin eps` with `Δ < π/2`.
    pub fn angular_width_lt(&self, eps: f64) -> bool {
        let a = self.lo.vec();
        let b = self.hi.vec();
        if !a.dot(b).is_positive() {
            return false;
        }
        let e = Rational::from_float(eps).expect("finite tolerance");
        let bound = &e - &e * &e * &e / Rational::from_integer(6.into());
        let bound = QuadNum::from_rational(&bound * &bound);
        let cross = a.cross(b);
        &cross * &cross < &bound * &(a.norm2() * b.norm2())
    }

    /// Angle `hi − lo` in radians, for display.
    pub fn angular_width(&self) -> f64 {
        let angle = |d: &Direction| d.vec().y.to_f64().atan2(d.vec().x.to_f64());
        angle(&self.hi) - angle(&self.lo)
    }
}

impl fmt::Display for Rp1Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (small, large) = self.u_bounds();
        let large = if self.lo.is_theta_zero() { "+∞".to_string() } else { large.to_string() };
        let small = if self.hi.is_theta_pi() { "-∞".to_string() } else { small.to_string() };
        write!(f, "u ∈ [{small}, {large}]")
    }
}

fn check_prefix(prefix: &[SectorIndex]) -> Result<(), FareyError> {
    if prefix.is_empty() {
        return Err(FareyError::Inadmissible("empty prefix".into()));
    }
    if let Some(k) = prefix.iter().skip(1).position(|s| s.0 == 0) {
        return Err(FareyError::Inadmissible(format!("digit 0 at position {}", k + 1)));
    }
    Ok(())
}

/// The arc `F_{s₀}⁻¹ ⋯ F_{s_{k-1}}⁻¹ Σ̄_{s_k}` of directions whose
/// expansion begins with the prefix.
pub fn reconstruct(prefix: &[SectorIndex]) -> Result<Rp1Interval, FareyError> {
    check_prefix(prefix)?;
    let (last, init) = prefix.split_last().expect("nonempty");
    Ok(init.iter().rev().fold(Rp1Interval::sector(*last), |arc, &j| arc.map(inverse_branch(j))))
}

/// `reconstruct(&prefix[..=k])` for every `k`, sharing the composed
/// inverse branches.
pub fn nested_arcs(prefix: &[SectorIndex]) -> Result<Vec<Rp1Interval>, FareyError> {
    check_prefix(prefix)?;
    let mut m = Mat2::identity();
    let mut out = Vec::with_capacity(prefix.len());
    for &j in prefix {
        out.push(Rp1Interval::sector(j).map(&m));
        m = &m * inverse_branch(j);
    }
    Ok(out)
}

/// The other expansion of a terminating direction.
///
/// `(…, s, 1, 1, …)` pairs with `(…, s+1, 1, 1, …)` for even `s`, and
/// `(…, s, 7, 7, …)` with `(…, s+1, 7, 7, …)` for odd `s`. An expansion
/// without an admissible partner is returned unchanged.
pub fn dual_expansion(e: &FareyExpansion) -> Result<FareyExpansion, FareyError> {
    let tail = match e.entries.last() {
        Some(t) if e.terminating && (t.0 == 1 || t.0 == 7) => t.0,
        _ => return Err(FareyError::NotTerminating),
    };
    let k = e.entries.iter().rposition(|s| s.0 != tail).unwrap_or(0);
    let s = e.entries[k].0 as i64;
    let even_low = tail == 1;
    let partner = if (s % 2 == 0) == even_low { s + 1 } else { s - 1 };
    let mut out = e.clone();
    let admissible = (0..8).contains(&partner) && (k == 0 || partner != 0);
    if admissible {
        out.entries[k] = SectorIndex(partner as u8);
    }
    Ok(out)
}

/// Parses `[s0; s1, s2]`, `s0 s1 s2` or `s0,s1,s2`.
pub fn parse_prefix(s: &str) -> Result<Vec<SectorIndex>, FareyError> {
    s.trim()
        .trim_start_matches('[')
        .trim_end_matches(']')
        .split(|c: char| c == ';' || c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<i64>()
                .map_err(|_| FareyError::Inadmissible(format!("not a digit: {t:?}")))
                .and_then(SectorIndex::new)
        })
        .collect()
}
