//! Diagonal changes on labeled quadrangulations.
//!
//! A quadrangulation with `k` quadrilaterals is stored as a combinatorial
//! datum `(π_l, π_r)` and one wedge `(w_{i,l}, w_{i,r})` per quadrilateral.
//! Quadrilateral `i` has vertices `0, w_{i,l}, w_{i,d}, w_{i,r}` where the
//! diagonal satisfies the train-track relation
//! `w_{i,d} = w_{i,l} + w_{π_l(i),r} = w_{i,r} + w_{π_r(i),l}`.
//!
//! Slants are measured against a reference direction rather than the
//! vertical, so the same engine runs in any frame.

mod perm;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{IntMat, Mat2, QuadNum, Vec2};

pub use perm::Perm;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagError {
    #[error("bad permutation: {0}")]
    BadPermutation(String),
    #[error("expected {expected} wedges, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("train-track relation fails at quadrilateral {0}")]
    TrainTrack(usize),
    #[error("quadrilateral {0} is degenerate or not convex at the diagonal")]
    Degenerate(usize),
    #[error("reference direction is not strictly inside wedge {0}")]
    OutsideCone(usize),
    #[error("{labels:?} is not a cycle of {side}")]
    NotACycle { side: Side, labels: Vec<usize> },
    #[error("move on cycle {labels:?} of {side} is not well slanted")]
    NotAvailable { side: Side, labels: Vec<usize> },
    #[error("reference direction must be nonzero")]
    ZeroReference,
}

/// Which permutation a staircase move follows.
///
/// A cycle of `π_r` needs every diagonal left-slanted and replaces the left
/// sides; a cycle of `π_l` needs right-slanted diagonals and replaces the
/// right sides.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    PiR,
    PiL,
}

impl Side {
    pub fn required_slant(self) -> Slant {
        match self {
            Side::PiR => Slant::Left,
            Side::PiL => Slant::Right,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::PiR => "π_r",
            Side::PiL => "π_l",
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Slant {
    Left,
    Right,
    /// The reference direction hits a singularity.
    Parallel,
}

/// The pair of permutations gluing the quadrilaterals.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct CombDatum {
    pub pi_l: Perm,
    pub pi_r: Perm,
}

impl CombDatum {
    pub fn new(pi_l: Perm, pi_r: Perm) -> Result<Self, DiagError> {
        if pi_l.len() != pi_r.len() {
            return Err(DiagError::SizeMismatch { expected: pi_l.len(), got: pi_r.len() });
        }
        Ok(CombDatum { pi_l, pi_r })
    }

    pub fn k(&self) -> usize {
        self.pi_l.len()
    }

    pub fn perm(&self, side: Side) -> &Perm {
        match side {
            Side::PiR => &self.pi_r,
            Side::PiL => &self.pi_l,
        }
    }

    /// Renames label `i` to `sigma(i)`.
    pub fn relabel(&self, sigma: &Perm) -> CombDatum {
        CombDatum { pi_l: self.pi_l.conjugate_by(sigma), pi_r: self.pi_r.conjugate_by(sigma) }
    }

    /// Datum after the staircase move on `cycle`.
    pub fn after_move(&self, side: Side, cycle: &[usize]) -> CombDatum {
        let mut out = self.clone();
        let mut images = self.perm(side.other_perm()).images().to_vec();
        for &i in cycle {
            images[i] = match side {
                Side::PiR => self.pi_l.apply(self.pi_r.apply(i)),
                Side::PiL => self.pi_r.apply(self.pi_l.apply(i)),
            };
        }
        let updated = Perm::from_images(images).expect("a staircase move permutes labels");
        match side {
            Side::PiR => out.pi_l = updated,
            Side::PiL => out.pi_r = updated,
        }
        out
    }
}

impl Side {
    fn other_perm(self) -> Side {
        match self {
            Side::PiR => Side::PiL,
            Side::PiL => Side::PiR,
        }
    }
}

impl fmt::Display for CombDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "π_l={} π_r={}", self.pi_l, self.pi_r)
    }
}

/// Row/column of side `(i, l)` or `(i, r)` in the `2k` ordering
/// `(1,l), (1,r), …, (k,l), (k,r)`.
pub fn side_index(i: usize, right: bool) -> usize {
    2 * i + usize::from(right)
}

/// `I + Σ_{i∈c} E_{(i,l),(π_l(i),r)}` for a cycle of `π_r`, or
/// `I + Σ_{i∈c} E_{(i,r),(π_r(i),l)}` for a cycle of `π_l`.
pub fn elementary_matrix(comb: &CombDatum, cycle: &[usize], side: Side) -> Result<IntMat, DiagError> {
    if !comb.perm(side).is_cycle(cycle) {
        return Err(DiagError::NotACycle { side, labels: one_based(cycle) });
    }
    let mut m = IntMat::identity(2 * comb.k());
    for &i in cycle {
        let (row, col) = match side {
            Side::PiR => (side_index(i, false), side_index(comb.pi_l.apply(i), true)),
            Side::PiL => (side_index(i, true), side_index(comb.pi_r.apply(i), false)),
        };
        m.add_to(row, col, 1);
    }
    Ok(m)
}

/// The matrix of a relabeling: side `(i, ε)` moves to `(σ(i), ε)`.
pub fn relabel_matrix(sigma: &Perm) -> IntMat {
    let perm: Vec<usize> = (0..2 * sigma.len()).map(|n| side_index(sigma.apply(n / 2), n % 2 == 1)).collect();
    IntMat::permutation(&perm)
}

/// The anti-diagonal matrix of [`LabeledQuadrangulation::mirror`].
pub fn mirror_matrix(k: usize) -> IntMat {
    let n = 2 * k;
    IntMat::permutation(&(0..n).map(|j| n - 1 - j).collect::<Vec<_>>())
}

fn one_based(labels: &[usize]) -> Vec<usize> {
    labels.iter().map(|i| i + 1).collect()
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Wedge {
    pub l: Vec2,
    pub r: Vec2,
}

impl Wedge {
    pub fn new(l: Vec2, r: Vec2) -> Self {
        Wedge { l, r }
    }

    /// `ref` strictly between `r` and `l`, cone angle below `π`.
    pub fn contains_strictly(&self, reference: &Vec2) -> bool {
        reference.cross(&self.l).is_positive()
            && reference.cross(&self.r).is_negative()
            && self.r.cross(&self.l).is_positive()
    }
}

/// One elementary step: a cycle of `π_r` or `π_l` and its matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StaircaseMove {
    pub side: Side,
    /// 0-based labels, starting at the smallest.
    pub cycle: Vec<usize>,
    pub matrix: IntMat,
}

impl fmt::Display for StaircaseMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.cycle.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "cycle ({}) of {}", labels.join(","), self.side)
    }
}

#[derive(Deserialize, Serialize)]
struct RawQuadrangulation {
    k: usize,
    pi_l: Perm,
    pi_r: Perm,
    wedges: Vec<Wedge>,
    ref_dir: Vec2,
}

/// The state of the diagonal changes algorithm.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawQuadrangulation", into = "RawQuadrangulation")]
pub struct LabeledQuadrangulation {
    comb: CombDatum,
    wedges: Vec<Wedge>,
    ref_dir: Vec2,
}

impl TryFrom<RawQuadrangulation> for LabeledQuadrangulation {
    type Error = DiagError;
    fn try_from(raw: RawQuadrangulation) -> Result<Self, DiagError> {
        if raw.pi_l.len() != raw.k {
            return Err(DiagError::SizeMismatch { expected: raw.k, got: raw.pi_l.len() });
        }
        LabeledQuadrangulation::new(CombDatum::new(raw.pi_l, raw.pi_r)?, raw.wedges, raw.ref_dir)
    }
}

impl From<LabeledQuadrangulation> for RawQuadrangulation {
    fn from(q: LabeledQuadrangulation) -> Self {
        RawQuadrangulation { k: q.k(), pi_l: q.comb.pi_l, pi_r: q.comb.pi_r, wedges: q.wedges, ref_dir: q.ref_dir }
    }
}

impl LabeledQuadrangulation {
    /// Validates train-track relations, convexity at the diagonal, and
    /// that `ref_dir` lies strictly inside every wedge.
    pub fn new(comb: CombDatum, wedges: Vec<Wedge>, ref_dir: Vec2) -> Result<Self, DiagError> {
        let q = LabeledQuadrangulation::unchecked(comb, wedges, ref_dir)?;
        q.validate()?;
        Ok(q)
    }

    /// Checks sizes and train-track relations only; the wedges may miss
    /// `ref_dir` (used for frames where it has not been chosen yet).
    pub fn unchecked(comb: CombDatum, wedges: Vec<Wedge>, ref_dir: Vec2) -> Result<Self, DiagError> {
        if wedges.len() != comb.k() {
            return Err(DiagError::SizeMismatch { expected: comb.k(), got: wedges.len() });
        }
        if ref_dir.is_zero() {
            return Err(DiagError::ZeroReference);
        }
        let q = LabeledQuadrangulation { comb, wedges, ref_dir };
        for i in 0..q.k() {
            q.diagonal(i)?;
        }
        Ok(q)
    }

    pub fn validate(&self) -> Result<(), DiagError> {
        for i in 0..self.k() {
            let d = self.diagonal(i)?;
            let w = &self.wedges[i];
            if !w.r.cross(&d).is_positive() || !d.cross(&w.l).is_positive() {
                return Err(DiagError::Degenerate(i + 1));
            }
            if !w.contains_strictly(&self.ref_dir) {
                return Err(DiagError::OutsideCone(i + 1));
            }
        }
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.comb.k()
    }

    pub fn comb(&self) -> &CombDatum {
        &self.comb
    }

    pub fn wedges(&self) -> &[Wedge] {
        &self.wedges
    }

    pub fn wedge(&self, i: usize) -> &Wedge {
        &self.wedges[i]
    }

    pub fn ref_dir(&self) -> &Vec2 {
        &self.ref_dir
    }

    /// Same surface, new reference direction, revalidated.
    pub fn with_ref_dir(&self, ref_dir: Vec2) -> Result<Self, DiagError> {
        LabeledQuadrangulation::new(self.comb.clone(), self.wedges.clone(), ref_dir)
    }

    /// `(w_{1,l}, w_{1,r}, …, w_{k,l}, w_{k,r})`.
    pub fn side_vectors(&self) -> Vec<Vec2> {
        self.wedges.iter().flat_map(|w| [w.l.clone(), w.r.clone()]).collect()
    }

    fn with_side_vectors(&self, comb: CombDatum, v: Vec<Vec2>, ref_dir: Vec2) -> Result<Self, DiagError> {
        let wedges = v.chunks(2).map(|p| Wedge::new(p[0].clone(), p[1].clone())).collect();
        LabeledQuadrangulation::unchecked(comb, wedges, ref_dir)
    }

    /// `w_{i,d}`, checking that both train-track expressions agree.
    pub fn diagonal(&self, i: usize) -> Result<Vec2, DiagError> {
        let via_l = &self.wedges[i].l + &self.wedges[self.comb.pi_l.apply(i)].r;
        let via_r = &self.wedges[i].r + &self.wedges[self.comb.pi_r.apply(i)].l;
        if via_l != via_r {
            return Err(DiagError::TrainTrack(i + 1));
        }
        Ok(via_l)
    }

    pub fn slant(&self, i: usize) -> Slant {
        let d = self.diagonal(i).expect("validated quadrangulation");
        match self.ref_dir.cross(&d).signum() {
            1 => Slant::Left,
            -1 => Slant::Right,
            _ => Slant::Parallel,
        }
    }

    pub fn slants(&self) -> Vec<Slant> {
        (0..self.k()).map(|i| self.slant(i)).collect()
    }

    /// Some diagonal is parallel to the reference direction.
    pub fn is_terminal(&self) -> bool {
        self.slants().contains(&Slant::Parallel)
    }

    fn is_well_slanted(&self, side: Side, cycle: &[usize]) -> bool {
        cycle.iter().all(|&i| self.slant(i) == side.required_slant())
    }

    /// Every cycle of `π_r` with all diagonals left-slanted, then every
    /// cycle of `π_l` with all diagonals right-slanted.
    pub fn available_moves(&self) -> Vec<StaircaseMove> {
        [Side::PiR, Side::PiL]
            .into_iter()
            .flat_map(|side| {
                self.comb.perm(side).cycles().into_iter().filter(move |c| self.is_well_slanted(side, c)).map(
                    move |cycle| StaircaseMove {
                        matrix: elementary_matrix(&self.comb, &cycle, side).expect("cycle"),
                        side,
                        cycle,
                    },
                )
            })
            .collect()
    }

    /// Builds the move on the cycle containing the given labels.
    pub fn move_on(&self, side: Side, cycle: &[usize]) -> Result<StaircaseMove, DiagError> {
        let matrix = elementary_matrix(&self.comb, cycle, side)?;
        let mut cycle = cycle.to_vec();
        let start = cycle.iter().position(|i| i == cycle.iter().min().expect("nonempty")).unwrap_or(0);
        cycle.rotate_left(start);
        Ok(StaircaseMove { side, cycle, matrix })
    }

    /// Applies one diagonal change. Fails unless the move is well slanted.
    pub fn staircase_move(&self, mv: &StaircaseMove) -> Result<Self, DiagError> {
        if !self.comb.perm(mv.side).is_cycle(&mv.cycle) {
            return Err(DiagError::NotACycle { side: mv.side, labels: one_based(&mv.cycle) });
        }
        if !self.is_well_slanted(mv.side, &mv.cycle) {
            return Err(DiagError::NotAvailable { side: mv.side, labels: one_based(&mv.cycle) });
        }
        let comb = self.comb.after_move(mv.side, &mv.cycle);
        let v = mv.matrix.apply_vecs(&self.side_vectors());
        let q = self.with_side_vectors(comb, v, self.ref_dir.clone())?;
        q.validate()?;
        Ok(q)
    }

    /// Sum of the quadrilateral areas.
    pub fn total_area(&self) -> QuadNum {
        let twice: QuadNum = (0..self.k())
            .map(|i| {
                let d = self.diagonal(i).expect("validated quadrangulation");
                let w = &self.wedges[i];
                w.r.cross(&d) + d.cross(&w.l)
            })
            .fold(QuadNum::zero(), |acc, a| acc + a);
        twice.mul_rational(&crate::numerics::Rational::new(1.into(), 2.into()))
    }

    /// Renames label `i` to `sigma(i)`.
    pub fn relabel(&self, sigma: &Perm) -> Self {
        let mut wedges = self.wedges.clone();
        for (i, w) in self.wedges.iter().enumerate() {
            wedges[sigma.apply(i)] = w.clone();
        }
        LabeledQuadrangulation { comb: self.comb.relabel(sigma), wedges, ref_dir: self.ref_dir.clone() }
    }

    /// Image under a linear map. An orientation-reversing map exchanges
    /// left and right sides and the two permutations.
    pub fn transform(&self, m: &Mat2) -> Self {
        let ref_dir = m.apply(&self.ref_dir);
        if m.is_orientation_reversing() {
            let wedges = self.wedges.iter().map(|w| Wedge::new(m.apply(&w.r), m.apply(&w.l))).collect();
            let comb = CombDatum { pi_l: self.comb.pi_r.clone(), pi_r: self.comb.pi_l.clone() };
            LabeledQuadrangulation { comb, wedges, ref_dir }
        } else {
            let wedges = self.wedges.iter().map(|w| Wedge::new(m.apply(&w.l), m.apply(&w.r))).collect();
            LabeledQuadrangulation { comb: self.comb.clone(), wedges, ref_dir }
        }
    }

    /// Reflection `(x, y) ↦ (−x, y)` followed by the relabeling
    /// `i ↦ k+1−i`; acts on side vectors by [`mirror_matrix`].
    pub fn mirror(&self) -> Self {
        let k = self.k();
        let tau = Perm::from_images((0..k).rev().collect()).expect("reversal");
        self.transform(&Mat2::reflection()).relabel(&tau)
    }
}

impl fmt::Display for LabeledQuadrangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} ref={}", self.comb, self.ref_dir)?;
        for (i, w) in self.wedges.iter().enumerate() {
            writeln!(f, "  {}: l={} r={}", i + 1, w.l, w.r)?;
        }
        Ok(())
    }
}
