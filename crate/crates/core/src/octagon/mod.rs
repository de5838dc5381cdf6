//! The regular octagon surface, its starting quadrangulations, and the
//! check that every octagon Farey step is a fixed word of diagonal changes.
//!
//! Conventions: the octagon has unit sides and vertices `v_0 = (0, 0)`,
//! `v_1 = (1, 0)`, … in counter-clockwise order; side `j` (from `v_j` to
//! `v_{j+1}`) is glued to side `j+4` by translation. All eight vertices
//! form a single cone point of angle `6π`.
//!
//! `Q′` is the quadrangulation in the frame opened by `γν_{s₀}`; its wedges
//! straddle every direction of the open arc `Σ̄ = (π/8, π)`. `Q₀ = γQ′`
//! serves `Σ̄_0`, and `ν_{s₀}⁻¹Q₀` serves `Σ̄_{s₀}`.

mod derive;
mod trace;
mod verify;

use thiserror::Error;

use crate::diagch::{CombDatum, DiagError, LabeledQuadrangulation, Wedge};
use crate::farey::{gamma, inverse_branch, Direction, SectorIndex};
use crate::h2moves::{H2Error, NodeId};
use crate::numerics::{QuadNum, Vec2};

pub use derive::{derive_q_prime_vectors, fixed_point_q_prime, nullspace, search_q_prime, SaddleConnection};
pub use trace::{
    run_expansion, run_expansion_with, sector_trace, step_combinatorics, Panel, Termination, Trace, TraceStep,
};

pub use verify::{
    sample_directions, verify_sector, verify_sector_against, verify_theorem, IdentityReport, Mismatch, SectorReport,
    TheoremReport, VerifyConfig,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OctagonError {
    #[error("direction {direction} lies on the boundary of sector {sector}")]
    Boundary { sector: u8, direction: String },
    #[error("direction {direction} is not in sector {sector}")]
    NotInSector { sector: u8, direction: String },
    #[error("derivation failed: {0}")]
    Oracle(String),
    #[error(transparent)]
    Diag(#[from] DiagError),
    #[error(transparent)]
    Moves(#[from] H2Error),
}

/// The regular octagon with unit sides and opposite sides glued.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OctagonModel {
    vertices: Vec<Vec2>,
}

impl Default for OctagonModel {
    fn default() -> Self {
        OctagonModel::regular()
    }
}

impl OctagonModel {
    pub fn regular() -> Self {
        let s = QuadNum::half_sqrt2();
        let one = QuadNum::one();
        let z = QuadNum::zero();
        let v = |x: QuadNum, y: QuadNum| Vec2::new(x, y);
        let vertices = vec![
            v(z.clone(), z.clone()),
            v(one.clone(), z),
            v(&one + &s, s.clone()),
            v(&one + &s, &one + &s),
            v(one.clone(), &one + &(&s + &s)),
            v(QuadNum::zero(), &one + &(&s + &s)),
            v(-&s, &one + &s),
            v(-&s, s.clone()),
        ];
        OctagonModel { vertices }
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn vertex(&self, j: usize) -> &Vec2 {
        &self.vertices[j % 8]
    }

    /// `v_{j+1} − v_j`.
    pub fn side(&self, j: usize) -> Vec2 {
        self.vertex(j + 1) - self.vertex(j)
    }

    /// The side glued to side `j`.
    pub fn glued_side(j: usize) -> usize {
        (j + 4) % 8
    }

    /// Translation carrying side `j` onto its partner, reversing direction.
    pub fn gluing_translation(&self, j: usize) -> Vec2 {
        self.vertex(OctagonModel::glued_side(j) + 1) - self.vertex(j)
    }

    /// Shoelace area.
    pub fn area(&self) -> QuadNum {
        let twice = (0..8).fold(QuadNum::zero(), |acc, j| acc + self.vertex(j).cross(self.vertex(j + 1)));
        twice.mul_rational(&crate::numerics::Rational::new(1.into(), 2.into()))
    }
}

/// `2(1+√2)`.
pub fn octagon_area() -> QuadNum {
    QuadNum::from_ints(2, 2)
}

/// The side vectors of `Q′`, ordered `(1,l), (1,r), (2,l), (2,r), (3,l), (3,r)`.
///
/// Regenerated in tests by [`derive_q_prime_vectors`].
pub fn q_prime_vectors() -> Vec<Vec2> {
    let s = QuadNum::half_sqrt2();
    let short_left = Vec2::from_ints(-1, 0);
    let long_left = Vec2::new(QuadNum::from_ints(-1, -1), QuadNum::zero());
    let short_right = Vec2::new(&QuadNum::one() + &s, s.clone());
    let long_right = Vec2::new(QuadNum::from_ints(1, 1), QuadNum::one());
    vec![short_left, short_right.clone(), long_left.clone(), short_right, long_left, long_right]
}

fn wedges_from(v: &[Vec2]) -> Vec<Wedge> {
    v.chunks(2).map(|p| Wedge::new(p[0].clone(), p[1].clone())).collect()
}

/// `Q′` with the given reference direction, which must lie in the open arc
/// `(π/8, π)`.
pub fn q_prime(ref_dir: Vec2) -> Result<LabeledQuadrangulation, DiagError> {
    LabeledQuadrangulation::new(NodeId::Left.comb(), wedges_from(&q_prime_vectors()), ref_dir)
}

fn q_prime_unvalidated(ref_dir: Vec2) -> LabeledQuadrangulation {
    LabeledQuadrangulation::unchecked(NodeId::Left.comb(), wedges_from(&q_prime_vectors()), ref_dir)
        .expect("frozen vectors satisfy the train-track relations")
}

/// The combinatorics of `Q₀`: `Q′`'s with the two permutations exchanged.
pub fn q0_comb() -> CombDatum {
    let c = NodeId::Left.comb();
    CombDatum { pi_l: c.pi_r, pi_r: c.pi_l }
}

/// `Q₀ = γQ′`, valid for reference directions in the open arc `(0, π/8)`.
pub fn q0(ref_dir: Vec2) -> Result<LabeledQuadrangulation, DiagError> {
    q_prime_unvalidated(Vec2::from_ints(0, 1)).transform(gamma()).with_ref_dir(ref_dir)
}

/// `ν_{s₀}⁻¹Q₀`, with reference direction the preimage of the vertical
/// under `γν_{s₀}` (an interior direction of `Σ̄_{s₀}`).
pub fn initial_quadrangulation(s0: SectorIndex) -> LabeledQuadrangulation {
    let q = q_prime_unvalidated(Vec2::from_ints(0, 1)).transform(inverse_branch(s0));
    q.validate().expect("interior reference direction");
    q
}

/// `ν_{s₀}⁻¹Q₀` with reference direction `θ`, which must be interior to `Σ̄_{s₀}`.
pub fn initial_quadrangulation_for(s0: SectorIndex, theta: &Direction) -> Result<LabeledQuadrangulation, DiagError> {
    q_prime_unvalidated(Vec2::from_ints(0, 1)).transform(inverse_branch(s0)).with_ref_dir(theta.vec().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagch::Slant;
    use crate::farey::boundary_direction;

    fn sec(j: i64) -> SectorIndex {
        SectorIndex::new(j).unwrap()
    }

    #[test]
    fn model_area_and_gluing() {
        let m = OctagonModel::regular();
        assert_eq!(m.area(), octagon_area());
        for j in 0..8 {
            assert_eq!(m.side(j).norm2(), QuadNum::one(), "side {j}");
            assert_eq!(m.side(j), -m.side(OctagonModel::glued_side(j)));
            // the translation sends v_j to v_{j'+1} and v_{j+1} to v_{j'}
            let t = m.gluing_translation(j);
            assert_eq!(m.vertex(j + 1) + &t, m.vertex(OctagonModel::glued_side(j)).clone());
        }
    }

    #[test]
    fn q_prime_data() {
        let q = q_prime(Vec2::from_ints(0, 1)).unwrap();
        assert_eq!(q.comb().pi_l.to_string(), "(1,2)(3)");
        assert_eq!(q.comb().pi_r.to_string(), "(1)(2,3)");
        assert_eq!(q.total_area(), octagon_area());
        // π_l(1) = 2
        assert_eq!(q.diagonal(0).unwrap(), &q.wedge(0).l + &q.wedge(1).r);
        assert_eq!(q.diagonal(2).unwrap(), Vec2::from_ints(0, 1));
        assert_eq!(q.slant(2), Slant::Parallel);
        // every interior direction of Σ̄ is straddled; the endpoints are not
        for u in ["2", "1/3", "-7", "1+√2-1/100"] {
            assert!(q_prime(Direction::from_u(u.parse().unwrap()).vec().clone()).is_ok(), "u = {u}");
        }
        assert!(q_prime(boundary_direction(1).vec().clone()).is_err());
        assert!(q_prime(boundary_direction(8).vec().clone()).is_err());
    }

    #[test]
    fn q0_and_initial_quadrangulations() {
        let q = q0(Vec2::new("3".parse().unwrap(), QuadNum::one())).unwrap();
        assert_eq!(q.comb(), &q0_comb());
        assert_eq!(q.total_area(), octagon_area());
        assert_eq!(initial_quadrangulation(sec(0)).side_vectors(), q.side_vectors());
        for s0 in SectorIndex::all() {
            let q = initial_quadrangulation(s0);
            assert_eq!(q.total_area(), octagon_area(), "s₀ = {s0}");
            let expected = if s0.is_odd() { NodeId::Left.comb() } else { q0_comb() };
            assert_eq!(q.comb(), &expected, "s₀ = {s0}");
        }
        let theta = Direction::from_u("-5".parse().unwrap());
        assert!(initial_quadrangulation_for(sec(7), &theta).is_ok());
        assert!(initial_quadrangulation_for(sec(6), &theta).is_err());
    }
}
