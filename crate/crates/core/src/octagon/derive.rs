//! Two independent derivations of the `Q′` side vectors.
//!
//! * Geometric: enumerate saddle connections of the octagon surface by
//!   straight-line tracing, then search for wedges with `Q′`'s
//!   combinatorics whose quadrilaterals tile the surface.
//! * Algebraic: the vectors are fixed by every `γν_i ⊗ A_i`; solve the joint linear system over ℚ(√2).

use std::cmp::Ordering;

use serde::Serialize;

use super::{octagon_area, OctagonError, OctagonModel};
use crate::diagch::{LabeledQuadrangulation, Wedge};
use crate::farey::{branch, SectorIndex};
use crate::h2moves::{sector_matrix, NodeId};
use crate::numerics::{QuadNum, Rational, Vec2};

/// A saddle connection leaving the cone point through the corner at
/// `vertex`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SaddleConnection {
    pub holonomy: Vec2,
    pub vertex: usize,
}

impl OctagonModel {
    /// Does the segment from corner `vertex` with holonomy `h` reach the
    /// cone point exactly at its end, and not before?
    pub fn is_saddle_connection(&self, vertex: usize, h: &Vec2) -> bool {
        if h.is_zero() {
            return false;
        }
        let out = self.side(vertex);
        let back = self.vertex(vertex + 7) - self.vertex(vertex);
        let along_out = out.cross(h).is_zero() && out.dot(h).is_positive();
        let along_back = back.cross(h).is_zero() && back.dot(h).is_positive();
        if along_out || along_back {
            // a reversed side leaves the cone point as side `vertex + 3`
            return along_out && h == &out;
        }
        if !(out.cross(h).is_positive() && h.cross(&back).is_positive()) {
            return false;
        }
        let mut p = self.vertex(vertex).clone();
        // fraction of h travelled so far
        let mut travelled = QuadNum::zero();
        let one = QuadNum::one();
        loop {
            let Some((t, side, lambda)) = self.exit(&p, h) else { return false };
            travelled = &travelled + &t;
            match travelled.cmp(&one) {
                Ordering::Greater => return false,
                Ordering::Equal => return lambda.is_zero() || lambda == one,
                Ordering::Less if lambda.is_zero() || lambda == one => return false,
                Ordering::Less => {}
            }
            let hit = &p + &h.scale(&t);
            p = &hit + &self.gluing_translation(side);
        }
    }

    /// First boundary crossing of the ray `p + t·h`, `t > 0`, as
    /// `(t, side, position along the side in [0, 1])`.
    fn exit(&self, p: &Vec2, h: &Vec2) -> Option<(QuadNum, usize, QuadNum)> {
        (0..8)
            .filter_map(|m| {
                let e = self.side(m);
                let denom = h.cross(&e);
                // outward sides have h to their right
                if !e.cross(h).is_negative() {
                    return None;
                }
                let w = self.vertex(m) - p;
                let t = &w.cross(&e) / &denom;
                let lambda = &w.cross(h) / &denom;
                t.is_positive().then_some((t, m, lambda))
            })
            .min_by(|a, b| a.0.cmp(&b.0))
    }

    /// Saddle connections whose holonomy is `Σ n_j e_j` with `|n_j| ≤ bound`
    /// for the side vectors `e_0 … e_3`, of squared length at most `max_len2`.
    pub fn saddle_connections(&self, bound: i64, max_len2: &QuadNum) -> Vec<SaddleConnection> {
        let basis: Vec<Vec2> = (0..4).map(|j| self.side(j)).collect();
        let mut out = Vec::new();
        let range = || -bound..=bound;
        for n0 in range() {
            for n1 in range() {
                for n2 in range() {
                    for n3 in range() {
                        let h = [n0, n1, n2, n3]
                            .iter()
                            .zip(&basis)
                            .fold(Vec2::zero(), |acc, (&n, e)| &acc + &e.scale_int(n));
                        if h.is_zero() || h.norm2() > *max_len2 {
                            continue;
                        }
                        for vertex in 0..8 {
                            if self.is_saddle_connection(vertex, &h) {
                                out.push(SaddleConnection { holonomy: h.clone(), vertex });
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

fn dedup(mut v: Vec<Vec2>) -> Vec<Vec2> {
    v.sort_by(|a, b| a.x.cmp(&b.x).then(a.y.cmp(&b.y)));
    v.dedup();
    v
}

/// All side-vector tuples with `Q′`'s combinatorics built from saddle
/// connections: horizontal left sides, right sides at angle in `[0, π/8]`,
/// diagonals that are saddle connections, positive triangles, and total
/// area equal to the octagon's.
pub fn search_q_prime(model: &OctagonModel, bound: i64, max_len2: &QuadNum) -> Vec<Vec<Vec2>> {
    let holonomies = dedup(model.saddle_connections(bound, max_len2).into_iter().map(|s| s.holonomy).collect());
    let silver = Vec2::new(QuadNum::from_ints(1, 1), QuadNum::one());
    let lefts: Vec<&Vec2> = holonomies.iter().filter(|h| h.y.is_zero() && h.x.is_negative()).collect();
    let rights: Vec<&Vec2> = holonomies
        .iter()
        .filter(|h| !h.y.is_negative() && h.x.is_positive() && !h.cross(&silver).is_negative())
        .collect();
    let is_saddle = |v: &Vec2| holonomies.binary_search_by(|h| h.x.cmp(&v.x).then(h.y.cmp(&v.y))).is_ok();
    let comb = NodeId::Left.comb();
    let mut found = Vec::new();
    for l1 in &lefts {
        for l2 in &lefts {
            for r1 in &rights {
                for r3 in &rights {
                    // train-track for π_l = (1,2)(3), π_r = (1)(2,3) forces r2 = r1, l3 = l2
                    let sides =
                        vec![(*l1).clone(), (*r1).clone(), (*l2).clone(), (*r1).clone(), (*l2).clone(), (*r3).clone()];
                    let wedges: Vec<Wedge> = sides.chunks(2).map(|p| Wedge::new(p[0].clone(), p[1].clone())).collect();
                    let Ok(q) = LabeledQuadrangulation::unchecked(comb.clone(), wedges, Vec2::from_ints(0, 1)) else {
                        continue;
                    };
                    let diagonals_ok = (0..3).all(|i| q.diagonal(i).map(|d| is_saddle(&d)).unwrap_or(false));
                    if diagonals_ok && q.validate().is_ok() && q.total_area() == octagon_area() {
                        found.push(sides);
                    }
                }
            }
        }
    }
    found
}

/// Basis of the null space of a matrix over ℚ(√2), by Gauss–Jordan
/// elimination.
pub fn nullspace(mut rows: Vec<Vec<QuadNum>>, ncols: usize) -> Vec<Vec<QuadNum>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        rows[r] = rows[r].iter().map(|x| x * &inv).collect();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x = &*x - &(&f * y);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![QuadNum::zero(); ncols];
            v[free] = QuadNum::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -&rows[row][free];
            }
            v
        })
        .collect()
}

/// Solves `γν_i (A_i v) = v` for all seven sectors at once, then
/// scales to the octagon's area with the wedges straddling the vertical.
pub fn fixed_point_q_prime() -> Result<Vec<Vec2>, OctagonError> {
    let mut rows = Vec::new();
    for i in 1..=7u8 {
        let a = sector_matrix(i)?;
        // the symmetry moves already reflect the vectors, so ρ cancels
        let g = branch(SectorIndex::new(i.into()).expect("sector"));
        let gm = [[&g.a, &g.b], [&g.c, &g.d]];
        for k in 0..6 {
            for c in 0..2 {
                let mut row = vec![QuadNum::zero(); 12];
                for j in 0..6 {
                    let coeff = a.get(k, j);
                    if coeff != 0 {
                        for c2 in 0..2 {
                            row[2 * j + c2] =
                                &row[2 * j + c2] + &gm[c][c2].mul_rational(&Rational::from_integer(coeff.into()));
                        }
                    }
                }
                row[2 * k + c] = &row[2 * k + c] - &QuadNum::one();
                rows.push(row);
            }
        }
    }
    let kernel = nullspace(rows, 12);
    let [v] = kernel.as_slice() else {
        return Err(OctagonError::Oracle(format!("fixed-point space has dimension {}", kernel.len())));
    };
    let sides: Vec<Vec2> = v.chunks(2).map(|p| Vec2::new(p[0].clone(), p[1].clone())).collect();
    let wedges = |s: &[Vec2]| s.chunks(2).map(|p| Wedge::new(p[0].clone(), p[1].clone())).collect::<Vec<_>>();
    let q = LabeledQuadrangulation::unchecked(NodeId::Left.comb(), wedges(&sides), Vec2::from_ints(0, 1))?;
    let area = q.total_area().abs();
    let scale = octagon_area()
        .checked_div(&area)
        .ok()
        .and_then(|r| r.sqrt_exact())
        .ok_or_else(|| OctagonError::Oracle("area ratio is not a square in ℚ(√2)".into()))?;
    [scale.clone(), -scale]
        .iter()
        .map(|c| sides.iter().map(|w| w.scale(c)).collect::<Vec<_>>())
        .find(|s| LabeledQuadrangulation::new(NodeId::Left.comb(), wedges(s), Vec2::from_ints(0, 1)).is_ok())
        .ok_or_else(|| OctagonError::Oracle("no sign makes the wedges straddle the vertical".into()))
}

/// Runs both derivations and returns the common answer.
pub fn derive_q_prime_vectors() -> Result<Vec<Vec2>, OctagonError> {
    let algebraic = fixed_point_q_prime()?;
    let bound = 3;
    let max_len2 = QuadNum::from_int(9);
    let geometric = search_q_prime(&OctagonModel::regular(), bound, &max_len2);
    match geometric.as_slice() {
        [g] if *g == algebraic => Ok(algebraic),
        [g] => Err(OctagonError::Oracle(format!("derivations disagree: {g:?} vs {algebraic:?}"))),
        other => Err(OctagonError::Oracle(format!("{} geometric candidates", other.len()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sides_and_short_diagonals_are_saddle_connections() {
        let m = OctagonModel::regular();
        for j in 0..8 {
            assert!(m.is_saddle_connection(j, &m.side(j)));
        }
        // the short diagonal v_0 → v_2 and the long one v_0 → v_3
        assert!(m.is_saddle_connection(0, m.vertex(2)));
        assert!(m.is_saddle_connection(0, m.vertex(3)));
        // half a side is not
        assert!(!m.is_saddle_connection(0, &Vec2::new(QuadNum::ratio(1, 2), QuadNum::zero())));
    }

    #[test]
    fn horizontal_saddle_connections() {
        let m = OctagonModel::regular();
        let all = m.saddle_connections(3, &QuadNum::from_int(16));
        let mut lengths: Vec<QuadNum> = all
            .iter()
            .filter(|s| s.holonomy.y.is_zero() && s.holonomy.x.is_positive())
            .map(|s| s.holonomy.x.clone())
            .collect();
        lengths.sort();
        // two cylinders: boundaries of length 1 and 1+√2 (the latter twice)
        assert_eq!(lengths, vec![QuadNum::one(), QuadNum::from_ints(1, 1), QuadNum::from_ints(1, 1)]);
    }

    #[test]
    fn nullspace_small() {
        let q = |n: i64| QuadNum::from_int(n);
        let ns = nullspace(vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]], 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert_eq!(&v[0] + &(&q(2) * &v[1]) + &q(3) * &v[2], QuadNum::zero());
        }
    }

    #[test]
    fn both_derivations_agree_with_frozen_vectors() {
        assert_eq!(fixed_point_q_prime().unwrap(), super::super::q_prime_vectors());
        assert_eq!(derive_q_prime_vectors().unwrap(), super::super::q_prime_vectors());
    }
}
