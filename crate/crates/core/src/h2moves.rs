//! The reduced move graph of the stratum H(2) and the per-sector words.
//!
//! Up to relabeling and the left/right symmetry, diagonal changes on a
//! genus-2 surface with one cone point visit two combinatorial data, the
//! [`NodeId::Left`] and [`NodeId::Right`] nodes, joined by five moves.
//! Each octagon Farey branch is a fixed word in these moves.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagch::{
    mirror_matrix, relabel_matrix, CombDatum, DiagError, LabeledQuadrangulation, Perm, Side, StaircaseMove,
};
use crate::numerics::{IntMat, Vec2};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum H2Error {
    #[error("{mv} cannot start at the {node} node")]
    InvalidTransition { node: NodeId, mv: ReducedMove },
    #[error("sector {0} is out of range 1..=7")]
    BadSector(u8),
    #[error("cannot parse move {0:?}")]
    Parse(String),
    #[error("step {step} ({mv}): marked quadrilaterals are not a union of cycles of {side}")]
    NoPartition { step: usize, mv: RawMove, side: Side },
    #[error("step {step} ({mv}): {source}")]
    Move { step: usize, mv: RawMove, source: DiagError },
    #[error("final datum {0} is not a relabeling of the starting one")]
    NoFinalRelabeling(String),
    #[error("move string has {got} marks for {k} quadrilaterals")]
    Width { got: usize, k: usize },
    #[error(transparent)]
    Diag(#[from] DiagError),
}

fn perm(s: &str) -> Perm {
    s.parse().expect("static permutation")
}

/// The two vertices of the reduced graph.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeId {
    /// `π_l = (1,2)(3)`, `π_r = (1)(2,3)`.
    Left,
    /// `π_l = (1,2,3)`, `π_r = (1)(2,3)`.
    Right,
}

impl NodeId {
    pub fn comb(self) -> CombDatum {
        let pi_l = match self {
            NodeId::Left => perm("(1,2)(3)"),
            NodeId::Right => perm("(1,2,3)"),
        };
        CombDatum::new(pi_l, perm("(1)(2,3)")).expect("same size")
    }

    pub fn of(comb: &CombDatum) -> Option<NodeId> {
        [NodeId::Left, NodeId::Right].into_iter().find(|n| &n.comb() == comb)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NodeId::Left => "left",
            NodeId::Right => "right",
        })
    }
}

/// Edges of the reduced graph.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReducedMove {
    /// `·rr` from the left node to the right one.
    RrLeftToRight,
    /// `·rr` from the right node to the left one.
    RrRightToLeft,
    /// `r··`, a self-loop at both nodes.
    RDot,
    /// `lll` followed by the relabeling `1→3, 2→1, 3→2`; right node only.
    LllRelabel,
    /// Left/right symmetry with relabeling; left node only.
    SymRelabel,
}

impl ReducedMove {
    pub const ALL: [ReducedMove; 5] = [
        ReducedMove::RrLeftToRight,
        ReducedMove::RrRightToLeft,
        ReducedMove::RDot,
        ReducedMove::LllRelabel,
        ReducedMove::SymRelabel,
    ];

    pub fn matrix(self) -> IntMat {
        let rows: [[i64; 6]; 6] = match self {
            ReducedMove::RrLeftToRight => [
                [1, 0, 0, 0, 0, 0],
                [0, 1, 0, 0, 0, 0],
                [0, 1, 1, 0, 0, 0],
                [0, 0, 0, 1, 0, 0],
                [0, 0, 0, 0, 1, 1],
                [0, 0, 0, 0, 0, 1],
            ],
            ReducedMove::RrRightToLeft => [
                [1, 0, 0, 0, 0, 0],
                [0, 1, 0, 0, 0, 0],
                [0, 0, 1, 0, 0, 1],
                [0, 0, 0, 1, 0, 0],
                [0, 1, 0, 0, 1, 0],
                [0, 0, 0, 0, 0, 1],
            ],
            ReducedMove::RDot => [
                [1, 0, 0, 1, 0, 0],
                [0, 1, 0, 0, 0, 0],
                [0, 0, 1, 0, 0, 0],
                [0, 0, 0, 1, 0, 0],
                [0, 0, 0, 0, 1, 0],
                [0, 0, 0, 0, 0, 1],
            ],
            ReducedMove::LllRelabel => [
                [0, 0, 1, 0, 0, 0],
                [0, 0, 0, 1, 1, 0],
                [0, 0, 0, 0, 1, 0],
                [0, 0, 1, 0, 0, 1],
                [1, 0, 0, 0, 0, 0],
                [1, 1, 0, 0, 0, 0],
            ],
            ReducedMove::SymRelabel => [
                [0, 0, 0, 0, 0, 1],
                [0, 0, 0, 0, 1, 0],
                [0, 0, 0, 1, 0, 0],
                [0, 0, 1, 0, 0, 0],
                [0, 1, 0, 0, 0, 0],
                [1, 0, 0, 0, 0, 0],
            ],
        };
        IntMat::from_rows(&rows)
    }

    /// Target node, or an error if the move does not leave `node`.
    pub fn transition(self, node: NodeId) -> Result<NodeId, H2Error> {
        use NodeId::*;
        use ReducedMove::*;
        match (self, node) {
            (RrLeftToRight, Left) => Ok(Right),
            (RrRightToLeft, Right) => Ok(Left),
            (RDot, n) => Ok(n),
            (LllRelabel, Right) => Ok(Right),
            (SymRelabel, Left) => Ok(Left),
            _ => Err(H2Error::InvalidTransition { node, mv: self }),
        }
    }

    pub fn is_symmetry(self) -> bool {
        self == ReducedMove::SymRelabel
    }

    /// Performs the move with diagonal changes, returning the new state and
    /// the label matrix the engine produced.
    pub fn realize(self, q: &LabeledQuadrangulation) -> Result<(LabeledQuadrangulation, IntMat), H2Error> {
        let node = NodeId::of(q.comb()).ok_or_else(|| H2Error::Parse(format!("{} is not a node", q.comb())))?;
        self.transition(node)?;
        let stairs = |q: &LabeledQuadrangulation, side, cycle: &[usize]| -> Result<_, H2Error> {
            let mv = q.move_on(side, cycle)?;
            Ok((q.staircase_move(&mv)?, mv.matrix))
        };
        match self {
            ReducedMove::RrLeftToRight | ReducedMove::RrRightToLeft => stairs(q, Side::PiR, &[1, 2]),
            ReducedMove::RDot => stairs(q, Side::PiR, &[0]),
            ReducedMove::LllRelabel => {
                let (after, m) = stairs(q, Side::PiL, &[0, 1, 2])?;
                let sigma = lll_relabeling();
                Ok((after.relabel(&sigma), &relabel_matrix(&sigma) * &m))
            }
            ReducedMove::SymRelabel => Ok((q.mirror(), mirror_matrix(3))),
        }
    }
}

/// `1 → 3, 2 → 1, 3 → 2`.
pub fn lll_relabeling() -> Perm {
    Perm::from_images(vec![2, 0, 1]).expect("bijection")
}

impl fmt::Display for ReducedMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReducedMove::RrLeftToRight => "·rr(L→R)",
            ReducedMove::RrRightToLeft => "·rr(R→L)",
            ReducedMove::RDot => "r··",
            ReducedMove::LllRelabel => "lll",
            ReducedMove::SymRelabel => "sym",
        })
    }
}

/// Six side vectors at a node, with the number of reflections mod 2.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ReducedState {
    pub node: NodeId,
    /// Ordered `(1,l), (1,r), (2,l), (2,r), (3,l), (3,r)`.
    pub vecs: Vec<Vec2>,
    pub parity: u8,
}

impl ReducedState {
    pub fn from_quadrangulation(q: &LabeledQuadrangulation) -> Option<Self> {
        Some(ReducedState { node: NodeId::of(q.comb())?, vecs: q.side_vectors(), parity: 0 })
    }
}

/// Applies a move to the vectors. The symmetry also reflects every vector.
pub fn apply_reduced(s: &ReducedState, m: ReducedMove) -> Result<ReducedState, H2Error> {
    let node = m.transition(s.node)?;
    let mut vecs = m.matrix().apply_vecs(&s.vecs);
    let mut parity = s.parity;
    if m.is_symmetry() {
        vecs = vecs.iter().map(Vec2::reflect).collect();
        parity ^= 1;
    }
    Ok(ReducedState { node, vecs, parity })
}

/// A path in the reduced graph.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct MoveWord {
    pub start: NodeId,
    pub moves: Vec<ReducedMove>,
}

/// Result of [`compose_word`].
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct WordComposition {
    pub matrix: IntMat,
    pub parity: u8,
    pub end: NodeId,
}

/// Product of the move matrices, later moves on the left.
pub fn compose_word(w: &MoveWord) -> Result<WordComposition, H2Error> {
    let mut matrix = IntMat::identity(6);
    let mut node = w.start;
    let mut parity = 0;
    for &m in &w.moves {
        node = m.transition(node)?;
        matrix = &m.matrix() * &matrix;
        parity ^= u8::from(m.is_symmetry());
    }
    Ok(WordComposition { matrix, parity, end: node })
}

fn check_sector(i: u8) -> Result<(), H2Error> {
    if (1..=7).contains(&i) {
        Ok(())
    } else {
        Err(H2Error::BadSector(i))
    }
}

/// Reduced-graph words, available for sectors 1, 4, 5, 6 and 7.
pub fn sector_word(i: u8) -> Result<Option<MoveWord>, H2Error> {
    use ReducedMove::*;
    check_sector(i)?;
    let moves = match i {
        1 => vec![RrLeftToRight, RDot, RrRightToLeft],
        4 => vec![
            SymRelabel,
            RDot,
            SymRelabel,
            RrLeftToRight,
            RrRightToLeft,
            SymRelabel,
            RrLeftToRight,
            RrRightToLeft,
            SymRelabel,
            RDot,
            SymRelabel,
        ],
        5 => vec![SymRelabel, RDot, SymRelabel, RrLeftToRight, LllRelabel, RrRightToLeft, SymRelabel, RDot, SymRelabel],
        6 => vec![SymRelabel, RrLeftToRight, RDot, LllRelabel, RrRightToLeft],
        7 => vec![SymRelabel, RrLeftToRight, RDot, RrRightToLeft, RDot, SymRelabel],
        _ => return Ok(None),
    };
    Ok(Some(MoveWord { start: NodeId::Left, moves }))
}

/// One entry of a printed move list: marks over the quadrilaterals, or the
/// symmetry.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum RawMove {
    Stairs { side: Side, marks: Vec<bool> },
    Sym,
}

impl RawMove {
    /// 0-based labels of the marked quadrilaterals.
    pub fn marked(&self) -> Vec<usize> {
        match self {
            RawMove::Stairs { marks, .. } => marks.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i).collect(),
            RawMove::Sym => Vec::new(),
        }
    }
}

impl fmt::Display for RawMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RawMove::Sym => f.write_str("sym"),
            RawMove::Stairs { side, marks } => {
                let letter = match side {
                    Side::PiR => 'r',
                    Side::PiL => 'l',
                };
                marks.iter().try_for_each(|&m| write!(f, "{}", if m { letter } else { '·' }))
            }
        }
    }
}

impl FromStr for RawMove {
    type Err = H2Error;
    fn from_str(s: &str) -> Result<Self, H2Error> {
        let s = s.trim();
        if s == "sym" || s == "symmetry" {
            return Ok(RawMove::Sym);
        }
        let bad = || H2Error::Parse(s.to_string());
        let side = if s.contains('r') { Side::PiR } else { Side::PiL };
        let letter = if side == Side::PiR { 'r' } else { 'l' };
        let marks = s
            .chars()
            .map(|c| match c {
                '·' | '.' => Ok(false),
                c if c == letter => Ok(true),
                _ => Err(bad()),
            })
            .collect::<Result<Vec<_>, _>>()?;
        if !marks.contains(&true) {
            return Err(bad());
        }
        Ok(RawMove::Stairs { side, marks })
    }
}

impl From<RawMove> for String {
    fn from(m: RawMove) -> String {
        m.to_string()
    }
}

impl TryFrom<String> for RawMove {
    type Error = H2Error;
    fn try_from(s: String) -> Result<Self, H2Error> {
        s.parse()
    }
}

fn parse_word(items: &[&str]) -> Vec<RawMove> {
    items.iter().map(|s| s.parse().expect("static move word")).collect()
}

/// The printed move list of sector `i`, verbatim.
pub fn sector_raw_word(i: u8) -> Result<Vec<RawMove>, H2Error> {
    check_sector(i)?;
    Ok(parse_word(match i {
        1 => &["·rr", "r··", "·rr"],
        2 => &["·rr", "lll", "r·r", "·r·", "sym"],
        3 => &["·rr", "lll", "lll", "·rr"],
        4 => &["··l", "·rr", "·rr", "ll·", "ll·", "r··", "sym"],
        5 => &["··l", "·rr", "lll", "r·r", "l··"],
        6 => &["ll·", "··l", "rrr", "l·l"],
        _ => &["ll·", "··l", "ll·", "··l"],
    }))
}

/// The word actually executed: the printed list, closed by the symmetry in
/// even sectors where the list leaves it implicit.
pub fn sector_execution_word(i: u8) -> Result<Vec<RawMove>, H2Error> {
    let mut word = sector_raw_word(i)?;
    if i.is_multiple_of(2) && word.last() != Some(&RawMove::Sym) {
        word.push(RawMove::Sym);
    }
    Ok(word)
}

/// `A_1 … A_7`.
pub fn sector_matrix(i: u8) -> Result<IntMat, H2Error> {
    check_sector(i)?;
    let rows: [[i64; 6]; 6] = match i {
        1 => [
            [1, 0, 0, 1, 0, 0],
            [0, 1, 0, 0, 0, 0],
            [0, 1, 1, 0, 0, 1],
            [0, 0, 0, 1, 0, 0],
            [0, 1, 0, 0, 1, 1],
            [0, 0, 0, 0, 0, 1],
        ],
        2 => [
            [1, 1, 0, 0, 0, 0],
            [1, 0, 0, 1, 1, 1],
            [0, 1, 1, 0, 0, 1],
            [1, 1, 0, 0, 1, 1],
            [0, 0, 0, 1, 1, 1],
            [0, 2, 2, 0, 0, 1],
        ],
        3 => [
            [0, 0, 0, 0, 1, 1],
            [1, 1, 1, 0, 0, 1],
            [1, 1, 1, 1, 1, 1],
            [1, 1, 0, 0, 1, 1],
            [1, 2, 2, 0, 0, 1],
            [0, 1, 1, 1, 1, 1],
        ],
        4 => [
            [0, 0, 1, 0, 0, 1],
            [0, 1, 1, 0, 1, 1],
            [1, 1, 1, 1, 1, 1],
            [0, 1, 2, 0, 0, 1],
            [1, 2, 1, 0, 1, 1],
            [2, 1, 1, 1, 1, 1],
        ],
        5 => [
            [0, 1, 1, 0, 0, 0],
            [0, 0, 1, 1, 1, 1],
            [1, 1, 1, 0, 1, 1],
            [0, 1, 2, 0, 0, 1],
            [1, 0, 1, 1, 1, 1],
            [2, 2, 1, 0, 1, 1],
        ],
        6 => [
            [0, 0, 0, 1, 1, 0],
            [1, 1, 1, 0, 0, 0],
            [1, 1, 1, 0, 1, 1],
            [1, 0, 0, 1, 1, 0],
            [1, 1, 2, 0, 0, 1],
            [0, 0, 1, 0, 1, 1],
        ],
        _ => [
            [1, 0, 0, 0, 0, 0],
            [1, 1, 0, 0, 1, 0],
            [0, 0, 1, 0, 0, 0],
            [1, 0, 0, 1, 1, 0],
            [0, 0, 0, 0, 1, 0],
            [0, 0, 2, 0, 0, 1],
        ],
    };
    Ok(IntMat::from_rows(&rows))
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// A relabeling `σ` with `comb.relabel(σ) == target`, if any.
pub fn relabeling_onto(comb: &CombDatum, target: &CombDatum) -> Option<Perm> {
    if comb.k() != target.k() {
        return None;
    }
    permutations(comb.k())
        .into_iter()
        .map(|images| Perm::from_images(images).expect("bijection"))
        .find(|sigma| &comb.relabel(sigma) == target)
}

/// One executed entry of a raw word.
#[derive(Clone, Debug)]
pub struct RawStep {
    pub mv: RawMove,
    /// Relabeling onto a reduced-graph node applied before the moves.
    pub relabel: Option<Perm>,
    pub moves: Vec<StaircaseMove>,
    pub after: LabeledQuadrangulation,
}

/// Outcome of [`execute_raw`].
#[derive(Clone, Debug)]
pub struct RawRun {
    pub steps: Vec<RawStep>,
    /// Accumulated label matrix, including the final relabeling.
    pub matrix: IntMat,
    /// Number of symmetries mod 2.
    pub parity: u8,
    /// Relabeling bringing the last state back to the starting datum.
    pub final_relabel: Perm,
    /// Last state, relabeled.
    pub end: LabeledQuadrangulation,
}

/// Executes a printed move list with diagonal changes.
///
/// A stairs entry marks quadrilaterals; the marked set must split into
/// cycles of `π_r` (letter `r`) or `π_l` (letter `l`), each executed as a
/// staircase move. If it does not split under the current labels and the
/// datum is a relabeled reduced-graph node, the labels are first normalized
/// to that node. The symmetry is [`LabeledQuadrangulation::mirror`]. At the
/// end the labels are brought back to the starting datum.
pub fn execute_raw(start: &LabeledQuadrangulation, word: &[RawMove]) -> Result<RawRun, H2Error> {
    let k = start.k();
    let mut q = start.clone();
    let mut matrix = IntMat::identity(2 * k);
    let mut parity = 0u8;
    let mut steps = Vec::with_capacity(word.len());
    for (step, mv) in word.iter().enumerate() {
        match mv {
            RawMove::Sym => {
                q = q.mirror();
                matrix = &mirror_matrix(k) * &matrix;
                parity ^= 1;
                steps.push(RawStep { mv: mv.clone(), relabel: None, moves: Vec::new(), after: q.clone() });
            }
            RawMove::Stairs { side, marks } => {
                if marks.len() != k {
                    return Err(H2Error::Width { got: marks.len(), k });
                }
                let marked = mv.marked();
                let mut relabel = None;
                let mut cycles = split_into_cycles(q.comb().perm(*side), &marked);
                if cycles.is_none() {
                    let sigma = [NodeId::Left, NodeId::Right]
                        .into_iter()
                        .find_map(|n| relabeling_onto(q.comb(), &n.comb()))
                        .ok_or(H2Error::NoPartition { step: step + 1, mv: mv.clone(), side: *side })?;
                    q = q.relabel(&sigma);
                    matrix = &relabel_matrix(&sigma) * &matrix;
                    cycles = split_into_cycles(q.comb().perm(*side), &marked);
                    relabel = Some(sigma);
                }
                let cycles = cycles.ok_or(H2Error::NoPartition { step: step + 1, mv: mv.clone(), side: *side })?;
                let mut moves = Vec::with_capacity(cycles.len());
                for c in cycles {
                    let err = |source| H2Error::Move { step: step + 1, mv: mv.clone(), source };
                    let sm = q.move_on(*side, &c).map_err(err)?;
                    q = q.staircase_move(&sm).map_err(err)?;
                    matrix = &sm.matrix * &matrix;
                    moves.push(sm);
                }
                steps.push(RawStep { mv: mv.clone(), relabel, moves, after: q.clone() });
            }
        }
    }
    let final_relabel =
        relabeling_onto(q.comb(), start.comb()).ok_or_else(|| H2Error::NoFinalRelabeling(q.comb().to_string()))?;
    let end = q.relabel(&final_relabel);
    let matrix = &relabel_matrix(&final_relabel) * &matrix;
    Ok(RawRun { steps, matrix, parity, final_relabel, end })
}

fn split_into_cycles(p: &Perm, marked: &[usize]) -> Option<Vec<Vec<usize>>> {
    let cycles: Vec<Vec<usize>> = p.cycles().into_iter().filter(|c| c.iter().all(|i| marked.contains(i))).collect();
    let covered: usize = cycles.iter().map(Vec::len).sum();
    (covered == marked.len()).then_some(cycles)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sym_is_an_involution() {
        let s = ReducedMove::SymRelabel.matrix();
        assert_eq!(&s * &s, IntMat::identity(6));
        assert_eq!(s, mirror_matrix(3));
    }

    #[test]
    fn transitions() {
        assert_eq!(ReducedMove::RrLeftToRight.transition(NodeId::Left), Ok(NodeId::Right));
        assert_eq!(ReducedMove::RDot.transition(NodeId::Right), Ok(NodeId::Right));
        assert_eq!(ReducedMove::SymRelabel.transition(NodeId::Left), Ok(NodeId::Left));
        assert!(ReducedMove::SymRelabel.transition(NodeId::Right).is_err());
        assert!(ReducedMove::LllRelabel.transition(NodeId::Left).is_err());
    }

    #[test]
    fn raw_word_display() {
        let w = sector_raw_word(6).unwrap();
        let shown: Vec<String> = w.iter().map(ToString::to_string).collect();
        assert_eq!(shown, ["ll·", "··l", "rrr", "l·l"]);
        assert_eq!(sector_execution_word(6).unwrap().last(), Some(&RawMove::Sym));
        assert_eq!(sector_execution_word(2).unwrap(), sector_raw_word(2).unwrap());
        assert_eq!("r.r".parse::<RawMove>().unwrap().to_string(), "r·r");
        assert!("rl·".parse::<RawMove>().is_err());
        assert!("···".parse::<RawMove>().is_err());
    }

    #[test]
    fn node_combinatorics_are_rigid() {
        for n in [NodeId::Left, NodeId::Right] {
            let autos = permutations(3)
                .into_iter()
                .filter(|p| n.comb().relabel(&Perm::from_images(p.clone()).unwrap()) == n.comb())
                .count();
            assert_eq!(autos, 1, "{n}");
        }
        assert_eq!(NodeId::Left.comb().after_move(Side::PiR, &[1, 2]), NodeId::Right.comb());
    }

    #[test]
    fn sector_three_printed_word_is_a_path() {
        use ReducedMove::*;
        let w = MoveWord { start: NodeId::Left, moves: vec![RrLeftToRight, LllRelabel, LllRelabel, RrRightToLeft] };
        let c = compose_word(&w).unwrap();
        assert_eq!(c.matrix, sector_matrix(3).unwrap());
        assert_eq!(c.end, NodeId::Left);
        assert_eq!(sector_word(3).unwrap(), None);
    }

    #[test]
    fn reduced_words_match_sector_matrices() {
        for i in [1, 4, 5, 6, 7] {
            let w = sector_word(i).unwrap().unwrap();
            let c = compose_word(&w).unwrap();
            assert_eq!(c.matrix, sector_matrix(i).unwrap(), "A_{i}");
            assert_eq!(c.parity, u8::from(i % 2 == 0));
            assert_eq!(c.end, NodeId::Left);
        }
        assert!(sector_matrix(0).is_err() && sector_word(8).is_err());
    }

    #[test]
    fn realized_moves_match_the_reduced_graph() {
        use crate::octagon::{q_prime, sample_directions};
        for i in [1u8, 4, 5, 6, 7] {
            let word = sector_word(i).unwrap().unwrap();
            for theta in sample_directions(i, 2) {
                let mut q = q_prime(theta.vec().clone()).unwrap();
                let mut state = ReducedState::from_quadrangulation(&q).unwrap();
                for &m in &word.moves {
                    let (next, matrix) = m.realize(&q).unwrap();
                    assert_eq!(matrix, m.matrix(), "sector {i} move {m}");
                    state = apply_reduced(&state, m).unwrap();
                    assert_eq!(state.vecs, next.side_vectors());
                    assert_eq!(Some(state.node), NodeId::of(next.comb()));
                    q = next;
                }
            }
        }
    }
}
