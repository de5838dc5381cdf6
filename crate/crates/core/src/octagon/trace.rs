//! Iterating the diagonal changes algorithm on the octagon along the Farey
//! expansion of a direction.
//!
//! Each step runs in the renormalized frame, where it always starts from
//! `Q′`. A parallel copy of the state in the original frame is updated by
//! the conjugated moves and compared with the pulled-back state.

use serde::{Deserialize, Serialize};

use super::{initial_quadrangulation_for, q_prime, q_prime_vectors, verify, OctagonError};
use crate::diagch::{CombDatum, LabeledQuadrangulation, Side};
use crate::farey::{
    classify, expand_with, is_sector_endpoint, Classification, Direction, FareyExpansion, SectorIndex, TiePolicy,
};
use crate::h2moves::{execute_raw, sector_execution_word, RawMove, RawRun};
use crate::numerics::{IntMat, Mat2, Vec2};

/// One intermediate state of a step.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Panel {
    pub label: String,
    /// In the renormalized frame.
    pub state: LabeledQuadrangulation,
    /// The same state pulled back to the original frame, with the original
    /// reference direction.
    pub original: LabeledQuadrangulation,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TraceStep {
    pub digit: SectorIndex,
    pub panels: Vec<Panel>,
    /// `Q′` with the next reference direction.
    pub renormalized: LabeledQuadrangulation,
    /// The current quadrangulation of the original surface; its side
    /// vectors are the holonomies of the saddle connections found so far.
    pub holonomy: LabeledQuadrangulation,
    pub matrix: IntMat,
    /// The conjugated moves reproduce the pulled-back states.
    pub conjugation_ok: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Termination {
    Completed,
    /// The direction reached a sector endpoint: some diagonal is parallel to it.
    HitsSingularity {
        step: usize,
    },
    Blocked {
        step: usize,
    },
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Trace {
    pub direction: Direction,
    pub expansion: FareyExpansion,
    /// The starting quadrangulation of the original surface.
    pub start: Option<LabeledQuadrangulation>,
    pub steps: Vec<TraceStep>,
    pub termination: Termination,
    /// Why the run stopped early, if it did.
    pub reason: Option<String>,
}

impl Trace {
    pub fn digits(&self) -> Vec<u8> {
        self.steps.iter().map(|s| s.digit.get()).collect()
    }

    pub fn all_conjugations_ok(&self) -> bool {
        self.steps.iter().all(|s| s.conjugation_ok)
    }
}

/// The state in the original frame, built from the current one.
struct Frame {
    /// Original frame to current frame.
    m: Mat2,
    m_inv: Mat2,
    reference: Vec2,
}

impl Frame {
    fn new(m: Mat2, reference: Vec2) -> Self {
        let m_inv = m.inverse().expect("invertible frame");
        Frame { m, m_inv, reference }
    }

    fn compose(&mut self, g: &Mat2) {
        *self = Frame::new(g * &self.m, self.reference.clone());
    }

    fn pull_back(&self, q: &LabeledQuadrangulation) -> Result<LabeledQuadrangulation, OctagonError> {
        let back = q.transform(&self.m_inv);
        Ok(LabeledQuadrangulation::unchecked(back.comb().clone(), back.wedges().to_vec(), self.reference.clone())?)
    }

    fn original_side(&self, side: Side) -> Side {
        match (self.m.is_orientation_reversing(), side) {
            (false, s) => s,
            (true, Side::PiR) => Side::PiL,
            (true, Side::PiL) => Side::PiR,
        }
    }
}

/// Replays a run on the original-frame state and checks it against the
/// pulled-back panels. Returns the panels and the verdict.
fn replay(start: &LabeledQuadrangulation, run: &RawRun, frame: &mut Frame) -> Result<(Vec<Panel>, bool), OctagonError> {
    let mut ok = true;
    let mut original = frame.pull_back(start)?;
    ok &= original.validate().is_ok();
    let mut panels = vec![Panel { label: "start".into(), state: start.clone(), original: original.clone() }];
    let mut current = start.clone();
    for step in &run.steps {
        match &step.mv {
            RawMove::Sym => {
                frame.compose(&Mat2::reflection());
                let tau = crate::diagch::Perm::from_images((0..current.k()).rev().collect()).expect("reversal");
                original = original.relabel(&tau);
            }
            RawMove::Stairs { .. } => {
                if let Some(sigma) = &step.relabel {
                    current = current.relabel(sigma);
                    original = original.relabel(sigma);
                }
                for mv in &step.moves {
                    current = current.staircase_move(mv)?;
                    let side = frame.original_side(mv.side);
                    let conj = original.move_on(side, &mv.cycle).and_then(|m| original.staircase_move(&m));
                    match conj {
                        Ok(next) => original = next,
                        Err(_) => {
                            ok = false;
                            original = frame.pull_back(&current)?;
                        }
                    }
                }
            }
        }
        current = step.after.clone();
        let pulled = frame.pull_back(&current)?;
        ok &= pulled == original;
        panels.push(Panel { label: step.mv.to_string(), state: current.clone(), original: pulled });
    }
    original = original.relabel(&run.final_relabel);
    ok &= frame.pull_back(&run.end)? == original;
    Ok((panels, ok))
}

fn one_step(
    digit: u8,
    start: &LabeledQuadrangulation,
    frame: &mut Frame,
    next: Option<&Direction>,
) -> Result<TraceStep, OctagonError> {
    let word = sector_execution_word(digit)?;
    let run = execute_raw(start, &word)?;
    let (panels, conjugation_ok) = replay(start, &run, frame)?;
    let g = verify::renormalization(digit, run.parity);
    frame.compose(&g);
    let moved = run.end.transform(&g);
    let holonomy = frame.pull_back(&moved)?;
    let renormalized = match next {
        Some(d) if moved.side_vectors() == q_prime_vectors() => q_prime(d.vec().clone()).unwrap_or(moved),
        _ => moved,
    };
    let digit = SectorIndex::new(digit.into()).expect("sector");
    Ok(TraceStep { digit, panels, renormalized, holonomy, matrix: run.matrix, conjugation_ok })
}

/// Runs `steps` steps along the expansion of `theta` under the default
/// tie policy.
pub fn run_expansion(theta: &Direction, steps: usize) -> Result<Trace, OctagonError> {
    run_expansion_with(theta, steps, TiePolicy::Lowest)
}

pub fn run_expansion_with(theta: &Direction, steps: usize, policy: TiePolicy) -> Result<Trace, OctagonError> {
    let expansion = expand_with(theta, steps + 1, policy);
    let mut iterates = vec![theta.clone()];
    for (k, s) in expansion.entries.iter().enumerate() {
        let next = iterates[k].transform(crate::farey::branch(*s));
        iterates.push(next);
    }
    let s0 = expansion.entries[0];
    let mut trace = Trace {
        direction: theta.clone(),
        expansion: expansion.clone(),
        start: None,
        steps: Vec::new(),
        termination: Termination::Completed,
        reason: None,
    };
    if is_sector_endpoint(theta) || !matches!(classify(theta), Classification::Interior(_)) {
        trace.termination = Termination::HitsSingularity { step: 0 };
        trace.reason = Some(format!("{theta} is a sector endpoint"));
        return Ok(trace);
    }
    let start = initial_quadrangulation_for(s0, theta)?;
    trace.start = Some(start.clone());
    let mut frame = Frame::new(crate::farey::branch(s0).clone(), theta.vec().clone());
    let mut current = q_prime(iterates[1].vec().clone()).ok();
    for k in 1..=steps {
        let theta_k = &iterates[k];
        let singular = !matches!(classify(theta_k), Classification::Interior(_)) || theta_k.is_theta_pi();
        let Some(q) = current.take() else {
            trace.termination = Termination::HitsSingularity { step: k };
            trace.reason = Some(format!("{theta_k} leaves the wedges of Q′"));
            break;
        };
        match one_step(expansion.entries[k].get(), &q, &mut frame, iterates.get(k + 1)) {
            Ok(step) => {
                let ref_ok = step.renormalized.ref_dir() == iterates[k + 1].vec();
                current = ref_ok.then(|| step.renormalized.clone());
                trace.steps.push(step);
            }
            Err(e) => {
                trace.termination =
                    if singular { Termination::HitsSingularity { step: k } } else { Termination::Blocked { step: k } };
                trace.reason = Some(e.to_string());
                break;
            }
        }
    }
    Ok(trace)
}

/// A single step from `Q′` for a direction of sector `i`.
pub fn sector_trace(i: u8, theta: &Direction) -> Result<Trace, OctagonError> {
    let start = q_prime(theta.vec().clone())?;
    let mut frame = Frame::new(Mat2::identity(), theta.vec().clone());
    let next = theta.transform(crate::farey::branch(
        SectorIndex::new(i.into())
            .map_err(|_| OctagonError::NotInSector { sector: i, direction: theta.to_string() })?,
    ));
    let step = one_step(i, &start, &mut frame, Some(&next))?;
    let expansion = FareyExpansion { entries: vec![step.digit], boundary_hit: false, terminating: false };
    Ok(Trace {
        direction: theta.clone(),
        expansion,
        start: Some(start),
        steps: vec![step],
        termination: Termination::Completed,
        reason: None,
    })
}

/// Combinatorics of the first state of every step, for comparison with the
/// reduced graph.
pub fn step_combinatorics(trace: &Trace) -> Vec<CombDatum> {
    trace.steps.iter().filter_map(|s| s.panels.first().map(|p| p.state.comb().clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::QuadNum;

    fn slope(p: i64, q: i64) -> Direction {
        Direction::from_u(QuadNum::ratio(p, q))
    }

    #[test]
    fn generic_direction_runs_and_conjugates() {
        let theta = slope(3, 7);
        let t = run_expansion(&theta, 8).unwrap();
        assert_eq!(t.termination, Termination::Completed, "{:?}", t.reason);
        assert_eq!(t.steps.len(), 8);
        assert_eq!(t.digits(), t.expansion.digits()[1..].to_vec());
        assert!(t.all_conjugations_ok());
        for s in &t.steps {
            assert_eq!(s.renormalized.side_vectors(), q_prime_vectors());
            s.holonomy.validate().unwrap();
            assert_eq!(s.holonomy.total_area(), crate::octagon::octagon_area());
        }
    }

    #[test]
    fn sector_zero_starts_from_q0() {
        let theta = slope(7, 2);
        let t = run_expansion(&theta, 6).unwrap();
        assert_eq!(t.expansion.entries[0].get(), 0);
        assert_eq!(t.termination, Termination::Completed, "{:?}", t.reason);
        assert_eq!(t.start.as_ref().unwrap().comb(), &crate::octagon::q0_comb());
        assert!(t.all_conjugations_ok());
    }

    #[test]
    fn boundary_directions_hit_a_singularity() {
        let t = run_expansion(&crate::farey::boundary_direction(2), 5).unwrap();
        assert_eq!(t.termination, Termination::HitsSingularity { step: 0 });
        assert!(t.start.is_none());
        // a saddle-connection direction reaches an endpoint after finitely many steps
        let t = run_expansion(&Direction::from_u(QuadNum::from_int(2)), 30).unwrap();
        assert!(matches!(t.termination, Termination::HitsSingularity { .. }), "{:?}", t.termination);
    }

    #[test]
    fn sector_trace_matches_verifier() {
        for i in 1..=7 {
            for theta in verify::sample_directions(i, 2) {
                let t = sector_trace(i, &theta).unwrap();
                assert!(t.all_conjugations_ok());
                assert_eq!(t.steps[0].matrix, crate::h2moves::sector_matrix(i).unwrap());
            }
        }
    }
}
