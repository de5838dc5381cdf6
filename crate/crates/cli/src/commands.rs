//! The work behind each subcommand, returning serializable results.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use octocf::classical::{geometric_convergents, intermediate_convergents, Convergents, LatticeVec};
use octocf::diagch::{LabeledQuadrangulation, Side};
use octocf::farey::{
    classify, expand_with, parse_prefix, reconstruct, Classification, Direction, FareyExpansion, Rp1Interval,
    SectorIndex, TiePolicy,
};
use octocf::h2moves::{sector_matrix, ReducedMove};
use octocf::numerics::{IntMat, ProjVal, QuadNum};
use octocf::octagon::{initial_quadrangulation_for, verify_theorem, TheoremReport, VerifyConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{CliError, DirectionInput};

pub const SEED_VAR: &str = "OCTOCF_SEED";
const DEFAULT_SEED: u64 = 0x00c7_a90f;

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ExpandOutput {
    pub input: DirectionInput,
    pub tie_policy: TiePolicy,
    /// `[s₀; s₁, …]`
    pub display: String,
    pub expansion: FareyExpansion,
}

pub fn expand(input: &DirectionInput, depth: usize, tie_policy: TiePolicy) -> ExpandOutput {
    let expansion = expand_with(&input.direction, depth, tie_policy);
    ExpandOutput { input: input.clone(), tie_policy, display: expansion.to_string(), expansion }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ReconstructOutput {
    pub prefix: Vec<SectorIndex>,
    pub arc: Rp1Interval,
    /// Inverse slopes of the two ends, larger first.
    pub u_bounds: (ProjVal, ProjVal),
    pub display: String,
}

pub fn reconstruct_prefix(text: &str) -> Result<ReconstructOutput, CliError> {
    let prefix = parse_prefix(text).map_err(CliError::parse)?;
    let arc = reconstruct(&prefix).map_err(CliError::invalid)?;
    Ok(ReconstructOutput { u_bounds: arc.u_bounds(), display: arc.to_string(), prefix, arc })
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ConvergentsOutput {
    pub alpha: QuadNum,
    #[serde(flatten)]
    pub convergents: Convergents,
    /// `i·e_{n-1} + e_{n-2}` for `1 ≤ i < a_n`, per step.
    pub intermediate: Vec<Vec<LatticeVec>>,
}

pub fn convergents(alpha: &str, steps: usize) -> Result<ConvergentsOutput, CliError> {
    let alpha: QuadNum = alpha.parse().map_err(|e| CliError::Parse(format!("alpha = {alpha:?}: {e}")))?;
    let convergents = geometric_convergents(&alpha, steps).map_err(CliError::invalid)?;
    let intermediate = intermediate_convergents(&alpha, steps).map_err(CliError::invalid)?;
    Ok(ConvergentsOutput { alpha, convergents, intermediate })
}

/// The convergent table as aligned text.
pub fn convergents_table(out: &ConvergentsOutput) -> String {
    let rows: Vec<[String; 4]> = out
        .convergents
        .digits
        .iter()
        .zip(&out.convergents.vectors)
        .enumerate()
        .map(|(n, (a, e))| [n.to_string(), a.to_string(), e.p.to_string(), e.q.to_string()])
        .collect();
    let header = ["n", "a_n", "p_n", "q_n"].map(String::from);
    let widths: Vec<usize> =
        (0..4).map(|c| rows.iter().chain([&header]).map(|r| r[c].chars().count()).max().unwrap_or(0)).collect();
    let mut text = format!("alpha = {}\n", out.alpha);
    for row in [&header].into_iter().chain(&rows) {
        let cells: Vec<String> = row.iter().zip(&widths).map(|(s, &w)| format!("{s:>w$}")).collect();
        writeln!(text, "{}", cells.join("  ")).expect("writing to a string");
    }
    if out.convergents.halted {
        text.push_str("halted: alpha is rational\n");
    }
    text
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SimulateStep {
    pub side: Side,
    /// 1-based labels.
    pub cycle: Vec<usize>,
    pub state: LabeledQuadrangulation,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SimulateOutput {
    pub start: LabeledQuadrangulation,
    pub steps: Vec<SimulateStep>,
    pub stopped: Option<String>,
}

/// The octagon quadrangulation the algorithm starts from for `θ`.
pub fn octagon_start(theta: &Direction) -> Result<LabeledQuadrangulation, CliError> {
    let s0 = match classify(theta) {
        Classification::Interior(j) => j,
        Classification::Boundary(..) => {
            return Err(CliError::Invalid(format!("{theta} is a sector endpoint; no quadrangulation contains it")))
        }
    };
    initial_quadrangulation_for(s0, theta).map_err(CliError::invalid)
}

/// Plain diagonal changes, never renormalized. Among the available
/// staircases the one moved least recently goes next.
pub fn simulate(start: &LabeledQuadrangulation, moves: usize) -> SimulateOutput {
    let mut q = start.clone();
    let mut steps = Vec::new();
    let mut last_used: BTreeMap<(bool, Vec<usize>), usize> = BTreeMap::new();
    let mut stopped = None;
    for t in 0..moves {
        let available = q.available_moves();
        let Some(mv) = available.iter().min_by_key(|m| last_used.get(&(m.side == Side::PiR, m.cycle.clone())).copied())
        else {
            stopped = Some("no staircase available".to_string());
            break;
        };
        last_used.insert((mv.side == Side::PiR, mv.cycle.clone()), t);
        match q.staircase_move(mv) {
            Ok(next) => q = next,
            Err(e) => {
                stopped = Some(e.to_string());
                break;
            }
        }
        steps.push(SimulateStep { side: mv.side, cycle: mv.cycle.iter().map(|i| i + 1).collect(), state: q.clone() });
    }
    SimulateOutput { start: start.clone(), steps, stopped }
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    pub sectors: Vec<u8>,
    pub samples: usize,
    pub random: usize,
    pub expected: BTreeMap<u8, IntMat>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct VerifyOutput {
    /// Set when random directions were drawn.
    pub seed: Option<u64>,
    pub report: TheoremReport,
}

/// The seed from `OCTOCF_SEED`, decimal or `0x` hexadecimal.
pub fn seed_from_env() -> Result<u64, CliError> {
    match std::env::var(SEED_VAR) {
        Err(_) => Ok(DEFAULT_SEED),
        Ok(s) => {
            let s = s.trim();
            let parsed = match s.strip_prefix("0x") {
                Some(hex) => u64::from_str_radix(&hex.replace('_', ""), 16),
                None => s.replace('_', "").parse(),
            };
            parsed.map_err(|_| CliError::Parse(format!("{SEED_VAR}={s:?}")))
        }
    }
}

/// `count` rational directions inside sectors 1 to 7.
pub fn random_directions(seed: u64, count: usize) -> Vec<Direction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let q: i64 = rng.gen_range(1..=1_000_000);
        let p: i64 = rng.gen_range(-6 * q..=3 * q);
        let d = Direction::from_u(QuadNum::ratio(p, q));
        if matches!(classify(&d), Classification::Interior(j) if j.get() != 0) {
            out.push(d);
        }
    }
    out
}

pub fn verify(options: &VerifyOptions) -> Result<VerifyOutput, CliError> {
    if let Some(bad) = options.sectors.iter().find(|&&i| !(1..=7).contains(&i)) {
        return Err(CliError::Invalid(format!("sector {bad} is not one of 1..=7")));
    }
    let sectors = if options.sectors.is_empty() { (1..=7).collect() } else { options.sectors.clone() };
    let seed = (options.random > 0).then(seed_from_env).transpose()?;
    let extra = seed.map(|s| random_directions(s, options.random)).unwrap_or_default();
    let config = VerifyConfig { sectors, samples: options.samples, expected: options.expected.clone(), extra };
    let report = verify_theorem(&config).map_err(CliError::invalid)?;
    Ok(VerifyOutput { seed, report })
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct MatrixDump {
    /// The reduced moves, keyed by their serialized name.
    pub moves: BTreeMap<String, IntMat>,
    /// `A₁ … A₇`, keyed by sector.
    pub sectors: BTreeMap<u8, IntMat>,
}

pub fn dump_matrices() -> MatrixDump {
    let moves = ReducedMove::ALL
        .iter()
        .map(|m| {
            let name = serde_json::to_value(m).ok().and_then(|v| v.as_str().map(String::from)).expect("unit variant");
            (name, m.matrix())
        })
        .collect();
    let sectors = (1..=7).map(|i| (i, sector_matrix(i).expect("sectors 1..=7"))).collect();
    MatrixDump { moves, sectors }
}
