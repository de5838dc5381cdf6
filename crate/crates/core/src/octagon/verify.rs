//! Machine check that each branch of the octagon Farey map is realized by
//! a fixed sequence of diagonal changes with a fixed label matrix.

use std::collections::BTreeMap;
use std::thread;

use serde::{Deserialize, Serialize};

use super::{derive_q_prime_vectors, q_prime, q_prime_vectors, OctagonError};
use crate::farey::{branch, classify, farey_step, Classification, Direction, SectorIndex};
use crate::h2moves::{compose_word, execute_raw, sector_execution_word, sector_matrix, sector_word, NodeId};
use crate::numerics::{IntMat, Mat2, QuadNum};

/// First entry where the computed matrix differs from the expected one.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Mismatch {
    /// Labels like `(2,l)`.
    pub row: String,
    pub col: String,
    pub got: i64,
    pub expected: i64,
}

fn side_label(index: usize) -> String {
    format!("({},{})", index / 2 + 1, if index.is_multiple_of(2) { 'l' } else { 'r' })
}

impl Mismatch {
    fn between(got: &IntMat, expected: &IntMat) -> Option<Mismatch> {
        got.first_difference(expected).map(|(r, c, g, e)| Mismatch {
            row: side_label(r),
            col: side_label(c),
            got: g,
            expected: e,
        })
    }
}

/// Outcome for one sector and one sample direction.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SectorReport {
    pub sector: u8,
    pub direction: String,
    /// Every step of the move list was a legal diagonal change.
    pub moves_available: bool,
    pub matrix_ok: bool,
    pub first_mismatch: Option<Mismatch>,
    pub parity: Option<u8>,
    pub parity_ok: bool,
    /// `γν_i ρ^p` carries the final quadrangulation onto `Q′`.
    pub renormalization_ok: bool,
    /// ... and the final reference direction onto the Farey image.
    pub direction_ok: bool,
    pub error: Option<String>,
    pub passed: bool,
}

/// Identity between the reduced-graph word and the sector matrix.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct IdentityReport {
    pub sector: u8,
    pub word: Option<String>,
    pub matrix_ok: bool,
    pub parity_ok: bool,
    pub closes_at_left: bool,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TheoremReport {
    pub q_prime_derived: bool,
    pub sectors: Vec<SectorReport>,
    pub identities: Vec<IdentityReport>,
    pub passed: bool,
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub sectors: Vec<u8>,
    /// Directions tried per sector.
    pub samples: usize,
    /// Replaces the expected matrix of a sector.
    pub expected: BTreeMap<u8, IntMat>,
    /// Extra directions, checked in whichever sector contains them.
    pub extra: Vec<Direction>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { sectors: (1..=7).collect(), samples: 3, expected: BTreeMap::new(), extra: Vec::new() }
    }
}

fn check_direction(sector: u8, theta: &Direction) -> Result<(), OctagonError> {
    let direction = theta.to_string();
    if theta.is_theta_pi() && sector == 7 {
        return Err(OctagonError::Boundary { sector, direction });
    }
    match classify(theta) {
        Classification::Interior(j) if j.get() == sector => Ok(()),
        Classification::Boundary(a, b) if a.get() == sector || b.get() == sector => {
            Err(OctagonError::Boundary { sector, direction })
        }
        _ => Err(OctagonError::NotInSector { sector, direction }),
    }
}

/// Interior sample directions of sector `i` (1..=7), evenly spaced in `u`;
/// sector 7 is unbounded in `u` and uses `u = −3, −4, …`.
pub fn sample_directions(i: u8, samples: usize) -> Vec<Direction> {
    if i == 7 {
        return (0..samples).map(|k| Direction::from_u(QuadNum::from_int(-3 - k as i64))).collect();
    }
    let bound = |j: u8| crate::farey::boundary_direction(j.into()).u();
    let (crate::numerics::ProjVal::Finite(hi), crate::numerics::ProjVal::Finite(lo)) = (bound(i), bound(i + 1)) else {
        return Vec::new();
    };
    let n = samples as i64 + 1;
    (1..=samples as i64)
        .map(|k| {
            let t = QuadNum::ratio(k, n);
            Direction::from_u(&lo + &(&(&hi - &lo) * &t))
        })
        .collect()
}

/// Runs the move list of sector `i` from `Q′` with reference direction
/// `theta` and compares against `A_i`.
pub fn verify_sector(i: u8, theta: &Direction) -> Result<SectorReport, OctagonError> {
    let expected = sector_matrix(i)?;
    verify_sector_against(i, theta, &expected)
}

pub fn verify_sector_against(i: u8, theta: &Direction, expected: &IntMat) -> Result<SectorReport, OctagonError> {
    let word = sector_execution_word(i)?;
    check_direction(i, theta)?;
    let start = q_prime(theta.vec().clone())?;
    let mut report = SectorReport {
        sector: i,
        direction: theta.to_string(),
        moves_available: false,
        matrix_ok: false,
        first_mismatch: None,
        parity: None,
        parity_ok: false,
        renormalization_ok: false,
        direction_ok: false,
        error: None,
        passed: false,
    };
    let run = match execute_raw(&start, &word) {
        Ok(run) => run,
        Err(e) => {
            report.error = Some(e.to_string());
            return Ok(report);
        }
    };
    report.moves_available = true;
    report.first_mismatch = Mismatch::between(&run.matrix, expected);
    report.matrix_ok = report.first_mismatch.is_none();
    report.parity = Some(run.parity);
    report.parity_ok = run.parity == u8::from(i.is_multiple_of(2));
    let g = renormalization(i, run.parity);
    let renormalized = run.end.transform(&g);
    report.renormalization_ok = renormalized.comb() == start.comb() && renormalized.side_vectors() == q_prime_vectors();
    // directions are lines, so compare up to sign
    let (_, expected_dir) = farey_step(theta);
    report.direction_ok = renormalized.ref_dir().cross(expected_dir.vec()).is_zero();
    report.passed = report.moves_available
        && report.matrix_ok
        && report.parity_ok
        && report.renormalization_ok
        && report.direction_ok;
    Ok(report)
}

/// `γν_i ρ^p`.
pub(crate) fn renormalization(i: u8, parity: u8) -> Mat2 {
    let g = branch(SectorIndex::new(i.into()).expect("sector")).clone();
    if parity == 1 {
        &g * &Mat2::reflection()
    } else {
        g
    }
}

fn identity_report(i: u8) -> Result<IdentityReport, OctagonError> {
    let expected = sector_matrix(i)?;
    let Some(word) = sector_word(i)? else {
        return Ok(IdentityReport { sector: i, word: None, matrix_ok: true, parity_ok: true, closes_at_left: true });
    };
    let c = compose_word(&word)?;
    let shown: Vec<String> = word.moves.iter().map(ToString::to_string).collect();
    Ok(IdentityReport {
        sector: i,
        word: Some(shown.join(" ")),
        matrix_ok: c.matrix == expected,
        parity_ok: c.parity == u8::from(i.is_multiple_of(2)),
        closes_at_left: c.end == NodeId::Left,
    })
}

/// Checks every configured sector at its sample directions, the reduced
/// word identities, and that `Q′` is reproduced by both derivations.
/// Sectors run on separate threads.
pub fn verify_theorem(config: &VerifyConfig) -> Result<TheoremReport, OctagonError> {
    let q_prime_derived = derive_q_prime_vectors().map(|v| v == q_prime_vectors()).unwrap_or(false);
    let per_sector: Vec<Result<Vec<SectorReport>, OctagonError>> = thread::scope(|s| {
        let handles: Vec<_> = config
            .sectors
            .iter()
            .map(|&i| {
                s.spawn(move || {
                    let expected = match config.expected.get(&i) {
                        Some(m) => m.clone(),
                        None => sector_matrix(i)?,
                    };
                    sample_directions(i, config.samples)
                        .iter()
                        .map(|theta| verify_sector_against(i, theta, &expected))
                        .collect()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("verifier thread")).collect()
    });
    let mut sectors = Vec::new();
    for r in per_sector {
        sectors.extend(r?);
    }
    for theta in &config.extra {
        let Classification::Interior(j) = classify(theta) else {
            return Err(OctagonError::Boundary { sector: 0, direction: theta.to_string() });
        };
        let i = j.get();
        if i == 0 {
            return Err(OctagonError::NotInSector { sector: 0, direction: theta.to_string() });
        }
        let expected = match config.expected.get(&i) {
            Some(m) => m.clone(),
            None => sector_matrix(i)?,
        };
        sectors.push(verify_sector_against(i, theta, &expected)?);
    }
    let identities = config.sectors.iter().map(|&i| identity_report(i)).collect::<Result<Vec<_>, _>>()?;
    let passed = q_prime_derived
        && sectors.iter().all(|r| r.passed)
        && identities.iter().all(|r| r.matrix_ok && r.parity_ok && r.closes_at_left);
    Ok(TheoremReport { q_prime_derived, sectors, identities, passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_sector_passes_at_its_samples() {
        for i in 1..=7 {
            for theta in sample_directions(i, 3) {
                let r = verify_sector(i, &theta).unwrap();
                assert!(r.passed, "{r:?}");
            }
        }
    }

    #[test]
    fn boundaries_and_foreign_directions_are_rejected() {
        let b = crate::farey::boundary_direction(3);
        assert!(matches!(verify_sector(3, &b), Err(OctagonError::Boundary { .. })));
        assert!(matches!(verify_sector(2, &b), Err(OctagonError::Boundary { .. })));
        assert!(matches!(verify_sector(7, &Direction::theta_pi()), Err(OctagonError::Boundary { .. })));
        let inside_one = sample_directions(1, 1).remove(0);
        assert!(matches!(verify_sector(5, &inside_one), Err(OctagonError::NotInSector { .. })));
        assert!(verify_sector(8, &inside_one).is_err());
    }

    #[test]
    fn wrong_matrix_is_reported_with_labels() {
        let theta = sample_directions(2, 1).remove(0);
        let mut bad = sector_matrix(2).unwrap();
        bad.add_to(2, 3, 1);
        let r = verify_sector_against(2, &theta, &bad).unwrap();
        assert!(!r.passed);
        let m = r.first_mismatch.unwrap();
        assert_eq!((m.row.as_str(), m.col.as_str()), ("(2,l)", "(2,r)"));
        assert_eq!(m.expected, m.got + 1);
    }

    #[test]
    fn samples_are_interior() {
        for i in 1..=7 {
            let s = sample_directions(i, 4);
            assert_eq!(s.len(), 4);
            for d in s {
                assert_eq!(classify(&d), Classification::Interior(SectorIndex::new(i.into()).unwrap()));
            }
        }
    }
}
