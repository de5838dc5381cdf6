use clap::ValueEnum;
use octocf::farey::Direction;
use octocf::numerics::{best_rational_approximation, is_decimal_literal, QuadNum};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Largest denominator kept when a decimal is turned into a rational.
pub const MAX_DENOMINATOR: u64 = 1_000_000;

/// Which end of the horizontal line `u = ∞` stands for.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HorizontalSide {
    /// `θ = 0`
    #[default]
    Pos,
    /// `θ = π`
    Neg,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DirectionInput {
    pub text: String,
    pub direction: Direction,
    /// The input was a decimal and has been replaced by a nearby rational.
    pub approximate: bool,
}

/// Parses an inverse slope `u`: `inf`, an exact `p/q + r/s√2`, or a decimal.
pub fn parse_direction(text: &str, side: HorizontalSide) -> Result<DirectionInput, CliError> {
    let trimmed = text.trim();
    if matches!(trimmed.to_ascii_lowercase().as_str(), "inf" | "infinity" | "∞" | "+inf" | "-inf") {
        let direction = match side {
            HorizontalSide::Pos => Direction::theta_zero(),
            HorizontalSide::Neg => Direction::theta_pi(),
        };
        return Ok(DirectionInput { text: trimmed.to_string(), direction, approximate: false });
    }
    let exact: QuadNum = trimmed.parse().map_err(|e| CliError::Parse(format!("u = {trimmed:?}: {e}")))?;
    let approximate = is_decimal_literal(trimmed);
    let u = if approximate {
        let bound = MAX_DENOMINATOR.into();
        QuadNum::new(best_rational_approximation(exact.a(), &bound), best_rational_approximation(exact.b(), &bound))
    } else {
        exact
    };
    Ok(DirectionInput { text: trimmed.to_string(), direction: Direction::from_u(u), approximate })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_picks_a_side() {
        assert!(parse_direction("inf", HorizontalSide::Neg).unwrap().direction.is_theta_pi());
        assert!(parse_direction("∞", HorizontalSide::Pos).unwrap().direction.is_theta_zero());
    }

    #[test]
    fn exact_forms() {
        let d = parse_direction("1/2 - 3/4√2", HorizontalSide::Pos).unwrap();
        assert!(!d.approximate);
        assert_eq!(d.direction, Direction::from_u("1/2-3/4√2".parse().unwrap()));
    }

    #[test]
    fn decimals_are_rounded_and_flagged() {
        let d = parse_direction("0.41421356237", HorizontalSide::Pos).unwrap();
        assert!(d.approximate);
        let u = d.direction.u();
        let q = u.finite().unwrap();
        assert!(q.is_rational());
        assert!(*q.a().denom() <= MAX_DENOMINATOR.into());
        assert!((q.to_f64() - 0.41421356237).abs() < 1e-9);
        assert!(parse_direction("0.5", HorizontalSide::Pos).unwrap().approximate);
    }

    #[test]
    fn garbage_is_a_parse_error() {
        assert!(matches!(parse_direction("abc", HorizontalSide::Pos), Err(CliError::Parse(_))));
        assert!(matches!(parse_direction("", HorizontalSide::Pos), Err(CliError::Parse(_))));
    }
}
