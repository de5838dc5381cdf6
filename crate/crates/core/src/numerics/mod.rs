//! Exact arithmetic kernel: ℚ(√2), planar linear algebra over it, the
//! projective line, and small integer matrices.
//!
//! Every geometric predicate elsewhere in the crate reduces to
//! [`QuadNum::signum`]; decimal output exists for display only.

mod intmat;
mod plane;
mod quad;
mod rational;

pub use intmat::IntMat;
pub use plane::{moebius, Mat2, ProjVal, Vec2};
pub use quad::QuadNum;
pub use rational::{best_rational_approximation, is_decimal_literal, parse_rational, Rational};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericsError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse {0:?} as an exact number")]
    Parse(String),
}

/// Sign of `a + b√2`; free-function form of [`QuadNum::signum`].
pub fn qsign(q: &QuadNum) -> i8 {
    q.signum()
}
