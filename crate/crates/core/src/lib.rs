//! Exact computations for the octagon Farey continued fraction and the
//! diagonal changes algorithm on the regular octagon translation surface.
//!
//! * [`numerics`]: ℚ(√2) arithmetic, 2×2 matrices, Möbius maps.
//! * [`classical`]: the torus baseline (Gauss map, geometric convergents).
//! * [`farey`]: the octagon Farey map, its expansions and inverse branches.
//! * [`diagch`]: labeled quadrangulations and staircase moves for any `k`.
//! * [`h2moves`]: the reduced move graph of the stratum H(2) and the
//!   per-sector move words.
//! * [`octagon`]: the octagon quadrangulations and the check that every
//!   Farey step is a fixed word of diagonal changes.

pub mod classical;
pub mod diagch;
pub mod farey;
pub mod h2moves;
pub mod numerics;
pub mod octagon;

pub use numerics::{IntMat, Mat2, ProjVal, QuadNum, Rational, Vec2};
