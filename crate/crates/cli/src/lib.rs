//! Command-line front end for `octocf`: JSON in and out, plus SVG figures of
//! quadrangulations and move sequences.

pub mod commands;
pub mod error;
pub mod input;
pub mod render;

pub use error::CliError;
pub use input::{parse_direction, DirectionInput, HorizontalSide};
pub use render::{render_quadrangulation, render_trace, RenderSpec};
