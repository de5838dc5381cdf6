use std::collections::BTreeMap;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use octocf::diagch::LabeledQuadrangulation;
use octocf::farey::TiePolicy;
use octocf::numerics::{parse_rational, IntMat, Vec2};
use octocf::octagon::{q_prime, run_expansion_with, sector_trace, Trace};
use octocf_cli::commands::{self, VerifyOptions};
use octocf_cli::render::{self, Frame};
use octocf_cli::{parse_direction, CliError, DirectionInput, HorizontalSide, RenderSpec};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "octocf", version, about = "Octagon Farey expansions and diagonal changes, in exact arithmetic")]
struct Cli {
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct DirectionArgs {
    /// Inverse slope u = x/y: `inf`, an exact `p/q + r/s√2`, or a decimal
    /// (replaced by the nearest rational with denominator at most 10⁶).
    #[arg(long, allow_hyphen_values = true)]
    u: String,
    /// For `u = inf`: `pos` is θ = 0 and `neg` is θ = π.
    #[arg(long, value_enum, default_value_t = HorizontalSide::Pos)]
    side: HorizontalSide,
}

impl DirectionArgs {
    fn parse(&self) -> Result<DirectionInput, CliError> {
        let input = parse_direction(&self.u, self.side)?;
        if input.approximate {
            eprintln!("warning: {} is not exact; using {}", input.text, input.direction);
        }
        Ok(input)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Tie {
    Lowest,
    Highest,
}

impl From<Tie> for TiePolicy {
    fn from(t: Tie) -> TiePolicy {
        match t {
            Tie::Lowest => TiePolicy::Lowest,
            Tie::Highest => TiePolicy::Highest,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Octagon Farey expansion of a direction.
    Expand {
        #[command(flatten)]
        direction: DirectionArgs,
        #[arg(long, default_value_t = 20)]
        depth: usize,
        /// Sector chosen when an iterate lands on a sector boundary.
        #[arg(long, value_enum, default_value_t = Tie::Lowest)]
        tie: Tie,
    },
    /// The arc of directions whose expansion starts with a prefix.
    Reconstruct {
        /// Like `[7; 7, 7]` or `7 7 7`.
        #[arg(long)]
        prefix: String,
    },
    /// Classical geometric convergents of a positive number.
    Convergents {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        /// An aligned table instead of JSON.
        #[arg(long)]
        text: bool,
    },
    /// Plain diagonal changes without renormalization.
    Simulate {
        /// Start from the octagon quadrangulation for this direction...
        #[arg(long, allow_hyphen_values = true, conflicts_with = "input", required_unless_present = "input")]
        u: Option<String>,
        #[arg(long, value_enum, default_value_t = HorizontalSide::Pos)]
        side: HorizontalSide,
        /// ... or from a quadrangulation in a JSON file (`-` for stdin).
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 20)]
        moves: usize,
    },
    /// Diagonal changes along the Farey expansion, step by step.
    Trace {
        #[command(flatten)]
        direction: DirectionArgs,
        #[arg(long, default_value_t = 5)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Tie::Lowest)]
        tie: Tie,
        /// A single step from `Q′` for a direction in this sector.
        #[arg(long)]
        sector: Option<u8>,
    },
    /// Check that every Farey branch is a fixed word of diagonal changes.
    Verify {
        /// Restrict to these sectors (repeatable).
        #[arg(long)]
        sector: Vec<u8>,
        #[arg(long, default_value_t = 3)]
        samples: usize,
        /// Also check this many random directions, seeded by OCTOCF_SEED.
        #[arg(long, default_value_t = 0)]
        random: usize,
        /// JSON object mapping sectors to replacement matrices.
        #[arg(long)]
        expected: Option<PathBuf>,
    },
    /// The reduced move matrices and the seven sector matrices.
    DumpMatrices,
    /// SVG of a trace, or of `Q′`.
    Render {
        /// Trace JSON as written by `trace` (`-` for stdin).
        #[arg(long, conflicts_with = "q_prime", required_unless_present = "q_prime")]
        trace: Option<PathBuf>,
        /// Draw `Q′` with reference direction u = 0.
        #[arg(long)]
        q_prime: bool,
        #[arg(long, default_value = "100")]
        scale: String,
        #[arg(long)]
        no_labels: bool,
        /// Draw this direction (an inverse slope) in every quadrilateral.
        #[arg(long, allow_hyphen_values = true)]
        overlay: Option<String>,
        /// Draw the states pulled back to the original surface.
        #[arg(long)]
        original: bool,
    },
}

fn read_input(path: &Path) -> Result<String, CliError> {
    let io = |source| CliError::Io { path: path.to_path_buf(), source };
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(io)
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Result<(), CliError> {
    let out = cli.out.as_deref();
    match cli.command {
        Command::Expand { direction, depth, tie } => {
            emit(out, &json(&commands::expand(&direction.parse()?, depth, tie.into())))
        }
        Command::Reconstruct { prefix } => emit(out, &json(&commands::reconstruct_prefix(&prefix)?)),
        Command::Convergents { alpha, steps, text } => {
            let result = commands::convergents(&alpha, steps)?;
            emit(out, &if text { commands::convergents_table(&result) } else { json(&result) })
        }
        Command::Simulate { u, side, input, moves } => {
            let start = match (u, input) {
                (Some(u), _) => commands::octagon_start(&DirectionArgs { u, side }.parse()?.direction)?,
                (None, Some(path)) => {
                    serde_json::from_str::<LabeledQuadrangulation>(&read_input(&path)?).map_err(CliError::parse)?
                }
                (None, None) => return Err(CliError::invalid("give --u or --input")),
            };
            emit(out, &json(&commands::simulate(&start, moves)))
        }
        Command::Trace { direction, depth, tie, sector } => {
            let theta = direction.parse()?.direction;
            let trace = match sector {
                Some(i) => sector_trace(i, &theta),
                None => run_expansion_with(&theta, depth, tie.into()),
            }
            .map_err(CliError::invalid)?;
            emit(out, &json(&trace))
        }
        Command::Verify { sector, samples, random, expected } => {
            let expected: BTreeMap<u8, IntMat> = match expected {
                Some(path) => serde_json::from_str(&read_input(&path)?).map_err(CliError::parse)?,
                None => BTreeMap::new(),
            };
            let result = commands::verify(&VerifyOptions { sectors: sector, samples, random, expected })?;
            emit(out, &json(&result))?;
            if result.report.passed {
                Ok(())
            } else {
                Err(CliError::VerificationFailed)
            }
        }
        Command::DumpMatrices => emit(out, &json(&commands::dump_matrices())),
        Command::Render { trace, q_prime: show_q_prime, scale, no_labels, overlay, original } => {
            let mut spec = RenderSpec::new(parse_rational(&scale).map_err(CliError::parse)?)?;
            spec.show_labels = !no_labels;
            spec.out = out.map(Path::to_path_buf);
            if let Some(u) = overlay {
                spec.direction_overlay = Some(parse_direction(&u, HorizontalSide::Pos)?.direction);
            }
            let svg = match trace {
                Some(path) => {
                    let trace: Trace = serde_json::from_str(&read_input(&path)?).map_err(CliError::parse)?;
                    let frame = if original { Frame::Original } else { Frame::Renormalized };
                    render::render_trace(&trace, &spec, frame)?
                }
                None if show_q_prime => {
                    let q = q_prime(Vec2::from_ints(0, 1)).map_err(CliError::invalid)?;
                    render::render_quadrangulation(&q, "Q′", &spec)?
                }
                None => return Err(CliError::invalid("give --trace or --q-prime")),
            };
            emit(spec.out.as_deref(), &svg)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, CliError::VerificationFailed) {
                eprintln!("error: {e}");
            }
            e.exit_code()
        }
    }
}
