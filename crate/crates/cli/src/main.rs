use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use islands::verify::Suite;
use islands::{Coord, IslandError, Mode, Shape};

mod commands;

#[derive(Parser)]
#[command(
    name = "islands",
    version,
    about = "Build, check and search maximal systems of brick islands"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a known system as JSON
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
        /// Write to this file instead of stdout
        #[arg(long, short, global = true)]
        output: Option<PathBuf>,
    },
    /// Report laminarity, maximality and edge coverage of a system file
    Check {
        /// System JSON file, or - for stdin
        input: PathBuf,
    },
    /// Find the minimum or maximum size of a maximal system
    Search(SearchArgs),
    /// Compare searched values with the closed forms
    Verify(VerifyArgs),
    /// Evaluate a closed form
    Formula {
        #[command(subcommand)]
        which: FormulaKind,
    },
}

#[derive(Subcommand)]
enum ConstructKind {
    /// The nested minimum-size maximal system
    NestedMin {
        #[arg(long, value_parser = parse_shape)]
        shape: Shape,
    },
    /// Every minimum-size maximal system from the recursive generator, one per line
    MinimalFamily {
        #[arg(long, value_parser = parse_shape)]
        shape: Shape,
    },
    /// Nested cubes anchored at the origin
    NestedCubes {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        m: Coord,
    },
    /// Recursive halving of the cube of side 2^k - 1
    Subdivision {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Engine {
    Front,
    Flat,
}

#[derive(Args)]
struct CacheArgs {
    /// Append-only JSON-lines results file
    #[arg(long, env = "ISLANDS_CACHE", default_value = islands::cache::DEFAULT_CACHE_PATH)]
    cache: PathBuf,
    /// Neither read nor write the cache
    #[arg(long)]
    no_cache: bool,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, value_parser = parse_shape)]
    shape: Shape,
    #[arg(long, value_parser = parse_mode)]
    mode: Mode,
    /// Restrict to cubic islands; the shape must be a cube
    #[arg(long)]
    cubic: bool,
    #[arg(long, value_enum, default_value = "front")]
    engine: Engine,
    /// Worker threads
    #[arg(long, default_value_t = 1)]
    parallel: usize,
    #[arg(long)]
    brick_cap: Option<u64>,
    #[arg(long)]
    node_cap: Option<u64>,
    #[command(flatten)]
    cache: CacheArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_parser = parse_suite)]
    suite: Suite,
    #[arg(long)]
    max_dim: Option<usize>,
    #[arg(long)]
    max_side: Option<Coord>,
    /// Check only these shapes; may be repeated
    #[arg(long, value_parser = parse_shape)]
    shape: Vec<Shape>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Exit 3 when any row was skipped for hitting a cap
    #[arg(long)]
    strict: bool,
    #[arg(long, default_value_t = 1)]
    parallel: usize,
    #[arg(long)]
    node_cap: Option<u64>,
    /// Brick universe cap for suites that list every maximal system
    #[arg(long)]
    enumeration_cap: Option<u64>,
    #[command(flatten)]
    cache: CacheArgs,
}

#[derive(Subcommand)]
enum FormulaKind {
    /// Minimum size of a maximal brick system
    G {
        #[arg(long, value_parser = parse_shape)]
        shape: Shape,
    },
    /// Maximum size of a maximal brick system in a rectangle
    F2 {
        #[arg(long)]
        m1: u64,
        #[arg(long)]
        m2: u64,
    },
    /// Minimum size of a maximal cubic system in a square
    G2prime {
        #[arg(long)]
        m: u64,
    },
    /// Upper bound on maximal cubic systems in a square
    F2prime {
        #[arg(long)]
        m: u64,
    },
    /// Lower and upper bounds on maximal brick systems
    Sandwich {
        #[arg(long, value_parser = parse_shape)]
        shape: Shape,
    },
    /// Upper bound on maximal cubic systems in a d-cube
    Fprime {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        m: u64,
    },
    /// Size of the recursive subdivision system
    Hk {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        k: u64,
    },
}

fn parse_shape(s: &str) -> Result<Shape, String> {
    let dims = s
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<Coord>()
                .map_err(|e| format!("bad side {part:?}: {e}"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Shape::new(dims).map_err(|e| e.to_string())
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse()
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse()
}

/// Exit status a command finished with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Ok = 0,
    Violated = 1,
    Usage = 2,
    Cap = 3,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Construct { kind, output } => commands::construct(kind, output.as_deref()),
        Command::Check { input } => commands::check(&input),
        Command::Search(args) => commands::search(args),
        Command::Verify(args) => commands::verify(args),
        Command::Formula { which } => commands::formula(which),
    };
    let outcome = result.unwrap_or_else(|err| {
        eprintln!("error: {err:#}");
        match err.downcast_ref::<IslandError>() {
            Some(IslandError::CapExceeded { .. }) => Outcome::Cap,
            _ => Outcome::Usage,
        }
    });
    ExitCode::from(outcome as u8)
}
