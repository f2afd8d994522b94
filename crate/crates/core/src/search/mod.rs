//! Exact minimum and maximum sizes of maximal island systems.
//!
//! Two independent routes compute the same quantities:
//!
//! * [`extremal_size`] decomposes a maximal system into its top layer (a saturated
//!   [`Front`]) and maximal systems inside each front member, memoizing by the
//!   member's side lengths.
//! * [`flat_oracle`] backtracks directly over the whole brick universe with no
//!   decomposition at all.
//!
//! The maximum is taken over maximal systems. Every system extends to a maximal one
//! and extension only adds bricks, so this is also the maximum over all systems.

mod engine;
mod fronts;
mod oracle;

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};

pub use engine::extremal_size;
pub use fronts::{enumerate_saturated_fronts, Front};
pub use oracle::{
    enumerate_maximal_systems, enumerate_maximal_systems_up_to_symmetry, flat_oracle,
};

use crate::geometry::Shape;
use crate::system::IslandSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Min,
    Max,
}

impl Mode {
    /// Whether `candidate` beats `incumbent` strictly.
    pub(crate) fn improves(self, candidate: u64, incumbent: u64) -> bool {
        match self {
            Mode::Min => candidate < incumbent,
            Mode::Max => candidate > incumbent,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Min => "min",
            Mode::Max => "max",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "min" => Ok(Mode::Min),
            "max" => Ok(Mode::Max),
            other => Err(format!("unknown mode {other:?}, expected min or max")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub mode: Mode,
    pub cubic: bool,
    /// When false, [`extremal_size`] defers to [`flat_oracle`].
    pub use_front_decomposition: bool,
    /// Key the memo by sorted side lengths instead of the literal ones.
    pub use_symmetry: bool,
    pub memoize: bool,
    /// Largest brick universe [`extremal_size`] accepts.
    pub brick_count_cap: u64,
    /// Largest brick universe [`flat_oracle`] accepts.
    pub oracle_brick_cap: u64,
    pub node_cap: u64,
    /// Worker threads for [`extremal_size`]; 1 runs on the calling thread.
    pub parallel_degree: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            mode: Mode::Min,
            cubic: false,
            use_front_decomposition: true,
            use_symmetry: true,
            memoize: true,
            brick_count_cap: 200,
            oracle_brick_cap: 40,
            node_cap: 100_000_000,
            parallel_degree: 1,
        }
    }
}

impl SearchConfig {
    pub fn new(mode: Mode, cubic: bool) -> Self {
        SearchConfig {
            mode,
            cubic,
            ..SearchConfig::default()
        }
    }

    pub fn with_parallel_degree(mut self, degree: usize) -> Self {
        self.parallel_degree = degree;
        self
    }
}

/// Result of a min or max search, with the witness that attains it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "ReportRepr", into = "ReportRepr")]
pub struct ExtremalReport {
    pub shape: Shape,
    pub cubic: bool,
    pub mode: Mode,
    pub value: u64,
    pub witness: IslandSystem,
    pub nodes_explored: u64,
    pub memo_hits: u64,
    pub elapsed: Duration,
}

#[derive(Serialize, Deserialize)]
struct ReportRepr {
    shape: Shape,
    cubic: bool,
    mode: Mode,
    value: u64,
    witness: IslandSystem,
    nodes: u64,
    memo_hits: u64,
    elapsed_ms: u64,
}

impl From<ReportRepr> for ExtremalReport {
    fn from(r: ReportRepr) -> Self {
        ExtremalReport {
            shape: r.shape,
            cubic: r.cubic,
            mode: r.mode,
            value: r.value,
            witness: r.witness,
            nodes_explored: r.nodes,
            memo_hits: r.memo_hits,
            elapsed: Duration::from_millis(r.elapsed_ms),
        }
    }
}

impl From<ExtremalReport> for ReportRepr {
    fn from(r: ExtremalReport) -> Self {
        ReportRepr {
            shape: r.shape,
            cubic: r.cubic,
            mode: r.mode,
            value: r.value,
            witness: r.witness,
            nodes: r.nodes_explored,
            memo_hits: r.memo_hits,
            elapsed_ms: u64::try_from(r.elapsed.as_millis()).unwrap_or(u64::MAX),
        }
    }
}

fn check_cubic_shape(shape: &Shape, cubic: bool) -> crate::Result<()> {
    if cubic && !shape.is_cube() {
        return Err(crate::IslandError::InvalidShape(format!(
            "cubic search needs a cube, got {shape}"
        )));
    }
    Ok(())
}
