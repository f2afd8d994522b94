//! Sweeps that compare searched values against the closed forms and check the
//! structural properties of every maximal system on small shapes.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::Serialize;

use crate::constructors::minimal_maximal_generator;
use crate::error::{IslandError, Result};
use crate::formulas::{f2_formula, floor_u64, fprime_upper, g_formula, pluhar_bounds};
use crate::geometry::{Coord, Shape};
use crate::search::{enumerate_maximal_systems, ExtremalReport, Mode};
use crate::system::IslandSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Theorem1,
    Theorem2,
    Theorem3,
    PriorWork,
    Classification,
    Corollaries,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Theorem1,
        Suite::Theorem2,
        Suite::Theorem3,
        Suite::PriorWork,
        Suite::Classification,
        Suite::Corollaries,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Theorem1 => "theorem1",
            Suite::Theorem2 => "theorem2",
            Suite::Theorem3 => "theorem3",
            Suite::PriorWork => "prior-work",
            Suite::Classification => "classification",
            Suite::Corollaries => "corollaries",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                format!(
                    "unknown suite {s:?}, expected one of {}",
                    Suite::ALL.iter().join(", ")
                )
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        })
    }
}

/// One line of a verification table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Row {
    pub shape: Shape,
    pub cubic: bool,
    pub mode: String,
    pub expected: String,
    pub actual: String,
    pub status: Status,
}

impl Row {
    fn skipped(shape: &Shape, cubic: bool, mode: &str, expected: String) -> Row {
        Row {
            shape: shape.clone(),
            cubic,
            mode: mode.into(),
            expected,
            actual: "-".into(),
            status: Status::Skipped,
        }
    }
}

/// Which instances a suite covers. Unset fields fall back to per-suite defaults.
#[derive(Clone, Debug, Default)]
pub struct Ranges {
    pub max_dim: Option<usize>,
    pub max_side: Option<Coord>,
    /// Explicit shapes replace the generated range.
    pub shapes: Vec<Shape>,
    /// Brick universe cap for suites that enumerate every maximal system.
    pub enumeration_cap: Option<u64>,
}

/// Computes an extremal report, e.g. through a cache.
pub type Search<'a> = dyn FnMut(&Shape, Mode, bool) -> Result<ExtremalReport> + 'a;

/// Shapes with `1 <= d <= max_dim` and non-increasing sides in `1..=max_side`.
pub fn shapes_up_to(max_dim: usize, max_side: Coord) -> Vec<Shape> {
    (1..=max_dim)
        .flat_map(|d| {
            (1..=max_side)
                .rev()
                .combinations_with_replacement(d)
                .map(|dims| Shape::new(dims).expect("positive sides"))
                .collect::<Vec<_>>()
        })
        .sorted()
        .collect()
}

fn is_cap(err: &IslandError) -> bool {
    matches!(err, IslandError::CapExceeded { .. })
}

/// Runs `search`, turning a cap overrun into `None`.
fn searched(
    search: &mut Search<'_>,
    shape: &Shape,
    mode: Mode,
    cubic: bool,
) -> Result<Option<u64>> {
    match search(shape, mode, cubic) {
        Ok(report) => Ok(Some(report.value)),
        Err(e) if is_cap(&e) => Ok(None),
        Err(e) => Err(e),
    }
}

fn equality_row(
    search: &mut Search<'_>,
    shape: &Shape,
    mode: Mode,
    cubic: bool,
    expected: u64,
) -> Result<Row> {
    let Some(actual) = searched(search, shape, mode, cubic)? else {
        return Ok(Row::skipped(
            shape,
            cubic,
            &mode.to_string(),
            expected.to_string(),
        ));
    };
    Ok(Row {
        shape: shape.clone(),
        cubic,
        mode: mode.to_string(),
        expected: expected.to_string(),
        actual: actual.to_string(),
        status: if actual == expected {
            Status::Pass
        } else {
            Status::Fail
        },
    })
}

fn cube_ranges(ranges: &Ranges, default_dim: usize, default_side: Coord) -> Vec<(usize, Coord)> {
    if !ranges.shapes.is_empty() {
        return ranges
            .shapes
            .iter()
            .filter(|s| s.is_cube())
            .map(|s| (s.dim(), s.side(0)))
            .collect();
    }
    let max_dim = ranges.max_dim.unwrap_or(default_dim);
    let max_side = ranges.max_side.unwrap_or(default_side);
    (1..=max_dim).cartesian_product(1..=max_side).collect()
}

fn is_power_of_two_minus_one(m: Coord) -> bool {
    (m + 1).is_power_of_two()
}

/// Runs one suite and returns its table.
pub fn run_suite(suite: Suite, ranges: &Ranges, search: &mut Search<'_>) -> Result<Vec<Row>> {
    match suite {
        Suite::Theorem1 => {
            let shapes = if ranges.shapes.is_empty() {
                shapes_up_to(ranges.max_dim.unwrap_or(2), ranges.max_side.unwrap_or(4))
            } else {
                ranges.shapes.clone()
            };
            shapes
                .iter()
                .map(|s| equality_row(search, s, Mode::Min, false, g_formula(s)?))
                .collect()
        }
        Suite::Theorem2 => cube_ranges(ranges, 3, 3)
            .into_iter()
            .map(|(d, m)| equality_row(search, &Shape::cube(d, m)?, Mode::Min, true, u64::from(m)))
            .collect(),
        Suite::Theorem3 => cube_ranges(ranges, 3, 3)
            .into_iter()
            .map(|(d, m)| theorem3_row(search, d, m))
            .collect(),
        Suite::PriorWork => prior_work(ranges, search),
        Suite::Classification => {
            let shapes = if ranges.shapes.is_empty() {
                default_classification_shapes()
            } else {
                ranges.shapes.clone()
            };
            shapes
                .iter()
                .map(|s| classification_row(s, ranges.enumeration_cap.unwrap_or(40)))
                .collect()
        }
        Suite::Corollaries => {
            let shapes = if ranges.shapes.is_empty() {
                default_corollary_shapes()
            } else {
                ranges.shapes.clone()
            };
            shapes
                .iter()
                .map(|s| corollary_row(s, ranges.enumeration_cap.unwrap_or(40)))
                .collect()
        }
    }
}

fn theorem3_row(search: &mut Search<'_>, d: usize, m: Coord) -> Result<Row> {
    let shape = Shape::cube(d, m)?;
    let bound = floor_u64(&fprime_upper(d as u64, u64::from(m))?)?;
    let tight = is_power_of_two_minus_one(m);
    let expected = if tight {
        bound.to_string()
    } else {
        format!("<={bound}")
    };
    let Some(actual) = searched(search, &shape, Mode::Max, true)? else {
        return Ok(Row::skipped(&shape, true, "max", expected));
    };
    let ok = if tight {
        actual == bound
    } else {
        actual <= bound
    };
    Ok(Row {
        shape,
        cubic: true,
        mode: "max".into(),
        expected,
        actual: actual.to_string(),
        status: if ok { Status::Pass } else { Status::Fail },
    })
}

fn prior_work(ranges: &Ranges, search: &mut Search<'_>) -> Result<Vec<Row>> {
    let max_side = ranges.max_side.unwrap_or(3);
    let mut rows = Vec::new();
    for (m1, m2) in (1..=max_side)
        .cartesian_product(1..=max_side)
        .filter(|(a, b)| a >= b)
    {
        let shape = Shape::new(vec![m1, m2])?;
        let (a, b) = (u64::from(m1), u64::from(m2));
        rows.push(equality_row(
            search,
            &shape,
            Mode::Max,
            false,
            f2_formula(a, b)?,
        )?);
        rows.push(equality_row(search, &shape, Mode::Min, false, a + b - 1)?);
    }
    for m in 1..=max_side {
        let shape = Shape::cube(2, m)?;
        rows.push(equality_row(search, &shape, Mode::Min, true, u64::from(m))?);
        rows.push(theorem3_row(search, 2, m)?);
    }
    // The brick-system sandwich in three dimensions, sides up to 2.
    for dims in shapes_up_to(3, 2).into_iter().filter(|s| s.dim() == 3) {
        let bounds = pluhar_bounds(&dims)?;
        let expected = format!("[{},{}]", bounds.lower, bounds.upper);
        let row = match searched(search, &dims, Mode::Max, false)? {
            None => Row::skipped(&dims, false, "max", expected),
            Some(actual) => Row {
                status: if bounds.contains(actual) {
                    Status::Pass
                } else {
                    Status::Fail
                },
                shape: dims,
                cubic: false,
                mode: "max".into(),
                expected,
                actual: actual.to_string(),
            },
        };
        rows.push(row);
    }
    Ok(rows)
}

pub fn default_classification_shapes() -> Vec<Shape> {
    [
        vec![2, 1],
        vec![2, 2],
        vec![2, 3],
        vec![3, 3],
        vec![2, 2, 2],
    ]
    .into_iter()
    .map(|d| Shape::new(d).expect("positive sides"))
    .collect()
}

pub fn default_corollary_shapes() -> Vec<Shape> {
    let mut shapes: Vec<Shape> = [vec![3, 3], vec![2, 3], vec![2, 2, 2]]
        .into_iter()
        .map(|d| Shape::new(d).expect("positive sides"))
        .collect();
    shapes.extend((1..=6).map(|m| Shape::new(vec![m]).expect("positive side")));
    shapes
}

/// Generated versus enumerated minimum-size maximal systems on one shape.
#[derive(Clone, Debug)]
pub struct Classification {
    pub generated: BTreeSet<IslandSystem>,
    pub minimum: BTreeSet<IslandSystem>,
}

impl Classification {
    /// Minimum-size maximal systems the generator does not produce.
    pub fn missing(&self) -> Vec<&IslandSystem> {
        self.minimum.difference(&self.generated).collect()
    }

    /// Generated systems that are not minimum-size maximal systems.
    pub fn extra(&self) -> Vec<&IslandSystem> {
        self.generated.difference(&self.minimum).collect()
    }

    pub fn is_complete(&self) -> bool {
        self.generated == self.minimum
    }
}

pub fn classify(shape: &Shape, cap: u64) -> Result<Classification> {
    let all = enumerate_maximal_systems(shape, false, cap)?;
    let smallest = all.iter().map(IslandSystem::len).min().unwrap_or(0);
    Ok(Classification {
        generated: minimal_maximal_generator(shape).into_iter().collect(),
        minimum: all.into_iter().filter(|h| h.len() == smallest).collect(),
    })
}

fn classification_row(shape: &Shape, cap: u64) -> Result<Row> {
    let c = match classify(shape, cap) {
        Ok(c) => c,
        Err(e) if is_cap(&e) => return Ok(Row::skipped(shape, false, "min", "-".into())),
        Err(e) => return Err(e),
    };
    Ok(Row {
        shape: shape.clone(),
        cubic: false,
        mode: "min".into(),
        expected: c.generated.len().to_string(),
        actual: c.minimum.len().to_string(),
        status: if c.is_complete() {
            Status::Pass
        } else {
            Status::Fail
        },
    })
}

/// Structural properties every maximal system must have. Returns a description of
/// each property that fails.
pub fn corollary_violations(h: &IslandSystem) -> Vec<String> {
    let mut out = Vec::new();
    let full = h.shape().full_brick();
    if !h.contains_brick(&full) {
        out.push("the whole cuboid is missing".to_string());
    }
    for r in h.bricks() {
        match h.restrict(r) {
            Ok(sub) if sub.is_maximal() => {}
            _ => out.push(format!("restriction to {r} is not maximal")),
        }
    }
    if h.shape().dim() == 1 && h.len() as u64 != u64::from(h.shape().side(0)) {
        out.push(format!("segment system has {} members", h.len()));
    }
    if h.max_elements().len() > 1 {
        for v in h.unoccupied_vertices() {
            out.push(format!("vertex cell at {v:?} is not occupied"));
        }
        for profile in h.gap_profiles() {
            for gap in profile.gaps.iter().filter(|g| g.is_between_bricks()) {
                if gap.len() > 2 {
                    out.push(format!("gap of length {} on {:?}", gap.len(), profile.edge));
                }
                if gap.len() == 2
                    && gap.left_elementary == Some(true)
                    && gap.right_elementary == Some(true)
                {
                    out.push(format!(
                        "length-2 gap between elementary cells on {:?}",
                        profile.edge
                    ));
                }
            }
        }
    }
    out
}

fn corollary_row(shape: &Shape, cap: u64) -> Result<Row> {
    let systems = match enumerate_maximal_systems(shape, false, cap) {
        Ok(s) => s,
        Err(e) if is_cap(&e) => return Ok(Row::skipped(shape, false, "all", "0".into())),
        Err(e) => return Err(e),
    };
    let violations: usize = systems.iter().map(|h| corollary_violations(h).len()).sum();
    Ok(Row {
        shape: shape.clone(),
        cubic: false,
        mode: "all".into(),
        expected: "0".into(),
        actual: violations.to_string(),
        status: if violations == 0 {
            Status::Pass
        } else {
            Status::Fail
        },
    })
}
