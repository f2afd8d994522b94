//! Laminar families of bricks ("island systems") and the checks run against them.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{IslandError, Result};
use crate::geometry::{for_each_brick, Brick, Coord, Shape};

/// A sorted, duplicate-free laminar set of bricks inside a shape.
///
/// When `cubic` is set the shape is a cube and every member is a cube; maximality is
/// then judged against cubes only.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "SystemRepr", into = "SystemRepr")]
pub struct IslandSystem {
    shape: Shape,
    cubic: bool,
    bricks: Vec<Brick>,
}

/// Wire form of a system; also used to read files that may not be laminar.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SystemRepr {
    pub shape: Shape,
    pub cubic: bool,
    pub bricks: Vec<Brick>,
}

impl TryFrom<SystemRepr> for IslandSystem {
    type Error = IslandError;

    fn try_from(repr: SystemRepr) -> Result<Self> {
        IslandSystem::new(repr.shape, repr.cubic, repr.bricks)
    }
}

impl From<IslandSystem> for SystemRepr {
    fn from(system: IslandSystem) -> Self {
        SystemRepr {
            shape: system.shape,
            cubic: system.cubic,
            bricks: system.bricks,
        }
    }
}

impl SystemRepr {
    /// Checks that every brick fits the shape (and is a cube in cubic mode), then
    /// returns the bricks sorted and de-duplicated. Laminarity is not checked.
    pub fn validated_bricks(&self) -> Result<Vec<Brick>> {
        validate_members(&self.shape, self.cubic, &self.bricks)?;
        let mut bricks = self.bricks.clone();
        bricks.sort_unstable();
        bricks.dedup();
        Ok(bricks)
    }
}

fn validate_members(shape: &Shape, cubic: bool, bricks: &[Brick]) -> Result<()> {
    if cubic && !shape.is_cube() {
        return Err(IslandError::InvalidShape(format!(
            "cubic systems live in a cube, got shape {shape}"
        )));
    }
    for brick in bricks {
        if brick.dim() != shape.dim() {
            return Err(IslandError::DimensionMismatch {
                expected: shape.dim(),
                found: brick.dim(),
            });
        }
        if !brick.fits(shape) {
            return Err(IslandError::InvalidBrick(format!(
                "{brick} does not fit in {shape}"
            )));
        }
        if cubic && !brick.is_cubic() {
            return Err(IslandError::InvalidBrick(format!("{brick} is not a cube")));
        }
    }
    Ok(())
}

/// True iff every pair of bricks is nested or disjoint.
pub fn is_laminar(bricks: &[Brick]) -> Result<bool> {
    Ok(first_conflict(bricks)?.is_none())
}

fn first_conflict(bricks: &[Brick]) -> Result<Option<(usize, usize)>> {
    for (i, a) in bricks.iter().enumerate() {
        for (j, b) in bricks.iter().enumerate().skip(i + 1) {
            if !crate::geometry::compatible(a, b)? {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

impl IslandSystem {
    pub fn new(shape: Shape, cubic: bool, bricks: Vec<Brick>) -> Result<Self> {
        validate_members(&shape, cubic, &bricks)?;
        let mut bricks = bricks;
        bricks.sort_unstable();
        bricks.dedup();
        if let Some((i, j)) = first_conflict(&bricks)? {
            return Err(IslandError::NotLaminar(
                bricks[i].to_string(),
                bricks[j].to_string(),
            ));
        }
        Ok(IslandSystem {
            shape,
            cubic,
            bricks,
        })
    }

    /// The system with no bricks.
    pub fn empty(shape: Shape, cubic: bool) -> Result<Self> {
        IslandSystem::new(shape, cubic, Vec::new())
    }

    pub(crate) fn from_sorted_unchecked(shape: Shape, cubic: bool, bricks: Vec<Brick>) -> Self {
        debug_assert!(bricks.windows(2).all(|w| w[0] < w[1]));
        IslandSystem {
            shape,
            cubic,
            bricks,
        }
    }

    pub(crate) fn from_unsorted_unchecked(
        shape: Shape,
        cubic: bool,
        mut bricks: Vec<Brick>,
    ) -> Self {
        bricks.sort_unstable();
        bricks.dedup();
        debug_assert!(first_conflict(&bricks).unwrap().is_none());
        IslandSystem {
            shape,
            cubic,
            bricks,
        }
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn is_cubic(&self) -> bool {
        self.cubic
    }

    pub fn bricks(&self) -> &[Brick] {
        &self.bricks
    }

    pub fn len(&self) -> usize {
        self.bricks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bricks.is_empty()
    }

    pub fn contains_brick(&self, brick: &Brick) -> bool {
        self.bricks.binary_search(brick).is_ok()
    }

    /// Whether `brick` fits, respects the cubic flag, is not yet a member, and is
    /// nested in or disjoint from every member.
    pub fn can_add(&self, brick: &Brick) -> bool {
        brick.fits(&self.shape)
            && (!self.cubic || brick.is_cubic())
            && !self.contains_brick(brick)
            && self.bricks.iter().all(|b| b.is_compatible_with(brick))
    }

    /// Returns the system with `brick` added.
    pub fn with_brick(&self, brick: Brick) -> Result<Self> {
        let mut bricks = self.bricks.clone();
        bricks.push(brick);
        IslandSystem::new(self.shape.clone(), self.cubic, bricks)
    }

    /// Inclusion-maximal members other than the full cuboid.
    pub fn max_elements(&self) -> Vec<Brick> {
        let full = self.shape.full_brick();
        let proper: Vec<&Brick> = self.bricks.iter().filter(|b| **b != full).collect();
        proper
            .iter()
            .filter(|b| !proper.iter().any(|o| o != *b && o.encloses(b)))
            .map(|b| (*b).clone())
            .collect()
    }

    fn addable_at(&self, lo: &[Coord], hi: &[Coord]) -> bool {
        let candidate = Brick::from_parts_unchecked(lo.to_vec(), hi.to_vec());
        !self.contains_brick(&candidate)
            && self.bricks.iter().all(|b| b.is_compatible_with(&candidate))
    }

    /// Every brick (cube, in cubic mode) that could be added while keeping the
    /// system laminar, in lexicographic order.
    pub fn addable_bricks(&self) -> Vec<Brick> {
        let mut out = Vec::new();
        let _ = for_each_brick(&self.shape, self.cubic, |lo, hi| {
            if self.addable_at(lo, hi) {
                out.push(Brick::from_parts_unchecked(lo.to_vec(), hi.to_vec()));
            }
            ControlFlow::Continue(())
        });
        out
    }

    /// No brick can be added.
    pub fn is_maximal(&self) -> bool {
        for_each_brick(&self.shape, self.cubic, |lo, hi| {
            if self.addable_at(lo, hi) {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })
        .is_continue()
    }

    /// Members inside `region`, re-based so that `region` becomes the ambient shape.
    pub fn restrict(&self, region: &Brick) -> Result<IslandSystem> {
        if !self.contains_brick(region) {
            return Err(IslandError::NotAMember(region.to_string()));
        }
        let bricks = self
            .bricks
            .iter()
            .filter(|b| region.encloses(b))
            .map(|b| b.rebased_to(region.lo()))
            .collect();
        Ok(IslandSystem::from_sorted_unchecked(
            region.shape(),
            self.cubic,
            bricks,
        ))
    }

    /// Adds the lexicographically least addable brick until the system is maximal.
    ///
    /// Adding members never makes a brick addable again, so a single ordered pass
    /// gives the same result as repeated rescans.
    pub fn greedy_complete(&self) -> IslandSystem {
        let mut bricks = self.bricks.clone();
        let mut added = Vec::new();
        let _ = for_each_brick(&self.shape, self.cubic, |lo, hi| {
            let candidate = Brick::from_parts_unchecked(lo.to_vec(), hi.to_vec());
            if self.contains_brick(&candidate) {
                return ControlFlow::Continue(());
            }
            if bricks
                .iter()
                .chain(&added)
                .all(|b: &Brick| b.is_compatible_with(&candidate))
            {
                added.push(candidate);
            }
            ControlFlow::Continue(())
        });
        bricks.extend(added);
        IslandSystem::from_unsorted_unchecked(self.shape.clone(), self.cubic, bricks)
    }

    /// Coverage of every edge of the cuboid by the members of [`max_elements`].
    ///
    /// [`max_elements`]: IslandSystem::max_elements
    pub fn gap_profiles(&self) -> Vec<GapProfile> {
        let front = self.max_elements();
        let dims = self.shape.dims();
        let d = dims.len();
        let mut out = Vec::with_capacity(d << d.saturating_sub(1));
        for free_axis in 0..d {
            for mask in 0u32..(1 << (d - 1)) {
                let mut high = vec![false; d];
                let mut bit = 0;
                for (axis, h) in high.iter_mut().enumerate() {
                    if axis != free_axis {
                        *h = mask >> bit & 1 == 1;
                        bit += 1;
                    }
                }
                let edge = EdgeId { free_axis, high };
                out.push(GapProfile::compute(edge, dims, &front));
            }
        }
        out
    }

    /// Bases of the vertex cells of the cuboid that no member of `max_elements`
    /// contains.
    pub fn unoccupied_vertices(&self) -> Vec<Vec<Coord>> {
        let front = self.max_elements();
        let dims = self.shape.dims();
        let d = dims.len();
        (0u32..(1 << d))
            .map(|mask| {
                (0..d)
                    .map(|i| if mask >> i & 1 == 1 { dims[i] - 1 } else { 0 })
                    .collect::<Vec<_>>()
            })
            .filter(|base| !front.iter().any(|r| r.contains_cell(base)))
            .collect()
    }
}

/// An edge of the cuboid: all coordinates fixed at `0` or `m_i` (per `high`) except
/// `free_axis`. `high[free_axis]` is always false.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeId {
    pub free_axis: usize,
    pub high: Vec<bool>,
}

/// A maximal uncovered stretch `[start, end]` of an edge. A flank is `None` when
/// the gap reaches an end of the edge, otherwise whether the flanking brick is an
/// elementary cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gap {
    pub start: Coord,
    pub end: Coord,
    pub left_elementary: Option<bool>,
    pub right_elementary: Option<bool>,
}

impl Gap {
    pub fn len(&self) -> Coord {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    /// Both flanks are bricks rather than ends of the edge.
    pub fn is_between_bricks(&self) -> bool {
        self.left_elementary.is_some() && self.right_elementary.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapProfile {
    pub edge: EdgeId,
    /// Closed intervals along the free axis, sorted.
    pub covered: Vec<(Coord, Coord)>,
    pub gaps: Vec<Gap>,
}

impl GapProfile {
    fn compute(edge: EdgeId, dims: &[Coord], front: &[Brick]) -> Self {
        let f = edge.free_axis;
        let mut touching: Vec<&Brick> = front
            .iter()
            .filter(|r| {
                (0..dims.len()).all(|j| {
                    j == f
                        || if edge.high[j] {
                            r.hi()[j] == dims[j]
                        } else {
                            r.lo()[j] == 0
                        }
                })
            })
            .collect();
        touching.sort_by_key(|r| (r.lo()[f], r.hi()[f]));

        let mut covered: Vec<(Coord, Coord)> = Vec::new();
        let mut flags: Vec<bool> = Vec::new();
        for r in touching {
            let (a, b) = (r.lo()[f], r.hi()[f]);
            match covered.last_mut() {
                // Only reachable for non-laminar input.
                Some(last) if a <= last.1 => {
                    last.1 = last.1.max(b);
                    let flag = flags.last_mut().expect("flags track covered");
                    *flag = *flag && r.is_cell();
                }
                _ => {
                    covered.push((a, b));
                    flags.push(r.is_cell());
                }
            }
        }

        let m = dims[f];
        let mut gaps = Vec::new();
        let mut cursor = 0;
        let mut left = None;
        for (&(a, b), &cell) in covered.iter().zip(&flags) {
            if a > cursor {
                gaps.push(Gap {
                    start: cursor,
                    end: a,
                    left_elementary: left,
                    right_elementary: Some(cell),
                });
            }
            cursor = b;
            left = Some(cell);
        }
        if cursor < m {
            gaps.push(Gap {
                start: cursor,
                end: m,
                left_elementary: left,
                right_elementary: None,
            });
        }
        GapProfile {
            edge,
            covered,
            gaps,
        }
    }
}
