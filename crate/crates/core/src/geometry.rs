//! Integer-lattice bricks inside an axis-aligned cuboid.
//!
//! A [`Shape`] is the ambient cuboid `[0,m_1] x ... x [0,m_d]` and a [`Brick`] is a
//! closed box `[a_1,b_1] x ... x [a_d,b_d]` with integer corners and `a_i < b_i`.
//! Bricks are closed sets: two bricks that share only a face, edge or corner are
//! not disjoint.

use std::cmp::Ordering;
use std::fmt;
use std::ops::ControlFlow;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{IslandError, Result};
use crate::system::IslandSystem;

/// Lattice coordinate.
pub type Coord = u32;

/// The ambient cuboid, given by its side lengths.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Coord>", into = "Vec<Coord>")]
pub struct Shape(Vec<Coord>);

impl Shape {
    pub fn new(dims: impl Into<Vec<Coord>>) -> Result<Self> {
        let dims = dims.into();
        if dims.is_empty() {
            return Err(IslandError::InvalidShape(
                "a shape needs at least one dimension".into(),
            ));
        }
        if dims.contains(&0) {
            return Err(IslandError::InvalidShape(format!(
                "every side length must be positive, got {dims:?}"
            )));
        }
        Ok(Shape(dims))
    }

    /// The cube `[0,side]^dim`.
    pub fn cube(dim: usize, side: Coord) -> Result<Self> {
        Shape::new(vec![side; dim])
    }

    pub fn dims(&self) -> &[Coord] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn side(&self, axis: usize) -> Coord {
        self.0[axis]
    }

    pub fn is_cube(&self) -> bool {
        self.0.iter().all_equal()
    }

    /// The whole cuboid as a brick.
    pub fn full_brick(&self) -> Brick {
        Brick {
            lo: vec![0; self.dim()],
            hi: self.0.clone(),
        }
    }

    /// Side lengths sorted in descending order.
    pub fn sorted_desc(&self) -> Shape {
        let mut dims = self.0.clone();
        dims.sort_unstable_by(|a, b| b.cmp(a));
        Shape(dims)
    }

    pub fn is_elementary(&self) -> bool {
        self.0.iter().all(|&m| m == 1)
    }
}

impl TryFrom<Vec<Coord>> for Shape {
    type Error = IslandError;

    fn try_from(dims: Vec<Coord>) -> Result<Self> {
        Shape::new(dims)
    }
}

impl From<Shape> for Vec<Coord> {
    fn from(shape: Shape) -> Self {
        shape.0
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.iter().join(","))
    }
}

/// A closed lattice box. Ordered lexicographically by `(lo, hi)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(
    try_from = "(Vec<Coord>, Vec<Coord>)",
    into = "(Vec<Coord>, Vec<Coord>)"
)]
pub struct Brick {
    lo: Vec<Coord>,
    hi: Vec<Coord>,
}

impl Brick {
    pub fn new(lo: impl Into<Vec<Coord>>, hi: impl Into<Vec<Coord>>) -> Result<Self> {
        let (lo, hi) = (lo.into(), hi.into());
        if lo.len() != hi.len() {
            return Err(IslandError::DimensionMismatch {
                expected: lo.len(),
                found: hi.len(),
            });
        }
        if lo.is_empty() {
            return Err(IslandError::InvalidBrick(
                "a brick needs at least one dimension".into(),
            ));
        }
        if let Some(axis) = (0..lo.len()).find(|&i| lo[i] >= hi[i]) {
            return Err(IslandError::InvalidBrick(format!(
                "lower corner must be below upper corner on axis {axis}: {lo:?} vs {hi:?}"
            )));
        }
        Ok(Brick { lo, hi })
    }

    /// The elementary cell `[a_1,a_1+1] x ... x [a_d,a_d+1]`.
    pub fn cell(base: impl Into<Vec<Coord>>) -> Self {
        let lo = base.into();
        let hi = lo.iter().map(|&a| a + 1).collect();
        Brick { lo, hi }
    }

    /// The cube with lower corner `lo` and side `side`.
    pub fn cube_at(lo: impl Into<Vec<Coord>>, side: Coord) -> Self {
        assert!(side > 0, "cube side must be positive");
        let lo = lo.into();
        let hi = lo.iter().map(|&a| a + side).collect();
        Brick { lo, hi }
    }

    pub(crate) fn from_parts_unchecked(lo: Vec<Coord>, hi: Vec<Coord>) -> Self {
        debug_assert!(lo.len() == hi.len() && lo.iter().zip(&hi).all(|(a, b)| a < b));
        Brick { lo, hi }
    }

    pub fn lo(&self) -> &[Coord] {
        &self.lo
    }

    pub fn hi(&self) -> &[Coord] {
        &self.hi
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn side(&self, axis: usize) -> Coord {
        self.hi[axis] - self.lo[axis]
    }

    pub fn sides(&self) -> Vec<Coord> {
        (0..self.dim()).map(|i| self.side(i)).collect()
    }

    /// The brick's own frame as a shape.
    pub fn shape(&self) -> Shape {
        Shape(self.sides())
    }

    pub fn is_cubic(&self) -> bool {
        (0..self.dim()).map(|i| self.side(i)).all_equal()
    }

    pub fn is_cell(&self) -> bool {
        (0..self.dim()).all(|i| self.side(i) == 1)
    }

    /// Whether the brick lies inside `shape`.
    pub fn fits(&self, shape: &Shape) -> bool {
        self.dim() == shape.dim() && self.hi.iter().zip(shape.dims()).all(|(b, m)| b <= m)
    }

    /// Containment, assuming equal dimension.
    pub fn encloses(&self, inner: &Brick) -> bool {
        debug_assert_eq!(self.dim(), inner.dim());
        self.lo.iter().zip(&inner.lo).all(|(a, b)| a <= b)
            && inner.hi.iter().zip(&self.hi).all(|(a, b)| a <= b)
    }

    /// Closed-set disjointness, assuming equal dimension.
    pub fn is_disjoint_from(&self, other: &Brick) -> bool {
        (0..self.dim()).any(|i| self.lo[i].max(other.lo[i]) > self.hi[i].min(other.hi[i]))
    }

    /// Nested either way or disjoint, assuming equal dimension.
    pub fn is_compatible_with(&self, other: &Brick) -> bool {
        self.encloses(other) || other.encloses(self) || self.is_disjoint_from(other)
    }

    /// Whether `self` contains the elementary cell based at `base`.
    pub fn contains_cell(&self, base: &[Coord]) -> bool {
        base.iter()
            .enumerate()
            .all(|(i, &a)| self.lo[i] <= a && a < self.hi[i])
    }

    pub fn translated_by(&self, offset: &[Coord]) -> Brick {
        Brick {
            lo: self.lo.iter().zip(offset).map(|(a, o)| a + o).collect(),
            hi: self.hi.iter().zip(offset).map(|(b, o)| b + o).collect(),
        }
    }

    /// Moves the brick into the frame whose origin is `origin`. `origin` must be
    /// componentwise at most `lo`.
    pub fn rebased_to(&self, origin: &[Coord]) -> Brick {
        Brick {
            lo: self.lo.iter().zip(origin).map(|(a, o)| a - o).collect(),
            hi: self.hi.iter().zip(origin).map(|(b, o)| b - o).collect(),
        }
    }
}

impl Ord for Brick {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lo.cmp(&other.lo).then_with(|| self.hi.cmp(&other.hi))
    }
}

impl PartialOrd for Brick {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl TryFrom<(Vec<Coord>, Vec<Coord>)> for Brick {
    type Error = IslandError;

    fn try_from((lo, hi): (Vec<Coord>, Vec<Coord>)) -> Result<Self> {
        Brick::new(lo, hi)
    }
}

impl From<Brick> for (Vec<Coord>, Vec<Coord>) {
    fn from(brick: Brick) -> Self {
        (brick.lo, brick.hi)
    }
}

impl fmt::Display for Brick {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self
            .lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| format!("[{a},{b}]"));
        write!(f, "{}", parts.format("x"))
    }
}

fn check_dims(a: &Brick, b: &Brick) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(IslandError::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

/// `inner` is a subset of `outer`.
pub fn contains(outer: &Brick, inner: &Brick) -> Result<bool> {
    check_dims(outer, inner)?;
    Ok(outer.encloses(inner))
}

/// The closed boxes have empty intersection.
pub fn disjoint(a: &Brick, b: &Brick) -> Result<bool> {
    check_dims(a, b)?;
    Ok(a.is_disjoint_from(b))
}

/// The island condition for a pair: nested either way, or disjoint.
pub fn compatible(a: &Brick, b: &Brick) -> Result<bool> {
    check_dims(a, b)?;
    Ok(a.is_compatible_with(b))
}

/// Visits every brick of `shape` (only cubes if `cubic`) in lexicographic `(lo, hi)`
/// order without allocating per brick.
pub(crate) fn for_each_brick<F>(shape: &Shape, cubic: bool, mut visit: F) -> ControlFlow<()>
where
    F: FnMut(&[Coord], &[Coord]) -> ControlFlow<()>,
{
    let dims = shape.dims();
    let d = dims.len();
    let mut lo = vec![0; d];
    let mut hi = vec![0; d];
    loop {
        if cubic {
            let room = (0..d).map(|i| dims[i] - lo[i]).min().unwrap_or(0);
            for side in 1..=room {
                for i in 0..d {
                    hi[i] = lo[i] + side;
                }
                visit(&lo, &hi)?;
            }
        } else {
            for i in 0..d {
                hi[i] = lo[i] + 1;
            }
            loop {
                visit(&lo, &hi)?;
                if !odometer_step(&mut hi, |i| lo[i] + 1, |i| dims[i]) {
                    break;
                }
            }
        }
        if !odometer_step(&mut lo, |_| 0, |i| dims[i] - 1) {
            return ControlFlow::Continue(());
        }
    }
}

/// Advances `digits` to the next vector in lexicographic order with each digit in
/// `min(i)..=max(i)`. Returns false after the last vector.
fn odometer_step(
    digits: &mut [Coord],
    min: impl Fn(usize) -> Coord,
    max: impl Fn(usize) -> Coord,
) -> bool {
    for i in (0..digits.len()).rev() {
        if digits[i] < max(i) {
            digits[i] += 1;
            for (j, digit) in digits.iter_mut().enumerate().skip(i + 1) {
                *digit = min(j);
            }
            return true;
        }
    }
    false
}

/// Every brick of `shape` (only cubes if `cubic`), in lexicographic order.
pub fn enumerate_bricks(shape: &Shape, cubic: bool) -> Vec<Brick> {
    let mut out = Vec::new();
    let _ = for_each_brick(shape, cubic, |lo, hi| {
        out.push(Brick::from_parts_unchecked(lo.to_vec(), hi.to_vec()));
        ControlFlow::Continue(())
    });
    out
}

/// Number of bricks of `shape`; for `cubic`, the number of cubes, which requires a cube shape.
pub fn brick_count(shape: &Shape, cubic: bool) -> Result<u64> {
    const WHAT: &str = "brick count";
    if cubic {
        if !shape.is_cube() {
            return Err(IslandError::InvalidShape(format!(
                "cubic counting needs a cube, got {shape}"
            )));
        }
        let m = u64::from(shape.side(0));
        let d = u32::try_from(shape.dim()).map_err(|_| IslandError::Overflow(WHAT))?;
        (1..=m).try_fold(0u64, |acc, s| {
            (m - s + 1)
                .checked_pow(d)
                .and_then(|term| acc.checked_add(term))
                .ok_or(IslandError::Overflow(WHAT))
        })
    } else {
        shape.dims().iter().try_fold(1u64, |acc, &m| {
            let m = u64::from(m);
            (m * (m + 1) / 2)
                .checked_mul(acc)
                .ok_or(IslandError::Overflow(WHAT))
        })
    }
}

/// A shape-preserving isometry of the lattice cuboid: output axis `i` reads input
/// axis `perm[i]`, then reflects it when `flip[i]` is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symmetry {
    perm: Vec<usize>,
    flip: Vec<bool>,
}

impl Symmetry {
    pub fn identity(dim: usize) -> Self {
        Symmetry {
            perm: (0..dim).collect(),
            flip: vec![false; dim],
        }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p) && !self.flip.iter().any(|&f| f)
    }

    /// Every symmetry of `shape`: permutations of equal-length axes composed with
    /// reflections `x_i -> m_i - x_i`.
    pub fn group(shape: &Shape) -> Vec<Symmetry> {
        let d = shape.dim();
        let dims = shape.dims();
        let perms: Vec<Vec<usize>> = (0..d)
            .permutations(d)
            .filter(|p| p.iter().enumerate().all(|(i, &j)| dims[i] == dims[j]))
            .collect();
        let mut out = Vec::with_capacity(perms.len() << d);
        for perm in perms {
            for mask in 0u32..(1 << d) {
                let flip = (0..d).map(|i| mask >> i & 1 == 1).collect();
                out.push(Symmetry {
                    perm: perm.clone(),
                    flip,
                });
            }
        }
        out
    }

    /// Image of `brick` inside `shape`. `self` must belong to `shape`'s group.
    pub fn apply(&self, shape: &Shape, brick: &Brick) -> Brick {
        let d = brick.dim();
        let mut lo = Vec::with_capacity(d);
        let mut hi = Vec::with_capacity(d);
        for i in 0..d {
            let src = self.perm[i];
            let (a, b) = (brick.lo[src], brick.hi[src]);
            if self.flip[i] {
                let m = shape.side(src);
                lo.push(m - b);
                hi.push(m - a);
            } else {
                lo.push(a);
                hi.push(b);
            }
        }
        Brick { lo, hi }
    }
}

/// Lexicographically least symmetric image of `system`, with bricks sorted.
pub fn canonical_form(system: &IslandSystem) -> IslandSystem {
    let shape = system.shape();
    let mut best: Option<Vec<Brick>> = None;
    for g in Symmetry::group(shape) {
        let mut image: Vec<Brick> = system.bricks().iter().map(|b| g.apply(shape, b)).collect();
        image.sort_unstable();
        if best.as_ref().is_none_or(|cur| image < *cur) {
            best = Some(image);
        }
    }
    let bricks = best.unwrap_or_default();
    IslandSystem::from_sorted_unchecked(shape.clone(), system.is_cubic(), bricks)
}
