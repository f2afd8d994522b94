//! Generators for the extremal systems: the nested minimum, the full family of
//! minimum-size maximal systems, the nested cube chain, and the recursive subdivision.

use std::collections::BTreeSet;

use itertools::Itertools;

use crate::error::{IslandError, Result};
use crate::formulas::hk_size;
use crate::geometry::{Brick, Coord, Shape};
use crate::system::IslandSystem;

/// Refuse to materialize systems larger than this.
pub const MAX_GENERATED_BRICKS: u64 = 10_000_000;

/// The nested chain that grows one unit at a time: first along axis 0 from the
/// origin cell, then along axis 1 with axis 0 full, and so on.
pub fn nested_min_system(shape: &Shape) -> IslandSystem {
    let dims = shape.dims();
    let d = dims.len();
    let mut bricks = Vec::new();
    for axis in 0..d {
        for n in 1..=dims[axis] {
            let hi = (0..d)
                .map(|j| match j.cmp(&axis) {
                    std::cmp::Ordering::Less => dims[j],
                    std::cmp::Ordering::Equal => n,
                    std::cmp::Ordering::Greater => 1,
                })
                .collect();
            bricks.push(Brick::from_parts_unchecked(vec![0; d], hi));
        }
    }
    IslandSystem::from_unsorted_unchecked(shape.clone(), false, bricks)
}

/// Every maximal system of intervals in `[0, len]`, as `(start, end)` pairs.
fn segment_systems(len: Coord) -> Vec<Vec<(Coord, Coord)>> {
    if len == 1 {
        return vec![vec![(0, 1)]];
    }
    let mut fronts: Vec<Vec<(Coord, Coord)>> = vec![vec![(0, len - 1)], vec![(1, len)]];
    fronts.extend((1..len - 1).map(|a| vec![(0, a), (a + 1, len)]));

    let mut out = Vec::new();
    for front in fronts {
        let parts: Vec<Vec<Vec<(Coord, Coord)>>> = front
            .iter()
            .map(|&(a, b)| {
                segment_systems(b - a)
                    .into_iter()
                    .map(|sys| sys.into_iter().map(|(x, y)| (x + a, y + a)).collect())
                    .collect()
            })
            .collect();
        for choice in parts.iter().multi_cartesian_product() {
            let mut system: Vec<(Coord, Coord)> = choice.into_iter().flatten().copied().collect();
            system.push((0, len));
            system.sort_unstable();
            out.push(system);
        }
    }
    out
}

/// Every nested chain from `start` to `full` growing by one unit on one side per step,
/// excluding `start` itself.
fn unit_chains(start: &Brick, full: &Shape, prefix: &mut Vec<Brick>, out: &mut Vec<Vec<Brick>>) {
    let current = prefix.last().unwrap_or(start).clone();
    if current.hi() == full.dims() && current.lo().iter().all(|&a| a == 0) {
        out.push(prefix.clone());
        return;
    }
    for axis in 0..full.dim() {
        if current.lo()[axis] > 0 {
            let mut lo = current.lo().to_vec();
            lo[axis] -= 1;
            prefix.push(Brick::from_parts_unchecked(lo, current.hi().to_vec()));
            unit_chains(start, full, prefix, out);
            prefix.pop();
        }
        if current.hi()[axis] < full.side(axis) {
            let mut hi = current.hi().to_vec();
            hi[axis] += 1;
            prefix.push(Brick::from_parts_unchecked(current.lo().to_vec(), hi));
            unit_chains(start, full, prefix, out);
            prefix.pop();
        }
    }
}

/// Every system produced by the three-step procedure: pick a bar `R` (all sides 1
/// except possibly one of length `r`), fill it with a maximal system of `r`
/// intervals, then grow a unit-step chain from `R` to the whole cuboid.
///
/// The result is sorted and duplicate-free.
pub fn minimal_maximal_generator(shape: &Shape) -> Vec<IslandSystem> {
    let dims = shape.dims();
    let d = dims.len();
    let mut found: BTreeSet<Vec<Brick>> = BTreeSet::new();

    for axis in 0..d {
        for len in 1..=dims[axis] {
            // Cells are bars along every axis; list them once.
            if len == 1 && axis > 0 {
                continue;
            }
            let inner = segment_systems(len);
            let positions = (0..d)
                .map(|i| {
                    if i == axis {
                        0..=dims[i] - len
                    } else {
                        0..=dims[i] - 1
                    }
                })
                .multi_cartesian_product();
            for lo in positions {
                let bar_brick = |a: Coord, b: Coord| {
                    let mut blo = lo.clone();
                    let mut bhi: Vec<Coord> = lo.iter().map(|x| x + 1).collect();
                    blo[axis] = lo[axis] + a;
                    bhi[axis] = lo[axis] + b;
                    Brick::from_parts_unchecked(blo, bhi)
                };
                let bar = bar_brick(0, len);
                let mut chains = Vec::new();
                unit_chains(&bar, shape, &mut Vec::new(), &mut chains);
                for filling in &inner {
                    let base: Vec<Brick> = filling.iter().map(|&(a, b)| bar_brick(a, b)).collect();
                    for chain in &chains {
                        let mut bricks: Vec<Brick> = base.iter().chain(chain).cloned().collect();
                        bricks.sort_unstable();
                        bricks.dedup();
                        found.insert(bricks);
                    }
                }
            }
        }
    }
    found
        .into_iter()
        .map(|bricks| IslandSystem::from_sorted_unchecked(shape.clone(), false, bricks))
        .collect()
}

/// The chain of origin-anchored cubes `[0,s]^d` for `1 <= s <= m`.
pub fn nested_cubes(d: usize, m: Coord) -> Result<IslandSystem> {
    if d == 0 || m == 0 {
        return Err(IslandError::InvalidParameter(format!(
            "nested cubes need d >= 1 and m >= 1, got d={d}, m={m}"
        )));
    }
    let shape = Shape::cube(d, m)?;
    let bricks = (1..=m).map(|s| Brick::cube_at(vec![0; d], s)).collect();
    Ok(IslandSystem::from_sorted_unchecked(shape, true, bricks))
}

/// The recursive subdivision system in `[0, 2^k - 1]^d`: the whole cube plus a copy
/// of the level `k - 1` system in each of the `2^d` corner subcubes of side
/// `2^(k-1) - 1`, which sit at offsets `{0, 2^(k-1)}` per axis.
pub fn subdivision_system(d: usize, k: u32) -> Result<IslandSystem> {
    if d == 0 || k == 0 {
        return Err(IslandError::InvalidParameter(format!(
            "subdivision needs d >= 1 and k >= 1, got d={d}, k={k}"
        )));
    }
    let side = 1u32
        .checked_shl(k)
        .filter(|&p| p != 0)
        .map(|p| p - 1)
        .ok_or(IslandError::Overflow("subdivision side length"))?;
    let size = hk_size(d as u64, u64::from(k))?;
    if size > MAX_GENERATED_BRICKS {
        return Err(IslandError::InvalidParameter(format!(
            "subdivision system would have {size} cubes, limit is {MAX_GENERATED_BRICKS}"
        )));
    }

    let mut bricks = vec![Brick::cube_at(vec![0; d], 1)];
    for level in 2..=k {
        let half = 1u32 << (level - 1);
        let mut next = Vec::with_capacity(bricks.len() << d);
        for corner in 0u32..(1 << d) {
            let offset: Vec<Coord> = (0..d)
                .map(|i| if corner >> i & 1 == 1 { half } else { 0 })
                .collect();
            next.extend(bricks.iter().map(|b| b.translated_by(&offset)));
        }
        next.push(Brick::cube_at(vec![0; d], (1 << level) - 1));
        bricks = next;
    }
    bricks.sort_unstable();
    Ok(IslandSystem::from_sorted_unchecked(
        Shape::cube(d, side)?,
        true,
        bricks,
    ))
}
