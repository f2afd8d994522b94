//! Flat backtracking over the whole brick universe. Shares nothing with the front
//! decomposition and serves as its reference.

use std::collections::BTreeSet;
use std::time::Instant;

use super::{check_cubic_shape, ExtremalReport, SearchConfig};
use crate::error::{IslandError, PartialStats, Result};
use crate::geometry::{brick_count, canonical_form, enumerate_bricks, Brick, Shape};
use crate::system::IslandSystem;

/// Universe size limit imposed by the 128-bit masks.
pub const ORACLE_HARD_LIMIT: u64 = 128;

type Mask = u128;

struct Universe {
    bricks: Vec<Brick>,
    /// `compatible[i]`: bricks nested with or disjoint from brick `i` (including `i`).
    compatible: Vec<Mask>,
    full: Mask,
}

impl Universe {
    fn new(shape: &Shape, cubic: bool, cap: u64) -> Result<Self> {
        check_cubic_shape(shape, cubic)?;
        let count = brick_count(shape, cubic)?;
        let limit = cap.min(ORACLE_HARD_LIMIT);
        if count > limit {
            return Err(IslandError::CapExceeded {
                what: "oracle brick count",
                limit,
                stats: PartialStats::default(),
            });
        }
        let bricks = enumerate_bricks(shape, cubic);
        let compatible = bricks
            .iter()
            .map(|a| {
                bricks
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| a.is_compatible_with(b))
                    .fold(0, |m, (j, _)| m | 1 << j)
            })
            .collect();
        let n = bricks.len();
        let full = if n == 128 { Mask::MAX } else { (1 << n) - 1 };
        Ok(Universe {
            bricks,
            compatible,
            full,
        })
    }

    fn system(&self, shape: &Shape, cubic: bool, members: Mask) -> IslandSystem {
        let bricks = (0..self.bricks.len())
            .filter(|&i| members >> i & 1 == 1)
            .map(|i| self.bricks[i].clone())
            .collect();
        IslandSystem::from_sorted_unchecked(shape.clone(), cubic, bricks)
    }
}

/// Depth-first include/exclude over bricks in lexicographic order, visiting every
/// maximal laminar family exactly once.
struct Walk<'u, F> {
    universe: &'u Universe,
    node_cap: u64,
    nodes: u64,
    visit: F,
}

impl<F: FnMut(Mask)> Walk<'_, F> {
    fn run(&mut self) -> Result<()> {
        self.step(0, 0, self.universe.full)
    }

    /// `members` are the chosen bricks below `i`; `open` are the bricks compatible
    /// with all of them.
    fn step(&mut self, i: usize, members: Mask, open: Mask) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.node_cap {
            return Err(IslandError::CapExceeded {
                what: "node",
                limit: self.node_cap,
                stats: PartialStats {
                    nodes: self.nodes,
                    memo_hits: 0,
                },
            });
        }
        let n = self.universe.bricks.len();
        let below: Mask = if i >= 128 { Mask::MAX } else { (1 << i) - 1 };
        // Skipped bricks still compatible with everything must be blocked by a later pick.
        let later = open & !members & !below & self.universe.full;
        let mut skipped = open & !members & below;
        while skipped != 0 {
            let j = skipped.trailing_zeros() as usize;
            skipped &= skipped - 1;
            if !self.universe.compatible[j] & later == 0 {
                return Ok(());
            }
        }
        if i == n {
            if open == members {
                (self.visit)(members);
            }
            return Ok(());
        }
        let bit = 1 << i;
        if open & bit != 0 {
            self.step(i + 1, members | bit, open & self.universe.compatible[i])?;
        }
        self.step(i + 1, members, open)
    }
}

fn walk(universe: &Universe, node_cap: u64, visit: impl FnMut(Mask)) -> Result<u64> {
    let mut w = Walk {
        universe,
        node_cap,
        nodes: 0,
        visit,
    };
    w.run()?;
    Ok(w.nodes)
}

/// Minimum or maximum size of a maximal system, by exhaustive enumeration.
/// The witness is the first optimal system in enumeration order.
pub fn flat_oracle(shape: &Shape, config: &SearchConfig) -> Result<ExtremalReport> {
    let start = Instant::now();
    let universe = Universe::new(shape, config.cubic, config.oracle_brick_cap)?;
    let mut best: Option<(u64, Mask)> = None;
    let nodes = walk(&universe, config.node_cap, |members| {
        let size = u64::from(members.count_ones());
        if best.is_none_or(|(v, _)| config.mode.improves(size, v)) {
            best = Some((size, members));
        }
    })?;
    let (value, members) = best.expect("some maximal system always exists");
    Ok(ExtremalReport {
        shape: shape.clone(),
        cubic: config.cubic,
        mode: config.mode,
        value,
        witness: universe.system(shape, config.cubic, members),
        nodes_explored: nodes,
        memo_hits: 0,
        elapsed: start.elapsed(),
    })
}

/// Every maximal system of `shape`, sorted. `cap` bounds the brick universe.
pub fn enumerate_maximal_systems(
    shape: &Shape,
    cubic: bool,
    cap: u64,
) -> Result<Vec<IslandSystem>> {
    let universe = Universe::new(shape, cubic, cap)?;
    let mut found = Vec::new();
    walk(&universe, SearchConfig::default().node_cap, |members| {
        found.push(members)
    })?;
    let mut systems: Vec<IslandSystem> = found
        .into_iter()
        .map(|m| universe.system(shape, cubic, m))
        .collect();
    systems.sort();
    Ok(systems)
}

/// One canonical representative per symmetry class of maximal systems, sorted.
pub fn enumerate_maximal_systems_up_to_symmetry(
    shape: &Shape,
    cubic: bool,
    cap: u64,
) -> Result<Vec<IslandSystem>> {
    let classes: BTreeSet<IslandSystem> = enumerate_maximal_systems(shape, cubic, cap)?
        .iter()
        .map(canonical_form)
        .collect();
    Ok(classes.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Coord;
    use crate::search::Mode;

    fn shape(dims: &[Coord]) -> Shape {
        Shape::new(dims.to_vec()).unwrap()
    }

    fn b(lo: &[Coord], hi: &[Coord]) -> Brick {
        Brick::new(lo.to_vec(), hi.to_vec()).unwrap()
    }

    fn oracle_value(shape: &Shape, mode: Mode, cubic: bool) -> Result<u64> {
        flat_oracle(shape, &SearchConfig::new(mode, cubic)).map(|r| r.value)
    }

    /// Maximal systems by testing every subset of the universe.
    fn brute_force(s: &Shape, cubic: bool) -> Vec<IslandSystem> {
        let bricks = enumerate_bricks(s, cubic);
        assert!(bricks.len() <= 20);
        let mut out = Vec::new();
        for mask in 0u32..(1 << bricks.len()) {
            let chosen: Vec<Brick> = (0..bricks.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| bricks[i].clone())
                .collect();
            if let Ok(h) = IslandSystem::new(s.clone(), cubic, chosen) {
                if h.is_maximal() {
                    out.push(h);
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn segment_examples() {
        let one = enumerate_maximal_systems(&shape(&[1]), false, 40).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].bricks(), &[b(&[0], &[1])]);

        let two = enumerate_maximal_systems(&shape(&[2]), false, 40).unwrap();
        let lists: Vec<&[Brick]> = two.iter().map(|h| h.bricks()).collect();
        assert_eq!(
            lists,
            vec![
                &[b(&[0], &[1]), b(&[0], &[2])][..],
                &[b(&[0], &[2]), b(&[1], &[2])][..]
            ]
        );
    }

    #[test]
    fn matches_subset_brute_force() {
        for (dims, cubic) in [
            (vec![4], false),
            (vec![2, 2], false),
            (vec![2, 1], false),
            (vec![3, 2], false),
            (vec![2, 2], true),
            (vec![3, 3], true),
            (vec![1, 1, 2], false),
        ] {
            let s = shape(&dims);
            assert_eq!(
                enumerate_maximal_systems(&s, cubic, 40).unwrap(),
                brute_force(&s, cubic),
                "{dims:?}"
            );
        }
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(oracle_value(&shape(&[2, 2]), Mode::Min, false).unwrap(), 3);
        assert_eq!(oracle_value(&shape(&[2, 1]), Mode::Min, false).unwrap(), 2);
        assert_eq!(oracle_value(&shape(&[2, 1]), Mode::Max, false).unwrap(), 2);
        assert_eq!(oracle_value(&shape(&[3, 3]), Mode::Max, true).unwrap(), 5);
    }

    #[test]
    fn square_of_side_two_cubic() {
        let systems = enumerate_maximal_systems(&shape(&[2, 2]), true, 40).unwrap();
        assert!(systems.iter().all(|h| (2..=3).contains(&h.len())));
        let max = systems.iter().map(IslandSystem::len).max().unwrap();
        assert_eq!(
            max as u64,
            oracle_value(&shape(&[2, 2]), Mode::Max, true).unwrap()
        );
    }

    #[test]
    fn symmetry_classes() {
        let all = enumerate_maximal_systems(&shape(&[2, 1]), false, 40).unwrap();
        assert_eq!(all.len(), 2);
        let classes = enumerate_maximal_systems_up_to_symmetry(&shape(&[2, 1]), false, 40).unwrap();
        assert_eq!(classes.len(), 1);
    }

    #[test]
    fn caps() {
        assert!(matches!(
            flat_oracle(&shape(&[3, 4]), &SearchConfig::default()),
            Err(IslandError::CapExceeded {
                what: "oracle brick count",
                ..
            })
        ));
        let roomy = SearchConfig {
            oracle_brick_cap: 1000,
            ..SearchConfig::default()
        };
        assert!(matches!(
            flat_oracle(&shape(&[5, 5]), &roomy),
            Err(IslandError::CapExceeded { limit: 128, .. })
        ));
        let starved = SearchConfig {
            node_cap: 3,
            ..SearchConfig::default()
        };
        assert!(flat_oracle(&shape(&[2, 2]), &starved).is_err());
    }
}
