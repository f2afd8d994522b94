//! Front-decomposition search.
//!
//! A system `H` in region `M` is maximal iff `M` is in `H`, the inclusion-maximal
//! proper members form a saturated front, and the members inside each front brick
//! form a maximal system of that brick. The sizes of those inner systems are chosen
//! independently, so
//!
//! ```text
//! value(M) = opt over saturated fronts F of 1 + sum_{R in F} value(R)
//! ```
//!
//! and `value` depends only on the side lengths of its argument.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::{Arc, RwLock};
use std::time::Instant;

use super::fronts::FrontSpace;
use super::{check_cubic_shape, flat_oracle, ExtremalReport, SearchConfig};
use crate::error::{IslandError, PartialStats, Result};
use crate::geometry::{brick_count, Brick, Coord, Shape};
use crate::system::IslandSystem;

/// Regions with at least this many candidate sub-bricks enumerate fronts in parallel.
const PARALLEL_FRONT_THRESHOLD: usize = 64;

/// Optimum for one memo key, with the first optimal front in the key's own frame.
struct Solved {
    value: u64,
    front: Vec<Brick>,
}

/// A memo key plus the axis order that maps it back onto a concrete brick:
/// `key[j] == sides[order[j]]`.
struct Oriented {
    key: Shape,
    order: Vec<usize>,
}

struct Engine<'a> {
    config: &'a SearchConfig,
    memo: RwLock<HashMap<Shape, Arc<Solved>>>,
    nodes: AtomicU64,
    memo_hits: AtomicU64,
    aborted: AtomicBool,
}

impl<'a> Engine<'a> {
    fn new(config: &'a SearchConfig) -> Self {
        Engine {
            config,
            memo: RwLock::new(HashMap::new()),
            nodes: AtomicU64::new(0),
            memo_hits: AtomicU64::new(0),
            aborted: AtomicBool::new(false),
        }
    }

    fn stats(&self) -> PartialStats {
        PartialStats {
            nodes: self.nodes.load(Ordering::Relaxed),
            memo_hits: self.memo_hits.load(Ordering::Relaxed),
        }
    }

    fn cap_error(&self) -> IslandError {
        IslandError::CapExceeded {
            what: "node",
            limit: self.config.node_cap,
            stats: self.stats(),
        }
    }

    fn orient(&self, sides: &[Coord]) -> Oriented {
        let mut order: Vec<usize> = (0..sides.len()).collect();
        if self.config.use_symmetry {
            order.sort_by(|&a, &b| sides[b].cmp(&sides[a]));
        }
        let key = Shape::new(order.iter().map(|&i| sides[i]).collect::<Vec<_>>())
            .expect("sub-brick sides are positive");
        Oriented { key, order }
    }

    fn solve(&self, key: &Shape) -> Result<Arc<Solved>> {
        if self.config.memoize {
            if let Some(hit) = self.memo.read().expect("memo lock").get(key) {
                self.memo_hits.fetch_add(1, Ordering::Relaxed);
                return Ok(Arc::clone(hit));
            }
        }
        let solved = Arc::new(self.compute(key)?);
        if self.config.memoize {
            // Values per key are unique, so a racing duplicate write is harmless.
            self.memo
                .write()
                .expect("memo lock")
                .entry(key.clone())
                .or_insert_with(|| Arc::clone(&solved));
        }
        Ok(solved)
    }

    fn compute(&self, key: &Shape) -> Result<Solved> {
        if key.is_elementary() {
            self.tick()?;
            return Ok(Solved {
                value: 1,
                front: Vec::new(),
            });
        }
        let space = FrontSpace::new(key, self.config.cubic);
        // Splitting the top of the front search only pays off for large regions.
        let split =
            self.config.parallel_degree > 1 && space.candidates.len() >= PARALLEL_FRONT_THRESHOLD;
        let fronts = space.saturated_fronts(&|| self.tick(), split)?;

        // Distinct child keys, evaluated once each.
        let mut child_of = vec![usize::MAX; space.candidates.len()];
        let mut keys: Vec<Shape> = Vec::new();
        let mut index: HashMap<Shape, usize> = HashMap::new();
        for &c in fronts.iter().flatten() {
            if child_of[c] == usize::MAX {
                let key = self.orient(&space.candidates[c].sides()).key;
                let next = index.len();
                child_of[c] = *index.entry(key.clone()).or_insert_with(|| {
                    keys.push(key);
                    next
                });
            }
        }
        let values: Vec<u64> = self.solve_all(&keys)?.iter().map(|s| s.value).collect();

        let mut best: Option<(u64, usize)> = None;
        for (i, front) in fronts.iter().enumerate() {
            let total = front
                .iter()
                .try_fold(1u64, |acc, &c| acc.checked_add(values[child_of[c]]))
                .ok_or(IslandError::Overflow("system size"))?;
            if best.is_none_or(|(v, _)| self.config.mode.improves(total, v)) {
                best = Some((total, i));
            }
        }
        let (value, i) = best.expect("every region has a saturated front");
        Ok(Solved {
            value,
            front: fronts[i]
                .iter()
                .map(|&c| space.candidates[c].clone())
                .collect(),
        })
    }

    fn tick(&self) -> Result<()> {
        if self.aborted.load(Ordering::Relaxed) {
            return Err(self.cap_error());
        }
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.config.node_cap {
            self.aborted.store(true, Ordering::Relaxed);
            return Err(self.cap_error());
        }
        Ok(())
    }

    #[cfg(feature = "parallel")]
    fn solve_all(&self, keys: &[Shape]) -> Result<Vec<Arc<Solved>>> {
        use rayon::prelude::*;
        if self.config.parallel_degree > 1 {
            keys.par_iter().map(|k| self.solve(k)).collect()
        } else {
            keys.iter().map(|k| self.solve(k)).collect()
        }
    }

    #[cfg(not(feature = "parallel"))]
    fn solve_all(&self, keys: &[Shape]) -> Result<Vec<Arc<Solved>>> {
        keys.iter().map(|k| self.solve(k)).collect()
    }

    /// Optimal system for `key`, in the key's frame.
    fn witness(&self, key: &Shape) -> Result<Vec<Brick>> {
        let solved = self.solve(key)?;
        let mut bricks = vec![key.full_brick()];
        for member in &solved.front {
            let inner = self.orient(&member.sides());
            for b in self.witness(&inner.key)? {
                bricks.push(reorient(&b, &inner.order).translated_by(member.lo()));
            }
        }
        Ok(bricks)
    }
}

/// Maps a brick from a key frame back to the frame whose axis `order[j]` became key axis `j`.
fn reorient(brick: &Brick, order: &[usize]) -> Brick {
    let d = order.len();
    let mut lo = vec![0; d];
    let mut hi = vec![0; d];
    for (j, &axis) in order.iter().enumerate() {
        lo[axis] = brick.lo()[j];
        hi[axis] = brick.hi()[j];
    }
    Brick::from_parts_unchecked(lo, hi)
}

/// Minimum or maximum size of a maximal system in `shape`, per `config.mode`, by
/// front decomposition.
pub fn extremal_size(shape: &Shape, config: &SearchConfig) -> Result<ExtremalReport> {
    if !config.use_front_decomposition {
        return flat_oracle(shape, config);
    }
    check_cubic_shape(shape, config.cubic)?;
    if config.node_cap == 0 || config.brick_count_cap == 0 {
        return Err(IslandError::InvalidParameter(
            "caps must be positive".into(),
        ));
    }
    let count = brick_count(shape, config.cubic)?;
    if count > config.brick_count_cap {
        return Err(IslandError::CapExceeded {
            what: "brick count",
            limit: config.brick_count_cap,
            stats: PartialStats::default(),
        });
    }

    let start = Instant::now();
    let engine = Engine::new(config);
    let run = || -> Result<(u64, Vec<Brick>)> {
        let top = engine.orient(shape.dims());
        let value = engine.solve(&top.key)?.value;
        let bricks = engine
            .witness(&top.key)?
            .iter()
            .map(|b| reorient(b, &top.order))
            .collect();
        Ok((value, bricks))
    };
    let (value, bricks) = run_with_degree(config.parallel_degree, run)?;
    let witness = IslandSystem::from_unsorted_unchecked(shape.clone(), config.cubic, bricks);
    debug_assert_eq!(witness.len() as u64, value);
    let stats = engine.stats();
    Ok(ExtremalReport {
        shape: shape.clone(),
        cubic: config.cubic,
        mode: config.mode,
        value,
        witness,
        nodes_explored: stats.nodes,
        memo_hits: stats.memo_hits,
        elapsed: start.elapsed(),
    })
}

#[cfg(feature = "parallel")]
fn run_with_degree<T: Send>(degree: usize, job: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    if degree <= 1 {
        return job();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(degree)
        .build()
        .map_err(|e| IslandError::InvalidParameter(format!("thread pool: {e}")))?;
    pool.install(job)
}

#[cfg(not(feature = "parallel"))]
fn run_with_degree<T>(_degree: usize, job: impl FnOnce() -> Result<T>) -> Result<T> {
    job()
}
