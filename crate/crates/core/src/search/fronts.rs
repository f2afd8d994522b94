use std::sync::atomic::{AtomicU64, Ordering};

use fixedbitset::FixedBitSet;

use crate::error::{IslandError, PartialStats, Result};
use crate::geometry::{brick_count, enumerate_bricks, Brick, Shape};

/// A set of pairwise-disjoint proper sub-bricks of a region: the candidate top layer
/// of a maximal system.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Front {
    pub region: Shape,
    pub cubic: bool,
    pub members: Vec<Brick>,
}

impl Front {
    /// No brick other than the region and the members is nested around or disjoint
    /// from every member. Checked by a direct scan of the region's bricks.
    pub fn is_saturated(&self) -> bool {
        let full = self.region.full_brick();
        enumerate_bricks(&self.region, self.cubic)
            .into_iter()
            .filter(|b| *b != full && !self.members.contains(b))
            .all(|b| {
                !self
                    .members
                    .iter()
                    .all(|r| b.encloses(r) || b.is_disjoint_from(r))
            })
    }
}

/// Every saturated front of `region`, members sorted, fronts in lexicographic order
/// of their member lists.
pub fn enumerate_saturated_fronts(region: &Shape, cubic: bool) -> Result<Vec<Front>> {
    let defaults = super::SearchConfig::default();
    super::check_cubic_shape(region, cubic)?;
    let count = brick_count(region, cubic)?;
    if count > defaults.brick_count_cap {
        return Err(IslandError::CapExceeded {
            what: "brick count",
            limit: defaults.brick_count_cap,
            stats: PartialStats::default(),
        });
    }
    let space = FrontSpace::new(region, cubic);
    let nodes = AtomicU64::new(0);
    let tick = || {
        let seen = nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if seen > defaults.node_cap {
            return Err(IslandError::CapExceeded {
                what: "node",
                limit: defaults.node_cap,
                stats: PartialStats {
                    nodes: seen,
                    memo_hits: 0,
                },
            });
        }
        Ok(())
    };
    let fronts = space.saturated_fronts(&tick, false)?;
    Ok(fronts
        .into_iter()
        .map(|members| Front {
            region: region.clone(),
            cubic,
            members: members
                .into_iter()
                .map(|i| space.candidates[i].clone())
                .collect(),
        })
        .collect())
}

/// Per-node callback; returning an error aborts the enumeration.
pub(crate) type Tick<'a> = dyn Fn() -> Result<()> + Sync + 'a;

/// Proper sub-bricks of a region with their pairwise relations as bitsets.
pub(crate) struct FrontSpace {
    pub(crate) candidates: Vec<Brick>,
    /// `disjoint[c]`: candidates disjoint from `c`.
    disjoint: Vec<FixedBitSet>,
    /// `keeps[c]`: candidates that contain `c` or are disjoint from it.
    keeps: Vec<FixedBitSet>,
    /// `kills[c]`: candidates that stop being addable once `c` is a member.
    kills: Vec<FixedBitSet>,
}

impl FrontSpace {
    pub(crate) fn new(region: &Shape, cubic: bool) -> Self {
        let full = region.full_brick();
        let candidates: Vec<Brick> = enumerate_bricks(region, cubic)
            .into_iter()
            .filter(|b| *b != full)
            .collect();
        let n = candidates.len();
        let mut disjoint = vec![FixedBitSet::with_capacity(n); n];
        let mut keeps = vec![FixedBitSet::with_capacity(n); n];
        for (c, member) in candidates.iter().enumerate() {
            for (b, other) in candidates.iter().enumerate() {
                let apart = other.is_disjoint_from(member);
                disjoint[c].set(b, apart);
                keeps[c].set(b, apart || other.encloses(member));
            }
        }
        let kills = keeps
            .iter()
            .map(|k| {
                let mut kill = k.clone();
                kill.toggle_range(..);
                kill
            })
            .collect();
        FrontSpace {
            candidates,
            disjoint,
            keeps,
            kills,
        }
    }

    /// Saturated fronts as sorted candidate-index lists, in lexicographic order.
    /// `tick` is called once per search node and may abort the enumeration. With
    /// `parallel`, the branches below the empty front run concurrently; the output
    /// order does not change.
    pub(crate) fn saturated_fronts(
        &self,
        tick: &Tick<'_>,
        parallel: bool,
    ) -> Result<Vec<Vec<usize>>> {
        let n = self.candidates.len();
        let mut all = FixedBitSet::with_capacity(n);
        all.insert_range(..);
        if !parallel {
            let mut out = Vec::new();
            self.extend(&mut Vec::new(), &all, &all, tick, &mut out)?;
            return Ok(out);
        }
        tick()?;
        if n == 0 {
            return Ok(vec![Vec::new()]);
        }
        let branches: Vec<usize> = all.ones().collect();
        let per_branch = self.branch_all(&branches, |&e| {
            let mut out = Vec::new();
            let (addable, ext) = self.child_sets(&all, &all, e);
            self.extend(&mut vec![e], &addable, &ext, tick, &mut out)?;
            Ok(out)
        })?;
        Ok(per_branch.into_iter().flatten().collect())
    }

    #[cfg(feature = "parallel")]
    fn branch_all<F>(&self, branches: &[usize], run: F) -> Result<Vec<Vec<Vec<usize>>>>
    where
        F: Fn(&usize) -> Result<Vec<Vec<usize>>> + Sync + Send,
    {
        use rayon::prelude::*;
        branches.par_iter().map(run).collect()
    }

    #[cfg(not(feature = "parallel"))]
    fn branch_all<F>(&self, branches: &[usize], run: F) -> Result<Vec<Vec<Vec<usize>>>>
    where
        F: Fn(&usize) -> Result<Vec<Vec<usize>>>,
    {
        branches.iter().map(run).collect()
    }

    fn child_sets(
        &self,
        addable: &FixedBitSet,
        extensions: &FixedBitSet,
        e: usize,
    ) -> (FixedBitSet, FixedBitSet) {
        let mut next_addable = addable.clone();
        next_addable.intersect_with(&self.keeps[e]);
        let mut next_ext = extensions.clone();
        next_ext.intersect_with(&self.disjoint[e]);
        next_ext.remove_range(..e + 1);
        (next_addable, next_ext)
    }

    fn extend(
        &self,
        front: &mut Vec<usize>,
        addable: &FixedBitSet,
        extensions: &FixedBitSet,
        tick: &Tick<'_>,
        out: &mut Vec<Vec<usize>>,
    ) -> Result<()> {
        tick()?;
        // Members are always addable, so the front is saturated iff nothing else is.
        if addable.count_ones(..) == front.len() {
            out.push(front.clone());
            return Ok(());
        }
        // Every addable non-member must be killed by a later member or become one.
        let mut resolvable = extensions.clone();
        for e in extensions.ones() {
            resolvable.union_with(&self.kills[e]);
        }
        let mut pending = addable.clone();
        for &m in front.iter() {
            pending.set(m, false);
        }
        if !pending.is_subset(&resolvable) {
            return Ok(());
        }
        for e in extensions.ones() {
            let (next_addable, next_ext) = self.child_sets(addable, extensions, e);
            front.push(e);
            self.extend(front, &next_addable, &next_ext, tick, out)?;
            front.pop();
        }
        Ok(())
    }
}
