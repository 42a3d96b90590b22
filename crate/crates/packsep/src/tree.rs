//! Recursive separator decomposition.
//!
//! A separator tree splits a segment set with a sphere separator, then
//! recurses on the inside and outside parts until pieces are small. Crossing
//! segments stay at the split node, so every segment index appears exactly
//! once in the whole tree: at the split node whose sphere it crosses, or in
//! the leaf it descends to.
//!
//! Recursion stops once a piece has at most `leaf_size` segments, or is too
//! small for the balance guarantee (n < 8 * c_bal^2), or a split fails to
//! shrink the piece. All indices are positions in the original set, so any
//! node can be re-checked against the input without rebuilding subsets.

use crate::packed::SegmentSet;
use crate::separator::{guarantee_applies, prepare, SeparatorConfig};
use crate::geom::{Classification, Sphere};
use std::fmt;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq)]
pub enum SeparatorTree {
    Leaf {
        /// Original-set indices held by this leaf, sorted ascending.
        indices: Vec<usize>,
        depth: usize,
    },
    Split {
        sphere: Sphere,
        base_radius: f64,
        rounds_used: u32,
        accepted: bool,
        guarantee_applies: bool,
        /// Original-set indices crossing the sphere, sorted ascending.
        crossing: Vec<usize>,
        inside: Box<SeparatorTree>,
        outside: Box<SeparatorTree>,
        depth: usize,
    },
}

impl SeparatorTree {
    pub fn depth(&self) -> usize {
        match self {
            SeparatorTree::Leaf { depth, .. } => *depth,
            SeparatorTree::Split { depth, .. } => *depth,
        }
    }

    /// Number of nodes, splits and leaves both.
    pub fn node_count(&self) -> usize {
        match self {
            SeparatorTree::Leaf { .. } => 1,
            SeparatorTree::Split { inside, outside, .. } => {
                1 + inside.node_count() + outside.node_count()
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            SeparatorTree::Leaf { .. } => 1,
            SeparatorTree::Split { inside, outside, .. } => {
                inside.leaf_count() + outside.leaf_count()
            }
        }
    }

    pub fn max_depth(&self) -> usize {
        match self {
            SeparatorTree::Leaf { depth, .. } => *depth,
            SeparatorTree::Split { inside, outside, .. } => {
                inside.max_depth().max(outside.max_depth())
            }
        }
    }

    /// All original-set indices stored in this subtree, in no particular
    /// order.
    pub fn collect_indices(&self, out: &mut Vec<usize>) {
        match self {
            SeparatorTree::Leaf { indices, .. } => out.extend_from_slice(indices),
            SeparatorTree::Split {
                crossing,
                inside,
                outside,
                ..
            } => {
                out.extend_from_slice(crossing);
                inside.collect_indices(out);
                outside.collect_indices(out);
            }
        }
    }
}

/// Per-depth summary of a tree: node count, largest leaf, crossing total.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LevelStats {
    pub depth: usize,
    pub splits: usize,
    pub leaves: usize,
    pub crossing_total: usize,
    pub largest_leaf: usize,
}

pub fn level_stats(root: &SeparatorTree) -> Vec<LevelStats> {
    let mut levels: Vec<LevelStats> = Vec::new();
    let mut stack = vec![root];
    while let Some(node) = stack.pop() {
        let depth = node.depth();
        if levels.len() <= depth {
            levels.resize_with(depth + 1, LevelStats::default);
            for (d, level) in levels.iter_mut().enumerate() {
                level.depth = d;
            }
        }
        let level = &mut levels[depth];
        match node {
            SeparatorTree::Leaf { indices, .. } => {
                level.leaves += 1;
                level.largest_leaf = level.largest_leaf.max(indices.len());
            }
            SeparatorTree::Split {
                crossing,
                inside,
                outside,
                ..
            } => {
                level.splits += 1;
                level.crossing_total += crossing.len();
                stack.push(inside);
                stack.push(outside);
            }
        }
    }
    levels
}

impl fmt::Display for LevelStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "depth {}: {} splits, {} leaves, {} crossing, largest leaf {}",
            self.depth, self.splits, self.leaves, self.crossing_total, self.largest_leaf
        )
    }
}

/// Build a separator tree over `set`. Splitting continues while a piece has
/// more than `leaf_size` segments and is large enough for the balance
/// guarantee. Each split draws fresh randomness from `cfg.seed` mixed with a
/// per-node counter in pre-order, so the whole tree is reproducible.
pub fn build_tree(set: &SegmentSet, cfg: &SeparatorConfig, leaf_size: usize) -> SeparatorTree {
    assert!(leaf_size >= 1, "leaf_size must be >= 1");
    let all: Vec<usize> = (0..set.len()).collect();
    let mut counter = 0u64;
    build_node(set, &all, cfg, leaf_size, 0, &mut counter)
}

fn build_node(
    set: &SegmentSet,
    indices: &[usize],
    cfg: &SeparatorConfig,
    leaf_size: usize,
    depth: usize,
    counter: &mut u64,
) -> SeparatorTree {
    let n = indices.len();
    let node_seed = cfg.seed.wrapping_add(*counter);
    *counter += 1;
    if n <= leaf_size || !guarantee_applies(n, cfg.c_bal) {
        return SeparatorTree::Leaf {
            indices: indices.to_vec(),
            depth,
        };
    }
    let piece = set.subset(indices);
    let prepared = match prepare(&piece, cfg.c_bal) {
        Ok(p) => p,
        Err(_) => {
            return SeparatorTree::Leaf {
                indices: indices.to_vec(),
                depth,
            }
        }
    };
    let result = prepared.run(&piece, &cfg.mode, cfg.max_rounds, node_seed);
    // Without strict progress the recursion could spin on a piece the sphere
    // fails to cut down; such a piece becomes a leaf.
    if result.inside.len() == n || result.outside.len() == n {
        return SeparatorTree::Leaf {
            indices: indices.to_vec(),
            depth,
        };
    }
    let lift = |local: &[usize]| -> Vec<usize> { local.iter().map(|&i| indices[i]).collect() };
    let inside_idx = lift(&result.inside);
    let crossing_idx = lift(&result.crossing);
    let outside_idx = lift(&result.outside);
    let inside = build_node(set, &inside_idx, cfg, leaf_size, depth + 1, counter);
    let outside = build_node(set, &outside_idx, cfg, leaf_size, depth + 1, counter);
    SeparatorTree::Split {
        sphere: result.sphere,
        base_radius: result.base_radius,
        rounds_used: result.rounds_used,
        accepted: result.accepted,
        guarantee_applies: result.guarantee_applies,
        crossing: crossing_idx,
        inside: Box::new(inside),
        outside: Box::new(outside),
        depth,
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeDefect {
    #[error("index {index} out of range for {n} segments")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("index {index} stored {count} times across the tree")]
    IndexMultiplicity { index: usize, count: usize },
    #[error(
        "at depth {depth}, segment {index} is stored as {stored} but classifies as {actual}"
    )]
    MisclassifiedSegment {
        depth: usize,
        index: usize,
        stored: String,
        actual: String,
    },
    #[error(
        "at depth {depth}, split of {n} segments has inside {inside} / outside {outside}, below the n/(2*{c_bal}) balance bound"
    )]
    UnbalancedSplit {
        depth: usize,
        n: usize,
        inside: usize,
        outside: usize,
        c_bal: u32,
    },
    #[error(
        "at depth {depth}, split of {n} segments stores guarantee_applies={stored}, but c_bal={c_bal} gives {actual}"
    )]
    GuaranteeFlagMismatch {
        depth: usize,
        n: usize,
        stored: bool,
        actual: bool,
        c_bal: u32,
    },
}

/// Walk the tree and re-check it against the original set: every index
/// stored exactly once, every split's stored lists matching a fresh
/// classification against its sphere, and balance at every split where the
/// guarantee regime applied.
pub fn verify_tree(
    set: &SegmentSet,
    root: &SeparatorTree,
    c_bal: u32,
) -> Result<(), TreeDefect> {
    let n = set.len();
    let mut seen = vec![0usize; n];
    let mut all = Vec::new();
    root.collect_indices(&mut all);
    for &i in &all {
        if i >= n {
            return Err(TreeDefect::IndexOutOfRange { index: i, n });
        }
        seen[i] += 1;
    }
    for (i, &count) in seen.iter().enumerate() {
        if count != 1 {
            return Err(TreeDefect::IndexMultiplicity { index: i, count });
        }
    }
    verify_node(set, root, c_bal)
}

fn verify_node(set: &SegmentSet, node: &SeparatorTree, c_bal: u32) -> Result<(), TreeDefect> {
    let SeparatorTree::Split {
        sphere,
        guarantee_applies,
        crossing,
        inside,
        outside,
        depth,
        ..
    } = node
    else {
        return Ok(());
    };
    let mut inside_idx = Vec::new();
    inside.collect_indices(&mut inside_idx);
    let mut outside_idx = Vec::new();
    outside.collect_indices(&mut outside_idx);

    let check = |list: &[usize], stored: Classification| -> Result<(), TreeDefect> {
        for &i in list {
            let actual = set.segments()[i].classify(sphere);
            if actual != stored {
                return Err(TreeDefect::MisclassifiedSegment {
                    depth: *depth,
                    index: i,
                    stored: format!("{stored:?}"),
                    actual: format!("{actual:?}"),
                });
            }
        }
        Ok(())
    };
    check(crossing, Classification::Crossing)?;
    check(&inside_idx, Classification::Inside)?;
    check(&outside_idx, Classification::Outside)?;

    // Recompute the guarantee regime from the piece size rather than
    // trusting the stored flag, so a tampered flag cannot dodge the balance
    // check.
    let piece_n = crossing.len() + inside_idx.len() + outside_idx.len();
    let expected = crate::separator::guarantee_applies(piece_n, c_bal);
    if *guarantee_applies != expected {
        return Err(TreeDefect::GuaranteeFlagMismatch {
            depth: *depth,
            n: piece_n,
            stored: *guarantee_applies,
            actual: expected,
            c_bal,
        });
    }
    if expected {
        let c = c_bal as usize;
        if inside_idx.len() * 2 * c < piece_n || outside_idx.len() * 2 * c < piece_n {
            return Err(TreeDefect::UnbalancedSplit {
                depth: *depth,
                n: piece_n,
                inside: inside_idx.len(),
                outside: outside_idx.len(),
                c_bal,
            });
        }
    }
    verify_node(set, inside, c_bal)?;
    verify_node(set, outside, c_bal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    fn test_cfg(seed: u64) -> SeparatorConfig {
        SeparatorConfig::min_of_m(8, seed).with_c_bal(4)
    }

    #[test]
    fn small_set_stays_a_leaf() {
        let set = gen::grid(3, 3, 2.0);
        let tree = build_tree(&set, &test_cfg(1), 256);
        match &tree {
            SeparatorTree::Leaf { indices, depth } => {
                assert_eq!(*depth, 0);
                assert_eq!(indices.len(), set.len());
            }
            SeparatorTree::Split { .. } => panic!("9 segments must not split"),
        }
        verify_tree(&set, &tree, 4).unwrap();
    }

    #[test]
    fn grid_splits_and_accounts_for_every_segment() {
        // 20 * 20 = 400 >= 8 * 4^2 = 128, so the root must split.
        let set = gen::grid(20, 20, 2.0);
        let tree = build_tree(&set, &test_cfg(9), 64);
        assert!(matches!(tree, SeparatorTree::Split { .. }));
        let mut all = Vec::new();
        tree.collect_indices(&mut all);
        all.sort_unstable();
        assert_eq!(all, (0..set.len()).collect::<Vec<_>>());
        verify_tree(&set, &tree, 4).unwrap();
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let set = gen::grid(16, 16, 2.0);
        let a = build_tree(&set, &test_cfg(40), 64);
        let b = build_tree(&set, &test_cfg(40), 64);
        assert_eq!(a, b);
        let c = build_tree(&set, &test_cfg(41), 64);
        assert_ne!(a, c);
    }

    #[test]
    fn level_stats_cover_all_nodes() {
        let set = gen::grid(20, 20, 2.0);
        let tree = build_tree(&set, &test_cfg(3), 64);
        let stats = level_stats(&tree);
        let nodes: usize = stats.iter().map(|l| l.splits + l.leaves).sum();
        assert_eq!(nodes, tree.node_count());
        assert_eq!(stats[0].splits, 1);
        assert_eq!(
            stats.iter().map(|l| l.leaves).sum::<usize>(),
            tree.leaf_count()
        );
        assert_eq!(stats.len(), tree.max_depth() + 1);
    }

    #[test]
    fn verify_detects_a_moved_index() {
        let set = gen::grid(20, 20, 2.0);
        let mut tree = build_tree(&set, &test_cfg(5), 64);
        let SeparatorTree::Split {
            crossing, inside, ..
        } = &mut tree
        else {
            panic!("expected a split at the root");
        };
        // Steal an index from the inside subtree and stash it with the
        // crossing list.
        fn steal(node: &mut SeparatorTree) -> usize {
            match node {
                SeparatorTree::Leaf { indices, .. } => indices.pop().unwrap(),
                SeparatorTree::Split { inside, .. } => steal(inside),
            }
        }
        let stolen = steal(inside);
        crossing.push(stolen);
        assert!(matches!(
            verify_tree(&set, &tree, 4),
            Err(TreeDefect::MisclassifiedSegment { .. })
        ));
    }

    #[test]
    fn verify_detects_a_dropped_index() {
        let set = gen::grid(20, 20, 2.0);
        let mut tree = build_tree(&set, &test_cfg(6), 64);
        fn drop_one(node: &mut SeparatorTree) {
            match node {
                SeparatorTree::Leaf { indices, .. } => {
                    indices.pop();
                }
                SeparatorTree::Split { outside, .. } => drop_one(outside),
            }
        }
        drop_one(&mut tree);
        assert!(matches!(
            verify_tree(&set, &tree, 4),
            Err(TreeDefect::IndexMultiplicity { count: 0, .. })
        ));
    }
}
