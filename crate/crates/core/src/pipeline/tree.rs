use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::category::{Category, CategoryBins, CategoryGrid};
use crate::augment::{apply_random_op, Augmentable, OpOutcome, OpRecord};
use crate::error::{Error, Result};

/// Pruning schedule for [`explore_tree`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct TreeConfig {
    /// Children attempted per node, by depth of the child.
    pub max_width_by_depth: BTreeMap<usize, usize>,
    pub keep_depth_min: usize,
    pub keep_depth_max: usize,
    /// Children larger than this multiple of the root (in either dimension)
    /// are dropped.
    pub size_cap_factor: f64,
    /// Tries per child slot before the slot is given up.
    pub attempts_per_slot: usize,
    #[serde(default)]
    pub bins: CategoryBins,
}

impl Default for TreeConfig {
    fn default() -> Self {
        let widths = [(1, 8), (2, 4), (3, 2), (4, 2), (5, 2), (6, 1), (7, 1), (8, 1), (9, 1), (10, 1)];
        TreeConfig {
            max_width_by_depth: widths.into_iter().collect(),
            keep_depth_min: 6,
            keep_depth_max: 10,
            size_cap_factor: 1.5,
            attempts_per_slot: 3,
            bins: CategoryBins::default(),
        }
    }
}

impl TreeConfig {
    pub fn check(&self) -> Result<()> {
        if self.keep_depth_min < 1 || self.keep_depth_min > self.keep_depth_max {
            return Err(Error::Config(format!(
                "keep depth range [{}, {}] is empty or starts at the root",
                self.keep_depth_min, self.keep_depth_max
            )));
        }
        for depth in 1..=self.keep_depth_max {
            match self.max_width_by_depth.get(&depth) {
                Some(&w) if w > 0 => {}
                _ => return Err(Error::Config(format!("no positive search width for depth {depth}"))),
            }
        }
        if !(self.size_cap_factor > 0.0) {
            return Err(Error::Config("size cap factor must be positive".into()));
        }
        if self.attempts_per_slot == 0 {
            return Err(Error::Config("attempts per slot must be at least 1".into()));
        }
        Ok(())
    }

    pub fn width_at(&self, depth: usize) -> usize {
        self.max_width_by_depth.get(&depth).copied().unwrap_or(0)
    }
}

/// A variant reachable from the root by `path`.
#[derive(Clone, Debug, PartialEq)]
pub struct AugNode<T> {
    pub table: T,
    pub path: Vec<OpRecord>,
    pub category: Category,
}

impl<T> AugNode<T> {
    pub fn depth(&self) -> usize {
        self.path.len()
    }
}

/// Retained nodes of one table's augmentation tree.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeSet<T> {
    pub root_id: String,
    nodes: Vec<AugNode<T>>,
}

impl<T> NodeSet<T> {
    pub fn new(root_id: String, nodes: Vec<AugNode<T>>) -> Self {
        NodeSet { root_id, nodes }
    }

    pub fn nodes(&self) -> &[AugNode<T>] {
        &self.nodes
    }

    pub fn iter(&self) -> std::slice::Iter<'_, AugNode<T>> {
        self.nodes.iter()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

impl<'a, T> IntoIterator for &'a NodeSet<T> {
    type Item = &'a AugNode<T>;
    type IntoIter = std::slice::Iter<'a, AugNode<T>>;

    fn into_iter(self) -> Self::IntoIter {
        self.nodes.iter()
    }
}

/// Frequency of a node set over categories.
pub fn node_frequency<T>(nodes: &NodeSet<T>) -> CategoryGrid {
    CategoryGrid::count(nodes.iter().map(|n| n.category))
}

/// Breadth-first expansion of the augmentation tree of `root`.
///
/// Each node at depth `k − 1` gets `width(k)` child slots. A slot draws a
/// random operation up to `attempts_per_slot` times; aborted operations,
/// children exceeding the size cap and repeats of an operation already taken
/// by a sibling use up an attempt. Oversized children are never expanded, and
/// every node has a distinct path. Nodes with depth in `[keep_depth_min, keep_depth_max]`
/// are returned in generation order.
pub fn explore_tree<T: Augmentable, R: Rng + ?Sized>(root: &T, cfg: &TreeConfig, rng: &mut R) -> Result<NodeSet<T>> {
    cfg.check()?;
    let root_layout = root.layout();
    root_layout.ensure_valid()?;
    let cap_w = cfg.size_cap_factor * root_layout.width() as f64;
    let cap_h = cfg.size_cap_factor * root_layout.height() as f64;

    let mut frontier: Vec<(T, Vec<OpRecord>)> = vec![(root.clone(), Vec::new())];
    let mut kept = Vec::new();
    for depth in 1..=cfg.keep_depth_max {
        let width = cfg.width_at(depth);
        let mut next = Vec::with_capacity(frontier.len() * width);
        for (node, path) in &frontier {
            let mut taken: Vec<OpRecord> = Vec::with_capacity(width);
            for _slot in 0..width {
                for _attempt in 0..cfg.attempts_per_slot {
                    let OpOutcome::Applied { table, record } = apply_random_op(node, rng, None) else {
                        continue;
                    };
                    let l = table.layout();
                    if l.width() as f64 > cap_w || l.height() as f64 > cap_h || taken.contains(&record) {
                        continue;
                    }
                    taken.push(record);
                    let mut child_path = path.clone();
                    child_path.push(record);
                    next.push((table, child_path));
                    break;
                }
            }
        }
        if depth >= cfg.keep_depth_min {
            for (table, path) in &next {
                let category = cfg.bins.of(table.layout())?;
                kept.push(AugNode {
                    table: table.clone(),
                    path: path.clone(),
                    category,
                });
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(NodeSet::new(root_layout.id.clone(), kept))
}
