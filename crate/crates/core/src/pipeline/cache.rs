//! On-disk form of a node set: operation paths plus the seed and
//! configuration that produced them. Nodes are rebuilt by replay.

use serde::{Deserialize, Serialize};

use super::category::Category;
use super::tree::{AugNode, NodeSet, TreeConfig};
use crate::augment::{replay, Augmentable, OpRecord};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct CachedNode {
    pub path: Vec<OpRecord>,
    pub depth: usize,
    pub category: Category,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct NodeSetCache {
    pub root_id: String,
    pub seed: u64,
    pub config: TreeConfig,
    /// True when exploration produced no nodes.
    pub empty: bool,
    pub nodes: Vec<CachedNode>,
}

impl NodeSetCache {
    pub fn from_node_set<T>(set: &NodeSet<T>, seed: u64, config: &TreeConfig) -> Self {
        NodeSetCache {
            root_id: set.root_id.clone(),
            seed,
            config: config.clone(),
            empty: set.is_empty(),
            nodes: set
                .iter()
                .map(|n| CachedNode {
                    path: n.path.clone(),
                    depth: n.depth(),
                    category: n.category,
                })
                .collect(),
        }
    }

    pub fn parse(bytes: &[u8]) -> Result<Self> {
        let c: NodeSetCache = serde_json::from_slice(bytes).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if c.empty != c.nodes.is_empty() {
            return Err(Error::Parse {
                line: 0,
                column: 0,
                message: format!("`empty` is {} but the cache holds {} nodes", c.empty, c.nodes.len()),
            });
        }
        Ok(c)
    }

    /// Compact JSON (one line) with a trailing newline.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec(self).expect("plain data serializes");
        out.push(b'\n');
        out
    }

    /// Rebuilds every node by replaying its path on `root`, checking the
    /// recorded depth and category.
    pub fn restore<T: Augmentable>(&self, root: &T) -> Result<NodeSet<T>> {
        if root.layout().id != self.root_id {
            return Err(Error::Domain(format!(
                "cache belongs to `{}`, not `{}`",
                self.root_id,
                root.layout().id
            )));
        }
        let mut nodes = Vec::with_capacity(self.nodes.len());
        for (i, n) in self.nodes.iter().enumerate() {
            let table = replay(root, &n.path)?;
            let category = self.config.bins.of(table.layout())?;
            if n.depth != n.path.len() || category != n.category {
                return Err(Error::Domain(format!("cached node {i} disagrees with its replay")));
            }
            nodes.push(AugNode {
                table,
                path: n.path.clone(),
                category,
            });
        }
        Ok(NodeSet::new(self.root_id.clone(), nodes))
    }
}
