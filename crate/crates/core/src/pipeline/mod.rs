//! From one annotated table to a stream of training samples.
//!
//! 1. [`explore_tree`] precomputes a pruned tree of random operations and
//!    keeps the deep nodes.
//! 2. Tables and nodes are binned by row/column count into a 5×4 grid
//!    ([`categorize`]).
//! 3. The sampling distribution for a table is the normalized product of a
//!    Gaussian around the table's own category, the global table frequency,
//!    and the table's node frequency ([`build_distribution`]).
//! 4. [`TrainingStream`] mixes originals and sampled nodes.

mod cache;
mod category;
mod distribution;
mod stream;
mod tree;

pub use cache::{CachedNode, NodeSetCache};
pub use category::{categorize, global_frequency, Category, CategoryBins, CategoryGrid, COL_BINS, ROW_BINS};
pub use distribution::{build_distribution, gaussian_grid, sample_node, NodeSampler, ProbabilityGrid};
pub use stream::{training_stream, TrainingStream};
pub use tree::{explore_tree, node_frequency, AugNode, NodeSet, TreeConfig};

/// Default Gaussian spread, in bins.
pub const DEFAULT_SIGMA: f64 = 1.0;

/// Default probability of serving an augmented node instead of the original.
pub const DEFAULT_P_AUGMENT: f64 = 0.5;
