use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;

use super::category::{Category, CategoryGrid, COL_BINS, ROW_BINS};
use super::tree::{AugNode, NodeSet};
use crate::error::{Error, Result};

/// Unnormalized 2-D Gaussian over bin coordinates, 1 at `center`.
pub fn gaussian_grid(center: Category, sigma: f64) -> Result<CategoryGrid> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::Domain(format!("sigma must be positive, got {sigma}")));
    }
    let mut g = CategoryGrid::zeros();
    for c in Category::all() {
        let dr = c.row_bin() as f64 - center.row_bin() as f64;
        let dc = c.col_bin() as f64 - center.col_bin() as f64;
        g[c] = (-(dr * dr + dc * dc) / (2.0 * sigma * sigma)).exp();
    }
    Ok(g)
}

/// A normalized distribution over the 20 categories.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbabilityGrid(CategoryGrid);

impl ProbabilityGrid {
    pub fn grid(&self) -> &CategoryGrid {
        &self.0
    }

    pub fn get(&self, c: Category) -> f64 {
        self.0[c]
    }

    pub fn argmax(&self) -> Category {
        Category::all()
            .max_by(|a, b| self.0[*a].total_cmp(&self.0[*b]).then(b.cmp(a)))
            .expect("grid is non-empty")
    }
}

/// Elementwise product of the three grids, normalized to sum 1.
pub fn build_distribution(gauss: &CategoryGrid, global: &CategoryGrid, nodes: &CategoryGrid) -> Result<ProbabilityGrid> {
    let mut p = CategoryGrid::zeros();
    for c in Category::all() {
        let (a, b, n) = (gauss[c], global[c], nodes[c]);
        if a < 0.0 || b < 0.0 || n < 0.0 {
            return Err(Error::Domain(format!("negative grid entry at {c}")));
        }
        p[c] = a * b * n;
    }
    let total = p.sum();
    if !(total > 0.0) || !total.is_finite() {
        return Err(Error::EmptyDistribution);
    }
    Ok(ProbabilityGrid(p.scaled(1.0 / total)))
}

/// Draws nodes: first a category from `P`, then a node uniformly among that
/// category's nodes.
#[derive(Clone, Debug)]
pub struct NodeSampler {
    categories: WeightedIndex<f64>,
    buckets: Vec<Vec<usize>>,
}

impl NodeSampler {
    pub fn new<T>(nodes: &NodeSet<T>, p: &ProbabilityGrid) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::Domain("cannot sample from an empty node set".into()));
        }
        let mut buckets = vec![Vec::new(); ROW_BINS * COL_BINS];
        for (i, n) in nodes.iter().enumerate() {
            buckets[n.category.flat()].push(i);
        }
        for c in Category::all() {
            if p.get(c) > 0.0 && buckets[c.flat()].is_empty() {
                return Err(Error::Internal(format!(
                    "probability {} on category {c} which has no nodes",
                    p.get(c)
                )));
            }
        }
        let weights: Vec<f64> = p.grid().values().collect();
        let categories = WeightedIndex::new(&weights).map_err(|e| Error::Internal(e.to_string()))?;
        Ok(NodeSampler { categories, buckets })
    }

    /// Index into the node set of the next draw.
    pub fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let bucket = &self.buckets[self.categories.sample(rng)];
        bucket[rng.gen_range(0..bucket.len())]
    }
}

/// One draw from `nodes` under `p`.
pub fn sample_node<'a, T, R: Rng + ?Sized>(nodes: &'a NodeSet<T>, p: &ProbabilityGrid, rng: &mut R) -> Result<&'a AugNode<T>> {
    let s = NodeSampler::new(nodes, p)?;
    Ok(&nodes.nodes()[s.sample_index(rng)])
}
