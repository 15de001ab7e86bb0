use rand::Rng;

use super::distribution::{NodeSampler, ProbabilityGrid};
use super::tree::NodeSet;
use crate::augment::replay;
use crate::error::{Error, Result};
use crate::table::TableDocument;

/// Endless stream of training samples for one table: the original with
/// probability `1 − p_augment`, otherwise a sampled node rendered by
/// replaying its path on the original.
pub struct TrainingStream<'a, T, R> {
    root: &'a TableDocument,
    nodes: &'a NodeSet<T>,
    sampler: Option<NodeSampler>,
    rng: R,
    p_augment: f64,
}

impl<'a, T, R: Rng> TrainingStream<'a, T, R> {
    /// `p` may be `None` (or `nodes` empty), in which case the stream only
    /// yields the original.
    pub fn new(
        root: &'a TableDocument,
        nodes: &'a NodeSet<T>,
        p: Option<&ProbabilityGrid>,
        rng: R,
        p_augment: f64,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_augment) {
            return Err(Error::Config(format!("p_augment must be in [0, 1], got {p_augment}")));
        }
        let sampler = match p {
            Some(p) if !nodes.is_empty() => Some(NodeSampler::new(nodes, p)?),
            _ => None,
        };
        Ok(TrainingStream {
            root,
            nodes,
            sampler,
            rng,
            p_augment,
        })
    }

    /// Like `next`, but also reports which node was drawn (`None` for the
    /// original).
    pub fn next_with_index(&mut self) -> (Option<usize>, TableDocument) {
        let augment = self.rng.gen_bool(self.p_augment);
        match &self.sampler {
            Some(s) if augment => {
                let i = s.sample_index(&mut self.rng);
                let doc = replay(self.root, &self.nodes.nodes()[i].path).expect("node paths replay on their root");
                (Some(i), doc)
            }
            _ => (None, self.root.clone()),
        }
    }
}

impl<T, R: Rng> Iterator for TrainingStream<'_, T, R> {
    type Item = TableDocument;

    fn next(&mut self) -> Option<TableDocument> {
        Some(self.next_with_index().1)
    }
}

/// Convenience constructor mirroring [`TrainingStream::new`].
pub fn training_stream<'a, T, R: Rng>(
    table: &'a TableDocument,
    nodes: &'a NodeSet<T>,
    p: Option<&ProbabilityGrid>,
    rng: R,
    p_augment: f64,
) -> Result<TrainingStream<'a, T, R>> {
    TrainingStream::new(table, nodes, p, rng, p_augment)
}
