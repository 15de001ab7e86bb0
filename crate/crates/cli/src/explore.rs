use std::process::ExitCode;

use anyhow::Result;
use clap::Args;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use tablemorph::pipeline::{explore_tree, node_frequency, CategoryGrid, NodeSetCache};

use crate::config::RunConfig;
use crate::dataset::{cache_path, create_dir, format_grid, table_seed, write_file, Dataset};

#[derive(Args, Debug)]
pub struct ExploreArgs {
    /// Print the node histogram of every table.
    #[arg(long)]
    verbose: bool,
}

enum Outcome {
    Explored { id: String, freq: CategoryGrid },
    Skipped { id: String, reason: String },
}

pub fn run(cfg: &RunConfig, args: &ExploreArgs) -> Result<ExitCode> {
    let data = Dataset::load(cfg.manifest()?)?;
    let out = cfg.out.as_deref().map_or_else(|| cfg.cache_dir(None), Ok)?;
    create_dir(out)?;
    let train = data.train();

    let outcomes: Vec<Result<Outcome>> = crate::dataset::pool(cfg.jobs)?.install(|| {
        train
            .par_iter()
            .map(|entry| {
                let root = match data.layout(entry) {
                    Ok(l) => l,
                    Err(e) => {
                        return Ok(Outcome::Skipped {
                            id: entry.id.clone(),
                            reason: format!("{e:#}"),
                        })
                    }
                };
                let seed = table_seed(cfg.seed, "explore", &entry.id);
                let nodes = explore_tree(&root, &cfg.tree, &mut ChaCha8Rng::seed_from_u64(seed))?;
                let cache = NodeSetCache::from_node_set(&nodes, seed, &cfg.tree);
                write_file(&cache_path(out, &entry.id), &cache.to_bytes())?;
                Ok(Outcome::Explored {
                    id: entry.id.clone(),
                    freq: node_frequency(&nodes),
                })
            })
            .collect()
    });

    let mut explored = 0;
    let mut skipped = 0;
    for outcome in outcomes {
        match outcome? {
            Outcome::Explored { id, freq } => {
                explored += 1;
                if args.verbose {
                    println!("{id}: {} nodes\n{}", freq.sum(), format_grid(&freq));
                }
            }
            Outcome::Skipped { id, reason } => {
                skipped += 1;
                eprintln!("warning: skipping `{id}`: {reason}");
            }
        }
    }
    println!("global table frequency:\n{}", format_grid(&data.global_frequency(&cfg.tree.bins)?));
    println!("explored {explored}, skipped {skipped} -> {}", out.display());
    Ok(ExitCode::SUCCESS)
}
