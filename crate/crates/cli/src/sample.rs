use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use tablemorph::annot::{serialize_annotation, DatasetManifest, ManifestEntry, Split};
use tablemorph::augment::standard_augment_document;
use tablemorph::pipeline::{
    build_distribution, gaussian_grid, node_frequency, CategoryGrid, NodeSetCache, ProbabilityGrid, TrainingStream,
};
use tablemorph::{Error, TableLayout};

use crate::config::RunConfig;
use crate::dataset::{cache_path, create_dir, file_stem, table_seed, write_file, Dataset};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Originals mixed with sampled tree nodes.
    Structural,
    /// Originals with random crop and color jitter only.
    Standard,
    /// Structural draws followed by the standard jitter.
    Both,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    /// Directory holding the `explore` output.
    #[arg(long)]
    caches: Option<PathBuf>,
    /// Draws per training table.
    #[arg(short = 'n', long = "count")]
    count: usize,
    #[arg(long, value_enum, default_value_t = Mode::Structural)]
    mode: Mode,
}

fn distribution(
    root: &TableLayout,
    nodes: &CategoryGrid,
    global: &CategoryGrid,
    cfg: &RunConfig,
) -> Result<Option<ProbabilityGrid>> {
    if nodes.sum() == 0.0 {
        return Ok(None);
    }
    let gauss = gaussian_grid(cfg.tree.bins.of(root)?, cfg.sigma)?;
    match build_distribution(&gauss, global, nodes) {
        Ok(p) => Ok(Some(p)),
        Err(Error::EmptyDistribution) => {
            eprintln!("warning: `{}` has no nodes in any populated category; using originals only", root.id);
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

fn sample_table(
    data: &Dataset,
    entry: &ManifestEntry,
    caches: &Path,
    out: &Path,
    global: &CategoryGrid,
    cfg: &RunConfig,
    args: &SampleArgs,
) -> Result<Vec<ManifestEntry>> {
    let doc = data.document(entry)?;
    let cache_file = cache_path(caches, &entry.id);
    if !cache_file.exists() {
        bail!(
            "no node cache for `{}` at {}; run `tablemorph explore` first",
            entry.id,
            cache_file.display()
        );
    }
    let bytes = std::fs::read(&cache_file).with_context(|| format!("reading {}", cache_file.display()))?;
    let nodes = NodeSetCache::parse(&bytes)
        .and_then(|c| c.restore(&doc.layout))
        .with_context(|| format!("cache {}", cache_file.display()))?;
    let p = distribution(&doc.layout, &node_frequency(&nodes), global, cfg)?;

    let rng = ChaCha8Rng::seed_from_u64(table_seed(cfg.seed, "sample", &entry.id));
    let mut stream = TrainingStream::new(&doc, &nodes, p.as_ref(), rng, cfg.p_augment)?;
    let mut jitter_rng = ChaCha8Rng::seed_from_u64(table_seed(cfg.seed, "standard", &entry.id));
    let original_png = std::fs::read(data.image_path(entry))?;

    let stem = file_stem(&entry.id);
    let mut written = Vec::with_capacity(args.count);
    for k in 0..args.count {
        let (node, mut draw) = match args.mode {
            Mode::Standard => (None, doc.clone()),
            _ => stream.next_with_index(),
        };
        if args.mode != Mode::Structural {
            draw = standard_augment_document(&draw, &cfg.baseline, &mut jitter_rng);
        }
        let image = PathBuf::from(format!("{stem}.{k:04}.png"));
        let annotation = PathBuf::from(format!("{stem}.{k:04}.json"));
        write_file(&out.join(&annotation), &serialize_annotation(&draw.layout)?)?;
        if node.is_none() && args.mode == Mode::Structural {
            write_file(&out.join(&image), &original_png)?;
        } else {
            write_file(&out.join(&image), &draw.image.encode_png())?;
        }
        written.push(ManifestEntry {
            id: format!("{}~{k}", entry.id),
            image,
            annotation,
            split: Some(Split::Train),
        });
    }
    Ok(written)
}

pub fn run(cfg: &RunConfig, args: &SampleArgs) -> Result<ExitCode> {
    let data = Dataset::load(cfg.manifest()?)?;
    let caches = cfg.cache_dir(args.caches.as_deref())?;
    let out = cfg.out()?;
    create_dir(out)?;
    if args.count == 0 {
        println!("nothing to sample");
        return Ok(ExitCode::SUCCESS);
    }
    let global = data.global_frequency(&cfg.tree.bins)?;
    let train = data.train();

    let per_table: Vec<Result<Vec<ManifestEntry>>> = crate::dataset::pool(cfg.jobs)?.install(|| {
        train
            .par_iter()
            .map(|e| sample_table(&data, e, caches, out, &global, cfg, args))
            .collect()
    });
    let mut manifest = DatasetManifest::default();
    for r in per_table {
        manifest.entries.extend(r?);
    }
    write_file(&out.join("manifest.json"), &manifest.to_bytes())?;
    println!("wrote {} samples from {} tables -> {}", manifest.entries.len(), train.len(), out.display());
    Ok(ExitCode::SUCCESS)
}
