use std::path::Path;
use std::process::ExitCode;

use anyhow::Result;
use clap::Args;
use tablemorph::annot::{split_dataset, training_fraction, Split, SplitSpec};
use tablemorph::Error;

use crate::config::RunConfig;
use crate::dataset::{write_file, Dataset};

#[derive(Args, Debug)]
pub struct SplitArgs {
    /// Train, test and validation proportions.
    #[arg(long, value_delimiter = ',')]
    ratios: Option<Vec<f64>>,
    /// Keep only this fraction of the training tables.
    #[arg(long)]
    train_fraction: Option<f64>,
}

pub fn run(cfg: &RunConfig, args: &SplitArgs) -> Result<ExitCode> {
    let ratios = match &args.ratios {
        Some(r) => <[f64; 3]>::try_from(r.as_slice())
            .map_err(|_| Error::Config(format!("--ratios takes three values (train,test,val), got {}", r.len())))?,
        None => cfg.ratios,
    };
    let spec = SplitSpec::new(ratios, cfg.seed)?;
    let manifest_path = cfg.manifest()?;
    let out_path = cfg.out.as_deref().unwrap_or(manifest_path);
    let data = Dataset::load(manifest_path)?;

    let mut split = split_dataset(&data.manifest, &spec)?;
    if let Some(f) = args.train_fraction {
        split = training_fraction(&split, f, cfg.seed)?;
    }

    let out_base = out_path.parent().unwrap_or(Path::new(""));
    if out_base != data.base {
        let base = std::path::absolute(&data.base)?;
        for e in &mut split.entries {
            e.image = base.join(&e.image);
            e.annotation = base.join(&e.annotation);
        }
    }
    write_file(out_path, &split.to_bytes())?;
    println!(
        "train {}  test {}  val {}  -> {}",
        split.count(Split::Train),
        split.count(Split::Test),
        split.count(Split::Val),
        out_path.display()
    );
    Ok(ExitCode::SUCCESS)
}
