use std::process::ExitCode;

use anyhow::Result;
use clap::Args;
use rayon::prelude::*;
use tablemorph::pixel_gt::{binarize, expand_separators};

use crate::config::RunConfig;
use crate::dataset::{create_dir, file_stem, write_file, Dataset};

#[derive(Args, Debug)]
pub struct GtgenArgs {
    /// Gray level below which a pixel counts as ink.
    #[arg(long)]
    ink_threshold: Option<u8>,
}

pub fn run(cfg: &RunConfig, args: &GtgenArgs) -> Result<ExitCode> {
    let data = Dataset::load(cfg.manifest()?)?;
    let out = cfg.out()?;
    create_dir(out)?;
    let threshold = args.ink_threshold.unwrap_or(cfg.ink_threshold);

    let results: Vec<Result<()>> = crate::dataset::pool(cfg.jobs)?.install(|| {
        data.manifest
            .entries
            .par_iter()
            .map(|entry| {
                let doc = data.document(entry)?;
                let (rows, cols) = expand_separators(&doc.layout, &binarize(&doc.image, threshold))?;
                let stem = file_stem(&entry.id);
                write_file(&out.join(format!("{stem}.row.png")), &rows.to_raster().encode_png())?;
                write_file(&out.join(format!("{stem}.col.png")), &cols.to_raster().encode_png())?;
                Ok(())
            })
            .collect()
    });
    let n = results.len();
    results.into_iter().collect::<Result<()>>()?;
    println!("wrote separator masks for {n} tables -> {}", out.display());
    Ok(ExitCode::SUCCESS)
}
