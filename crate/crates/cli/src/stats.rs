use std::collections::BTreeMap;
use std::process::ExitCode;

use anyhow::Result;
use clap::Args;
use serde::Serialize;
use tablemorph::annot::Split;
use tablemorph::pipeline::{CategoryGrid, COL_BINS, ROW_BINS};

use crate::config::RunConfig;
use crate::dataset::{format_grid, write_file, Dataset};

#[derive(Args, Debug)]
pub struct StatsArgs {}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Stats {
    tables: usize,
    splits: BTreeMap<&'static str, usize>,
    /// Training tables per category, rows `A..E`, columns `1..4`.
    global_frequency: [[f64; COL_BINS]; ROW_BINS],
}

pub fn run(cfg: &RunConfig, _args: &StatsArgs) -> Result<ExitCode> {
    let data = Dataset::load(cfg.manifest()?)?;
    let m = &data.manifest;
    let unsplit = m.entries.iter().filter(|e| e.split.is_none()).count();
    let splits = BTreeMap::from([
        ("train", m.count(Split::Train)),
        ("test", m.count(Split::Test)),
        ("val", m.count(Split::Val)),
        ("unsplit", unsplit),
    ]);
    let global: CategoryGrid = data.global_frequency(&cfg.tree.bins)?;

    println!("{} tables", m.entries.len());
    for (name, n) in &splits {
        println!("  {name:<8}{n}");
    }
    println!("training tables by category:\n{}", format_grid(&global));

    if let Some(out) = &cfg.out {
        let stats = Stats {
            tables: m.entries.len(),
            splits,
            global_frequency: global.0,
        };
        let mut json = serde_json::to_vec_pretty(&stats)?;
        json.push(b'\n');
        write_file(out, &json)?;
    }
    Ok(ExitCode::SUCCESS)
}
