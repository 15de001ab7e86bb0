use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use tablemorph::annot::{read_annotation, Split};
use tablemorph::metrics::{evaluate, KindReport, SegmentationReport};

use crate::config::RunConfig;
use crate::dataset::{file_stem, write_file, Dataset};

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SplitArg {
    Train,
    Test,
    Val,
}

impl From<SplitArg> for Split {
    fn from(s: SplitArg) -> Split {
        match s {
            SplitArg::Train => Split::Train,
            SplitArg::Test => Split::Test,
            SplitArg::Val => Split::Val,
        }
    }
}

#[derive(Args, Debug)]
pub struct EvaluateArgs {
    /// Directory with one `<id>.json` prediction per table.
    #[arg(long)]
    pred: PathBuf,
    /// Only score tables of this split.
    #[arg(long, value_enum)]
    split: Option<SplitArg>,
    /// Also write a CSV summary here.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Serialize)]
struct EvalReport {
    threshold: f64,
    dataset: SegmentationReport,
    tables: BTreeMap<String, SegmentationReport>,
    missing: Vec<String>,
    invalid: BTreeMap<String, String>,
}

enum TableResult {
    Scored(SegmentationReport),
    Missing,
    Invalid(String),
}

fn write_csv(report: &EvalReport) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "table",
        "kind",
        "gtCount",
        "correct",
        "overSeg",
        "underSeg",
        "correctPct",
        "overPct",
        "underPct",
    ])?;
    let rows = std::iter::once(("*", &report.dataset)).chain(report.tables.iter().map(|(k, v)| (k.as_str(), v)));
    for (table, r) in rows {
        for (kind, k) in [("row", &r.row), ("column", &r.column), ("cell", &r.cell)] {
            let KindReport {
                gt_count,
                correct,
                over_seg,
                under_seg,
            } = *k;
            w.write_record([
                table.to_string(),
                kind.to_string(),
                gt_count.to_string(),
                correct.to_string(),
                over_seg.to_string(),
                under_seg.to_string(),
                format!("{:.2}", k.correct_pct()),
                format!("{:.2}", k.over_pct()),
                format!("{:.2}", k.under_pct()),
            ])?;
        }
    }
    Ok(w.into_inner()?)
}

pub fn run(cfg: &RunConfig, args: &EvaluateArgs) -> Result<ExitCode> {
    let data = Dataset::load(cfg.manifest()?)?;
    let entries: Vec<_> = match args.split {
        Some(s) => data.manifest.in_split(s.into()).collect(),
        None => data.manifest.entries.iter().collect(),
    };

    let results: Vec<Result<(String, TableResult)>> = crate::dataset::pool(cfg.jobs)?.install(|| {
        entries
            .par_iter()
            .map(|entry| {
                let gt = data.layout(entry)?;
                let pred_path = args.pred.join(format!("{}.json", file_stem(&entry.id)));
                let result = if !pred_path.exists() {
                    TableResult::Missing
                } else {
                    match read_annotation(&pred_path).and_then(|pred| evaluate(&gt, &pred, cfg.threshold)) {
                        Ok(r) => TableResult::Scored(r),
                        Err(e) => TableResult::Invalid(e.to_string()),
                    }
                };
                Ok((entry.id.clone(), result))
            })
            .collect()
    });

    let mut report = EvalReport {
        threshold: cfg.threshold,
        dataset: SegmentationReport::default(),
        tables: BTreeMap::new(),
        missing: Vec::new(),
        invalid: BTreeMap::new(),
    };
    for r in results {
        let (id, result) = r?;
        match result {
            TableResult::Scored(s) => {
                report.dataset.add(&s);
                report.tables.insert(id, s);
            }
            TableResult::Missing => report.missing.push(id),
            TableResult::Invalid(msg) => {
                report.invalid.insert(id, msg);
            }
        }
    }
    report.missing.sort();

    let mut json = serde_json::to_vec_pretty(&report)?;
    json.push(b'\n');
    match &cfg.out {
        Some(path) => {
            write_file(path, &json)?;
            let d = &report.dataset;
            for (name, k) in [("rows", &d.row), ("columns", &d.column), ("cells", &d.cell)] {
                println!(
                    "{name:<8} correct {:>6.2}%  over {:>6.2}%  under {:>6.2}%  ({} segments)",
                    k.correct_pct(),
                    k.over_pct(),
                    k.under_pct(),
                    k.gt_count
                );
            }
        }
        None => print!("{}", String::from_utf8(json).context("report is UTF-8")?),
    }
    if let Some(path) = &args.csv {
        write_file(path, &write_csv(&report)?)?;
    }

    for id in &report.missing {
        eprintln!("missing prediction: {id}");
    }
    for (id, msg) in &report.invalid {
        eprintln!("invalid prediction for {id}: {msg}");
    }
    if report.missing.is_empty() && report.invalid.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::FAILURE)
    }
}
