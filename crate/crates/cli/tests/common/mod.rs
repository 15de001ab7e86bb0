#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::Rng;
use tablemorph::annot::{serialize_annotation, DatasetManifest, ManifestEntry};
use tablemorph::table::layout_from_spans;
use tablemorph::{Raster, TableDocument, TableLayout};

/// Random spanning cells for an `rows × cols` grid. Each free grid position
/// starts a span with probability `p_span`; spans never overlap.
pub fn random_spans<R: Rng>(rng: &mut R, rows: usize, cols: usize, p_span: f64) -> Vec<(usize, usize, usize, usize)> {
    let mut taken = vec![false; rows * cols];
    let mut spans = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if taken[r * cols + c] || !rng.gen_bool(p_span) {
                continue;
            }
            let mut ec = c;
            let want_c = rng.gen_range(0..3);
            while ec + 1 < cols && ec - c < want_c && !taken[r * cols + ec + 1] {
                ec += 1;
            }
            let er = (r + rng.gen_range(0..3)).min(rows - 1);
            let er = (r..=er)
                .take_while(|&rr| (c..=ec).all(|cc| !taken[rr * cols + cc]))
                .last()
                .unwrap_or(r);
            if er == r && ec == c {
                continue;
            }
            for rr in r..=er {
                for cc in c..=ec {
                    taken[rr * cols + cc] = true;
                }
            }
            spans.push((r, er, c, ec));
        }
    }
    spans
}

pub fn random_layout<R: Rng>(rng: &mut R, id: &str, max_rows: usize, max_cols: usize, spanning: bool) -> TableLayout {
    let rows = rng.gen_range(1..=max_rows);
    let cols = rng.gen_range(1..=max_cols);
    let widths: Vec<u32> = (0..cols).map(|_| rng.gen_range(8..=30)).collect();
    let heights: Vec<u32> = (0..rows).map(|_| rng.gen_range(8..=16)).collect();
    let spans = if spanning { random_spans(rng, rows, cols, 0.25) } else { Vec::new() };
    layout_from_spans(id, &widths, &heights, &spans)
}

/// White image with one dark "word" inside each cell, inset from the cell
/// border so that separators fall on whitespace.
pub fn render<R: Rng>(rng: &mut R, layout: &TableLayout, channels: u8) -> Raster {
    let mut img = Raster::filled(layout.width(), layout.height(), channels, 255);
    for cell in &layout.cells {
        let b = cell.bbox;
        let ix = rng.gen_range(2..=(b.width() / 3).max(2));
        let iy = rng.gen_range(2..=(b.height() / 4).max(2));
        if b.width() > 2 * ix && b.height() > 2 * iy {
            img.fill_rect(b.x1 + ix, b.y1 + iy, b.x2 - ix, b.y2 - iy, rng.gen_range(0..100));
        }
    }
    img
}

pub fn random_document<R: Rng>(rng: &mut R, id: &str, max_rows: usize, max_cols: usize, spanning: bool) -> TableDocument {
    let layout = random_layout(rng, id, max_rows, max_cols, spanning);
    let channels = if rng.gen_bool(0.5) { 1 } else { 3 };
    let image = render(rng, &layout, channels);
    TableDocument::new(layout, image)
}

/// Writes `<id>.png`, `<id>.json` and `manifest.json` into `dir`.
pub fn write_dataset(dir: &Path, docs: &[TableDocument]) -> PathBuf {
    std::fs::create_dir_all(dir).unwrap();
    let mut manifest = DatasetManifest::default();
    for doc in docs {
        let image = PathBuf::from(format!("{}.png", doc.id()));
        let annotation = PathBuf::from(format!("{}.json", doc.id()));
        doc.image.save_png(&dir.join(&image)).unwrap();
        std::fs::write(dir.join(&annotation), serialize_annotation(&doc.layout).unwrap()).unwrap();
        manifest.entries.push(ManifestEntry {
            id: doc.id().to_string(),
            image,
            annotation,
            split: None,
        });
    }
    let path = dir.join("manifest.json");
    manifest.save(&path).unwrap();
    path
}

pub fn tablemorph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tablemorph"))
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn ok(args: &[&str]) -> Output {
    let out = tablemorph(args);
    assert!(
        out.status.success(),
        "tablemorph {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

pub fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Every file under `dir`, keyed by relative path.
pub fn snapshot(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.insert(p.strip_prefix(dir).unwrap().to_path_buf(), std::fs::read(&p).unwrap());
            }
        }
    }
    out
}
