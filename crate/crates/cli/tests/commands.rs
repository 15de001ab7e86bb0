mod common;

use std::path::Path;

use common::{ok, random_document, s, snapshot, tablemorph, write_dataset};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tablemorph::annot::{parse_annotation, serialize_annotation, DatasetManifest, Split};
use tablemorph::pipeline::NodeSetCache;
use tablemorph::table::layout_from_spans;
use tablemorph::{Raster, TableDocument};

/// `n` random tables, two per page: `p0#0`, `p0#1`, `p1#0`, ...
fn dataset(dir: &Path, n: usize) -> std::path::PathBuf {
    paged_dataset(dir, n, 2)
}

fn paged_dataset(dir: &Path, n: usize, per_page: usize) -> std::path::PathBuf {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let docs: Vec<TableDocument> = (0..n)
        .map(|k| random_document(&mut rng, &format!("p{}#{}", k / per_page, k % per_page), 8, 6, true))
        .collect();
    write_dataset(dir, &docs)
}

#[test]
fn split_counts_and_rerun() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = paged_dataset(dir.path(), 10, 1);
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    ok(&["split", "--manifest", s(&manifest), "--out", s(&a), "--seed", "3"]);
    ok(&["split", "--manifest", s(&manifest), "--out", s(&b), "--seed", "3"]);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let m = DatasetManifest::parse(&std::fs::read(&a).unwrap()).unwrap();
    assert_eq!((m.count(Split::Train), m.count(Split::Test), m.count(Split::Val)), (7, 2, 1));
}

#[test]
fn split_keeps_pages_together() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dataset(dir.path(), 10);
    ok(&["split", "--manifest", s(&manifest), "--seed", "3"]);
    let m = DatasetManifest::load(&manifest).unwrap();
    for pair in m.entries.chunks(2) {
        assert_eq!(pair[0].split, pair[1].split);
    }
    // val wants one table but every page holds two
    assert_eq!((m.count(Split::Train), m.count(Split::Test), m.count(Split::Val)), (8, 2, 0));
}

#[test]
fn split_ratios_must_sum_to_one() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dataset(dir.path(), 4);
    let out = tablemorph(&["split", "--manifest", s(&manifest), "--ratios", "0.6,0.2,0.1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sum to 1"));
}

#[test]
fn missing_manifest_flag_is_config_error() {
    assert_eq!(tablemorph(&["stats"]).status.code(), Some(2));
}

#[test]
fn bad_config_file_is_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "sigma = 1.0\nbogus = 3\n").unwrap();
    assert_eq!(tablemorph(&["--config", s(&cfg), "stats"]).status.code(), Some(2));
    std::fs::write(&cfg, "sigma = -1.0\n").unwrap();
    assert_eq!(tablemorph(&["--config", s(&cfg), "stats"]).status.code(), Some(2));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dataset(dir.path(), 6);
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "seed = 11\n[paths]\nmanifest = \"manifest.json\"\nout = \"split.json\"\n").unwrap();
    ok(&["--config", s(&cfg), "split"]);
    let from_file = std::fs::read(dir.path().join("split.json")).unwrap();
    let flagged = dir.path().join("flagged.json");
    ok(&["split", "--manifest", s(&manifest), "--out", s(&flagged), "--seed", "11"]);
    assert_eq!(from_file, std::fs::read(&flagged).unwrap());
    let other = dir.path().join("other.json");
    ok(&["--config", s(&cfg), "split", "--seed", "12", "--out", s(&other)]);
    assert!(other.exists());
}

#[test]
fn explore_writes_replayable_caches() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dataset(dir.path(), 3);
    let caches = dir.path().join("caches");
    ok(&["explore", "--manifest", s(&manifest), "--out", s(&caches), "--seed", "5"]);
    let first = snapshot(&caches);
    assert_eq!(first.len(), 3);
    ok(&["explore", "--manifest", s(&manifest), "--out", s(&caches), "--seed", "5", "--jobs", "1"]);
    assert_eq!(snapshot(&caches), first);

    for k in 0..3 {
        let id = format!("p{}#{}", k / 2, k % 2);
        let cache = NodeSetCache::parse(&first[Path::new(&format!("{id}.nodes.json"))]).unwrap();
        let root = parse_annotation(&std::fs::read(dir.path().join(format!("{id}.json"))).unwrap()).unwrap();
        let nodes = cache.restore(&root).unwrap();
        for n in nodes.iter() {
            assert!((6..=10).contains(&n.depth()));
            assert!(n.table.validate().is_empty());
        }
    }
}

#[test]
fn explore_single_cell_table_gives_empty_cache() {
    let dir = tempfile::tempdir().unwrap();
    let layout = layout_from_spans("solo", &[30], &[20], &[]);
    let doc = TableDocument::new(layout, Raster::filled(30, 20, 1, 255));
    let manifest = write_dataset(dir.path(), &[doc]);
    let caches = dir.path().join("caches");
    ok(&["explore", "--manifest", s(&manifest), "--out", s(&caches)]);
    let cache = NodeSetCache::parse(&std::fs::read(caches.join("solo.nodes.json")).unwrap()).unwrap();
    assert!(cache.empty);
    assert!(cache.nodes.is_empty());
}

#[test]
fn explore_skips_invalid_tables() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dataset(dir.path(), 2);
    std::fs::write(dir.path().join("p0#1.json"), "{\"id\": 3}").unwrap();
    let caches = dir.path().join("caches");
    let out = ok(&["explore", "--manifest", s(&manifest), "--out", s(&caches)]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("skipped 1"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("p0#1"));
    assert_eq!(snapshot(&caches).len(), 1);
}

#[test]
fn sample_outputs_are_valid_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dataset(dir.path(), 2);
    let caches = dir.path().join("caches");
    ok(&["explore", "--manifest", s(&manifest), "--out", s(&caches), "--seed", "1"]);
    let run = |out: &Path| {
        ok(&[
            "sample", "--manifest", s(&manifest), "--caches", s(&caches), "--out", s(out), "-n", "5", "--seed", "9",
        ]);
    };
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    run(&a);
    run(&b);
    assert_eq!(snapshot(&a), snapshot(&b));

    let m = DatasetManifest::load(&a.join("manifest.json")).unwrap();
    assert_eq!(m.entries.len(), 10);
    for e in &m.entries {
        let doc = tablemorph::annot::load_document(&a.join(&e.annotation), &a.join(&e.image)).unwrap();
        assert!(doc.validate().is_empty());
    }
}

#[test]
fn sample_zero_draws_is_empty() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dataset(dir.path(), 2);
    let caches = dir.path().join("caches");
    ok(&["explore", "--manifest", s(&manifest), "--out", s(&caches)]);
    let out = dir.path().join("out");
    ok(&["sample", "--manifest", s(&manifest), "--caches", s(&caches), "--out", s(&out), "-n", "0"]);
    assert!(snapshot(&out).is_empty());
}

#[test]
fn sample_without_augmentation_copies_originals() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dataset(dir.path(), 2);
    let caches = dir.path().join("caches");
    ok(&["explore", "--manifest", s(&manifest), "--out", s(&caches)]);
    let out = dir.path().join("out");
    ok(&[
        "sample", "--manifest", s(&manifest), "--caches", s(&caches), "--out", s(&out), "-n", "3", "--p-augment", "0",
    ]);
    for id in ["p0#0", "p0#1"] {
        let png = std::fs::read(dir.path().join(format!("{id}.png"))).unwrap();
        let ann = std::fs::read(dir.path().join(format!("{id}.json"))).unwrap();
        for k in 0..3 {
            assert_eq!(std::fs::read(out.join(format!("{id}.{k:04}.png"))).unwrap(), png);
            assert_eq!(std::fs::read(out.join(format!("{id}.{k:04}.json"))).unwrap(), ann);
        }
    }
}

#[test]
fn sample_standard_mode_is_valid() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dataset(dir.path(), 2);
    let caches = dir.path().join("caches");
    ok(&["explore", "--manifest", s(&manifest), "--out", s(&caches)]);
    let out = dir.path().join("out");
    ok(&[
        "sample", "--manifest", s(&manifest), "--caches", s(&caches), "--out", s(&out), "-n", "4", "--mode", "both",
    ]);
    let m = DatasetManifest::load(&out.join("manifest.json")).unwrap();
    for e in &m.entries {
        tablemorph::annot::load_document(&out.join(&e.annotation), &out.join(&e.image)).unwrap();
    }
}

#[test]
fn sample_without_cache_says_to_explore() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dataset(dir.path(), 2);
    let caches = dir.path().join("caches");
    std::fs::create_dir(&caches).unwrap();
    let out = dir.path().join("out");
    let r = tablemorph(&["sample", "--manifest", s(&manifest), "--caches", s(&caches), "--out", s(&out), "-n", "1"]);
    assert_eq!(r.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&r.stderr).contains("tablemorph explore"));
}

#[test]
fn gtgen_masks() {
    let dir = tempfile::tempdir().unwrap();
    let blank = TableDocument::new(layout_from_spans("blank", &[30, 30], &[20], &[]), Raster::filled(60, 20, 1, 255));
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let busy = random_document(&mut rng, "busy", 6, 5, false);
    let (nr, nc) = (busy.layout.row_count(), busy.layout.col_count());
    let manifest = write_dataset(dir.path(), &[blank, busy]);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    ok(&["gtgen", "--manifest", s(&manifest), "--out", s(&a)]);
    ok(&["gtgen", "--manifest", s(&manifest), "--out", s(&b), "--jobs", "1"]);
    assert_eq!(snapshot(&a), snapshot(&b));

    let col = Raster::load_png(&a.join("blank.col.png")).unwrap();
    assert!(col.as_bytes().iter().all(|&v| v == 255));
    let row = Raster::load_png(&a.join("blank.row.png")).unwrap();
    assert!(row.as_bytes().iter().all(|&v| v == 0));

    // separate strips along the top edge and the left edge
    let strips = |mask: &Raster, along_x: bool| {
        let n = if along_x { mask.width() } else { mask.height() };
        let on = |i| if along_x { mask.pixel(i, 0)[0] } else { mask.pixel(0, i)[0] } == 255;
        (0..n).filter(|&i| on(i) && (i == 0 || !on(i - 1))).count()
    };
    let col = Raster::load_png(&a.join("busy.col.png")).unwrap();
    let row = Raster::load_png(&a.join("busy.row.png")).unwrap();
    assert_eq!(strips(&col, true), nc - 1);
    assert_eq!(strips(&row, false), nr - 1);
}

fn write_layout(dir: &Path, id: &str, layout: &tablemorph::TableLayout) {
    std::fs::create_dir_all(dir).unwrap();
    std::fs::write(dir.join(format!("{id}.json")), serialize_annotation(layout).unwrap()).unwrap();
}

#[test]
fn evaluate_perfect_merged_and_missing() {
    let dir = tempfile::tempdir().unwrap();
    let gt = layout_from_spans("four", &[20, 20, 20, 20], &[10, 10], &[]);
    let other = layout_from_spans("other", &[15, 15], &[10], &[]);
    let manifest = write_dataset(
        dir.path(),
        &[
            TableDocument::new(gt.clone(), Raster::filled(80, 20, 1, 255)),
            TableDocument::new(other.clone(), Raster::filled(30, 10, 1, 255)),
        ],
    );

    let perfect = dir.path().join("perfect");
    write_layout(&perfect, "four", &gt);
    write_layout(&perfect, "other", &other);
    let report = dir.path().join("perfect.json");
    let csv = dir.path().join("perfect.csv");
    ok(&["evaluate", "--manifest", s(&manifest), "--pred", s(&perfect), "--out", s(&report), "--csv", s(&csv)]);
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&report).unwrap()).unwrap();
    for kind in ["row", "column", "cell"] {
        assert_eq!(v["dataset"][kind]["correctPct"], 100.0);
        assert_eq!(v["dataset"][kind]["overPct"], 0.0);
        assert_eq!(v["dataset"][kind]["underPct"], 0.0);
    }
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("table,kind,gtCount,correct,overSeg,underSeg,correctPct,overPct,underPct\n"));
    assert!(text.contains("*,cell,10,10,0,0,100.00,0.00,0.00\n"));

    let merged = dir.path().join("merged");
    write_layout(&merged, "four", &layout_from_spans("four", &[20, 20, 40], &[10, 10], &[]));
    let report = dir.path().join("merged.json");
    let r = tablemorph(&["evaluate", "--manifest", s(&manifest), "--pred", s(&merged), "--out", s(&report)]);
    assert_eq!(r.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&report).unwrap()).unwrap();
    assert_eq!(v["missing"], serde_json::json!(["other"]));
    let four = &v["tables"]["four"];
    assert_eq!(four["column"]["gtCount"], 4);
    assert_eq!(four["column"]["correct"], 2);
    assert_eq!(four["column"]["overSeg"], 0);
    assert_eq!(four["column"]["underSeg"], 0);
    assert_eq!(four["row"]["correct"], 2);
    assert_eq!(four["cell"]["correct"], 4);
    assert_eq!(four["cell"]["correctPct"], 50.0);
    // the missing table does not count towards the pooled numbers
    assert_eq!(v["dataset"]["column"]["gtCount"], 4);
}

#[test]
fn evaluate_size_mismatch_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let gt = layout_from_spans("t", &[20, 20], &[10], &[]);
    let manifest = write_dataset(dir.path(), &[TableDocument::new(gt, Raster::filled(40, 10, 1, 255))]);
    let pred = dir.path().join("pred");
    write_layout(&pred, "t", &layout_from_spans("t", &[20, 21], &[10], &[]));
    let r = tablemorph(&["evaluate", "--manifest", s(&manifest), "--pred", s(&pred)]);
    assert_eq!(r.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&r.stdout).unwrap();
    assert!(v["invalid"]["t"].is_string());
}

#[test]
fn stats_reports_splits() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = paged_dataset(dir.path(), 10, 1);
    ok(&["split", "--manifest", s(&manifest)]);
    let out = dir.path().join("stats.json");
    ok(&["stats", "--manifest", s(&manifest), "--out", s(&out)]);
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(v["tables"], 10);
    assert_eq!(v["splits"]["train"], 7);
    let total: f64 = v["globalFrequency"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|r| r.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()))
        .sum();
    assert_eq!(total, 7.0);
}
