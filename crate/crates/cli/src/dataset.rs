use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use sha2::{Digest, Sha256};
use tablemorph::annot::{self, DatasetManifest, ManifestEntry, Split};
use tablemorph::pipeline::{global_frequency, CategoryBins, CategoryGrid};
use tablemorph::{TableDocument, TableLayout};

/// A manifest together with the directory its relative paths start from.
pub struct Dataset {
    pub base: PathBuf,
    pub manifest: DatasetManifest,
}

impl Dataset {
    pub fn load(path: &Path) -> Result<Self> {
        let manifest = DatasetManifest::load(path).with_context(|| format!("loading manifest {}", path.display()))?;
        Ok(Dataset {
            base: path.parent().unwrap_or(Path::new("")).to_path_buf(),
            manifest,
        })
    }

    /// Entries used for augmentation. Entries without a split count as
    /// training data.
    pub fn train(&self) -> Vec<&ManifestEntry> {
        self.manifest
            .entries
            .iter()
            .filter(|e| matches!(e.split, None | Some(Split::Train)))
            .collect()
    }

    pub fn layout(&self, entry: &ManifestEntry) -> Result<TableLayout> {
        let (_, ann) = self.manifest.resolve(&self.base, entry);
        annot::read_annotation(&ann).with_context(|| format!("table `{}`", entry.id))
    }

    pub fn document(&self, entry: &ManifestEntry) -> Result<TableDocument> {
        let (img, ann) = self.manifest.resolve(&self.base, entry);
        annot::load_document(&ann, &img).with_context(|| format!("table `{}`", entry.id))
    }

    pub fn image_path(&self, entry: &ManifestEntry) -> PathBuf {
        self.manifest.resolve(&self.base, entry).0
    }

    /// Category histogram of the training tables that load cleanly.
    pub fn global_frequency(&self, bins: &CategoryBins) -> Result<CategoryGrid> {
        let layouts: Vec<TableLayout> = self.train().into_iter().filter_map(|e| self.layout(e).ok()).collect();
        Ok(global_frequency(layouts.iter(), bins)?)
    }
}

/// Per-table seed: first eight bytes of `sha256(seed || salt || id)`.
pub fn table_seed(seed: u64, salt: &str, id: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(salt.as_bytes());
    h.update([0]);
    h.update(id.as_bytes());
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}

/// File name stem for a table id.
pub fn file_stem(id: &str) -> String {
    id.chars()
        .map(|c| if c == '/' || c == '\\' || c.is_control() { '_' } else { c })
        .collect()
}

pub fn cache_path(dir: &Path, id: &str) -> PathBuf {
    dir.join(format!("{}.nodes.json", file_stem(id)))
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

pub fn create_dir(path: &Path) -> Result<()> {
    std::fs::create_dir_all(path).with_context(|| format!("creating {}", path.display()))
}

/// Thread pool for per-table jobs; `0` means one thread per core.
pub fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?)
}

pub fn format_grid(grid: &CategoryGrid) -> String {
    let mut s = String::from("      1       2       3       4\n");
    for (r, row) in grid.0.iter().enumerate() {
        s.push((b'A' + r as u8) as char);
        for v in row {
            s.push_str(&format!(" {v:>7}"));
        }
        s.push('\n');
    }
    s
}
