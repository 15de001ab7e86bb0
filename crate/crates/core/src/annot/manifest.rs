use std::collections::{BTreeMap, HashSet};
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Test,
    Val,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestEntry {
    pub id: String,
    pub image: PathBuf,
    pub annotation: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<Split>,
}

/// List of tables with their files. Relative paths are resolved against the
/// manifest's directory by [`DatasetManifest::load`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DatasetManifest {
    pub entries: Vec<ManifestEntry>,
}

impl DatasetManifest {
    pub fn parse(bytes: &[u8]) -> Result<Self> {
        let m: DatasetManifest = serde_json::from_slice(bytes).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        m.check_unique()?;
        Ok(m)
    }

    fn check_unique(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for e in &self.entries {
            if !seen.insert(e.id.as_str()) {
                return Err(Error::Config(format!("duplicate table id `{}` in manifest", e.id)));
            }
        }
        Ok(())
    }

    /// Reads a manifest file and checks that every referenced file exists.
    /// Paths are kept as written; use [`DatasetManifest::resolve`] to get
    /// absolute locations.
    pub fn load(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        let m = Self::parse(&bytes)?;
        let base = path.parent().unwrap_or(Path::new("."));
        for e in &m.entries {
            for p in [&e.image, &e.annotation] {
                let full = base.join(p);
                if !full.exists() {
                    return Err(Error::io(full, std::io::Error::from(std::io::ErrorKind::NotFound)));
                }
            }
        }
        Ok(m)
    }

    pub fn resolve(&self, base: &Path, entry: &ManifestEntry) -> (PathBuf, PathBuf) {
        (base.join(&entry.image), base.join(&entry.annotation))
    }

    /// Pretty JSON list with a trailing newline.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(self).expect("plain data serializes");
        out.push(b'\n');
        out
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_bytes()).map_err(|e| Error::io(path, e))
    }

    pub fn in_split(&self, split: Split) -> impl Iterator<Item = &ManifestEntry> {
        self.entries.iter().filter(move |e| e.split == Some(split))
    }

    pub fn count(&self, split: Split) -> usize {
        self.in_split(split).count()
    }
}

/// Train/test/validation proportions and the shuffle seed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SplitSpec {
    /// `[train, test, val]`.
    pub ratios: [f64; 3],
    pub seed: u64,
}

impl SplitSpec {
    pub const DEFAULT_RATIOS: [f64; 3] = [0.72, 0.2, 0.08];

    pub fn new(ratios: [f64; 3], seed: u64) -> Result<Self> {
        let spec = SplitSpec { ratios, seed };
        spec.check()?;
        Ok(spec)
    }

    fn check(&self) -> Result<()> {
        if self.ratios.iter().any(|r| !r.is_finite() || *r < 0.0) {
            return Err(Error::Config(format!("split ratios must be non-negative, got {:?}", self.ratios)));
        }
        let sum: f64 = self.ratios.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::Config(format!(
                "split ratios must sum to 1 (got {:?}, sum {sum})",
                self.ratios
            )));
        }
        Ok(())
    }
}

/// Page a table belongs to: the id up to its last `#`, or the whole id.
/// `eu-001#0` and `eu-001#1` share page `eu-001`.
pub fn page_key(id: &str) -> &str {
    id.rsplit_once('#').map_or(id, |(page, _)| page)
}

/// Assigns every entry to a split. Target sizes are `round(N · ratio)` for
/// test and validation, with the remainder going to train. Pages are
/// shuffled with the seed (starting from sorted page keys) and each page's
/// tables are placed together in the first of test, val that still has room
/// for all of them; otherwise in train.
pub fn split_dataset(manifest: &DatasetManifest, spec: &SplitSpec) -> Result<DatasetManifest> {
    spec.check()?;
    if manifest.entries.is_empty() {
        return Err(Error::Config("cannot split an empty manifest".into()));
    }
    manifest.check_unique()?;
    let n = manifest.entries.len();
    let n_test = ((n as f64 * spec.ratios[1]).round() as usize).min(n);
    let n_val = ((n as f64 * spec.ratios[2]).round() as usize).min(n - n_test);

    let mut pages: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, e) in manifest.entries.iter().enumerate() {
        pages.entry(page_key(&e.id)).or_default().push(i);
    }
    let mut order: Vec<(&str, Vec<usize>)> = pages.into_iter().collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(spec.seed));

    let mut out = manifest.clone();
    let mut room = [(Split::Test, n_test), (Split::Val, n_val)];
    for (_, members) in order {
        let split = match room.iter_mut().find(|(_, left)| *left >= members.len()) {
            Some((s, left)) => {
                *left -= members.len();
                *s
            }
            None => Split::Train,
        };
        for i in members {
            out.entries[i].split = Some(split);
        }
    }
    Ok(out)
}

/// Keeps `ceil(fraction · |train|)` training entries, chosen by a seeded
/// shuffle of the sorted train ids. Other splits are untouched; dropped
/// training entries are removed from the manifest.
pub fn training_fraction(manifest: &DatasetManifest, fraction: f64, seed: u64) -> Result<DatasetManifest> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::Config(format!("training fraction must be in (0, 1], got {fraction}")));
    }
    let mut train: Vec<&str> = manifest.in_split(Split::Train).map(|e| e.id.as_str()).collect();
    if train.is_empty() {
        return Err(Error::Config("manifest has no train split".into()));
    }
    train.sort_unstable();
    // guard against 0.7 * 10 = 7.000000000000001
    let keep = ((fraction * train.len() as f64) - 1e-9).ceil().max(1.0) as usize;
    train.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let kept: HashSet<&str> = train[..keep].iter().copied().collect();
    Ok(DatasetManifest {
        entries: manifest
            .entries
            .iter()
            .filter(|e| e.split != Some(Split::Train) || kept.contains(e.id.as_str()))
            .cloned()
            .collect(),
    })
}
