use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Deserialize;
use tablemorph::augment::StandardParams;
use tablemorph::pipeline::{TreeConfig, DEFAULT_P_AUGMENT, DEFAULT_SIGMA};
use tablemorph::{metrics, pixel_gt, Error};

use crate::CommonArgs;

/// Configuration file as written on disk. Every key is optional; command
/// line flags override whatever is set here.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub sigma: Option<f64>,
    pub p_augment: Option<f64>,
    pub threshold: Option<f64>,
    pub ink_threshold: Option<u8>,
    pub ratios: Option<[f64; 3]>,
    #[serde(default)]
    pub paths: PathsSection,
    #[serde(default)]
    pub tree: TreeSection,
    #[serde(default)]
    pub baseline: BaselineSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathsSection {
    pub manifest: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub cache: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeSection {
    /// Search width for depth 1, 2, ...
    pub widths: Option<Vec<usize>>,
    pub keep_depth_min: Option<usize>,
    pub keep_depth_max: Option<usize>,
    pub size_cap_factor: Option<f64>,
    pub attempts_per_slot: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaselineSection {
    pub crop_fraction: Option<f64>,
    pub brightness_jitter: Option<f64>,
    pub hue_jitter: Option<f64>,
    pub saturation_jitter: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg: FileConfig =
            toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {}", path.display(), e.message())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [&mut cfg.paths.manifest, &mut cfg.paths.out, &mut cfg.paths.cache].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }
}

/// Fully resolved settings for one run.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub manifest: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub cache: Option<PathBuf>,
    pub seed: u64,
    pub jobs: usize,
    pub sigma: f64,
    pub p_augment: f64,
    pub threshold: f64,
    pub ink_threshold: u8,
    pub ratios: [f64; 3],
    pub tree: TreeConfig,
    pub baseline: StandardParams,
}

fn config_err(msg: String) -> anyhow::Error {
    Error::Config(msg).into()
}

impl RunConfig {
    pub fn resolve(args: &CommonArgs) -> Result<Self> {
        let file = match &args.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };

        let mut tree = TreeConfig::default();
        if let Some(widths) = file.tree.widths {
            tree.max_width_by_depth = widths.into_iter().enumerate().map(|(i, w)| (i + 1, w)).collect();
        }
        if let Some(v) = file.tree.keep_depth_min {
            tree.keep_depth_min = v;
        }
        if let Some(v) = file.tree.keep_depth_max {
            tree.keep_depth_max = v;
        }
        if let Some(v) = file.tree.size_cap_factor {
            tree.size_cap_factor = v;
        }
        if let Some(v) = file.tree.attempts_per_slot {
            tree.attempts_per_slot = v;
        }
        tree.check()?;

        let d = StandardParams::default();
        let baseline = StandardParams {
            crop_fraction: file.baseline.crop_fraction.unwrap_or(d.crop_fraction),
            brightness_jitter: file.baseline.brightness_jitter.unwrap_or(d.brightness_jitter),
            hue_jitter: file.baseline.hue_jitter.unwrap_or(d.hue_jitter),
            saturation_jitter: file.baseline.saturation_jitter.unwrap_or(d.saturation_jitter),
        };

        let cfg = RunConfig {
            manifest: args.manifest.clone().or(file.paths.manifest),
            out: args.out.clone().or(file.paths.out),
            cache: file.paths.cache,
            seed: args.seed.or(file.seed).unwrap_or(0),
            jobs: args.jobs.or(file.jobs).unwrap_or(0),
            sigma: args.sigma.or(file.sigma).unwrap_or(DEFAULT_SIGMA),
            p_augment: args.p_augment.or(file.p_augment).unwrap_or(DEFAULT_P_AUGMENT),
            threshold: args.threshold.or(file.threshold).unwrap_or(metrics::DEFAULT_THRESHOLD),
            ink_threshold: file.ink_threshold.unwrap_or(pixel_gt::DEFAULT_THRESHOLD),
            ratios: file.ratios.unwrap_or(tablemorph::annot::SplitSpec::DEFAULT_RATIOS),
            tree,
            baseline,
        };
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<()> {
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(config_err(format!("sigma must be positive, got {}", self.sigma)));
        }
        if !(0.0..=1.0).contains(&self.p_augment) {
            return Err(config_err(format!("p-augment must be in [0, 1], got {}", self.p_augment)));
        }
        if !(self.threshold > 0.0 && self.threshold < 0.5) {
            return Err(config_err(format!("threshold must be in (0, 0.5), got {}", self.threshold)));
        }
        let b = &self.baseline;
        if !(b.crop_fraction > 0.0 && b.crop_fraction <= 1.0) {
            return Err(config_err(format!("baseline crop_fraction must be in (0, 1], got {}", b.crop_fraction)));
        }
        for (name, j) in [
            ("brightness_jitter", b.brightness_jitter),
            ("hue_jitter", b.hue_jitter),
            ("saturation_jitter", b.saturation_jitter),
        ] {
            if !(0.0..1.0).contains(&j) {
                return Err(config_err(format!("baseline {name} must be in [0, 1), got {j}")));
            }
        }
        Ok(())
    }

    pub fn manifest(&self) -> Result<&Path> {
        self.manifest
            .as_deref()
            .ok_or_else(|| config_err("no manifest given (use --manifest or paths.manifest)".into()))
    }

    pub fn out(&self) -> Result<&Path> {
        self.out
            .as_deref()
            .ok_or_else(|| config_err("no output location given (use --out or paths.out)".into()))
    }

    /// Node cache directory: `explicit` if given, else `paths.cache`.
    pub fn cache_dir<'a>(&'a self, explicit: Option<&'a Path>) -> Result<&'a Path> {
        explicit
            .or(self.cache.as_deref())
            .ok_or_else(|| config_err("no cache directory given (use --out/--caches or paths.cache)".into()))
    }
}
