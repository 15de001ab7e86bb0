//! Pixel-level separator ground truth.
//!
//! Each internal row/column boundary is widened into a band of whitespace
//! reaching the nearest ink on either side. Ink is found with foreground
//! projection profiles of the binarized table image, so no word boxes are
//! needed. Boundary `j` only searches the window between the midpoints to
//! its neighbouring boundaries, which keeps bands disjoint.

use crate::error::{Error, Result};
use crate::raster::Raster;
use crate::table::{Axis, Interval, TableLayout};

/// Gray levels strictly below this count as ink.
pub const DEFAULT_THRESHOLD: u8 = 192;

/// Binary raster, `true` = ink.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InkMap {
    width: u32,
    height: u32,
    ink: Vec<bool>,
}

impl InkMap {
    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn get(&self, x: u32, y: u32) -> bool {
        self.ink[y as usize * self.width as usize + x as usize]
    }

    pub fn count(&self) -> usize {
        self.ink.iter().filter(|&&b| b).count()
    }

    /// Number of ink pixels at each x (column axis) or y (row axis).
    pub fn profile(&self, axis: Axis) -> Vec<u32> {
        let (w, h) = (self.width as usize, self.height as usize);
        match axis {
            Axis::Column => {
                let mut p = vec![0; w];
                for row in self.ink.chunks_exact(w.max(1)) {
                    for (x, &b) in row.iter().enumerate() {
                        p[x] += b as u32;
                    }
                }
                p
            }
            Axis::Row => (0..h)
                .map(|y| self.ink[y * w..(y + 1) * w].iter().filter(|&&b| b).count() as u32)
                .collect(),
        }
    }
}

/// Marks pixels darker than `threshold` (after luminance conversion) as ink.
pub fn binarize(image: &Raster, threshold: u8) -> InkMap {
    let gray = image.to_gray();
    InkMap {
        width: gray.width(),
        height: gray.height(),
        ink: gray.as_bytes().iter().map(|&v| v < threshold).collect(),
    }
}

/// Separator bands along one axis. Column bands are full-height vertical
/// strips `[lo, hi) × [0, H)`; row bands are full-width horizontal strips.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatorMask {
    pub axis: Axis,
    pub width: u32,
    pub height: u32,
    /// One band per internal boundary, in order.
    pub bands: Vec<Interval>,
}

impl SeparatorMask {
    pub fn contains(&self, x: u32, y: u32) -> bool {
        let v = match self.axis {
            Axis::Column => x,
            Axis::Row => y,
        };
        self.bands.iter().any(|b| b.lo <= v && v < b.hi)
    }

    /// 8-bit mask: 255 inside a band, 0 elsewhere.
    pub fn to_raster(&self) -> Raster {
        let mut r = Raster::filled(self.width, self.height, 1, 0);
        for b in &self.bands {
            match self.axis {
                Axis::Column => r.fill_rect(b.lo, 0, b.hi, self.height, 255),
                Axis::Row => r.fill_rect(0, b.lo, self.width, b.hi, 255),
            }
        }
        r
    }
}

fn bands_for(profile: &[u32], segs: &[Interval]) -> Vec<Interval> {
    let extent = profile.len() as u32;
    let boundaries: Vec<u32> = segs.iter().take(segs.len().saturating_sub(1)).map(|s| s.hi).collect();
    let has_ink = |x: u32| profile[x as usize] > 0;
    boundaries
        .iter()
        .enumerate()
        .map(|(j, &b)| {
            let win_lo = if j == 0 { 0 } else { (boundaries[j - 1] + b).div_ceil(2) };
            let win_hi = match boundaries.get(j + 1) {
                Some(&next) => (b + next).div_ceil(2),
                None => extent,
            };
            let left = (win_lo..b).rev().find(|&x| has_ink(x)).map_or(win_lo, |x| x + 1);
            let right = (b..win_hi).find(|&x| has_ink(x)).unwrap_or(win_hi);
            if left < right {
                Interval::new(left, right)
            } else {
                // ink on both sides of the boundary line
                Interval::new(b, b + 1)
            }
        })
        .collect()
}

/// Row and column separator masks of `layout` given its binarized image.
pub fn expand_separators(layout: &TableLayout, ink: &InkMap) -> Result<(SeparatorMask, SeparatorMask)> {
    let (w, h) = (layout.width(), layout.height());
    if (ink.width(), ink.height()) != (w, h) {
        return Err(Error::CanvasMismatch {
            gt: (w, h),
            pred: (ink.width(), ink.height()),
        });
    }
    let mask = |axis: Axis| SeparatorMask {
        axis,
        width: w,
        height: h,
        bands: bands_for(&ink.profile(axis), layout.segments(axis)),
    };
    Ok((mask(Axis::Row), mask(Axis::Column)))
}
