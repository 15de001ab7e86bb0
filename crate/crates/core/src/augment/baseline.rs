//! Photometric/crop baseline: random crop followed by brightness, saturation
//! and hue jitter. [`standard_augment`] touches the image only;
//! [`standard_augment_document`] also cuts the layout to the crop.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::raster::Raster;
use crate::table::{Cell, Interval, Rect, TableDocument, TableLayout};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StandardParams {
    /// Fraction of width and height kept by the crop, in `(0, 1]`.
    pub crop_fraction: f64,
    pub brightness_jitter: f64,
    pub hue_jitter: f64,
    pub saturation_jitter: f64,
}

impl Default for StandardParams {
    fn default() -> Self {
        StandardParams {
            crop_fraction: 0.9,
            brightness_jitter: 0.2,
            hue_jitter: 0.05,
            saturation_jitter: 0.2,
        }
    }
}

fn jitter<R: Rng + ?Sized>(rng: &mut R, j: f64) -> f64 {
    if j > 0.0 {
        rng.gen_range(1.0 - j..=1.0 + j)
    } else {
        1.0
    }
}

/// Applies the baseline to `image`. The crop keeps `round(crop_fraction · W)`
/// by `round(crop_fraction · H)` pixels at a uniform offset; each jitter
/// factor is drawn from `[1 − j, 1 + j]` once per image. Hue jitter rotates
/// chroma by `(f − 1) · π` and, like saturation, does nothing on gray input.
pub fn standard_augment<R: Rng + ?Sized>(image: &Raster, params: &StandardParams, rng: &mut R) -> Raster {
    let window = crop_window(image, params, rng);
    photometric(image.crop(window.x1, window.y1, window.width(), window.height()), params, rng)
}

/// [`standard_augment`] on a whole document. The layout is cut to the same
/// crop window: rows and columns outside it are dropped, the rest and all
/// cell boxes are clipped. Cells whose box is cut away are marked empty.
pub fn standard_augment_document<R: Rng + ?Sized>(
    doc: &TableDocument,
    params: &StandardParams,
    rng: &mut R,
) -> TableDocument {
    let window = crop_window(&doc.image, params, rng);
    let image = photometric(
        doc.image.crop(window.x1, window.y1, window.width(), window.height()),
        params,
        rng,
    );
    TableDocument::new(crop_layout(&doc.layout, window), image)
}

fn crop_window<R: Rng + ?Sized>(image: &Raster, params: &StandardParams, rng: &mut R) -> Rect {
    assert!(image.width() > 0 && image.height() > 0, "empty image");
    assert!(
        params.crop_fraction > 0.0 && params.crop_fraction <= 1.0,
        "crop fraction {} outside (0, 1]",
        params.crop_fraction
    );
    let keep = |n: u32| ((n as f64 * params.crop_fraction).round() as u32).clamp(1, n);
    let (cw, ch) = (keep(image.width()), keep(image.height()));
    let x0 = rng.gen_range(0..=image.width() - cw);
    let y0 = rng.gen_range(0..=image.height() - ch);
    Rect::new(x0, y0, x0 + cw, y0 + ch)
}

/// Clips a valid layout to `window`, which must lie inside its extent.
pub fn crop_layout(layout: &TableLayout, window: Rect) -> TableLayout {
    fn clip(segs: &[Interval], lo: u32, hi: u32) -> (Vec<Interval>, Vec<Option<usize>>) {
        let mut kept = Vec::new();
        let map = segs
            .iter()
            .map(|s| {
                let (a, b) = (s.lo.max(lo), s.hi.min(hi));
                (a < b).then(|| {
                    kept.push(Interval::new(a - lo, b - lo));
                    kept.len() - 1
                })
            })
            .collect();
        (kept, map)
    }
    let (columns, col_map) = clip(&layout.columns, window.x1, window.x2);
    let (rows, row_map) = clip(&layout.rows, window.y1, window.y2);
    let span = |map: &[Option<usize>], a: usize, b: usize| {
        let mut kept = map[a..=b].iter().flatten();
        let first = *kept.next()?;
        Some((first, kept.last().copied().unwrap_or(first)))
    };
    let mut out = TableLayout {
        id: layout.id.clone(),
        columns,
        rows,
        cells: Vec::new(),
    };
    for cell in &layout.cells {
        let (Some((sc, ec)), Some((sr, er))) = (
            span(&col_map, cell.start_col, cell.end_col),
            span(&row_map, cell.start_row, cell.end_row),
        ) else {
            continue;
        };
        let mut c = Cell {
            start_row: sr,
            end_row: er,
            start_col: sc,
            end_col: ec,
            bbox: cell.bbox,
            empty: cell.empty,
        };
        let region = out.cell_region(&c);
        let b = &mut c.bbox;
        let clamp_x = |v: u32| v.clamp(window.x1, window.x2) - window.x1;
        let clamp_y = |v: u32| v.clamp(window.y1, window.y2) - window.y1;
        *b = Rect::new(clamp_x(b.x1), clamp_y(b.y1), clamp_x(b.x2), clamp_y(b.y2));
        *b = Rect::new(
            b.x1.clamp(region.x1, region.x2),
            b.y1.clamp(region.y1, region.y2),
            b.x2.clamp(region.x1, region.x2),
            b.y2.clamp(region.y1, region.y2),
        );
        if b.area() == 0 {
            c.empty = true;
        }
        out.cells.push(c);
    }
    out.sort_cells();
    out
}

fn photometric<R: Rng + ?Sized>(mut out: Raster, params: &StandardParams, rng: &mut R) -> Raster {
    let (cw, ch) = (out.width(), out.height());
    let brightness = jitter(rng, params.brightness_jitter);
    let saturation = jitter(rng, params.saturation_jitter);
    let hue = jitter(rng, params.hue_jitter);
    let to_u8 = |v: f64| v.round().clamp(0.0, 255.0) as u8;

    if out.channels() == 1 {
        if brightness != 1.0 {
            let data = out.as_bytes().iter().map(|&v| to_u8(v as f64 * brightness)).collect();
            out = Raster::from_raw(cw, ch, 1, data).expect("same shape");
        }
        return out;
    }

    if brightness == 1.0 && saturation == 1.0 && hue == 1.0 {
        return out;
    }
    let (sin, cos) = ((hue - 1.0) * std::f64::consts::PI).sin_cos();
    let mut data = Vec::with_capacity(out.as_bytes().len());
    for px in out.as_bytes().chunks_exact(3) {
        let mut rgb = [px[0] as f64 * brightness, px[1] as f64 * brightness, px[2] as f64 * brightness];
        if saturation != 1.0 {
            let gray = 0.299 * rgb[0] + 0.587 * rgb[1] + 0.114 * rgb[2];
            for v in &mut rgb {
                *v = gray + saturation * (*v - gray);
            }
        }
        if hue != 1.0 {
            // rotate the chroma plane of YIQ
            let y = 0.299 * rgb[0] + 0.587 * rgb[1] + 0.114 * rgb[2];
            let i = 0.596 * rgb[0] - 0.274 * rgb[1] - 0.322 * rgb[2];
            let q = 0.211 * rgb[0] - 0.523 * rgb[1] + 0.312 * rgb[2];
            let (i, q) = (i * cos - q * sin, i * sin + q * cos);
            rgb = [
                y + 0.956 * i + 0.621 * q,
                y - 0.272 * i - 0.647 * q,
                y - 1.106 * i + 1.703 * q,
            ];
        }
        data.extend(rgb.map(to_u8));
    }
    Raster::from_raw(cw, ch, 3, data).expect("same shape")
}
