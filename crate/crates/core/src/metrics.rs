//! Correspondence-matrix evaluation of row, column and cell segmentations.
//!
//! For ground-truth segments `G_i` and predicted segments `S_j`, entry
//! `[i][j]` of the correspondence matrix is `|G_i ∩ S_j|` in pixels. With
//! threshold `T` and ratios `r_ij = |G_i ∩ S_j| / |G_i|`:
//!
//! - `G_i` is a correct detection if some `j` has `r_ij > 1 − T` and
//!   `r_kj < T` for every other `k`;
//! - `G_i` is over-segmented if at least two `j` have `T < r_ij < 1 − T`;
//! - `S_j` is under-segmented if at least two `i` have `T < r_ij < 1 − T`.
//!
//! All inequalities are strict. Counts are reported as percentages of the
//! number of ground-truth segments.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::table::{Rect, TableLayout};

pub const DEFAULT_THRESHOLD: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SegmentKind {
    Row,
    Column,
    Cell,
}

/// Rectangular regions on a common canvas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentSet {
    canvas: (u32, u32),
    regions: Vec<Rect>,
}

impl SegmentSet {
    pub fn new(canvas: (u32, u32), regions: Vec<Rect>) -> Result<Self> {
        for (i, r) in regions.iter().enumerate() {
            if r.area() == 0 || r.x2 > canvas.0 || r.y2 > canvas.1 {
                return Err(Error::Domain(format!(
                    "segment {i} ({r:?}) is empty or leaves the {}x{} canvas",
                    canvas.0, canvas.1
                )));
            }
        }
        Ok(SegmentSet { canvas, regions })
    }

    /// Row, column or cell regions of a layout. Cell regions span the full
    /// extent of the cell's rows and columns.
    pub fn from_layout(layout: &TableLayout, kind: SegmentKind) -> Result<Self> {
        let (w, h) = (layout.width(), layout.height());
        let regions = match kind {
            SegmentKind::Row => layout.rows.iter().map(|r| Rect::new(0, r.lo, w, r.hi)).collect(),
            SegmentKind::Column => layout.columns.iter().map(|c| Rect::new(c.lo, 0, c.hi, h)).collect(),
            SegmentKind::Cell => layout.cells.iter().map(|c| layout.cell_region(c)).collect(),
        };
        SegmentSet::new((w, h), regions)
    }

    pub fn canvas(&self) -> (u32, u32) {
        self.canvas
    }

    pub fn regions(&self) -> &[Rect] {
        &self.regions
    }

    pub fn areas(&self) -> Vec<u64> {
        self.regions.iter().map(Rect::area).collect()
    }

    pub fn len(&self) -> usize {
        self.regions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }
}

/// `n × m` pixel overlap counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrespondenceMatrix {
    n: usize,
    m: usize,
    data: Vec<u64>,
}

impl CorrespondenceMatrix {
    pub fn from_rows(rows: Vec<Vec<u64>>) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == m), "ragged matrix");
        CorrespondenceMatrix {
            n,
            m,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn gt_count(&self) -> usize {
        self.n
    }

    pub fn pred_count(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.m + j]
    }

    pub fn row_sum(&self, i: usize) -> u64 {
        self.data[i * self.m..(i + 1) * self.m].iter().sum()
    }

    pub fn col_sum(&self, j: usize) -> u64 {
        (0..self.n).map(|i| self.get(i, j)).sum()
    }

    fn ratio(&self, gt_areas: &[u64], i: usize, j: usize) -> f64 {
        self.get(i, j) as f64 / gt_areas[i] as f64
    }
}

pub fn correspondence(gt: &SegmentSet, pred: &SegmentSet) -> Result<CorrespondenceMatrix> {
    if gt.canvas != pred.canvas {
        return Err(Error::CanvasMismatch {
            gt: gt.canvas,
            pred: pred.canvas,
        });
    }
    let data = gt
        .regions
        .iter()
        .flat_map(|g| pred.regions.iter().map(move |s| g.intersection_area(s)))
        .collect();
    Ok(CorrespondenceMatrix {
        n: gt.len(),
        m: pred.len(),
        data,
    })
}

fn significant(r: f64, t: f64) -> bool {
    t < r && r < 1.0 - t
}

pub fn correct_detections(m: &CorrespondenceMatrix, gt_areas: &[u64], t: f64) -> usize {
    (0..m.n)
        .filter(|&i| {
            (0..m.m).any(|j| {
                m.ratio(gt_areas, i, j) > 1.0 - t && (0..m.n).all(|k| k == i || m.ratio(gt_areas, k, j) < t)
            })
        })
        .count()
}

pub fn over_segmentations(m: &CorrespondenceMatrix, gt_areas: &[u64], t: f64) -> usize {
    (0..m.n)
        .filter(|&i| (0..m.m).filter(|&j| significant(m.ratio(gt_areas, i, j), t)).count() >= 2)
        .count()
}

pub fn under_segmentations(m: &CorrespondenceMatrix, gt_areas: &[u64], t: f64) -> usize {
    (0..m.m)
        .filter(|&j| (0..m.n).filter(|&i| significant(m.ratio(gt_areas, i, j), t)).count() >= 2)
        .count()
}

fn pct(count: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        let p = 100.0 * count as f64 / total as f64;
        (p * 100.0).round() / 100.0
    }
}

/// Counts for one segment kind. Percentages are derived on serialization.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct KindReport {
    pub gt_count: usize,
    pub correct: usize,
    pub over_seg: usize,
    pub under_seg: usize,
}

impl KindReport {
    pub fn correct_pct(&self) -> f64 {
        pct(self.correct, self.gt_count)
    }

    pub fn over_pct(&self) -> f64 {
        pct(self.over_seg, self.gt_count)
    }

    pub fn under_pct(&self) -> f64 {
        pct(self.under_seg, self.gt_count)
    }

    pub fn add(&mut self, other: &KindReport) {
        self.gt_count += other.gt_count;
        self.correct += other.correct;
        self.over_seg += other.over_seg;
        self.under_seg += other.under_seg;
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct KindReportJson {
    gt_count: usize,
    correct: usize,
    over_seg: usize,
    under_seg: usize,
    correct_pct: f64,
    over_pct: f64,
    under_pct: f64,
}

impl Serialize for KindReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        KindReportJson {
            gt_count: self.gt_count,
            correct: self.correct,
            over_seg: self.over_seg,
            under_seg: self.under_seg,
            correct_pct: self.correct_pct(),
            over_pct: self.over_pct(),
            under_pct: self.under_pct(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for KindReport {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = KindReportJson::deserialize(d)?;
        Ok(KindReport {
            gt_count: j.gt_count,
            correct: j.correct,
            over_seg: j.over_seg,
            under_seg: j.under_seg,
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentationReport {
    pub row: KindReport,
    pub column: KindReport,
    pub cell: KindReport,
}

impl SegmentationReport {
    pub fn kind(&self, kind: SegmentKind) -> &KindReport {
        match kind {
            SegmentKind::Row => &self.row,
            SegmentKind::Column => &self.column,
            SegmentKind::Cell => &self.cell,
        }
    }

    /// Pools segment counts with another report.
    pub fn add(&mut self, other: &SegmentationReport) {
        self.row.add(&other.row);
        self.column.add(&other.column);
        self.cell.add(&other.cell);
    }
}

/// Scores one segment set against another.
pub fn evaluate_segments(gt: &SegmentSet, pred: &SegmentSet, t: f64) -> Result<KindReport> {
    if !(t > 0.0 && t < 0.5) {
        return Err(Error::Domain(format!("threshold must be in (0, 0.5), got {t}")));
    }
    let m = correspondence(gt, pred)?;
    let areas = gt.areas();
    Ok(KindReport {
        gt_count: gt.len(),
        correct: correct_detections(&m, &areas, t),
        over_seg: over_segmentations(&m, &areas, t),
        under_seg: under_segmentations(&m, &areas, t),
    })
}

/// Rows, columns and cells of `pred` scored against `gt`.
pub fn evaluate(gt: &TableLayout, pred: &TableLayout, t: f64) -> Result<SegmentationReport> {
    let (gw, gh) = (gt.width(), gt.height());
    let (pw, ph) = (pred.width(), pred.height());
    if (gw, gh) != (pw, ph) {
        return Err(Error::CanvasMismatch {
            gt: (gw, gh),
            pred: (pw, ph),
        });
    }
    let score = |kind| -> Result<KindReport> {
        evaluate_segments(&SegmentSet::from_layout(gt, kind)?, &SegmentSet::from_layout(pred, kind)?, t)
    };
    Ok(SegmentationReport {
        row: score(SegmentKind::Row)?,
        column: score(SegmentKind::Column)?,
        cell: score(SegmentKind::Cell)?,
    })
}
