//! In-memory table model: segment boxes, cells with span indices, and the
//! validity rules every operation has to preserve.
//!
//! Coordinates are table-local integer pixels with the origin at the top-left
//! corner. All intervals are half-open `[lo, hi)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::Raster;

/// Direction along which segments are laid out: columns advance in x, rows
/// in y. Every row operation is the transpose of the column operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    Column,
    Row,
}

impl Axis {
    pub fn other(self) -> Axis {
        match self {
            Axis::Column => Axis::Row,
            Axis::Row => Axis::Column,
        }
    }

    pub fn plural(self) -> &'static str {
        match self {
            Axis::Column => "columns",
            Axis::Row => "rows",
        }
    }
}

/// A column box (`x1..x2`) or row box (`y1..y2`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: u32,
    pub hi: u32,
}

impl Interval {
    pub fn new(lo: u32, hi: u32) -> Self {
        Interval { lo, hi }
    }

    pub fn len(&self) -> u32 {
        self.hi.saturating_sub(self.lo)
    }

    pub fn is_empty(&self) -> bool {
        self.hi <= self.lo
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Rect {
    pub x1: u32,
    pub y1: u32,
    pub x2: u32,
    pub y2: u32,
}

impl Rect {
    pub fn new(x1: u32, y1: u32, x2: u32, y2: u32) -> Self {
        Rect { x1, y1, x2, y2 }
    }

    pub fn from_intervals(x: Interval, y: Interval) -> Self {
        Rect::new(x.lo, y.lo, x.hi, y.hi)
    }

    pub fn width(&self) -> u32 {
        self.x2.saturating_sub(self.x1)
    }

    pub fn height(&self) -> u32 {
        self.y2.saturating_sub(self.y1)
    }

    pub fn area(&self) -> u64 {
        self.width() as u64 * self.height() as u64
    }

    pub fn intersection_area(&self, other: &Rect) -> u64 {
        let w = self.x2.min(other.x2).saturating_sub(self.x1.max(other.x1));
        let h = self.y2.min(other.y2).saturating_sub(self.y1.max(other.y1));
        w as u64 * h as u64
    }

    pub fn interval(&self, axis: Axis) -> Interval {
        match axis {
            Axis::Column => Interval::new(self.x1, self.x2),
            Axis::Row => Interval::new(self.y1, self.y2),
        }
    }

    pub(crate) fn shifted(mut self, axis: Axis, delta: i64) -> Rect {
        match axis {
            Axis::Column => {
                self.x1 = shift(self.x1, delta);
                self.x2 = shift(self.x2, delta);
            }
            Axis::Row => {
                self.y1 = shift(self.y1, delta);
                self.y2 = shift(self.y2, delta);
            }
        }
        self
    }

    pub fn transpose(&self) -> Rect {
        Rect::new(self.y1, self.x1, self.y2, self.x2)
    }
}

pub(crate) fn shift(v: u32, delta: i64) -> u32 {
    u32::try_from(v as i64 + delta).expect("coordinate shift out of range")
}

/// One logical cell. Span indices are inclusive and authoritative for
/// structure; `bbox` locates the content for rendering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Cell {
    pub start_row: usize,
    pub end_row: usize,
    pub start_col: usize,
    pub end_col: usize,
    pub bbox: Rect,
    pub empty: bool,
}

impl Cell {
    pub fn start(&self, axis: Axis) -> usize {
        match axis {
            Axis::Column => self.start_col,
            Axis::Row => self.start_row,
        }
    }

    pub fn end(&self, axis: Axis) -> usize {
        match axis {
            Axis::Column => self.end_col,
            Axis::Row => self.end_row,
        }
    }

    pub fn covers(&self, axis: Axis, index: usize) -> bool {
        self.start(axis) <= index && index <= self.end(axis)
    }

    pub(crate) fn reindexed(mut self, axis: Axis, delta: i64) -> Cell {
        let f = |v: usize| usize::try_from(v as i64 + delta).expect("index shift out of range");
        match axis {
            Axis::Column => {
                self.start_col = f(self.start_col);
                self.end_col = f(self.end_col);
            }
            Axis::Row => {
                self.start_row = f(self.start_row);
                self.end_row = f(self.end_row);
            }
        }
        self
    }

    pub fn transpose(&self) -> Cell {
        Cell {
            start_row: self.start_col,
            end_row: self.end_col,
            start_col: self.start_row,
            end_col: self.end_row,
            bbox: self.bbox.transpose(),
            empty: self.empty,
        }
    }
}

/// Ground truth of a table without its pixels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TableLayout {
    pub id: String,
    pub columns: Vec<Interval>,
    pub rows: Vec<Interval>,
    pub cells: Vec<Cell>,
}

impl TableLayout {
    pub fn segments(&self, axis: Axis) -> &[Interval] {
        match axis {
            Axis::Column => &self.columns,
            Axis::Row => &self.rows,
        }
    }

    pub(crate) fn segments_mut(&mut self, axis: Axis) -> &mut Vec<Interval> {
        match axis {
            Axis::Column => &mut self.columns,
            Axis::Row => &mut self.rows,
        }
    }

    pub fn count(&self, axis: Axis) -> usize {
        self.segments(axis).len()
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.columns.len()
    }

    /// Pixel extent along `axis`.
    pub fn extent(&self, axis: Axis) -> u32 {
        let s = self.segments(axis);
        match (s.first(), s.last()) {
            (Some(a), Some(b)) => b.hi.saturating_sub(a.lo),
            _ => 0,
        }
    }

    pub fn width(&self) -> u32 {
        self.extent(Axis::Column)
    }

    pub fn height(&self) -> u32 {
        self.extent(Axis::Row)
    }

    /// Pixel rectangle of a cell's structural region: the spanned columns'
    /// x-range times the spanned rows' y-range.
    pub fn cell_region(&self, cell: &Cell) -> Rect {
        Rect::new(
            self.columns[cell.start_col].lo,
            self.rows[cell.start_row].lo,
            self.columns[cell.end_col].hi,
            self.rows[cell.end_row].hi,
        )
    }

    /// Sorts cells row-major by their top-left grid position.
    pub fn sort_cells(&mut self) {
        self.cells.sort_by_key(|c| (c.start_row, c.start_col, c.end_row, c.end_col));
    }

    pub fn transpose(&self) -> TableLayout {
        let mut t = TableLayout {
            id: self.id.clone(),
            columns: self.rows.clone(),
            rows: self.columns.clone(),
            cells: self.cells.iter().map(Cell::transpose).collect(),
        };
        t.sort_cells();
        t
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for axis in [Axis::Column, Axis::Row] {
            check_tiling(axis, self.segments(axis), &mut out);
        }
        let (nr, nc) = (self.rows.len(), self.columns.len());
        let mut coverage = vec![0u32; nr * nc];
        for (i, cell) in self.cells.iter().enumerate() {
            if cell.start_row > cell.end_row || cell.start_col > cell.end_col {
                out.push(Violation::CellSpanInverted { cell: i });
                continue;
            }
            if cell.end_row >= nr || cell.end_col >= nc {
                out.push(Violation::CellOutOfRange { cell: i });
                continue;
            }
            for r in cell.start_row..=cell.end_row {
                for c in cell.start_col..=cell.end_col {
                    coverage[r * nc + c] += 1;
                }
            }
            let region = self.cell_region(cell);
            let b = cell.bbox;
            if b.x1 > b.x2 || b.y1 > b.y2 || b.x1 < region.x1 || b.x2 > region.x2 || b.y1 < region.y1 || b.y2 > region.y2 {
                out.push(Violation::BboxOutsideSpan { cell: i });
            }
        }
        for r in 0..nr {
            for c in 0..nc {
                match coverage[r * nc + c] {
                    1 => {}
                    0 => out.push(Violation::Uncovered { row: r, col: c }),
                    _ => out.push(Violation::DuplicateCoverage { row: r, col: c }),
                }
            }
        }
        out
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Invalid(v))
        }
    }

    pub fn grid_index(&self) -> Result<CellGridIndex> {
        if let Some(first) = self.validate().into_iter().next() {
            return Err(Error::Invalid(vec![first]));
        }
        let (nr, nc) = (self.rows.len(), self.columns.len());
        let mut owner = vec![usize::MAX; nr * nc];
        for (i, cell) in self.cells.iter().enumerate() {
            for r in cell.start_row..=cell.end_row {
                for c in cell.start_col..=cell.end_col {
                    owner[r * nc + c] = i;
                }
            }
        }
        Ok(CellGridIndex {
            rows: nr,
            cols: nc,
            owner,
        })
    }
}

fn check_tiling(axis: Axis, segs: &[Interval], out: &mut Vec<Violation>) {
    let Some(first) = segs.first() else {
        out.push(Violation::NoSegments { axis });
        return;
    };
    if first.lo != 0 {
        out.push(Violation::NotAtOrigin { axis });
    }
    for (i, s) in segs.iter().enumerate() {
        if s.is_empty() {
            out.push(Violation::EmptySegment { axis, index: i });
        }
    }
    for (i, w) in segs.windows(2).enumerate() {
        if w[0].hi > w[1].lo {
            out.push(Violation::Overlap { axis, index: i });
        } else if w[0].hi < w[1].lo {
            out.push(Violation::Gap { axis, index: i });
        }
    }
}

/// Dense `R × C` map from grid position to the index of its owning cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellGridIndex {
    rows: usize,
    cols: usize,
    owner: Vec<usize>,
}

impl CellGridIndex {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Index into `TableLayout::cells` of the cell covering `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> usize {
        assert!(row < self.rows && col < self.cols, "grid position ({row}, {col}) out of range");
        self.owner[row * self.cols + col]
    }

    /// Owner of the `i`-th position along `axis` on lane `lane` of the other axis.
    pub fn along(&self, axis: Axis, lane: usize, i: usize) -> usize {
        match axis {
            Axis::Column => self.get(lane, i),
            Axis::Row => self.get(i, lane),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoSegments { axis: Axis },
    NotAtOrigin { axis: Axis },
    EmptySegment { axis: Axis, index: usize },
    Overlap { axis: Axis, index: usize },
    Gap { axis: Axis, index: usize },
    CellSpanInverted { cell: usize },
    CellOutOfRange { cell: usize },
    BboxOutsideSpan { cell: usize },
    DuplicateCoverage { row: usize, col: usize },
    Uncovered { row: usize, col: usize },
    ImageSize { expected: (u32, u32), actual: (u32, u32) },
    DeclaredSize { declared: (u32, u32), derived: (u32, u32) },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoSegments { axis } => write!(f, "no {}", axis.plural()),
            Violation::NotAtOrigin { axis } => write!(f, "{} do not start at 0", axis.plural()),
            Violation::EmptySegment { axis, index } => write!(f, "{} {index} is empty", axis.plural()),
            Violation::Overlap { axis, index } => {
                write!(f, "{} overlap at {index}/{}", axis.plural(), index + 1)
            }
            Violation::Gap { axis, index } => {
                write!(f, "{} leave a gap at {index}/{}", axis.plural(), index + 1)
            }
            Violation::CellSpanInverted { cell } => write!(f, "cell {cell} has start > end"),
            Violation::CellOutOfRange { cell } => write!(f, "cell {cell} references a missing row or column"),
            Violation::BboxOutsideSpan { cell } => write!(f, "cell {cell} bbox lies outside its spanned region"),
            Violation::DuplicateCoverage { row, col } => {
                write!(f, "duplicate coverage of grid position ({row}, {col})")
            }
            Violation::Uncovered { row, col } => write!(f, "grid position ({row}, {col}) not covered"),
            Violation::ImageSize { expected, actual } => write!(
                f,
                "image is {}x{} but boxes span {}x{}",
                actual.0, actual.1, expected.0, expected.1
            ),
            Violation::DeclaredSize { declared, derived } => write!(
                f,
                "declared image size {}x{} disagrees with boxes {}x{}",
                declared.0, declared.1, derived.0, derived.1
            ),
        }
    }
}

/// A table image together with its ground truth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableDocument {
    pub layout: TableLayout,
    pub image: Raster,
}

impl TableDocument {
    pub fn new(layout: TableLayout, image: Raster) -> Self {
        TableDocument { layout, image }
    }

    pub fn id(&self) -> &str {
        &self.layout.id
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = self.layout.validate();
        let expected = (self.layout.width(), self.layout.height());
        let actual = (self.image.width(), self.image.height());
        if expected != actual {
            out.push(Violation::ImageSize { expected, actual });
        }
        out
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Invalid(v))
        }
    }

    pub fn grid_index(&self) -> Result<CellGridIndex> {
        if let Some(first) = self.validate().into_iter().next() {
            return Err(Error::Invalid(vec![first]));
        }
        self.layout.grid_index()
    }

    pub fn transpose(&self) -> TableDocument {
        TableDocument {
            layout: self.layout.transpose(),
            image: self.image.transpose(),
        }
    }
}

/// Builds a layout from column widths, row heights and a list of
/// `(start_row, end_row, start_col, end_col)` spans. Bboxes are set to the
/// structural region of each cell. Positions not mentioned become unit cells.
pub fn layout_from_spans(
    id: &str,
    col_widths: &[u32],
    row_heights: &[u32],
    spans: &[(usize, usize, usize, usize)],
) -> TableLayout {
    let intervals = |sizes: &[u32]| {
        let mut at = 0;
        sizes
            .iter()
            .map(|&s| {
                let i = Interval::new(at, at + s);
                at += s;
                i
            })
            .collect::<Vec<_>>()
    };
    let columns = intervals(col_widths);
    let rows = intervals(row_heights);
    let (nr, nc) = (rows.len(), columns.len());
    let mut taken = vec![false; nr * nc];
    let mut cells = Vec::new();
    let mut push = |sr: usize, er: usize, sc: usize, ec: usize, taken: &mut Vec<bool>| {
        for r in sr..=er {
            for c in sc..=ec {
                taken[r * nc + c] = true;
            }
        }
        cells.push(Cell {
            start_row: sr,
            end_row: er,
            start_col: sc,
            end_col: ec,
            bbox: Rect::new(columns[sc].lo, rows[sr].lo, columns[ec].hi, rows[er].hi),
            empty: false,
        });
    };
    for &(sr, er, sc, ec) in spans {
        push(sr, er, sc, ec, &mut taken);
    }
    for r in 0..nr {
        for c in 0..nc {
            if !taken[r * nc + c] {
                push(r, r, c, c, &mut taken);
            }
        }
    }
    let mut layout = TableLayout {
        id: id.to_string(),
        columns,
        rows,
        cells,
    };
    layout.sort_cells();
    layout
}
