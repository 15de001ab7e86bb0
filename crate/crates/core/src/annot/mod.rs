//! Annotation files, images and dataset manifests.
//!
//! The canonical annotation format is a JSON document (see
//! [`serialize_annotation`]). T-Truth style XML is accepted on input only.
//! Both paths snap near-tiling segment boundaries before validation.

mod json;
mod manifest;
mod ttruth;

use std::path::Path;

pub use json::serialize_annotation;
pub use manifest::{page_key, split_dataset, training_fraction, DatasetManifest, ManifestEntry, Split, SplitSpec};

use crate::error::{Error, Result};
use crate::raster::Raster;
use crate::table::{Axis, TableDocument, TableLayout, Violation};

/// Largest gap or overlap (in pixels) between adjacent boxes that import
/// silently closes.
pub const SNAP_TOLERANCE: u32 = 2;

/// Parses canonical JSON or, if the text starts with `<`, a single-table
/// T-Truth XML document.
pub fn parse_annotation(bytes: &[u8]) -> Result<TableLayout> {
    let first = bytes.iter().find(|b| !b.is_ascii_whitespace());
    if first == Some(&b'<') {
        let mut tables = ttruth::import_tables(bytes)?;
        if tables.len() != 1 {
            return Err(Error::Parse {
                line: 1,
                column: 1,
                message: format!("expected exactly one <Table>, found {}", tables.len()),
            });
        }
        let mut layout = tables.pop().expect("one table");
        snap_boundaries(&mut layout);
        layout.ensure_valid()?;
        return Ok(layout);
    }
    let (mut layout, declared) = json::parse_json(bytes)?;
    snap_boundaries(&mut layout);
    let mut violations = layout.validate();
    let derived = (layout.width(), layout.height());
    if violations.is_empty() && declared != derived {
        violations.push(Violation::DeclaredSize { declared, derived });
    }
    if violations.is_empty() {
        Ok(layout)
    } else {
        Err(Error::Invalid(violations))
    }
}

/// Imports every table of a T-Truth XML file.
pub fn import_ttruth(bytes: &[u8]) -> Result<Vec<TableLayout>> {
    let mut tables = ttruth::import_tables(bytes)?;
    for t in &mut tables {
        snap_boundaries(t);
        t.ensure_valid()?;
    }
    Ok(tables)
}

/// Closes gaps and overlaps of at most [`SNAP_TOLERANCE`] pixels between
/// adjacent boxes by moving both edges to the midpoint (rounded down), then
/// clamps cell boxes to their snapped regions.
pub fn snap_boundaries(layout: &mut TableLayout) {
    for axis in [Axis::Column, Axis::Row] {
        let segs = layout.segments_mut(axis);
        for j in 1..segs.len() {
            let (a, b) = (segs[j - 1].hi, segs[j].lo);
            if a != b && a.abs_diff(b) <= SNAP_TOLERANCE {
                let mid = (a + b) / 2;
                segs[j - 1].hi = mid;
                segs[j].lo = mid;
            }
        }
    }
    let (nr, nc) = (layout.rows.len(), layout.columns.len());
    for i in 0..layout.cells.len() {
        let c = &layout.cells[i];
        if c.end_row >= nr || c.end_col >= nc || c.start_row > c.end_row || c.start_col > c.end_col {
            continue;
        }
        let region = layout.cell_region(c);
        let b = &mut layout.cells[i].bbox;
        b.x1 = b.x1.clamp(region.x1, region.x2);
        b.x2 = b.x2.clamp(region.x1, region.x2);
        b.y1 = b.y1.clamp(region.y1, region.y2);
        b.y2 = b.y2.clamp(region.y1, region.y2);
    }
}

pub fn read_annotation(path: &Path) -> Result<TableLayout> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_annotation(&bytes)
}

pub fn write_annotation(path: &Path, layout: &TableLayout) -> Result<()> {
    let bytes = serialize_annotation(layout)?;
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Loads an annotation and its PNG and checks that they agree.
pub fn load_document(annotation: &Path, image: &Path) -> Result<TableDocument> {
    let layout = read_annotation(annotation)?;
    let image = Raster::load_png(image)?;
    let doc = TableDocument::new(layout, image);
    doc.ensure_valid()?;
    Ok(doc)
}
