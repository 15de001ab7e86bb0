use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::table::{Cell, Interval, Rect, TableLayout, Violation};

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct AnnotationJson {
    id: String,
    image_width: u32,
    image_height: u32,
    columns: Vec<ColumnJson>,
    rows: Vec<RowJson>,
    cells: Vec<CellJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ColumnJson {
    x1: u32,
    x2: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RowJson {
    y1: u32,
    y2: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct CellJson {
    start_row: usize,
    end_row: usize,
    start_col: usize,
    end_col: usize,
    bbox: [u32; 4],
    empty: bool,
}

pub(super) fn parse_json(bytes: &[u8]) -> Result<(TableLayout, (u32, u32))> {
    let raw: AnnotationJson = serde_json::from_slice(bytes).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let layout = TableLayout {
        id: raw.id,
        columns: raw.columns.iter().map(|c| Interval::new(c.x1, c.x2)).collect(),
        rows: raw.rows.iter().map(|r| Interval::new(r.y1, r.y2)).collect(),
        cells: raw
            .cells
            .iter()
            .map(|c| Cell {
                start_row: c.start_row,
                end_row: c.end_row,
                start_col: c.start_col,
                end_col: c.end_col,
                bbox: Rect::new(c.bbox[0], c.bbox[1], c.bbox[2], c.bbox[3]),
                empty: c.empty,
            })
            .collect(),
    };
    Ok((layout, (raw.image_width, raw.image_height)))
}

/// Canonical JSON for a valid layout: fixed key order, two-space indent,
/// trailing newline.
pub fn serialize_annotation(layout: &TableLayout) -> Result<Vec<u8>> {
    let violations: Vec<Violation> = layout.validate();
    if !violations.is_empty() {
        return Err(Error::Invalid(violations));
    }
    let raw = AnnotationJson {
        id: layout.id.clone(),
        image_width: layout.width(),
        image_height: layout.height(),
        columns: layout.columns.iter().map(|c| ColumnJson { x1: c.lo, x2: c.hi }).collect(),
        rows: layout.rows.iter().map(|r| RowJson { y1: r.lo, y2: r.hi }).collect(),
        cells: layout
            .cells
            .iter()
            .map(|c| CellJson {
                start_row: c.start_row,
                end_row: c.end_row,
                start_col: c.start_col,
                end_col: c.end_col,
                bbox: [c.bbox.x1, c.bbox.y1, c.bbox.x2, c.bbox.y2],
                empty: c.empty,
            })
            .collect(),
    };
    let mut out = serde_json::to_vec_pretty(&raw).expect("plain data serializes");
    out.push(b'\n');
    Ok(out)
}
