//! Import of T-Truth style XML. The field mapping is documented in
//! `docs/ttruth-import.md`.

use roxmltree::{Document, Node};

use crate::error::{Error, Result};
use crate::table::{Cell, Interval, Rect, TableLayout};

fn parse_error(doc_text: &str, pos: usize, message: String) -> Error {
    let before = &doc_text[..pos.min(doc_text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    Error::Parse { line, column, message }
}

fn attr<T: std::str::FromStr>(text: &str, node: Node, name: &str) -> Result<T> {
    let pos = node.range().start;
    let raw = node
        .attribute(name)
        .ok_or_else(|| parse_error(text, pos, format!("<{}> lacks attribute `{name}`", node.tag_name().name())))?;
    raw.trim()
        .parse()
        .map_err(|_| parse_error(text, pos, format!("attribute `{name}`=\"{raw}\" is not a valid number")))
}

fn boundaries(lo: u32, hi: u32, mut seps: Vec<u32>) -> Vec<Interval> {
    seps.sort_unstable();
    let mut edges = Vec::with_capacity(seps.len() + 2);
    edges.push(lo);
    edges.extend(seps);
    edges.push(hi);
    edges.windows(2).map(|w| Interval::new(w[0] - lo, w[1] - lo)).collect()
}

/// Every `<Table>` element of a T-Truth document, in document order, in
/// table-local coordinates. The results still need normalization and
/// validation.
pub(super) fn import_tables(bytes: &[u8]) -> Result<Vec<TableLayout>> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse {
        line: 0,
        column: 0,
        message: format!("not UTF-8: {e}"),
    })?;
    let doc = Document::parse(text).map_err(|e| {
        let p = e.pos();
        Error::Parse {
            line: p.row as usize,
            column: p.col as usize,
            message: e.to_string(),
        }
    })?;
    let mut tables = Vec::new();
    for table in doc.descendants().filter(|n| n.has_tag_name("Table")) {
        let id: String = table
            .attribute("id")
            .ok_or_else(|| parse_error(text, table.range().start, "<Table> lacks attribute `id`".into()))?
            .to_string();
        let (tx1, ty1, tx2, ty2): (u32, u32, u32, u32) = (
            attr(text, table, "x1")?,
            attr(text, table, "y1")?,
            attr(text, table, "x2")?,
            attr(text, table, "y2")?,
        );
        if tx2 <= tx1 || ty2 <= ty1 {
            return Err(parse_error(text, table.range().start, format!("table `{id}` has an empty bounding box")));
        }
        let mut col_seps = Vec::new();
        let mut row_seps = Vec::new();
        let mut cells = Vec::new();
        for child in table.children().filter(Node::is_element) {
            match child.tag_name().name() {
                "ColumnSeparator" => {
                    let x: u32 = attr(text, child, "x")?;
                    if x <= tx1 || x >= tx2 {
                        return Err(parse_error(text, child.range().start, format!("column separator {x} outside table")));
                    }
                    col_seps.push(x);
                }
                "RowSeparator" => {
                    let y: u32 = attr(text, child, "y")?;
                    if y <= ty1 || y >= ty2 {
                        return Err(parse_error(text, child.range().start, format!("row separator {y} outside table")));
                    }
                    row_seps.push(y);
                }
                "Cell" => {
                    let local = |v: u32, origin: u32| v.clamp(origin, u32::MAX) - origin;
                    let (x1, y1, x2, y2): (u32, u32, u32, u32) = (
                        attr(text, child, "x1")?,
                        attr(text, child, "y1")?,
                        attr(text, child, "x2")?,
                        attr(text, child, "y2")?,
                    );
                    let empty = match child.attribute("dontCare") {
                        None => false,
                        Some(v) => v.eq_ignore_ascii_case("true"),
                    };
                    cells.push(Cell {
                        start_row: attr(text, child, "startRow")?,
                        end_row: attr(text, child, "endRow")?,
                        start_col: attr(text, child, "startCol")?,
                        end_col: attr(text, child, "endCol")?,
                        bbox: Rect::new(local(x1, tx1), local(y1, ty1), local(x2, tx1), local(y2, ty1)),
                        empty,
                    });
                }
                _ => {}
            }
        }
        let mut layout = TableLayout {
            id,
            columns: boundaries(tx1, tx2, col_seps),
            rows: boundaries(ty1, ty2, row_seps),
            cells,
        };
        layout.sort_cells();
        tables.push(layout);
    }
    Ok(tables)
}
