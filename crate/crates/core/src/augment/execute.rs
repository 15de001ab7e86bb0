use super::{BlockSelection, OpRecord, TargetSelection};
use crate::error::{Error, Result};
use crate::raster::Raster;
use crate::table::{Axis, TableDocument, TableLayout};

/// Anything the structural operations can edit: a bare layout, or a layout
/// with its image.
pub trait Augmentable: Clone {
    fn layout(&self) -> &TableLayout;
    fn delete_block(&self, sel: &BlockSelection) -> Result<Self>;
    fn replicate_block(&self, sel: &BlockSelection, tgt: &TargetSelection) -> Result<Self>;
}

/// Removes the block and closes the gap.
pub fn delete_block<T: Augmentable>(table: &T, sel: &BlockSelection) -> Result<T> {
    table.delete_block(sel)
}

/// Inserts a copy of the block at the target boundary, growing the table.
pub fn replicate_block<T: Augmentable>(table: &T, sel: &BlockSelection, tgt: &TargetSelection) -> Result<T> {
    table.replicate_block(sel, tgt)
}

fn check_selection(layout: &TableLayout, sel: &BlockSelection) -> Result<()> {
    let segs = layout.segments(sel.axis());
    if sel.first() == 0 || sel.last() >= segs.len() {
        return Err(Error::Domain(format!(
            "block {}..={} does not fit {} {}",
            sel.first(),
            sel.last(),
            segs.len(),
            sel.axis().plural()
        )));
    }
    if segs[sel.first()].lo != sel.start() || segs[sel.last()].hi != sel.end() {
        return Err(Error::Domain("block selection was computed on a different table".into()));
    }
    if segs.len() - sel.segment_count() == 0 {
        return Err(Error::Domain(format!("deletion would leave no {}", sel.axis().plural())));
    }
    Ok(())
}

fn check_target(layout: &TableLayout, tgt: &TargetSelection) -> Result<()> {
    let segs = layout.segments(tgt.axis());
    let ok = match tgt.index() {
        0 => false,
        d if d == segs.len() => segs[d - 1].hi == tgt.position(),
        d if d < segs.len() => segs[d].lo == tgt.position(),
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Domain("target selection was computed on a different table".into()))
    }
}

fn delete_layout(layout: &TableLayout, sel: &BlockSelection) -> Result<TableLayout> {
    check_selection(layout, sel)?;
    let axis = sel.axis();
    let (first, last) = (sel.first(), sel.last());
    let n = sel.segment_count() as i64;
    let w = sel.extent() as i64;

    let mut out = layout.clone();
    let segs = layout.segments(axis);
    *out.segments_mut(axis) = segs[..first]
        .iter()
        .copied()
        .chain(segs[last + 1..].iter().map(|s| crate::table::Interval::new(s.lo - w as u32, s.hi - w as u32)))
        .collect();
    out.cells = layout
        .cells
        .iter()
        .filter(|c| !(c.start(axis) >= first && c.end(axis) <= last))
        .map(|c| {
            if c.start(axis) > last {
                let mut c = c.reindexed(axis, -n);
                c.bbox = c.bbox.shifted(axis, -w);
                c
            } else {
                *c
            }
        })
        .collect();
    out.sort_cells();
    Ok(out)
}

fn replicate_layout(layout: &TableLayout, sel: &BlockSelection, tgt: &TargetSelection) -> Result<TableLayout> {
    check_selection(layout, sel)?;
    check_target(layout, tgt)?;
    if sel.axis() != tgt.axis() {
        return Err(Error::Domain("source and target lie on different axes".into()));
    }
    let axis = sel.axis();
    let (first, last, d) = (sel.first(), sel.last(), tgt.index());
    let n = sel.segment_count() as i64;
    let w = sel.extent() as i64;
    let index_offset = d as i64 - first as i64;
    let pixel_offset = tgt.position() as i64 - sel.start() as i64;

    let segs = layout.segments(axis);
    let moved = |s: &crate::table::Interval, by: i64| {
        crate::table::Interval::new(crate::table::shift(s.lo, by), crate::table::shift(s.hi, by))
    };
    let new_segs = segs[..d]
        .iter()
        .copied()
        .chain(segs[first..=last].iter().map(|s| moved(s, pixel_offset)))
        .chain(segs[d..].iter().map(|s| moved(s, w)))
        .collect();

    let mut cells: Vec<_> = layout
        .cells
        .iter()
        .map(|c| {
            if c.start(axis) >= d {
                let mut c = c.reindexed(axis, n);
                c.bbox = c.bbox.shifted(axis, w);
                c
            } else {
                *c
            }
        })
        .collect();
    cells.extend(
        layout
            .cells
            .iter()
            .filter(|c| c.start(axis) >= first && c.end(axis) <= last)
            .map(|c| {
                let mut c = c.reindexed(axis, index_offset);
                c.bbox = c.bbox.shifted(axis, pixel_offset);
                c
            }),
    );

    let mut out = layout.clone();
    *out.segments_mut(axis) = new_segs;
    out.cells = cells;
    out.sort_cells();
    Ok(out)
}

impl Augmentable for TableLayout {
    fn layout(&self) -> &TableLayout {
        self
    }

    fn delete_block(&self, sel: &BlockSelection) -> Result<Self> {
        delete_layout(self, sel)
    }

    fn replicate_block(&self, sel: &BlockSelection, tgt: &TargetSelection) -> Result<Self> {
        replicate_layout(self, sel, tgt)
    }
}

impl Augmentable for TableDocument {
    fn layout(&self) -> &TableLayout {
        &self.layout
    }

    fn delete_block(&self, sel: &BlockSelection) -> Result<Self> {
        let layout = delete_layout(&self.layout, sel)?;
        let image: Raster = match sel.axis() {
            Axis::Column => self.image.remove_columns(sel.start(), sel.end()),
            Axis::Row => self.image.remove_rows(sel.start(), sel.end()),
        };
        Ok(TableDocument { layout, image })
    }

    fn replicate_block(&self, sel: &BlockSelection, tgt: &TargetSelection) -> Result<Self> {
        let layout = replicate_layout(&self.layout, sel, tgt)?;
        let image = match sel.axis() {
            Axis::Column => self.image.splice_columns(sel.start(), sel.end(), tgt.position()),
            Axis::Row => self.image.splice_rows(sel.start(), sel.end(), tgt.position()),
        };
        Ok(TableDocument { layout, image })
    }
}

/// Re-applies a recorded operation. The record's indices must describe a
/// legal (convex, uncorrected) selection on `table`.
pub fn apply_record<T: Augmentable>(table: &T, record: &OpRecord) -> Result<T> {
    let axis = record.kind.axis();
    let layout = table.layout();
    let sel = BlockSelection::new(layout, axis, record.c_min, record.c_max)
        .map_err(|r| Error::Domain(format!("source block rejected: {r:?}")))?;
    if record.kind.is_replication() {
        let d = record
            .d
            .ok_or_else(|| Error::Domain("replication record without target index".into()))?;
        let tgt = TargetSelection::new(layout, axis, d)
            .map_err(|r| Error::Domain(format!("target rejected: {r:?}")))?;
        table.replicate_block(&sel, &tgt)
    } else {
        table.delete_block(&sel)
    }
}

/// Replays a path of operations from `root`.
pub fn replay<T: Augmentable>(root: &T, path: &[OpRecord]) -> Result<T> {
    let mut cur = root.clone();
    for (step, rec) in path.iter().enumerate() {
        cur = apply_record(&cur, rec).map_err(|e| Error::Replay {
            step,
            reason: e.to_string(),
        })?;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::augment::{correct_target, expand_source};
    use crate::table::{layout_from_spans, Interval};

    fn striped(col_widths: &[u32], spans: &[(usize, usize, usize, usize)]) -> TableDocument {
        let l = layout_from_spans("t", col_widths, &[6, 6], spans);
        let w: u32 = col_widths.iter().sum();
        // every x gets its own gray level so moved pixels can be traced
        let mut img = Raster::filled(w, 12, 1, 0);
        for y in 0..12 {
            for x in 0..w {
                img.set_pixel(x, y, &[(x % 256) as u8]);
            }
        }
        TableDocument::new(l, img)
    }

    #[test]
    fn delete_middle_column() {
        let d = striped(&[50, 50, 50], &[]);
        let sel = expand_source(&d.layout, Axis::Column, 1).unwrap();
        let out = d.delete_block(&sel).unwrap();
        assert_eq!(out.layout.columns, vec![Interval::new(0, 50), Interval::new(50, 100)]);
        assert_eq!(out.image.width(), 100);
        assert_eq!(out.image.pixel(50, 0), &[100]);
        assert!(out.validate().is_empty());
    }

    #[test]
    fn delete_spanning_block_shifts_trailing_cells() {
        let d = striped(&[10, 20, 30, 40], &[(0, 0, 1, 2)]);
        let sel = expand_source(&d.layout, Axis::Column, 2).unwrap();
        assert_eq!((sel.first(), sel.last(), sel.extent()), (1, 2, 50));
        let out = d.delete_block(&sel).unwrap();
        assert!(out.validate().is_empty());
        assert_eq!(out.layout.col_count(), 2);
        let moved: Vec<_> = out.layout.cells.iter().filter(|c| c.start_col == 1).collect();
        assert_eq!(moved.len(), 2);
        for c in moved {
            assert_eq!((c.bbox.x1, c.bbox.x2), (60 - 50, 100 - 50));
        }
        assert_eq!(out.layout.grid_index().unwrap().rows(), 2);
    }

    #[test]
    fn append_replication() {
        let d = striped(&[50, 50], &[]);
        let sel = expand_source(&d.layout, Axis::Column, 1).unwrap();
        let tgt = correct_target(&d.layout, Axis::Column, 2).unwrap();
        let out = d.replicate_block(&sel, &tgt).unwrap();
        assert_eq!(
            out.layout.columns,
            vec![Interval::new(0, 50), Interval::new(50, 100), Interval::new(100, 150)]
        );
        for y in 0..12 {
            for x in 0..50 {
                assert_eq!(out.image.pixel(100 + x, y), d.image.pixel(50 + x, y));
            }
        }
        assert!(out.validate().is_empty());
    }

    #[test]
    fn replicate_block_to_front() {
        let d = striped(&[10, 20, 30, 40], &[(0, 0, 1, 2)]);
        let sel = expand_source(&d.layout, Axis::Column, 1).unwrap();
        let tgt = correct_target(&d.layout, Axis::Column, 1).unwrap();
        let out = d.replicate_block(&sel, &tgt).unwrap();
        assert!(out.validate().is_empty());
        let cols = &out.layout.columns;
        assert_eq!(cols.len(), 6);
        assert_eq!(cols[1], Interval::new(10, 30));
        assert_eq!(cols[2], Interval::new(30, 60));
        assert_eq!(cols[3], Interval::new(60, 80));
        assert_eq!(cols[5], Interval::new(110, 150));
        // copied region equals the original block pixels
        for y in 0..12 {
            for x in 0..50 {
                assert_eq!(out.image.pixel(10 + x, y), d.image.pixel(10 + x, y));
                assert_eq!(out.image.pixel(60 + x, y), d.image.pixel(10 + x, y));
            }
        }
        assert!(out.layout.cells.iter().any(|c| (c.start_row, c.start_col, c.end_col) == (0, 1, 2)));
        assert!(out.layout.cells.iter().any(|c| (c.start_row, c.start_col, c.end_col) == (0, 3, 4)));
    }

    #[test]
    fn round_trip_restores_original() {
        let d = striped(&[10, 20, 30, 40], &[(0, 0, 1, 2)]);
        let sel = expand_source(&d.layout, Axis::Column, 1).unwrap();
        for d_idx in [1, 3, 4] {
            let tgt = correct_target(&d.layout, Axis::Column, d_idx).unwrap();
            let grown = d.replicate_block(&sel, &tgt).unwrap();
            let inserted = BlockSelection::new(&grown.layout, Axis::Column, tgt.index(), tgt.index() + 1).unwrap();
            assert_eq!(grown.delete_block(&inserted).unwrap(), d);
        }
    }

    #[test]
    fn replay_rejects_foreign_record() {
        let d = striped(&[10, 10], &[]);
        let rec = OpRecord {
            kind: super::super::OpKind::ColDel,
            c_min: 1,
            c_max: 3,
            d: None,
        };
        assert!(matches!(replay(&d, &[rec]), Err(Error::Replay { step: 0, .. })));
    }

    #[test]
    fn mismatched_selection_is_an_error() {
        let a = striped(&[10, 10, 10], &[]);
        let b = striped(&[10, 15, 10], &[]);
        let sel = expand_source(&a.layout, Axis::Column, 1).unwrap();
        assert!(b.delete_block(&sel).is_err());
    }
}
