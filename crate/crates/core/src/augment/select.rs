use rand::Rng;

use super::AbortReason;
use crate::table::{Axis, TableLayout};

/// A convex block of segments `first..=last` along `axis`, with its pixel
/// extent `[start, end)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BlockSelection {
    axis: Axis,
    first: usize,
    last: usize,
    start: u32,
    end: u32,
}

impl BlockSelection {
    /// Checks that `first..=last` is a legal source block of `layout`: inside
    /// `1..count` and convex.
    pub fn new(layout: &TableLayout, axis: Axis, first: usize, last: usize) -> Result<Self, AbortReason> {
        let segs = layout.segments(axis);
        if segs.len() < 2 {
            return Err(AbortReason::TooFewSegments);
        }
        if first == 0 || first > last || last >= segs.len() || !block_is_convex(layout, axis, first, last) {
            return Err(AbortReason::NonConvexSource);
        }
        Ok(BlockSelection {
            axis,
            first,
            last,
            start: segs[first].lo,
            end: segs[last].hi,
        })
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    /// Index of the first selected segment (`c_min`).
    pub fn first(&self) -> usize {
        self.first
    }

    /// Index of the last selected segment (`c_max`).
    pub fn last(&self) -> usize {
        self.last
    }

    /// Number of segments in the block.
    pub fn segment_count(&self) -> usize {
        self.last - self.first + 1
    }

    /// Pixel coordinate where the block starts (`x_min` / `y_min`).
    pub fn start(&self) -> u32 {
        self.start
    }

    /// Pixel coordinate where the block ends (`x_max` / `y_max`).
    pub fn end(&self) -> u32 {
        self.end
    }

    /// Pixel size of the block along its axis.
    pub fn extent(&self) -> u32 {
        self.end - self.start
    }
}

/// Insertion boundary `index` (segments `index..` move forward) and its pixel
/// position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TargetSelection {
    axis: Axis,
    index: usize,
    position: u32,
}

impl TargetSelection {
    /// Checks that `index` is a legal insertion boundary of `layout` as-is
    /// (no correction is applied).
    pub fn new(layout: &TableLayout, axis: Axis, index: usize) -> Result<Self, AbortReason> {
        let segs = layout.segments(axis);
        if index == 0 || index > segs.len() || boundary_splits_cell(layout, axis, index) {
            return Err(AbortReason::NonConvexTarget);
        }
        let position = if index == segs.len() {
            segs[index - 1].hi
        } else {
            segs[index].lo
        };
        Ok(TargetSelection { axis, index, position })
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn index(&self) -> usize {
        self.index
    }

    /// Pixel coordinate of the insertion boundary (`x_dst`).
    pub fn position(&self) -> u32 {
        self.position
    }
}

/// Smallest start index and largest end index over every cell touching
/// segment `index` along `axis`.
pub fn span_bounds(layout: &TableLayout, axis: Axis, index: usize) -> (usize, usize) {
    layout
        .cells
        .iter()
        .filter(|c| c.covers(axis, index))
        .fold((index, index), |(lo, hi), c| (lo.min(c.start(axis)), hi.max(c.end(axis))))
}

/// True when no cell touching `first..=last` reaches outside it.
pub fn block_is_convex(layout: &TableLayout, axis: Axis, first: usize, last: usize) -> bool {
    layout.cells.iter().all(|c| {
        let (s, e) = (c.start(axis), c.end(axis));
        e < first || s > last || (s >= first && e <= last)
    })
}

/// True when the boundary in front of segment `index` cuts through a cell.
pub fn boundary_splits_cell(layout: &TableLayout, axis: Axis, index: usize) -> bool {
    layout
        .cells
        .iter()
        .any(|c| c.start(axis) < index && index <= c.end(axis))
}

/// Grows the single segment `index` to the block spanned by its cells. The
/// expansion runs once; if the result is still not convex, or would include
/// segment 0, the source is rejected.
pub fn expand_source(layout: &TableLayout, axis: Axis, index: usize) -> Result<BlockSelection, AbortReason> {
    let n = layout.count(axis);
    if n < 2 {
        return Err(AbortReason::TooFewSegments);
    }
    assert!((1..n).contains(&index), "source index {index} outside 1..{n}");
    let (lo, hi) = span_bounds(layout, axis, index);
    if lo == 0 {
        return Err(AbortReason::NonConvexSource);
    }
    BlockSelection::new(layout, axis, lo, hi)
}

/// Draws a source segment uniformly from `1..count` and expands it.
pub fn select_source_block<R: Rng + ?Sized>(
    layout: &TableLayout,
    axis: Axis,
    rng: &mut R,
) -> Result<BlockSelection, AbortReason> {
    let n = layout.count(axis);
    if n < 2 {
        return Err(AbortReason::TooFewSegments);
    }
    let index = rng.gen_range(1..n);
    expand_source(layout, axis, index)
}

/// Moves boundary `index` off any spanning cell it cuts: to the cell group's
/// leading boundary when that is at least as close and not the header
/// boundary, otherwise just past its trailing segment.
pub fn correct_target(layout: &TableLayout, axis: Axis, index: usize) -> Result<TargetSelection, AbortReason> {
    let n = layout.count(axis);
    assert!((1..=n).contains(&index), "target index {index} outside 1..={n}");
    let mut d = index;
    if boundary_splits_cell(layout, axis, d) {
        let (lo, hi) = span_bounds(layout, axis, d);
        d = if d.abs_diff(lo) <= d.abs_diff(hi) && lo != 0 {
            lo
        } else {
            hi + 1
        };
    }
    TargetSelection::new(layout, axis, d)
}

/// Draws an insertion boundary uniformly from `1..=count` and corrects it.
pub fn select_target_index<R: Rng + ?Sized>(
    layout: &TableLayout,
    axis: Axis,
    rng: &mut R,
) -> Result<TargetSelection, AbortReason> {
    let n = layout.count(axis);
    if n == 0 {
        return Err(AbortReason::TooFewSegments);
    }
    let index = rng.gen_range(1..=n);
    correct_target(layout, axis, index)
}
