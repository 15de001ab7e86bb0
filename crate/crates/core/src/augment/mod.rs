//! Structural augmentation: row/column deletion and replication.
//!
//! Each operation runs in three steps. A source block is drawn and expanded
//! until no spanning cell is cut ([`select_source_block`]); for replication an
//! insertion boundary is drawn and moved off any spanning cell
//! ([`select_target_index`]); then the image and the ground truth are edited
//! together ([`delete_block`], [`replicate_block`]). Index 0 on either axis
//! (header column / header row) is never removed or moved.
//!
//! Everything is written against [`Axis`]; row operations are the exact
//! transpose of column operations.

mod baseline;
mod execute;
mod select;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use baseline::{crop_layout, standard_augment, standard_augment_document, StandardParams};
pub use execute::{apply_record, delete_block, replay, replicate_block, Augmentable};
pub use select::{
    block_is_convex, boundary_splits_cell, correct_target, expand_source, select_source_block,
    select_target_index, span_bounds, BlockSelection, TargetSelection,
};

use crate::table::Axis;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OpKind {
    RowDel,
    ColDel,
    RowRep,
    ColRep,
}

impl OpKind {
    pub const ALL: [OpKind; 4] = [OpKind::RowDel, OpKind::ColDel, OpKind::RowRep, OpKind::ColRep];

    pub fn axis(self) -> Axis {
        match self {
            OpKind::RowDel | OpKind::RowRep => Axis::Row,
            OpKind::ColDel | OpKind::ColRep => Axis::Column,
        }
    }

    pub fn is_replication(self) -> bool {
        matches!(self, OpKind::RowRep | OpKind::ColRep)
    }
}

/// Why an operation left the table unaltered.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AbortReason {
    NonConvexSource,
    NonConvexTarget,
    TooFewSegments,
}

/// Replayable description of one applied operation. `c_min..=c_max` is the
/// source block and `d` the insertion boundary (replication only), all as
/// indices along the operation's axis in the table it was applied to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OpRecord {
    pub kind: OpKind,
    #[serde(rename = "cMin")]
    pub c_min: usize,
    #[serde(rename = "cMax")]
    pub c_max: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OpOutcome<T> {
    Applied { table: T, record: OpRecord },
    Aborted { table: T, reason: AbortReason },
}

impl<T> OpOutcome<T> {
    pub fn table(&self) -> &T {
        match self {
            OpOutcome::Applied { table, .. } | OpOutcome::Aborted { table, .. } => table,
        }
    }

    pub fn into_table(self) -> T {
        match self {
            OpOutcome::Applied { table, .. } | OpOutcome::Aborted { table, .. } => table,
        }
    }

    pub fn is_aborted(&self) -> bool {
        matches!(self, OpOutcome::Aborted { .. })
    }
}

/// Runs one operation of `kind` (or a uniformly drawn kind) on `table`.
///
/// Draw order from `rng`: kind (if not given), source index, then target
/// index for replications.
pub fn apply_random_op<T: Augmentable, R: Rng + ?Sized>(
    table: &T,
    rng: &mut R,
    kind: Option<OpKind>,
) -> OpOutcome<T> {
    let kind = kind.unwrap_or_else(|| OpKind::ALL[rng.gen_range(0..OpKind::ALL.len())]);
    let axis = kind.axis();
    let layout = table.layout();
    let abort = |reason| OpOutcome::Aborted {
        table: table.clone(),
        reason,
    };

    let sel = match select_source_block(layout, axis, rng) {
        Ok(s) => s,
        Err(reason) => return abort(reason),
    };
    if !kind.is_replication() {
        let out = table.delete_block(&sel).expect("selection drawn from this table");
        return OpOutcome::Applied {
            table: out,
            record: OpRecord {
                kind,
                c_min: sel.first(),
                c_max: sel.last(),
                d: None,
            },
        };
    }
    let tgt = match select_target_index(layout, axis, rng) {
        Ok(t) => t,
        Err(reason) => return abort(reason),
    };
    let out = table
        .replicate_block(&sel, &tgt)
        .expect("selections drawn from this table");
    OpOutcome::Applied {
        table: out,
        record: OpRecord {
            kind,
            c_min: sel.first(),
            c_max: sel.last(),
            d: Some(tgt.index()),
        },
    }
}
