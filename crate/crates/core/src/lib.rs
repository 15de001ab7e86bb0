//! Structural data augmentation for table structure recognition.
//!
//! The crate edits annotated table images by deleting and replicating whole
//! rows and columns while keeping pixels and ground truth consistent, builds
//! pruned trees of such edits per table, samples augmented variants from a
//! category-grid distribution, renders pixel-level separator ground truth,
//! and scores predicted structures with correspondence-matrix metrics.
//!
//! Modules:
//!
//! - [`table`]: layout/document types and validation
//! - [`annot`]: annotation JSON, T-Truth import, manifests and splits
//! - [`augment`]: the four structural operations and the photometric baseline
//! - [`pipeline`]: tree exploration, categories, sampling distribution
//! - [`pixel_gt`]: separator masks expanded to the nearest ink
//! - [`metrics`]: correct / over- / under-segmentation

pub mod annot;
pub mod augment;
pub mod error;
pub mod metrics;
pub mod pipeline;
pub mod pixel_gt;
pub mod raster;
pub mod table;

pub use error::{Error, Result};
pub use raster::Raster;
pub use table::{Axis, Cell, Interval, Rect, TableDocument, TableLayout, Violation};
