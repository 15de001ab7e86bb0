use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tablemorph::annot::{parse_annotation, serialize_annotation};
use tablemorph::augment::{
    apply_random_op, apply_record, delete_block, expand_source, replicate_block, select_source_block,
    select_target_index, BlockSelection, OpKind, OpOutcome,
};
use tablemorph::metrics::{evaluate, evaluate_segments, SegmentKind, SegmentSet};
use tablemorph::pixel_gt::{binarize, expand_separators};
use tablemorph::table::layout_from_spans;
use tablemorph::{Axis, Raster, TableDocument, TableLayout};

/// Random layout with spanning cells drawn from `seed`.
fn layout(widths: &[u32], heights: &[u32], seed: u64) -> TableLayout {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (rows, cols) = (heights.len(), widths.len());
    let mut taken = vec![false; rows * cols];
    let mut spans = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if taken[r * cols + c] || !rng.gen_bool(0.2) {
                continue;
            }
            let ec = (c + rng.gen_range(0..3)).min(cols - 1);
            let er = (r + rng.gen_range(0..3)).min(rows - 1);
            let free = (r..=er).all(|rr| (c..=ec).all(|cc| !taken[rr * cols + cc]));
            if !free || (er == r && ec == c) {
                continue;
            }
            for rr in r..=er {
                for cc in c..=ec {
                    taken[rr * cols + cc] = true;
                }
            }
            spans.push((r, er, c, ec));
        }
    }
    layout_from_spans("t", widths, heights, &spans)
}

/// Image whose pixel values encode their position, so misplaced copies show.
fn image_for(l: &TableLayout, channels: u8) -> Raster {
    let (w, h) = (l.width(), l.height());
    let data = (0..w * h * channels as u32).map(|i| (i.wrapping_mul(2654435761) >> 24) as u8).collect();
    Raster::from_raw(w, h, channels, data).unwrap()
}

fn table() -> impl Strategy<Value = TableDocument> {
    (
        prop::collection::vec(4u32..24, 1..9),
        prop::collection::vec(4u32..16, 1..9),
        any::<u64>(),
        prop_oneof![Just(1u8), Just(3u8)],
    )
        .prop_map(|(w, h, seed, ch)| {
            let l = layout(&w, &h, seed);
            let img = image_for(&l, ch);
            TableDocument::new(l, img)
        })
}

fn axis() -> impl Strategy<Value = Axis> {
    prop_oneof![Just(Axis::Column), Just(Axis::Row)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn replicate_then_delete_is_identity(doc in table(), axis in axis(), seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (Ok(src), Ok(tgt)) = (
            select_source_block(&doc.layout, axis, &mut rng),
            select_target_index(&doc.layout, axis, &mut rng),
        ) else {
            return Ok(());
        };
        let grown = replicate_block(&doc, &src, &tgt).unwrap();
        prop_assert_eq!(grown.layout.count(axis), doc.layout.count(axis) + src.segment_count());
        let copy = BlockSelection::new(&grown.layout, axis, tgt.index(), tgt.index() + src.segment_count() - 1).unwrap();
        let back = delete_block(&grown, &copy).unwrap();
        prop_assert_eq!(back, doc);
    }

    #[test]
    fn operations_keep_documents_valid(doc in table(), seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cur = doc;
        for _ in 0..8 {
            cur = apply_random_op(&cur, &mut rng, None).into_table();
            prop_assert!(cur.validate().is_empty(), "{:?}", cur.validate());
        }
    }

    #[test]
    fn row_ops_mirror_column_ops(doc in table(), seed: u64, kind in 0usize..2) {
        let (row_kind, col_kind) = [(OpKind::RowDel, OpKind::ColDel), (OpKind::RowRep, OpKind::ColRep)][kind];
        let rows = apply_random_op(&doc, &mut ChaCha8Rng::seed_from_u64(seed), Some(row_kind));
        let cols = apply_random_op(&doc.transpose(), &mut ChaCha8Rng::seed_from_u64(seed), Some(col_kind));
        prop_assert_eq!(rows.is_aborted(), cols.is_aborted());
        prop_assert_eq!(rows.table().transpose(), cols.into_table());
    }

    #[test]
    fn sources_are_convex_and_spare_the_first_segment(doc in table(), axis in axis()) {
        let l = &doc.layout;
        for c in 1..l.count(axis) {
            if let Ok(sel) = expand_source(l, axis, c) {
                prop_assert!(sel.first() >= 1);
                prop_assert!(sel.first() <= c && c <= sel.last());
                for cell in &l.cells {
                    let (s, e) = (cell.start(axis), cell.end(axis));
                    prop_assert!(e < sel.first() || s > sel.last() || (s >= sel.first() && e <= sel.last()));
                }
            }
        }
    }

    #[test]
    fn deletions_keep_the_first_segment(doc in table(), seed: u64, kind in prop_oneof![Just(OpKind::RowDel), Just(OpKind::ColDel)]) {
        let axis = kind.axis();
        let first = doc.layout.segments(axis)[0];
        let out = apply_random_op(&doc, &mut ChaCha8Rng::seed_from_u64(seed), Some(kind)).into_table();
        prop_assert_eq!(out.layout.segments(axis)[0], first);
    }

    #[test]
    fn records_replay_exactly(doc in table(), seed: u64) {
        if let OpOutcome::Applied { table, record } = apply_random_op(&doc, &mut ChaCha8Rng::seed_from_u64(seed), None) {
            prop_assert_eq!(apply_record(&doc, &record).unwrap(), table);
        }
    }

    #[test]
    fn annotations_round_trip(doc in table()) {
        let bytes = serialize_annotation(&doc.layout).unwrap();
        let parsed = parse_annotation(&bytes).unwrap();
        prop_assert_eq!(&parsed, &doc.layout);
        prop_assert_eq!(serialize_annotation(&parsed).unwrap(), bytes);
    }

    #[test]
    fn metric_counts_are_consistent(gt in table(), pred_seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(pred_seed);
        let pred = apply_random_op(&gt, &mut rng, Some(OpKind::ColDel)).into_table();
        // compare on the same canvas by stretching the last column back
        let mut p = pred.layout.clone();
        let extra = gt.layout.width() - p.width();
        p.columns.last_mut().unwrap().hi += extra;
        for c in p.cells.iter_mut().filter(|c| c.end_col == p.columns.len() - 1) {
            c.bbox.x2 += extra;
        }
        let r = evaluate(&gt.layout, &p, 0.1).unwrap();
        for k in [&r.row, &r.column, &r.cell] {
            prop_assert!(k.correct + k.over_seg <= k.gt_count);
        }
        prop_assert_eq!(r.row.correct, r.row.gt_count);
    }

    #[test]
    fn metrics_ignore_segment_order(gt in table(), pred in table(), seed: u64) {
        let (g, mut p) = (gt.layout, pred.layout);
        // put the prediction on the ground-truth canvas
        p.columns.last_mut().unwrap().hi = g.width().max(p.columns.last().unwrap().lo + 1);
        p.rows.last_mut().unwrap().hi = g.height().max(p.rows.last().unwrap().lo + 1);
        prop_assume!(p.width() == g.width() && p.height() == g.height());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for kind in [SegmentKind::Row, SegmentKind::Column] {
            let gs = SegmentSet::from_layout(&g, kind).unwrap();
            let ps = SegmentSet::from_layout(&p, kind).unwrap();
            let base = evaluate_segments(&gs, &ps, 0.1).unwrap();
            let mut gr = gs.regions().to_vec();
            let mut pr = ps.regions().to_vec();
            gr.shuffle(&mut rng);
            pr.shuffle(&mut rng);
            let shuffled = evaluate_segments(
                &SegmentSet::new(gs.canvas(), gr).unwrap(),
                &SegmentSet::new(ps.canvas(), pr).unwrap(),
                0.1,
            ).unwrap();
            prop_assert_eq!(base, shuffled);
        }
    }

    #[test]
    fn bands_ignore_outer_whitespace(widths in prop::collection::vec(8u32..24, 2..6), pad in 1u32..20, seed: u64) {
        let l = layout(&widths, &[20], seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut img = Raster::filled(l.width(), l.height(), 1, 255);
        for col in &l.columns {
            let a = rng.gen_range(col.lo + 1..col.hi - 2);
            img.fill_rect(a, 4, a + 2, 16, 0);
        }
        let (_, cols) = expand_separators(&l, &binarize(&img, 128)).unwrap();

        let mut wide = l.clone();
        wide.columns.last_mut().unwrap().hi += pad;
        let mut wide_img = Raster::filled(wide.width(), 20, 1, 255);
        for y in 0..20 {
            for x in 0..l.width() {
                wide_img.set_pixel(x, y, img.pixel(x, y));
            }
        }
        let (_, wide_cols) = expand_separators(&wide, &binarize(&wide_img, 128)).unwrap();
        let cropped = wide_cols.to_raster().crop(0, 0, l.width(), 20);
        prop_assert_eq!(cropped, cols.to_raster());
    }
}
