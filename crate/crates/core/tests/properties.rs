//! Property tests checked against brute-force oracles that never touch the
//! tree code.

use std::collections::{BTreeSet, HashMap};

use octree_bg::io::{read_mask_pgm, read_ppm, write_mask_pgm, write_ppm};
use octree_bg::{
    build_background_model, child_index, detect_frame_diff, detect_octree, f0_score, merge_trees,
    quantize_color, Color, EvalStats, Frame, Mask, ModelConfig, Octree,
};
use proptest::prelude::*;

fn color() -> impl Strategy<Value = Color> {
    any::<[u8; 3]>().prop_map(Color::from)
}

fn oracle_quantize(c: Color, levels: u8) -> Color {
    let cell = 1u16 << (8 - levels);
    let q = |v: u8| ((v as u16 / cell) * cell) as u8;
    Color::new(q(c.red), q(c.green), q(c.blue))
}

fn frame(width: u32, height: u32, palette: Vec<Color>) -> impl Strategy<Value = Frame> {
    let n = (width * height) as usize;
    proptest::collection::vec(proptest::sample::select(palette), n)
        .prop_map(move |px| Frame::new(width, height, px).unwrap())
}

fn tree_from(levels: u8, colors: &[Color]) -> Octree {
    let mut t = Octree::new(levels).unwrap();
    for &c in colors {
        t.store(c);
    }
    t
}

proptest! {
    #[test]
    fn store_then_check(colors in proptest::collection::vec(color(), 1..50), levels in 1u8..=8) {
        let t = tree_from(levels, &colors);
        for &c in &colors {
            prop_assert!(t.contains(c));
        }
    }

    #[test]
    fn membership_is_quantized_equality(a in color(), b in color(), levels in 1u8..=8) {
        let t = tree_from(levels, &[a]);
        prop_assert_eq!(t.contains(b), oracle_quantize(a, levels) == oracle_quantize(b, levels));
    }

    #[test]
    fn quantize_matches_oracle(c in color(), levels in 1u8..=8) {
        let q = quantize_color(c, levels);
        prop_assert_eq!(q, oracle_quantize(c, levels));
        prop_assert_eq!(quantize_color(q, levels), q);
        let bound = (1u16 << (8 - levels)) - 1;
        for (orig, quant) in c.channels().iter().zip(q.channels()) {
            prop_assert!((orig - quant) as u16 <= bound);
        }
    }

    #[test]
    fn index_path_is_a_bijection(a in color(), b in color(), levels in 1u8..=8) {
        let path = |c: Color| (0..levels).map(|l| child_index(c, 7 - l)).collect::<Vec<_>>();
        prop_assert_eq!(path(a) == path(b), quantize_color(a, levels) == quantize_color(b, levels));
        prop_assert!(path(a).iter().all(|&i| i < 8));
    }

    #[test]
    fn node_count_bounds(colors in proptest::collection::vec(color(), 1..80), levels in 1u8..=8) {
        let t = tree_from(levels, &colors);
        let distinct: BTreeSet<_> = colors.iter().map(|&c| oracle_quantize(c, levels)).collect();
        let l = levels as usize;
        prop_assert!(t.node_count() <= 1 + l * distinct.len());
        // root plus at least one full path
        prop_assert!(t.node_count() > l);
        prop_assert_eq!(t.leaf_colors(), distinct);
    }

    #[test]
    fn prune_commutes_with_quantize(
        colors in proptest::collection::vec(color(), 0..40),
        probe in color(),
        levels in 1u8..=8,
        cut in 1u8..=8,
    ) {
        let cut = cut.min(levels);
        let pruned = tree_from(levels, &colors).prune(cut).unwrap();
        let expected = colors.iter().any(|&s| oracle_quantize(s, cut) == oracle_quantize(probe, cut));
        prop_assert_eq!(pruned.contains(probe), expected);
        prop_assert_eq!(pruned.depth(), cut);
    }

    #[test]
    fn leaves_are_members(colors in proptest::collection::vec(color(), 0..40), levels in 1u8..=8) {
        let t = tree_from(levels, &colors);
        let leaves = t.leaf_colors();
        prop_assert!(leaves.len() <= 8usize.pow(levels as u32));
        for c in leaves {
            prop_assert!(t.contains(c));
        }
    }

    #[test]
    fn tree_bytes_roundtrip(colors in proptest::collection::vec(color(), 0..40), levels in 1u8..=8) {
        let t = tree_from(levels, &colors);
        prop_assert_eq!(Octree::from_bytes(&t.to_bytes(), levels).unwrap(), t);
    }

    #[test]
    fn merge_is_frequency_rule_and_monotone(
        sets in proptest::collection::vec(proptest::collection::vec(color(), 0..6), 1..8),
        levels in 1u8..=3,
        t1 in 1u32..=10,
        t2 in 1u32..=10,
    ) {
        let trees: Vec<Octree> = sets.iter().map(|s| tree_from(levels, s)).collect();
        let n = trees.len();
        let mut counts: HashMap<Color, usize> = HashMap::new();
        for s in &sets {
            let q: BTreeSet<_> = s.iter().map(|&c| oracle_quantize(c, levels)).collect();
            for c in q {
                *counts.entry(c).or_default() += 1;
            }
        }
        let (lo, hi) = (t1.min(t2) as f64 / 10.0, t1.max(t2) as f64 / 10.0);
        let rule = |th: f64| -> BTreeSet<Color> {
            counts.iter().filter(|(_, &k)| k as f64 / n as f64 >= th).map(|(&c, _)| c).collect()
        };
        let m_lo = merge_trees(&trees, lo, levels).unwrap().leaf_colors();
        let m_hi = merge_trees(&trees, hi, levels).unwrap().leaf_colors();
        prop_assert_eq!(&m_lo, &rule(lo));
        prop_assert_eq!(&m_hi, &rule(hi));
        prop_assert!(m_hi.is_subset(&m_lo));

        let union: BTreeSet<Color> = counts.keys().copied().collect();
        let all: BTreeSet<Color> = counts.iter().filter(|(_, &k)| k == n).map(|(&c, _)| c).collect();
        prop_assert_eq!(merge_trees(&trees, 1.0 / n as f64, levels).unwrap().leaf_colors(), union);
        prop_assert_eq!(merge_trees(&trees, 1.0, levels).unwrap().leaf_colors(), all);

        let mut reversed = trees.clone();
        reversed.reverse();
        prop_assert_eq!(merge_trees(&reversed, lo, levels).unwrap(), merge_trees(&trees, lo, levels).unwrap());
    }

    #[test]
    fn region_independence(
        left in proptest::collection::vec(frame(3, 4, vec![Color::BLACK, Color::WHITE, Color::new(0, 200, 0)]), 3),
        right in proptest::collection::vec(frame(3, 4, vec![Color::new(90, 0, 0), Color::new(0, 0, 90)]), 3),
        other_right in proptest::collection::vec(frame(3, 4, vec![Color::new(250, 250, 0)]), 3),
    ) {
        // 6x4 frames, left half from `left`, right half from one of two sources.
        let stitch = |l: &Frame, r: &Frame| {
            let mut f = Frame::filled(6, 4, Color::BLACK);
            for y in 0..4 {
                for x in 0..3 {
                    f.set(x, y, l.get(x, y));
                    f.set(x + 3, y, r.get(x, y));
                }
            }
            f
        };
        let a: Vec<Frame> = left.iter().zip(&right).map(|(l, r)| stitch(l, r)).collect();
        let b: Vec<Frame> = left.iter().zip(&other_right).map(|(l, r)| stitch(l, r)).collect();
        let cfg = ModelConfig { grid_cols: 2, threshold: 0.6, ..ModelConfig::default() };
        let ma = build_background_model(&a, &cfg).unwrap();
        let mb = build_background_model(&b, &cfg).unwrap();
        prop_assert_eq!(ma.tree(0, 0), mb.tree(0, 0));
    }

    #[test]
    fn detection_sees_only_quantized_colors(
        train in proptest::collection::vec(frame(5, 4, vec![Color::new(10, 20, 30), Color::new(130, 20, 200), Color::new(255, 255, 0)]), 4),
        probe in frame(5, 4, vec![Color::new(12, 25, 31), Color::new(130, 20, 200), Color::new(60, 60, 60), Color::new(255, 250, 9)]),
        levels in 1u8..=8,
        grid_rows in 1u16..=3,
    ) {
        let cfg = ModelConfig { levels, grid_rows, ..ModelConfig::default() };
        let model = build_background_model(&train, &cfg).unwrap();
        let quantized = Frame::new(5, 4, probe.pixels().iter().map(|&c| quantize_color(c, levels)).collect()).unwrap();
        let mask = detect_octree(&model, &probe).unwrap();
        prop_assert_eq!(&detect_octree(&model, &quantized).unwrap(), &mask);
        prop_assert_eq!(detect_octree(&model, &probe).unwrap(), mask);
    }

    #[test]
    fn raising_threshold_grows_foreground(
        train in proptest::collection::vec(frame(4, 4, vec![Color::BLACK, Color::WHITE, Color::new(0, 128, 255), Color::new(77, 77, 77)]), 2..8),
        probe in frame(4, 4, vec![Color::BLACK, Color::WHITE, Color::new(0, 128, 255), Color::new(77, 77, 77)]),
        t1 in 1u32..=10,
        t2 in 1u32..=10,
    ) {
        let (lo, hi) = (t1.min(t2) as f64 / 10.0, t1.max(t2) as f64 / 10.0);
        let mask = |threshold| {
            let m = build_background_model(&train, &ModelConfig { threshold, ..ModelConfig::default() }).unwrap();
            detect_octree(&m, &probe).unwrap()
        };
        let (m_lo, m_hi) = (mask(lo), mask(hi));
        for (a, b) in m_lo.values().iter().zip(m_hi.values()) {
            prop_assert!(!a || *b);
        }
    }

    #[test]
    fn frame_diff_of_identical_frames_is_empty(f in frame(6, 5, vec![Color::BLACK, Color::new(3, 200, 77)]), t in any::<u8>()) {
        prop_assert!(detect_frame_diff(&f, &f, t).unwrap().is_all_background());
    }

    #[test]
    fn f0_bounds_and_scale_invariance(tn in 1u64..10_000, fnn in 0u64..10_000, fp in 0u64..10_000, tp in 0u64..10_000, k in 1u64..50) {
        let s = f0_score(&EvalStats::new(tn, tp, fnn, fp));
        let (p, r, f) = (s.p0.unwrap(), s.r0.unwrap(), s.f0.unwrap());
        prop_assert!((0.0..=1.0).contains(&f));
        prop_assert!(p.min(r) - 1e-12 <= f && f <= p.max(r) + 1e-12);
        prop_assert_eq!(f == 1.0, fnn == 0 && fp == 0);
        let scaled = f0_score(&EvalStats::new(tn * k, tp * k, fnn * k, fp * k));
        prop_assert!((scaled.f0.unwrap() - f).abs() < 1e-12);
        prop_assert!((scaled.p0.unwrap() - p).abs() < 1e-12);
        prop_assert!((scaled.r0.unwrap() - r).abs() < 1e-12);
    }

    #[test]
    fn pnm_roundtrips(f in (1u32..12, 1u32..12).prop_flat_map(|(w, h)| {
        (proptest::collection::vec(any::<[u8; 3]>(), (w * h) as usize), proptest::collection::vec(any::<bool>(), (w * h) as usize), Just((w, h)))
    })) {
        let (px, bits, (w, h)) = f;
        let frame = Frame::new(w, h, px.into_iter().map(Color::from).collect()).unwrap();
        prop_assert_eq!(read_ppm(&write_ppm(&frame)).unwrap(), frame);
        let mask = Mask::new(w, h, bits).unwrap();
        prop_assert_eq!(read_mask_pgm(&write_mask_pgm(&mask)).unwrap(), mask);
    }
}
