//! Property tests for the model invariants and the solver/table/pipeline
//! agreement, checked against the brute-force oracles in `common`.

mod common;

use proptest::prelude::*;

use common::PairOracle;
use safc_core::{
    compile_weight, cvm_ilp, cvm_table_lookup, decode, enumerate_representable_set, fawd_ilp,
    fawd_table_lookup, inconsecutivity_trigger, inject_faults, is_consecutive_exact,
    realized_weight, representable_range, Bitmap, CellFault, CompilePolicy, DecompositionTable,
    FaultMap, FaultMapSide, GroupingConfig, TableCache, WeightValue,
};

fn arb_config() -> impl Strategy<Value = GroupingConfig> {
    (1usize..=3, 1usize..=2, prop_oneof![Just(2u32), Just(4u32)])
        .prop_map(|(c, r, l)| GroupingConfig::new(c, r, l).unwrap())
}

fn arb_bitmap(config: GroupingConfig) -> impl Strategy<Value = Bitmap> {
    proptest::collection::vec(0..=config.max_cell(), config.cells_per_side())
        .prop_map(move |cells| Bitmap::from_cells(cells, &config).unwrap())
}

/// Two bitmaps whose cellwise sum stays within `0..=L-1`, for linearity.
fn arb_bitmap_pair_summable(
    config: GroupingConfig,
) -> impl Strategy<Value = (Bitmap, Bitmap)> {
    let cell = move |_| {
        (0..=config.max_cell())
            .prop_flat_map(move |a| (Just(a), 0..=config.max_cell() - a))
    };
    proptest::collection::vec(cell(()), config.cells_per_side()).prop_map(move |pairs| {
        let (a, b): (Vec<u8>, Vec<u8>) = pairs.into_iter().unzip();
        (
            Bitmap::from_cells(a, &config).unwrap(),
            Bitmap::from_cells(b, &config).unwrap(),
        )
    })
}

fn arb_side(config: GroupingConfig) -> impl Strategy<Value = FaultMapSide> {
    proptest::collection::vec(0u8..=2, config.cells_per_side()).prop_map(move |codes| {
        let cells = codes
            .iter()
            .map(|&c| CellFault::from_code(c).unwrap())
            .collect();
        FaultMapSide::from_cells(cells, &config).unwrap()
    })
}

fn arb_map(config: GroupingConfig) -> impl Strategy<Value = FaultMap> {
    (arb_side(config), arb_side(config)).prop_map(|(pos, neg)| FaultMap { pos, neg })
}

fn config_and<S, T, F>(f: F) -> impl Strategy<Value = (GroupingConfig, T)>
where
    S: Strategy<Value = T>,
    T: std::fmt::Debug,
    F: Fn(GroupingConfig) -> S + Copy,
{
    arb_config().prop_flat_map(move |c| (Just(c), f(c)))
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 256,
        failure_persistence: None,
        .. ProptestConfig::default()
    })]

    #[test]
    fn decode_is_linear((c, (a, b)) in config_and(arb_bitmap_pair_summable)) {
        let sum_cells: Vec<u8> = a.cells().iter().zip(b.cells()).map(|(&x, &y)| x + y).collect();
        let sum = Bitmap::from_cells(sum_cells, &c).unwrap();
        prop_assert_eq!(
            decode(&sum, &c).unwrap(),
            decode(&a, &c).unwrap() + decode(&b, &c).unwrap()
        );
    }

    #[test]
    fn inject_is_idempotent_and_preserves_free_cells(
        (c, (bm, side)) in config_and(|c| (arb_bitmap(c), arb_side(c)))
    ) {
        let once = inject_faults(&bm, &side, &c).unwrap();
        let twice = inject_faults(&once, &side, &c).unwrap();
        prop_assert_eq!(&once, &twice);
        for col in 0..c.columns() {
            for row in 0..c.rows() {
                if !side.get(col, row).is_fault() {
                    prop_assert_eq!(once.get(col, row), bm.get(col, row));
                }
            }
        }
    }

    #[test]
    fn realized_ignores_programmed_values_at_stuck_cells(
        (c, (pos, neg, fm, alt_pos, alt_neg)) in config_and(|c| (
            arb_bitmap(c), arb_bitmap(c), arb_map(c), arb_bitmap(c), arb_bitmap(c)
        ))
    ) {
        let mut pos2 = pos.clone();
        let mut neg2 = neg.clone();
        for col in 0..c.columns() {
            for row in 0..c.rows() {
                if fm.pos.get(col, row).is_fault() {
                    pos2.set(col, row, alt_pos.get(col, row));
                }
                if fm.neg.get(col, row).is_fault() {
                    neg2.set(col, row, alt_neg.get(col, row));
                }
            }
        }
        prop_assert_eq!(
            realized_weight(&pos, &neg, &fm, &c).unwrap(),
            realized_weight(&pos2, &neg2, &fm, &c).unwrap()
        );
    }

    #[test]
    fn fault_free_realized_is_decode_difference(
        (c, (pos, neg)) in config_and(|c| (arb_bitmap(c), arb_bitmap(c)))
    ) {
        let fm = FaultMap::fault_free(&c);
        prop_assert_eq!(
            realized_weight(&pos, &neg, &fm, &c).unwrap(),
            decode(&pos, &c).unwrap() - decode(&neg, &c).unwrap()
        );
    }

    #[test]
    fn range_matches_oracle_extremes((c, fm) in config_and(arb_map)) {
        let oracle = PairOracle::build(&fm, &c);
        let set = oracle.representable_set();
        let range = representable_range(&fm, &c);
        prop_assert_eq!(range.min_value, *set.first().unwrap());
        prop_assert_eq!(range.max_value, *set.last().unwrap());
        if fm.fault_count() > 0 {
            prop_assert!(range.width() < range.ideal_width());
        }
    }

    #[test]
    fn trigger_implies_exact_gap((c, fm) in config_and(arb_map)) {
        if inconsecutivity_trigger(&fm, &c).triggered {
            prop_assert!(!is_consecutive_exact(&fm, &c, 1 << 24).unwrap());
        }
    }

    #[test]
    fn enumeration_matches_oracle((c, fm) in config_and(arb_map)) {
        let fast = enumerate_representable_set(&fm, &c, 1 << 24).unwrap();
        prop_assert_eq!(fast, PairOracle::build(&fm, &c).representable_set());
    }

    #[test]
    fn fawd_complete_and_cvm_tight(
        (c, fm) in config_and(arb_map),
        w in -40i64..=40
    ) {
        let oracle = PairOracle::build(&fm, &c);
        let set = oracle.representable_set();
        let representable = set.binary_search(&w).is_ok();

        let fawd = fawd_ilp(WeightValue(w), &fm, &c).unwrap();
        prop_assert_eq!(fawd.is_some(), representable);
        if let Some(cw) = &fawd {
            prop_assert_eq!(cw.realized, w);
            prop_assert_eq!(realized_weight(&cw.pos, &cw.neg, &fm, &c).unwrap(), w);
        }

        let cvm = cvm_ilp(WeightValue(w), &fm, &c).unwrap();
        prop_assert_eq!(cvm.residual.abs(), oracle.min_residual(w));
        prop_assert_eq!(
            realized_weight(&cvm.pos, &cvm.neg, &fm, &c).unwrap(),
            cvm.realized
        );
    }

    #[test]
    fn table_and_ilp_agree(
        (c, fm) in config_and(arb_map),
        w in -40i64..=40
    ) {
        let table = DecompositionTable::build(&fm, &c, 1 << 16).unwrap();
        let t_fawd = fawd_table_lookup(WeightValue(w), &table);
        let i_fawd = fawd_ilp(WeightValue(w), &fm, &c).unwrap();
        prop_assert_eq!(t_fawd.is_some(), i_fawd.is_some());
        if let (Some(t), Some(i)) = (&t_fawd, &i_fawd) {
            prop_assert_eq!(t.pos.cells(), i.pos.cells());
            prop_assert_eq!(t.neg.cells(), i.neg.cells());
        }

        let t_cvm = cvm_table_lookup(WeightValue(w), &table);
        let i_cvm = cvm_ilp(WeightValue(w), &fm, &c).unwrap();
        prop_assert_eq!(t_cvm.residual, i_cvm.residual);
        prop_assert_eq!(t_cvm.realized, i_cvm.realized);
        prop_assert_eq!(t_cvm.pos.cells(), i_cvm.pos.cells());
        prop_assert_eq!(t_cvm.neg.cells(), i_cvm.neg.cells());
    }

    #[test]
    fn pipeline_residual_is_optimal(
        (c, fm) in config_and(arb_map),
        w in -60i64..=60
    ) {
        let cache = TableCache::new();
        let cw = compile_weight(WeightValue(w), &fm, &c, &CompilePolicy::default(), &cache);
        let oracle = PairOracle::build(&fm, &c);
        prop_assert_eq!(cw.residual.abs(), oracle.min_residual(w));
        prop_assert_eq!(w - cw.realized, cw.residual);
        for col in 0..c.columns() {
            for row in 0..c.rows() {
                if fm.pos.get(col, row).is_fault() {
                    prop_assert_eq!(cw.pos.get(col, row), 0);
                }
                if fm.neg.get(col, row).is_fault() {
                    prop_assert_eq!(cw.neg.get(col, row), 0);
                }
            }
        }
    }
}
