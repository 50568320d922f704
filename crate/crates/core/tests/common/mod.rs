//! Brute-force oracles for the integration suites. Everything here loops
//! over raw cell assignments, independent of the composed set arithmetic
//! and solver paths it is used to check.

// Each integration test target compiles this module separately and uses a
// different subset of it.
#![allow(dead_code)]

use std::collections::BTreeMap;

use safc_core::{
    decode, inject_faults, Bitmap, FaultMap, FaultMapSide, GroupingConfig,
};

/// Achievable decoded values of one side with the minimal programmed cell
/// sum per value, by looping over all `L^(c*r)` assignments. Stuck cells
/// count zero toward the programmed sum.
pub fn naive_side_values(side: &FaultMapSide, config: &GroupingConfig) -> BTreeMap<i64, u32> {
    let n = config.cells_per_side();
    let mut best: BTreeMap<i64, u32> = BTreeMap::new();
    let mut assignment = vec![0u8; n];
    loop {
        let bm = Bitmap::from_cells(assignment.clone(), config).unwrap();
        let value = decode(&inject_faults(&bm, side, config).unwrap(), config).unwrap();
        let sum: u32 = assignment
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let (col, row) = (i / config.rows(), i % config.rows());
                if side.get(col, row).is_fault() {
                    0
                } else {
                    v as u32
                }
            })
            .sum();
        best.entry(value)
            .and_modify(|b| *b = (*b).min(sum))
            .or_insert(sum);

        let mut i = 0;
        loop {
            if i == n {
                return best;
            }
            if assignment[i] < config.max_cell() {
                assignment[i] += 1;
                break;
            }
            assignment[i] = 0;
            i += 1;
        }
    }
}

pub struct PairOracle {
    pos: BTreeMap<i64, u32>,
    neg: BTreeMap<i64, u32>,
}

impl PairOracle {
    pub fn build(faults: &FaultMap, config: &GroupingConfig) -> Self {
        PairOracle {
            pos: naive_side_values(&faults.pos, config),
            neg: naive_side_values(&faults.neg, config),
        }
    }

    /// Deduplicated ascending realizable weights.
    pub fn representable_set(&self) -> Vec<i64> {
        let mut out: Vec<i64> = self
            .pos
            .keys()
            .flat_map(|a| self.neg.keys().map(move |b| a - b))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Smallest achievable `|w - realized|`.
    pub fn min_residual(&self, w: i64) -> i64 {
        self.pos
            .keys()
            .flat_map(|a| self.neg.keys().map(move |b| (w - (a - b)).abs()))
            .min()
            .unwrap()
    }

    /// Smallest summed programmed cell values among pairs realizing
    /// exactly `w`, if representable.
    pub fn min_cell_sum_exact(&self, w: i64) -> Option<u32> {
        self.pos
            .iter()
            .filter_map(|(a, sa)| self.neg.get(&(a - w)).map(|sb| sa + sb))
            .min()
    }
}

/// All `3^(2*c*r)` fault maps of a layout.
pub fn all_fault_maps(config: &GroupingConfig) -> Vec<FaultMap> {
    let n = config.cells_per_weight();
    let mut maps = Vec::new();
    let mut codes = vec![0u8; n];
    loop {
        maps.push(FaultMap::from_codes(&codes, config).unwrap());
        let mut i = 0;
        loop {
            if i == n {
                return maps;
            }
            if codes[i] < 2 {
                codes[i] += 1;
                break;
            }
            codes[i] = 0;
            i += 1;
        }
    }
}
