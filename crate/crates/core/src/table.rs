//! Table-based decomposition: precompute, per side, every achievable
//! decoded value together with its cheapest witness bitmap, then answer
//! exact-match (FAWD) and closest-value (CVM) queries by scanning value
//! pairs. Tables are built per fault map and cached, keyed by the fault
//! codes; fault-free groups dominate real workloads so that one entry
//! absorbs most lookups.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::error::Error;
use crate::model::{CellFault, FaultMap, FaultMapSide, GroupingConfig, WeightValue};
use crate::pipeline::{CompiledWeight, SolvePath};

/// Default cap on `L^(c*r)`, the naive per-side assignment count.
pub const DEFAULT_TABLE_BUDGET: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq)]
struct SideEntry {
    /// Smallest summed programmed cell values reaching this decoded value.
    min_sum: u32,
    /// Canonical witness: lexicographically smallest minimal-sum cell
    /// assignment, stuck cells written as 0.
    witness: Vec<u8>,
}

/// Achievable decoded values of one array side under its fault pattern,
/// stuck contributions included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AchievableSide {
    entries: Vec<Option<SideEntry>>,
    values: Vec<i64>,
}

impl AchievableSide {
    /// Sorted achievable decoded values.
    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn contains(&self, value: i64) -> bool {
        self.entry(value).is_some()
    }

    /// Minimal summed cell values realizing `value`, if achievable.
    pub fn min_cell_sum(&self, value: i64) -> Option<u32> {
        self.entry(value).map(|e| e.min_sum)
    }

    /// Canonical witness cells realizing `value`, if achievable.
    pub fn witness(&self, value: i64) -> Option<&[u8]> {
        self.entry(value).map(|e| e.witness.as_slice())
    }

    fn entry(&self, value: i64) -> Option<&SideEntry> {
        if value < 0 || value as usize >= self.entries.len() {
            return None;
        }
        self.entries[value as usize].as_ref()
    }
}

fn check_side_budget(config: &GroupingConfig, budget: u64) -> Result<(), Error> {
    let mut required: u128 = 1;
    for _ in 0..config.cells_per_side() {
        required = required.saturating_mul(config.levels() as u128);
        if required > budget as u128 {
            return Err(Error::BudgetExceeded { required, budget });
        }
    }
    Ok(())
}

/// Builds the achievable-value map of one side by composing cells in
/// canonical order, tracking minimal sums and canonical witnesses.
pub fn achievable_values(
    side: &FaultMapSide,
    config: &GroupingConfig,
    budget: u64,
) -> Result<AchievableSide, Error> {
    assert!(side.matches(config), "fault map shape mismatch");
    check_side_budget(config, budget)?;

    let len = config.ideal_max() as usize + 1;
    let mut entries: Vec<Option<SideEntry>> = vec![None; len];
    entries[0] = Some(SideEntry {
        min_sum: 0,
        witness: Vec::new(),
    });

    for col in 0..config.columns() {
        let s = config.significance(col) as usize;
        for row in 0..config.rows() {
            // (decoded contribution, programmed cell value) options.
            let options: Vec<(usize, u8)> = match side.get(col, row) {
                CellFault::Free => (0..config.levels() as usize)
                    .map(|v| (v * s, v as u8))
                    .collect(),
                CellFault::Sa0 => vec![(config.max_cell() as usize * s, 0)],
                CellFault::Sa1 => vec![(0, 0)],
            };
            let mut next: Vec<Option<SideEntry>> = vec![None; len];
            for (value, entry) in entries.iter().enumerate() {
                let Some(entry) = entry else { continue };
                for &(contrib, written) in &options {
                    let nv = value + contrib;
                    let cand_sum = entry.min_sum + written as u32;
                    let slot = &mut next[nv];
                    let replace = match slot {
                        None => true,
                        Some(cur) => {
                            cand_sum < cur.min_sum
                                || (cand_sum == cur.min_sum
                                    && entry
                                        .witness
                                        .iter()
                                        .chain(std::iter::once(&written))
                                        .lt(cur.witness.iter()))
                        }
                    };
                    if replace {
                        let mut witness = entry.witness.clone();
                        witness.push(written);
                        *slot = Some(SideEntry {
                            min_sum: cand_sum,
                            witness,
                        });
                    }
                }
            }
            entries = next;
        }
    }

    let values = entries
        .iter()
        .enumerate()
        .filter(|(_, e)| e.is_some())
        .map(|(v, _)| v as i64)
        .collect();
    Ok(AchievableSide { entries, values })
}

/// Per-side achievable values of one fault map; pairwise differences cover
/// exactly the representable set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionTable {
    pub pos: AchievableSide,
    pub neg: AchievableSide,
    config: GroupingConfig,
}

impl DecompositionTable {
    pub fn build(
        faults: &FaultMap,
        config: &GroupingConfig,
        budget: u64,
    ) -> Result<Self, Error> {
        Ok(DecompositionTable {
            pos: achievable_values(&faults.pos, config, budget)?,
            neg: achievable_values(&faults.neg, config, budget)?,
            config: *config,
        })
    }

    fn config(&self) -> &GroupingConfig {
        &self.config
    }
}

fn compiled_from_pair(
    table: &DecompositionTable,
    w: i64,
    a: i64,
    b: i64,
    path: SolvePath,
) -> CompiledWeight {
    let config = table.config();
    let pos = crate::model::Bitmap::from_cells(table.pos.witness(a).unwrap().to_vec(), config)
        .expect("witness shape");
    let neg = crate::model::Bitmap::from_cells(table.neg.witness(b).unwrap().to_vec(), config)
        .expect("witness shape");
    CompiledWeight {
        pos,
        neg,
        realized: a - b,
        residual: w - (a - b),
        path,
    }
}

/// Best (total sum, witnesses) pair with `a - b = target`, if any.
fn best_pair_for_value(table: &DecompositionTable, target: i64) -> Option<(i64, i64)> {
    let mut best: Option<(u32, i64, i64)> = None;
    for &a in table.pos.values() {
        let b = a - target;
        let Some(sum_b) = table.neg.min_cell_sum(b) else {
            continue;
        };
        let total = table.pos.min_cell_sum(a).unwrap() + sum_b;
        let better = match &best {
            None => true,
            Some((cur_total, cur_a, cur_b)) => {
                total < *cur_total
                    || (total == *cur_total
                        && (table.pos.witness(a).unwrap(), table.neg.witness(b).unwrap())
                            < (
                                table.pos.witness(*cur_a).unwrap(),
                                table.neg.witness(*cur_b).unwrap(),
                            ))
            }
        };
        if better {
            best = Some((total, a, b));
        }
    }
    best.map(|(_, a, b)| (a, b))
}

/// Exact-match lookup along the `a - b = w` diagonal, minimizing summed
/// cell values. `None` iff `w` is not representable.
pub fn fawd_table_lookup(w: WeightValue, table: &DecompositionTable) -> Option<CompiledWeight> {
    let (a, b) = best_pair_for_value(table, w.0)?;
    Some(compiled_from_pair(table, w.0, a, b, SolvePath::TableFawd))
}

/// Closest-value lookup: sweeps the two sorted value sequences to find the
/// minimal distance, then picks the canonical pair at that distance.
pub fn cvm_table_lookup(w: WeightValue, table: &DecompositionTable) -> CompiledWeight {
    let pos = table.pos.values();
    let neg = table.neg.values();
    debug_assert!(!pos.is_empty() && !neg.is_empty());

    // Minimal |w - (a - b)|: for ascending a, the best b tracks a - w.
    let mut best_dist = i64::MAX;
    let mut j = 0usize;
    for &a in pos {
        let target = a - w.0;
        while j + 1 < neg.len() && neg[j] < target {
            j += 1;
        }
        // neg[j] is the first value >= target (or the last value overall);
        // its predecessor brackets the target from below.
        best_dist = best_dist.min((target - neg[j]).abs());
        if j > 0 {
            best_dist = best_dist.min((target - neg[j - 1]).abs());
        }
        if best_dist == 0 {
            break;
        }
    }

    let mut best: Option<(i64, i64)> = None;
    for realized in [w.0 - best_dist, w.0 + best_dist] {
        if let Some((a, b)) = best_pair_for_value(table, realized) {
            let better = match &best {
                None => true,
                Some((cur_a, cur_b)) => {
                    let cand = (
                        table.pos.min_cell_sum(a).unwrap() + table.neg.min_cell_sum(b).unwrap(),
                        table.pos.witness(a).unwrap(),
                        table.neg.witness(b).unwrap(),
                    );
                    let cur = (
                        table.pos.min_cell_sum(*cur_a).unwrap()
                            + table.neg.min_cell_sum(*cur_b).unwrap(),
                        table.pos.witness(*cur_a).unwrap(),
                        table.neg.witness(*cur_b).unwrap(),
                    );
                    cand < cur
                }
            };
            if better {
                best = Some((a, b));
            }
        }
        if best_dist == 0 {
            break;
        }
    }
    let (a, b) = best.expect("closest value exists");
    compiled_from_pair(table, w.0, a, b, SolvePath::TableCvm)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum CacheKey {
    Packed(u128),
    Bytes(Box<[u8]>),
}

fn cache_key(faults: &FaultMap) -> CacheKey {
    let codes = faults.to_codes();
    if codes.len() <= 64 {
        let mut packed: u128 = 1; // length marker
        for &c in &codes {
            packed = packed << 2 | c as u128;
        }
        CacheKey::Packed(packed)
    } else {
        CacheKey::Bytes(codes.into_boxed_slice())
    }
}

/// Concurrent build-once cache of decomposition tables keyed by fault
/// pattern. Read-mostly: lookups take the read lock, misses build outside
/// any lock and insert under the write lock.
#[derive(Debug, Default)]
pub struct TableCache {
    inner: RwLock<HashMap<CacheKey, Arc<DecompositionTable>>>,
}

impl TableCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.inner.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get_or_build(
        &self,
        faults: &FaultMap,
        config: &GroupingConfig,
        budget: u64,
    ) -> Result<Arc<DecompositionTable>, Error> {
        let key = cache_key(faults);
        if let Some(table) = self.inner.read().unwrap().get(&key) {
            return Ok(Arc::clone(table));
        }
        let built = Arc::new(DecompositionTable::build(faults, config, budget)?);
        let mut guard = self.inner.write().unwrap();
        Ok(Arc::clone(guard.entry(key).or_insert(built)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ilp::{cvm_ilp, fawd_ilp};
    use crate::range::enumerate_representable_set;

    fn cfg(c: usize, r: usize, l: u32) -> GroupingConfig {
        GroupingConfig::new(c, r, l).unwrap()
    }

    #[test]
    fn achievable_fault_free_r1c2() {
        let c = cfg(2, 1, 2);
        let side = achievable_values(&FaultMapSide::fault_free(&c), &c, 1 << 16).unwrap();
        assert_eq!(side.values(), &[0, 1, 2, 3]);
        let sums: Vec<u32> = side
            .values()
            .iter()
            .map(|&v| side.min_cell_sum(v).unwrap())
            .collect();
        assert_eq!(sums, vec![0, 1, 1, 2]);
    }

    #[test]
    fn achievable_all_stuck_and_sa0() {
        let c = cfg(1, 1, 4);
        let mut side = FaultMapSide::fault_free(&c);
        side.set(0, 0, CellFault::Sa1);
        let got = achievable_values(&side, &c, 1 << 16).unwrap();
        assert_eq!(got.values(), &[0]);

        side.set(0, 0, CellFault::Sa0);
        let got = achievable_values(&side, &c, 1 << 16).unwrap();
        assert_eq!(got.values(), &[3]);
        // The stuck cell is written as zero in the witness.
        assert_eq!(got.witness(3).unwrap(), &[0]);
    }

    #[test]
    fn side_budget_enforced() {
        let c = cfg(2, 1, 4);
        let side = FaultMapSide::fault_free(&c);
        assert!(matches!(
            achievable_values(&side, &c, 15),
            Err(Error::BudgetExceeded { required: 16, budget: 15 })
        ));
    }

    #[test]
    fn witness_sums_are_bruteforce_minimal() {
        // Every stored sum must equal the exhaustive minimum per value.
        let c = cfg(2, 2, 4);
        let mut side = FaultMapSide::fault_free(&c);
        side.set(0, 1, CellFault::Sa0);
        side.set(1, 0, CellFault::Sa1);
        let got = achievable_values(&side, &c, 1 << 16).unwrap();

        let mut best: HashMap<i64, u32> = HashMap::new();
        let n = c.cells_per_side();
        let mut assignment = vec![0u8; n];
        loop {
            let bm = crate::model::Bitmap::from_cells(assignment.clone(), &c).unwrap();
            let faulty = crate::model::inject_faults(&bm, &side, &c).unwrap();
            let v = crate::model::decode(&faulty, &c).unwrap();
            // Programmed sum only counts what a compiler would write; stuck
            // cells hold arbitrary values in this sweep, so zero them.
            let sum: u32 = assignment
                .iter()
                .enumerate()
                .map(|(i, &x)| {
                    let (col, row) = (i / c.rows(), i % c.rows());
                    if side.get(col, row).is_fault() {
                        0
                    } else {
                        x as u32
                    }
                })
                .sum();
            best.entry(v)
                .and_modify(|b| *b = (*b).min(sum))
                .or_insert(sum);
            let mut i = 0;
            loop {
                if i == n {
                    let mut keys: Vec<i64> = best.keys().copied().collect();
                    keys.sort_unstable();
                    assert_eq!(got.values(), keys.as_slice());
                    for (&v, &s) in &best {
                        assert_eq!(got.min_cell_sum(v).unwrap(), s, "value {v}");
                    }
                    return;
                }
                if assignment[i] < c.max_cell() {
                    assignment[i] += 1;
                    break;
                }
                assignment[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn table_pairs_cover_representable_set() {
        let c = cfg(2, 2, 4);
        let mut fm = FaultMap::fault_free(&c);
        fm.pos.set(0, 0, CellFault::Sa1);
        fm.neg.set(1, 1, CellFault::Sa0);
        let table = DecompositionTable::build(&fm, &c, 1 << 16).unwrap();
        let mut diffs: Vec<i64> = table
            .pos
            .values()
            .iter()
            .flat_map(|a| table.neg.values().iter().map(move |b| a - b))
            .collect();
        diffs.sort_unstable();
        diffs.dedup();
        let oracle = enumerate_representable_set(&fm, &c, 1 << 24).unwrap();
        assert_eq!(diffs, oracle);
    }

    #[test]
    fn fawd_lookup_matches_ilp() {
        let c = cfg(2, 1, 2);
        let mut fm = FaultMap::fault_free(&c);
        fm.pos.set(1, 0, CellFault::Sa1);
        let table = DecompositionTable::build(&fm, &c, 1 << 16).unwrap();
        let got = fawd_table_lookup(WeightValue(1), &table).unwrap();
        assert_eq!((got.realized, got.residual), (1, 0));
        assert_eq!(got.pos.cells(), &[1, 0]);
        assert_eq!(got.neg.cells(), &[0, 1]);
        // Same instance through the solver gives the identical bitmaps.
        let ilp = fawd_ilp(WeightValue(1), &fm, &c).unwrap().unwrap();
        assert_eq!((ilp.pos.cells(), ilp.neg.cells()), (got.pos.cells(), got.neg.cells()));
    }

    #[test]
    fn fawd_lookup_unrepresentable_is_none() {
        let c = cfg(2, 1, 2);
        let fm = FaultMap::fault_free(&c);
        let table = DecompositionTable::build(&fm, &c, 1 << 16).unwrap();
        assert!(fawd_table_lookup(WeightValue(4), &table).is_none());
        assert!(fawd_table_lookup(WeightValue(-4), &table).is_none());
    }

    #[test]
    fn fawd_lookup_prefers_sparser_pair() {
        let c = cfg(4, 1, 4);
        let fm = FaultMap::fault_free(&c);
        let table = DecompositionTable::build(&fm, &c, 1 << 16).unwrap();
        let got = fawd_table_lookup(WeightValue(19), &table).unwrap();
        assert_eq!(got.pos.cells(), &[0, 1, 1, 0]);
        assert_eq!(got.neg.cells(), &[0, 0, 0, 1]);
    }

    #[test]
    fn cvm_lookup_gapped_set_tie_break() {
        let c = cfg(2, 1, 2);
        let fm = FaultMap::from_codes(&[0, 2, 0, 2], &c).unwrap();
        let table = DecompositionTable::build(&fm, &c, 1 << 16).unwrap();
        let got = cvm_table_lookup(WeightValue(1), &table);
        assert_eq!((got.realized, got.residual), (0, 1));
        let ilp = cvm_ilp(WeightValue(1), &fm, &c).unwrap();
        assert_eq!(got.realized, ilp.realized);
        assert_eq!((got.pos.cells(), got.neg.cells()), (ilp.pos.cells(), ilp.neg.cells()));
    }

    #[test]
    fn cvm_lookup_clamps_beyond_range() {
        let c = cfg(2, 1, 2);
        let fm = FaultMap::fault_free(&c);
        let table = DecompositionTable::build(&fm, &c, 1 << 16).unwrap();
        let got = cvm_table_lookup(WeightValue(13), &table);
        assert_eq!((got.realized, got.residual), (3, 10));
        // Representable weights keep residual zero.
        let got = cvm_table_lookup(WeightValue(-2), &table);
        assert_eq!((got.realized, got.residual), (-2, 0));
    }

    #[test]
    fn cache_builds_once_per_pattern() {
        let c = cfg(2, 1, 2);
        let cache = TableCache::new();
        let free = FaultMap::fault_free(&c);
        let a = cache.get_or_build(&free, &c, 1 << 16).unwrap();
        let b = cache.get_or_build(&free, &c, 1 << 16).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(cache.len(), 1);

        let mut fm = FaultMap::fault_free(&c);
        fm.pos.set(0, 0, CellFault::Sa1);
        cache.get_or_build(&fm, &c, 1 << 16).unwrap();
        assert_eq!(cache.len(), 2);
    }
}
