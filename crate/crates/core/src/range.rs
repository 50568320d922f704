//! Range analysis of a faulty cell group: the stuck offset, the exact
//! representable extremes, a cheap sufficient test for gaps in the
//! representable set, and an exhaustive enumeration of that set.
//!
//! Every stuck cell splits the decoded value into a variable part (free
//! cells) and a constant part: SA0 cells contribute `(L-1) * significance`
//! to their side no matter what was written, SA1 cells contribute nothing.
//! The extremes follow by driving one side's free cells to `L-1` and the
//! other's to 0, which is also how the clamp solution is materialized.

use crate::error::Error;
use crate::model::{CellFault, FaultMap, FaultMapSide, GroupingConfig};

/// Default cap on `L^(2*c*r)`, the naive assignment count of an exhaustive
/// enumeration. Covers both L=4 eight-cell layouts with a wide margin.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 1 << 24;

/// Representable extremes of a faulty cell group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RangeInfo {
    /// Constant contribution of SA0 cells: `(L-1) * (d(F0+) - d(F0-))`.
    pub stuck_offset: i64,
    /// Smallest realizable weight.
    pub min_value: i64,
    /// Largest realizable weight.
    pub max_value: i64,
    /// Fault-free maximum `(L^c - 1) * r`.
    pub ideal_max: i64,
    /// Fault-free minimum, `-ideal_max`.
    pub ideal_min: i64,
}

impl RangeInfo {
    pub fn width(&self) -> i64 {
        self.max_value - self.min_value
    }

    pub fn ideal_width(&self) -> i64 {
        self.ideal_max - self.ideal_min
    }

    pub fn contains(&self, w: i64) -> bool {
        self.min_value <= w && w <= self.max_value
    }

    /// Absolute width lost to faults.
    pub fn width_reduction(&self) -> i64 {
        self.ideal_width() - self.width()
    }
}

/// Outcome of the cheap inconsecutivity test.
///
/// Significance positions are indexed from the least significant column:
/// position `i` (1-based) has significance value `L^(i-1)`, so position `c`
/// is the MSB and never triggers. This indexing matches the gap-stride and
/// tail-span formulas; note it runs opposite to the MSB-first column axis
/// of [`crate::model::Bitmap`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsecutivityReport {
    config: GroupingConfig,
    /// Triggering positions, ascending, each in `1..=c-1`.
    pub triggering_significances: Vec<usize>,
    /// True iff at least one position triggers.
    pub triggered: bool,
}

impl ConsecutivityReport {
    /// Step size of the decoded value above position `i` once that position
    /// is immobile: `L^i`.
    pub fn gap_stride(&self, i: usize) -> i64 {
        (self.config.levels() as i64).pow(i as u32)
    }

    /// Largest magnitude the positions below `i` can contribute per side:
    /// `r * (L^(i-1) - 1)`.
    pub fn tail_span(&self, i: usize) -> i64 {
        self.config.rows() as i64 * ((self.config.levels() as i64).pow((i - 1) as u32) - 1)
    }
}

fn side_free_significance_sum(side: &FaultMapSide, config: &GroupingConfig) -> i64 {
    let mut sum = 0i64;
    for col in 0..config.columns() {
        let s = config.significance(col);
        for row in 0..config.rows() {
            if !side.get(col, row).is_fault() {
                sum += s;
            }
        }
    }
    sum
}

fn side_sa0_sum(side: &FaultMapSide, config: &GroupingConfig) -> i64 {
    let mut sum = 0i64;
    for col in 0..config.columns() {
        let s = config.significance(col);
        for row in 0..config.rows() {
            if side.get(col, row) == CellFault::Sa0 {
                sum += s;
            }
        }
    }
    sum
}

/// The constant decoded contribution of stuck cells,
/// `(L-1) * (d(F0+) - d(F0-))`.
pub fn stuck_offset(faults: &FaultMap, config: &GroupingConfig) -> i64 {
    assert!(faults.matches(config), "fault map shape mismatch");
    let l1 = config.max_cell() as i64;
    l1 * (side_sa0_sum(&faults.pos, config) - side_sa0_sum(&faults.neg, config))
}

/// Exact representable extremes of a faulty cell group. The maximum puts
/// every free positive cell at `L-1` and every free negative cell at 0;
/// the minimum mirrors it.
pub fn representable_range(faults: &FaultMap, config: &GroupingConfig) -> RangeInfo {
    assert!(faults.matches(config), "fault map shape mismatch");
    let offset = stuck_offset(faults, config);
    let l1 = config.max_cell() as i64;
    let pos_free = side_free_significance_sum(&faults.pos, config);
    let neg_free = side_free_significance_sum(&faults.neg, config);
    let ideal_max = config.ideal_max();
    RangeInfo {
        stuck_offset: offset,
        max_value: offset + l1 * pos_free,
        min_value: offset - l1 * neg_free,
        ideal_max,
        ideal_min: -ideal_max,
    }
}

/// Cheap sufficient test for gaps in the representable set.
///
/// Position `i` (LSB-based, below the MSB) triggers when all `2r` cells at
/// that significance are stuck on both sides, the positions above it can
/// therefore only move in strides of `L^i` while the tail below spans at
/// most `r*(L^(i-1)-1)` per side (`2*tail_span + 1 < gap_stride`), and at
/// least one cell above position `i` is still free so that more than one
/// stride value is reachable. A fired trigger guarantees a gap; a silent
/// one guarantees nothing, so callers must still handle infeasibility.
pub fn inconsecutivity_trigger(
    faults: &FaultMap,
    config: &GroupingConfig,
) -> ConsecutivityReport {
    assert!(faults.matches(config), "fault map shape mismatch");
    let c = config.columns();
    let r = config.rows();
    let levels = config.levels() as i64;
    let mut triggering = Vec::new();

    // free_above[col] = any free cell on either side in columns 0..=col-1
    // (strictly more significant than `col`).
    let mut any_free_above = vec![false; c + 1];
    for col in 0..c {
        let mut free_here = false;
        for row in 0..r {
            free_here |= !faults.pos.get(col, row).is_fault();
            free_here |= !faults.neg.get(col, row).is_fault();
        }
        any_free_above[col + 1] = any_free_above[col] || free_here;
    }

    // LSB-based position i corresponds to column c - i (0-based, MSB first).
    for i in 1..c {
        let col = c - i;
        let all_stuck = (0..r).all(|row| {
            faults.pos.get(col, row).is_fault() && faults.neg.get(col, row).is_fault()
        });
        if !all_stuck || !any_free_above[col] {
            continue;
        }
        let tail_span = r as i64 * (levels.pow((i - 1) as u32) - 1);
        let gap_stride = levels.pow(i as u32);
        if 2 * tail_span + 1 < gap_stride {
            triggering.push(i);
        }
    }

    ConsecutivityReport {
        config: *config,
        triggered: !triggering.is_empty(),
        triggering_significances: triggering,
    }
}

/// Dense bit set over the value range of one side or of the difference set.
#[derive(Clone)]
struct ValueBits {
    words: Vec<u64>,
    len: usize,
}

impl ValueBits {
    fn new(len: usize) -> Self {
        ValueBits {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// `self |= other << shift`, clipped to `self.len`.
    fn or_shifted(&mut self, other: &ValueBits, shift: usize) {
        let (word_shift, bit_shift) = (shift / 64, shift % 64);
        for w in (0..other.words.len()).rev() {
            let v = other.words[w];
            if v == 0 {
                continue;
            }
            let lo = w + word_shift;
            if lo < self.words.len() {
                self.words[lo] |= v << bit_shift;
            }
            if bit_shift != 0 && lo + 1 < self.words.len() {
                self.words[lo + 1] |= v >> (64 - bit_shift);
            }
        }
    }

    fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn iter_set(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    fn min_set(&self) -> Option<usize> {
        self.iter_set().next()
    }

    fn max_set(&self) -> Option<usize> {
        (0..self.len).rev().find(|&i| self.get(i))
    }
}

/// Achievable decoded values of one side (stuck contributions included) as
/// a bit set over `0..=ideal_max`.
fn side_value_bits(side: &FaultMapSide, config: &GroupingConfig) -> ValueBits {
    let len = config.ideal_max() as usize + 1;
    let mut bits = ValueBits::new(len);
    bits.set(0);
    for col in 0..config.columns() {
        let s = config.significance(col) as usize;
        for row in 0..config.rows() {
            match side.get(col, row) {
                CellFault::Free => {
                    let base = bits.clone();
                    for v in 1..config.levels() as usize {
                        bits.or_shifted(&base, v * s);
                    }
                }
                CellFault::Sa0 => {
                    let base = bits.clone();
                    bits = ValueBits::new(len);
                    bits.or_shifted(&base, config.max_cell() as usize * s);
                }
                CellFault::Sa1 => {}
            }
        }
    }
    bits
}

fn check_budget(config: &GroupingConfig, budget: u64) -> Result<(), Error> {
    let mut required: u128 = 1;
    for _ in 0..config.cells_per_weight() {
        required = required.saturating_mul(config.levels() as u128);
        if required > budget as u128 {
            return Err(Error::BudgetExceeded { required, budget });
        }
    }
    Ok(())
}

/// Difference set `{d(pos) - d(neg)}` as bits over
/// `0..=2*ideal_max`, offset by `-ideal_max`.
fn representable_bits(faults: &FaultMap, config: &GroupingConfig) -> ValueBits {
    let pos = side_value_bits(&faults.pos, config);
    let neg = side_value_bits(&faults.neg, config);
    let ideal = config.ideal_max() as usize;
    let mut diff = ValueBits::new(2 * ideal + 1);
    // value v = a - b sits at index a + (ideal - b).
    for b in neg.iter_set() {
        diff.or_shifted(&pos, ideal - b);
    }
    diff
}

/// Every realizable weight of a faulty cell group, deduplicated and
/// ascending. Composed per significance position rather than by looping
/// over all `L^(2cr)` assignments, but the budget precondition is stated
/// in terms of that naive count.
pub fn enumerate_representable_set(
    faults: &FaultMap,
    config: &GroupingConfig,
    budget: u64,
) -> Result<Vec<i64>, Error> {
    assert!(faults.matches(config), "fault map shape mismatch");
    check_budget(config, budget)?;
    let ideal = config.ideal_max();
    let diff = representable_bits(faults, config);
    Ok(diff.iter_set().map(|i| i as i64 - ideal).collect())
}

/// True iff the representable set is a contiguous integer interval.
pub fn is_consecutive_exact(
    faults: &FaultMap,
    config: &GroupingConfig,
    budget: u64,
) -> Result<bool, Error> {
    assert!(faults.matches(config), "fault map shape mismatch");
    check_budget(config, budget)?;
    let diff = representable_bits(faults, config);
    let (min, max) = match (diff.min_set(), diff.max_set()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Ok(true),
    };
    Ok(diff.count() == max - min + 1)
}
