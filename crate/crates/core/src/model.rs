//! Cell-group layout, bitmaps, fault maps, and the decode / fault-injection
//! functions everything else is built on.
//!
//! A signed weight is stored on two arrays (positive and negative side). On
//! each side it occupies a group of `columns x rows` cells: columns carry
//! decreasing significance `L^(c-1), ..., L, 1` and the `rows` cells of one
//! column share an input line, so their values add with equal significance.
//! The decoded side value is `sum_k s_k * sum_j cells[k][j]` and the weight
//! is `decode(pos) - decode(neg)`.
//!
//! Stuck-at polarity convention used throughout this crate: an SA0 cell is
//! pinned at the *top* level `L-1`, an SA1 cell is pinned at 0. Getting this
//! backwards silently flips every downstream range computation, so all fault
//! handling funnels through [`CellFault::stuck_value`].

use crate::error::Error;

/// Layout of one weight's cell group: `columns` significance positions,
/// `rows` cells per position on each side, `levels` programmable levels
/// per cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupingConfig {
    columns: usize,
    rows: usize,
    levels: u32,
}

/// Headroom bound for decoded values: `(levels^columns) * rows` must stay
/// below this so widths, offsets, and residual sums fit in `i64`.
const MAX_DECODE_MAGNITUDE: i128 = 1 << 62;

impl GroupingConfig {
    /// Validates and builds a layout. `columns >= 1`, `rows >= 1`,
    /// `levels >= 2`, cell values must fit a byte, and the ideal decoded
    /// magnitude must fit comfortably in 64-bit signed arithmetic.
    pub fn new(columns: usize, rows: usize, levels: u32) -> Result<Self, Error> {
        if columns == 0 || rows == 0 {
            return Err(Error::InvalidConfig(format!(
                "columns and rows must be >= 1 (got c={columns}, r={rows})"
            )));
        }
        if levels < 2 {
            return Err(Error::InvalidConfig(format!(
                "levels must be >= 2 (got {levels})"
            )));
        }
        if levels > 256 {
            return Err(Error::InvalidConfig(format!(
                "levels must be <= 256 (got {levels})"
            )));
        }
        let mut magnitude: i128 = 1;
        for _ in 0..columns {
            magnitude *= levels as i128;
            if magnitude > MAX_DECODE_MAGNITUDE {
                return Err(Error::InvalidConfig(format!(
                    "levels^columns overflows: {levels}^{columns}"
                )));
            }
        }
        if magnitude * rows as i128 > MAX_DECODE_MAGNITUDE {
            return Err(Error::InvalidConfig(format!(
                "(levels^columns)*rows overflows: {levels}^{columns} * {rows}"
            )));
        }
        Ok(GroupingConfig {
            columns,
            rows,
            levels,
        })
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn levels(&self) -> u32 {
        self.levels
    }

    /// Largest programmable cell value, `L - 1`.
    pub fn max_cell(&self) -> u8 {
        (self.levels - 1) as u8
    }

    pub fn cells_per_side(&self) -> usize {
        self.columns * self.rows
    }

    pub fn cells_per_weight(&self) -> usize {
        2 * self.cells_per_side()
    }

    /// The significance vector `[L^(c-1), ..., L, 1]`, most significant
    /// column first.
    pub fn significance_vector(&self) -> Vec<i64> {
        (0..self.columns).map(|k| self.significance(k)).collect()
    }

    /// Significance of column `col` (0-based, MSB first): `L^(c-1-col)`.
    pub fn significance(&self, col: usize) -> i64 {
        debug_assert!(col < self.columns);
        (self.levels as i64).pow((self.columns - 1 - col) as u32)
    }

    /// Largest fault-free side value, `(L^c - 1) * rows`.
    pub fn ideal_max(&self) -> i64 {
        ((self.levels as i64).pow(self.columns as u32) - 1) * self.rows as i64
    }

    /// Fault-free representable width, `2 * ideal_max`.
    pub fn ideal_width(&self) -> i64 {
        2 * self.ideal_max()
    }

    /// Distinct values one side can represent, `(L^c - 1) * rows + 1`.
    pub fn side_level_count(&self) -> i64 {
        self.ideal_max() + 1
    }
}

/// Target quantized weight handed to the compiler. Values outside the
/// fault-free range are legal inputs; the pipeline clamps them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeightValue(pub i64);

impl From<i64> for WeightValue {
    fn from(v: i64) -> Self {
        WeightValue(v)
    }
}

impl std::fmt::Display for WeightValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// Programmed cell values for one side of a weight's cell group.
///
/// Storage is significance-major: cell `(col, row)` lives at index
/// `col * rows + row`, with column 0 the most significant. The same flat
/// ordering is used in every file format and cache key.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bitmap {
    cells: Vec<u8>,
    rows: usize,
}

impl Bitmap {
    pub fn zeros(config: &GroupingConfig) -> Self {
        Bitmap {
            cells: vec![0; config.cells_per_side()],
            rows: config.rows,
        }
    }

    /// Builds a bitmap from flat significance-major cell values.
    pub fn from_cells(cells: Vec<u8>, config: &GroupingConfig) -> Result<Self, Error> {
        if cells.len() != config.cells_per_side() {
            return Err(Error::ShapeMismatch {
                expected: config.cells_per_side(),
                got: cells.len(),
            });
        }
        for (i, &v) in cells.iter().enumerate() {
            if v > config.max_cell() {
                return Err(Error::InvalidCell {
                    index: i,
                    value: v as i64,
                });
            }
        }
        Ok(Bitmap {
            cells,
            rows: config.rows,
        })
    }

    /// The "naive" programming a fault-oblivious mapper would use for a
    /// non-negative side value: base-L digits for single-row layouts,
    /// filled greedily row by row within each column otherwise.
    pub fn from_value(value: i64, config: &GroupingConfig) -> Result<Self, Error> {
        if value < 0 || value > config.ideal_max() {
            return Err(Error::InvalidCell {
                index: 0,
                value,
            });
        }
        let mut bm = Bitmap::zeros(config);
        let mut rest = value;
        for col in 0..config.columns {
            let s = config.significance(col);
            for row in 0..config.rows {
                let v = (rest / s).min(config.max_cell() as i64);
                bm.set(col, row, v as u8);
                rest -= v * s;
            }
        }
        debug_assert_eq!(rest, 0, "digit expansion must be exact");
        Ok(bm)
    }

    pub fn get(&self, col: usize, row: usize) -> u8 {
        self.cells[col * self.rows + row]
    }

    pub fn set(&mut self, col: usize, row: usize, value: u8) {
        self.cells[col * self.rows + row] = value;
    }

    /// Flat significance-major cell values.
    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    pub fn matches(&self, config: &GroupingConfig) -> bool {
        self.rows == config.rows && self.cells.len() == config.cells_per_side()
    }

    fn check_shape(&self, config: &GroupingConfig) -> Result<(), Error> {
        if self.matches(config) {
            Ok(())
        } else {
            Err(Error::ShapeMismatch {
                expected: config.cells_per_side(),
                got: self.cells.len(),
            })
        }
    }
}

/// Fault state of a single cell.
///
/// Wire code (file formats, cache keys): 0 = free, 1 = SA0, 2 = SA1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CellFault {
    #[default]
    Free,
    /// Stuck at the top level `L-1` (low-resistance fault).
    Sa0,
    /// Stuck at 0 (high-resistance fault).
    Sa1,
}

impl CellFault {
    pub fn code(&self) -> u8 {
        match self {
            CellFault::Free => 0,
            CellFault::Sa0 => 1,
            CellFault::Sa1 => 2,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(CellFault::Free),
            1 => Some(CellFault::Sa0),
            2 => Some(CellFault::Sa1),
            _ => None,
        }
    }

    pub fn is_fault(&self) -> bool {
        !matches!(self, CellFault::Free)
    }

    /// The value a faulted cell reads back regardless of what was written.
    pub fn stuck_value(&self, config: &GroupingConfig) -> Option<u8> {
        match self {
            CellFault::Free => None,
            CellFault::Sa0 => Some(config.max_cell()),
            CellFault::Sa1 => Some(0),
        }
    }
}

/// Fault indicators for one side of a cell group, same flat layout as
/// [`Bitmap`]. A cell is either free, SA0, or SA1; the two indicator sets
/// are disjoint by construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FaultMapSide {
    cells: Vec<CellFault>,
    rows: usize,
}

impl FaultMapSide {
    pub fn fault_free(config: &GroupingConfig) -> Self {
        FaultMapSide {
            cells: vec![CellFault::Free; config.cells_per_side()],
            rows: config.rows,
        }
    }

    pub fn from_cells(cells: Vec<CellFault>, config: &GroupingConfig) -> Result<Self, Error> {
        if cells.len() != config.cells_per_side() {
            return Err(Error::ShapeMismatch {
                expected: config.cells_per_side(),
                got: cells.len(),
            });
        }
        Ok(FaultMapSide {
            cells,
            rows: config.rows,
        })
    }

    /// Builds a side from separate SA0 / SA1 indicator vectors, rejecting
    /// overlapping indicators.
    pub fn from_indicators(
        sa0: &[bool],
        sa1: &[bool],
        config: &GroupingConfig,
    ) -> Result<Self, Error> {
        let n = config.cells_per_side();
        if sa0.len() != n || sa1.len() != n {
            return Err(Error::ShapeMismatch {
                expected: n,
                got: sa0.len().max(sa1.len()),
            });
        }
        let mut cells = Vec::with_capacity(n);
        for i in 0..n {
            cells.push(match (sa0[i], sa1[i]) {
                (false, false) => CellFault::Free,
                (true, false) => CellFault::Sa0,
                (false, true) => CellFault::Sa1,
                (true, true) => return Err(Error::FaultOverlap { index: i }),
            });
        }
        Ok(FaultMapSide {
            cells,
            rows: config.rows,
        })
    }

    pub fn get(&self, col: usize, row: usize) -> CellFault {
        self.cells[col * self.rows + row]
    }

    pub fn set(&mut self, col: usize, row: usize, fault: CellFault) {
        self.cells[col * self.rows + row] = fault;
    }

    pub fn cells(&self) -> &[CellFault] {
        &self.cells
    }

    pub fn fault_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_fault()).count()
    }

    pub fn is_fault_free(&self) -> bool {
        self.fault_count() == 0
    }

    pub fn matches(&self, config: &GroupingConfig) -> bool {
        self.rows == config.rows && self.cells.len() == config.cells_per_side()
    }

    fn check_shape(&self, config: &GroupingConfig) -> Result<(), Error> {
        if self.matches(config) {
            Ok(())
        } else {
            Err(Error::ShapeMismatch {
                expected: config.cells_per_side(),
                got: self.cells.len(),
            })
        }
    }
}

/// The fault state of one weight's full cell group: positive side then
/// negative side.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FaultMap {
    pub pos: FaultMapSide,
    pub neg: FaultMapSide,
}

impl FaultMap {
    pub fn fault_free(config: &GroupingConfig) -> Self {
        FaultMap {
            pos: FaultMapSide::fault_free(config),
            neg: FaultMapSide::fault_free(config),
        }
    }

    /// Builds a map from flat wire codes (0/1/2), positive side first, in
    /// the canonical significance-major order.
    pub fn from_codes(codes: &[u8], config: &GroupingConfig) -> Result<Self, Error> {
        let n = config.cells_per_side();
        if codes.len() != 2 * n {
            return Err(Error::ShapeMismatch {
                expected: 2 * n,
                got: codes.len(),
            });
        }
        let parse = |slice: &[u8], base: usize| -> Result<Vec<CellFault>, Error> {
            slice
                .iter()
                .enumerate()
                .map(|(i, &c)| {
                    CellFault::from_code(c).ok_or(Error::InvalidCell {
                        index: base + i,
                        value: c as i64,
                    })
                })
                .collect()
        };
        Ok(FaultMap {
            pos: FaultMapSide {
                cells: parse(&codes[..n], 0)?,
                rows: config.rows,
            },
            neg: FaultMapSide {
                cells: parse(&codes[n..], n)?,
                rows: config.rows,
            },
        })
    }

    /// Flat wire codes, positive side first.
    pub fn to_codes(&self) -> Vec<u8> {
        self.pos
            .cells
            .iter()
            .chain(self.neg.cells.iter())
            .map(CellFault::code)
            .collect()
    }

    pub fn fault_count(&self) -> usize {
        self.pos.fault_count() + self.neg.fault_count()
    }

    pub fn is_fault_free(&self) -> bool {
        self.pos.is_fault_free() && self.neg.is_fault_free()
    }

    pub fn matches(&self, config: &GroupingConfig) -> bool {
        self.pos.matches(config) && self.neg.matches(config)
    }
}

/// The significance vector `[L^(c-1), ..., L, 1]` of a layout.
pub fn significance_vector(config: &GroupingConfig) -> Vec<i64> {
    config.significance_vector()
}

/// Decodes a bitmap into its non-negative integer side value:
/// `sum_k s_k * sum_j cells[k][j]`.
pub fn decode(bitmap: &Bitmap, config: &GroupingConfig) -> Result<i64, Error> {
    bitmap.check_shape(config)?;
    let mut total = 0i64;
    for col in 0..config.columns {
        let s = config.significance(col);
        let mut row_sum = 0i64;
        for row in 0..config.rows {
            row_sum += bitmap.get(col, row) as i64;
        }
        total += s * row_sum;
    }
    Ok(total)
}

/// Applies stuck-at faults to programmed values: free cells keep their
/// value, SA0 cells read `L-1`, SA1 cells read 0. Idempotent.
pub fn inject_faults(
    bitmap: &Bitmap,
    side: &FaultMapSide,
    config: &GroupingConfig,
) -> Result<Bitmap, Error> {
    bitmap.check_shape(config)?;
    side.check_shape(config)?;
    let cells = bitmap
        .cells
        .iter()
        .zip(side.cells.iter())
        .map(|(&v, fault)| fault.stuck_value(config).unwrap_or(v))
        .collect();
    Ok(Bitmap {
        cells,
        rows: config.rows,
    })
}

/// The weight actually read back from a programmed pair under faults:
/// `decode(inject(pos)) - decode(inject(neg))`.
pub fn realized_weight(
    pos: &Bitmap,
    neg: &Bitmap,
    faults: &FaultMap,
    config: &GroupingConfig,
) -> Result<i64, Error> {
    let p = decode(&inject_faults(pos, &faults.pos, config)?, config)?;
    let n = decode(&inject_faults(neg, &faults.neg, config)?, config)?;
    Ok(p - n)
}
