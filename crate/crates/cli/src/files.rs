//! JSON file schemas and the flat cell ordering shared by all of them.
//!
//! Every per-weight cell sequence uses one ordering: positive side first,
//! then negative; within a side significance-major (MSB column first),
//! then row index. Fault codes are 0 = free, 1 = SA0, 2 = SA1.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use safc_core::{CompileReport, CompiledWeight, Error as CoreError, FaultMap, GroupingConfig};

use crate::CliError;

/// Layout token of the form `R{rows}C{columns}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayoutSpec {
    pub rows: usize,
    pub columns: usize,
}

impl LayoutSpec {
    pub fn parse(token: &str) -> Result<Self, String> {
        let rest = token
            .strip_prefix(['R', 'r'])
            .ok_or_else(|| format!("layout `{token}` must look like R2C2"))?;
        let (rows, cols) = rest
            .split_once(['C', 'c'])
            .ok_or_else(|| format!("layout `{token}` must look like R2C2"))?;
        let rows: usize = rows
            .parse()
            .map_err(|_| format!("bad row count in layout `{token}`"))?;
        let columns: usize = cols
            .parse()
            .map_err(|_| format!("bad column count in layout `{token}`"))?;
        Ok(LayoutSpec { rows, columns })
    }

    pub fn to_config(self, levels: u32) -> Result<GroupingConfig, CoreError> {
        GroupingConfig::new(self.columns, self.rows, levels)
    }
}

impl std::fmt::Display for LayoutSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "R{}C{}", self.rows, self.columns)
    }
}

impl std::str::FromStr for LayoutSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LayoutSpec::parse(s)
    }
}

/// Input weights: a flat signed-integer tensor plus optional layer tags.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightFile {
    pub layout: String,
    pub levels: u32,
    pub shape: Vec<usize>,
    pub weights: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layers: Option<Vec<String>>,
}

/// Per-weight fault codes over the flat cell ordering.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FaultFile {
    pub layout: String,
    pub levels: u32,
    pub count: usize,
    pub codes: Vec<u8>,
}

/// One compiled weight in file form.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutputWeight {
    pub pos: Vec<u8>,
    pub neg: Vec<u8>,
    pub realized: i64,
    pub residual: i64,
    pub path: String,
}

/// Deterministic summary block: everything in [`CompileReport`] except
/// wall-clock timings, which stay on standard output so output files are
/// byte-identical across runs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutputSummary {
    pub l1: u64,
    pub path_counts: BTreeMap<String, u64>,
    pub residual_histogram: Vec<(i64, u64)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutputFile {
    pub layout: String,
    pub levels: u32,
    pub count: usize,
    pub results: Vec<OutputWeight>,
    pub summary: OutputSummary,
}

/// Weights bigger than this risk 64-bit overflow when mixed with decoded
/// values; inputs are rejected at parse time.
pub const MAX_WEIGHT_MAGNITUDE: i64 = 1 << 61;

impl WeightFile {
    pub fn validate(&self, layout: LayoutSpec, levels: u32) -> Result<(), CliError> {
        let declared = LayoutSpec::parse(&self.layout)
            .map_err(CliError::Malformed)?;
        if declared != layout || self.levels != levels {
            return Err(CliError::Mismatch(format!(
                "weight file is {}/L{}, flags say {}/L{}",
                self.layout, self.levels, layout, levels
            )));
        }
        let expected: usize = self.shape.iter().product();
        if self.shape.is_empty() || expected != self.weights.len() {
            return Err(CliError::Mismatch(format!(
                "shape {:?} does not cover {} weights",
                self.shape,
                self.weights.len()
            )));
        }
        if let Some(layers) = &self.layers {
            if layers.len() != self.weights.len() {
                return Err(CliError::Mismatch(format!(
                    "{} layer tags for {} weights",
                    layers.len(),
                    self.weights.len()
                )));
            }
        }
        if let Some(w) = self
            .weights
            .iter()
            .find(|w| w.unsigned_abs() > MAX_WEIGHT_MAGNITUDE as u64)
        {
            return Err(CliError::Malformed(format!(
                "weight {w} exceeds the supported magnitude 2^61"
            )));
        }
        Ok(())
    }
}

impl FaultFile {
    pub fn validate(&self, layout: LayoutSpec, levels: u32) -> Result<(), CliError> {
        let declared = LayoutSpec::parse(&self.layout)
            .map_err(CliError::Malformed)?;
        if declared != layout || self.levels != levels {
            return Err(CliError::Mismatch(format!(
                "fault file is {}/L{}, flags say {}/L{}",
                self.layout, self.levels, layout, levels
            )));
        }
        if let Some(bad) = self.codes.iter().find(|&&c| c > 2) {
            return Err(CliError::Malformed(format!(
                "fault code {bad} is not one of 0/1/2"
            )));
        }
        let per_weight = 2 * layout.rows * layout.columns;
        if self.codes.len() != self.count * per_weight {
            return Err(CliError::Mismatch(format!(
                "{} codes for {} weights of {} cells each",
                self.codes.len(),
                self.count,
                per_weight
            )));
        }
        Ok(())
    }

    /// Slices the flat code sequence into per-weight fault maps.
    pub fn fault_maps(&self, config: &GroupingConfig) -> Result<Vec<FaultMap>, CliError> {
        let per_weight = config.cells_per_weight();
        self.codes
            .chunks(per_weight)
            .map(|chunk| {
                FaultMap::from_codes(chunk, config)
                    .map_err(|e| CliError::Malformed(e.to_string()))
            })
            .collect()
    }
}

pub fn output_weight(cw: &CompiledWeight) -> OutputWeight {
    OutputWeight {
        pos: cw.pos.cells().to_vec(),
        neg: cw.neg.cells().to_vec(),
        realized: cw.realized,
        residual: cw.residual,
        path: cw.path.as_str().to_string(),
    }
}

pub fn output_file(
    layout: LayoutSpec,
    levels: u32,
    report: &CompileReport,
) -> OutputFile {
    let counts = &report.path_counts;
    let mut path_counts = BTreeMap::new();
    path_counts.insert("clamp".to_string(), counts.clamp);
    path_counts.insert("table_fawd".to_string(), counts.table_fawd);
    path_counts.insert("ilp_fawd".to_string(), counts.ilp_fawd);
    path_counts.insert("table_cvm".to_string(), counts.table_cvm);
    path_counts.insert("ilp_cvm".to_string(), counts.ilp_cvm);
    OutputFile {
        layout: layout.to_string(),
        levels,
        count: report.results.len(),
        results: report.results.iter().map(output_weight).collect(),
        summary: OutputSummary {
            l1: report.l1,
            path_counts,
            residual_histogram: report
                .residual_histogram
                .iter()
                .map(|(&k, &v)| (k, v))
                .collect(),
        },
    }
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &std::path::Path) -> Result<T, CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Malformed(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_slice(&bytes)
        .map_err(|e| CliError::Malformed(format!("cannot parse {}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: &std::path::Path, value: &T) -> Result<(), CliError> {
    let mut bytes = serde_json::to_vec_pretty(value)
        .map_err(|e| CliError::Malformed(format!("cannot serialize: {e}")))?;
    bytes.push(b'\n');
    std::fs::write(path, bytes)
        .map_err(|e| CliError::Malformed(format!("cannot write {}: {e}", path.display())))
}
