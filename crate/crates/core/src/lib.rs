//! Fault-aware weight compiler for row-column grouped resistive memory
//! arrays: maps signed integer weights onto positive/negative cell-group
//! bitmaps that minimize distortion under stuck-at faults, and simulates
//! fault statistics at configurable rates.

pub mod error;
pub mod faultsim;
pub mod ilp;
pub mod model;
mod par;
pub mod pipeline;
pub mod range;
pub mod table;

pub use error::Error;
pub use faultsim::{
    distortion_report, estimate_inconsec_prob, level_count, range_reduction_stats,
    sample_faultmap, single_fault_sweep, FaultRates, InconsecMethod, RngStream, Side, SimOptions,
    SimSummary, SweepEntry,
};
pub use ilp::{
    build_cvm_model, build_fawd_model, cvm_ilp, fawd_ilp, solve, solve_capped, IlpModel,
    IlpSolution, DEFAULT_VARIABLE_CAP,
};
pub use model::{
    decode, inject_faults, realized_weight, significance_vector, Bitmap, CellFault, FaultMap,
    FaultMapSide, GroupingConfig, WeightValue,
};
pub use pipeline::{
    clamp_solution, compile_tensor, compile_weight, CompilePolicy, CompileReport, CompiledWeight,
    ForcePath, PathCounts, SolvePath, StageTimes,
};
pub use range::{
    enumerate_representable_set, inconsecutivity_trigger, is_consecutive_exact,
    representable_range, stuck_offset, ConsecutivityReport, RangeInfo,
    DEFAULT_ENUMERATION_BUDGET,
};
pub use table::{
    achievable_values, cvm_table_lookup, fawd_table_lookup, AchievableSide, DecompositionTable,
    TableCache, DEFAULT_TABLE_BUDGET,
};
