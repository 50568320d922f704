//! Command-line front end: batch compilation, fault-map generation, and
//! range/consecutivity diagnostics over JSON files.
//!
//! Exit codes: 0 success, 2 malformed input, 3 layout or shape mismatch,
//! 4 enumeration budget exceeded.

pub mod files;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

use safc_core::{
    compile_tensor, estimate_inconsec_prob, inconsecutivity_trigger, is_consecutive_exact,
    level_count, representable_range, sample_faultmap, CompilePolicy, Error as CoreError,
    FaultMap, FaultRates, ForcePath, GroupingConfig, InconsecMethod, RngStream, SimOptions,
    WeightValue, DEFAULT_ENUMERATION_BUDGET,
};

use files::{output_file, read_json, write_json, FaultFile, LayoutSpec, OutputFile, WeightFile};

/// Errors carrying their process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable or unparsable input (exit 2).
    Malformed(String),
    /// Inputs disagree with each other or with the flags (exit 3).
    Mismatch(String),
    /// An exhaustive analysis exceeds its enumeration budget (exit 4).
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Malformed(_) => 2,
            CliError::Mismatch(_) => 3,
            CliError::Budget(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Malformed(m) | CliError::Mismatch(m) | CliError::Budget(m) => m,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::BudgetExceeded { .. } => CliError::Budget(format!(
                "{e}; raise --enum-budget to allow this analysis"
            )),
            CoreError::LengthMismatch { .. } | CoreError::ShapeMismatch { .. } => {
                CliError::Mismatch(e.to_string())
            }
            other => CliError::Malformed(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "safc",
    about = "Fault-aware weight compiler for row-column grouped resistive arrays",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ForcePathArg {
    Auto,
    Table,
    Ilp,
}

impl From<ForcePathArg> for ForcePath {
    fn from(v: ForcePathArg) -> Self {
        match v {
            ForcePathArg::Auto => ForcePath::Auto,
            ForcePathArg::Table => ForcePath::Table,
            ForcePathArg::Ilp => ForcePath::Ilp,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MethodArg {
    Trigger,
    Exact,
}

#[derive(Debug, Args)]
pub struct LayoutArgs {
    /// Grouping layout token, e.g. R1C4 or R2C2.
    #[arg(long)]
    pub layout: LayoutSpec,
    /// Programmable levels per cell.
    #[arg(long)]
    pub levels: u32,
}

impl LayoutArgs {
    fn config(&self) -> Result<GroupingConfig, CliError> {
        self.layout
            .to_config(self.levels)
            .map_err(|e| CliError::Malformed(e.to_string()))
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compile a weight tensor against per-weight fault maps.
    Compile {
        #[command(flatten)]
        layout: LayoutArgs,
        /// Weight tensor JSON.
        #[arg(long)]
        weights: PathBuf,
        /// Fault map JSON.
        #[arg(long)]
        faults: PathBuf,
        /// Output JSON path.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long, value_enum, default_value_t = ForcePathArg::Auto)]
        force_path: ForcePathArg,
        /// Recorded in the stdout summary; compilation itself is
        /// deterministic and draws no randomness.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Generate a fault-map file at given stuck-at rates.
    GenFaults {
        #[command(flatten)]
        layout: LayoutArgs,
        /// Number of weights (cell groups).
        #[arg(long)]
        count: usize,
        #[arg(long)]
        p_sa0: f64,
        #[arg(long)]
        p_sa1: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Range, consecutivity, and level-count diagnostics.
    #[command(subcommand)]
    Analyze(AnalyzeCommand),
}

#[derive(Debug, Subcommand)]
pub enum AnalyzeCommand {
    /// Representable range of one weight's fault map.
    Range {
        #[command(flatten)]
        layout: LayoutArgs,
        /// Fault map JSON; fault-free when omitted.
        #[arg(long)]
        faults: Option<PathBuf>,
        /// Which weight's cell group to analyze.
        #[arg(long, default_value_t = 0)]
        index: usize,
    },
    /// Inconsecutivity trigger report (and exact check on request).
    Consecutivity {
        #[command(flatten)]
        layout: LayoutArgs,
        #[arg(long)]
        faults: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        index: usize,
        /// Also run the exhaustive check.
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
        enum_budget: u64,
    },
    /// Monte Carlo inconsecutivity probability.
    InconsecProb {
        #[command(flatten)]
        layout: LayoutArgs,
        #[arg(long)]
        p_sa0: f64,
        #[arg(long)]
        p_sa1: f64,
        #[arg(long)]
        samples: u64,
        #[arg(long, value_enum)]
        method: MethodArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
        enum_budget: u64,
    },
    /// Distinct representable levels per side.
    Levels {
        #[command(flatten)]
        layout: LayoutArgs,
    },
}

fn load_fault_map_at(
    path: &std::path::Path,
    layout: LayoutSpec,
    levels: u32,
    config: &GroupingConfig,
    index: usize,
) -> Result<FaultMap, CliError> {
    let file: FaultFile = read_json(path)?;
    file.validate(layout, levels)?;
    let maps = file.fault_maps(config)?;
    maps.into_iter().nth(index).ok_or_else(|| {
        CliError::Mismatch(format!("index {index} out of range for {path:?}"))
    })
}

/// Runs one parsed command, writing human output to `out`.
pub fn run(cli: Cli, out: &mut dyn std::io::Write) -> Result<(), CliError> {
    let emit = |out: &mut dyn std::io::Write, line: String| {
        writeln!(out, "{line}").map_err(|e| CliError::Malformed(format!("stdout: {e}")))
    };
    match cli.command {
        Command::Compile {
            layout,
            weights,
            faults,
            out: out_path,
            threads,
            force_path,
            seed,
        } => {
            let config = layout.config()?;
            let weight_file: WeightFile = read_json(&weights)?;
            weight_file.validate(layout.layout, layout.levels)?;
            let fault_file: FaultFile = read_json(&faults)?;
            fault_file.validate(layout.layout, layout.levels)?;
            if fault_file.count != weight_file.weights.len() {
                return Err(CliError::Mismatch(format!(
                    "{} weights but {} fault groups",
                    weight_file.weights.len(),
                    fault_file.count
                )));
            }
            let maps = fault_file.fault_maps(&config)?;
            let targets: Vec<WeightValue> =
                weight_file.weights.iter().map(|&w| WeightValue(w)).collect();
            let policy = CompilePolicy {
                force_path: force_path.into(),
                thread_count: threads,
                ..CompilePolicy::default()
            };
            let report = compile_tensor(&targets, &maps, &config, &policy)?;
            write_json(&out_path, &output_file(layout.layout, layout.levels, &report))?;

            let c = &report.path_counts;
            emit(out, format!("weights: {}", report.results.len()))?;
            emit(out, format!("l1: {}", report.l1))?;
            emit(
                out,
                format!(
                    "paths: clamp={} table_fawd={} ilp_fawd={} table_cvm={} ilp_cvm={}",
                    c.clamp, c.table_fawd, c.ilp_fawd, c.table_cvm, c.ilp_cvm
                ),
            )?;
            let t = &report.stage_times;
            emit(
                out,
                format!(
                    "stage_ms: cond={:.3} fawd={:.3} cvm={:.3}",
                    t.cond.as_secs_f64() * 1e3,
                    t.fawd.as_secs_f64() * 1e3,
                    t.cvm.as_secs_f64() * 1e3
                ),
            )?;
            emit(out, format!("seed: {seed}"))?;
            Ok(())
        }
        Command::GenFaults {
            layout,
            count,
            p_sa0,
            p_sa1,
            seed,
            out: out_path,
        } => {
            let config = layout.config()?;
            let rates = FaultRates::new(p_sa0, p_sa1)
                .map_err(|e| CliError::Malformed(e.to_string()))?;
            let mut codes = Vec::with_capacity(count * config.cells_per_weight());
            for i in 0..count {
                let fm = sample_faultmap(&config, &rates, &RngStream::new(seed, i as u64));
                codes.extend_from_slice(&fm.to_codes());
            }
            let file = FaultFile {
                layout: layout.layout.to_string(),
                levels: layout.levels,
                count,
                codes,
            };
            write_json(&out_path, &file)?;
            emit(out, format!("faults: {count} groups written"))?;
            emit(out, format!("seed: {seed}"))?;
            Ok(())
        }
        Command::Analyze(cmd) => run_analyze(cmd, out, emit),
    }
}

fn run_analyze(
    cmd: AnalyzeCommand,
    out: &mut dyn std::io::Write,
    emit: impl Fn(&mut dyn std::io::Write, String) -> Result<(), CliError>,
) -> Result<(), CliError> {
    match cmd {
        AnalyzeCommand::Range {
            layout,
            faults,
            index,
        } => {
            let config = layout.config()?;
            let fm = match faults {
                Some(path) => load_fault_map_at(&path, layout.layout, layout.levels, &config, index)?,
                None => FaultMap::fault_free(&config),
            };
            let r = representable_range(&fm, &config);
            emit(
                out,
                format!(
                    "range: min={} max={} ideal_min={} ideal_max={} stuck_offset={} width={} ideal_width={}",
                    r.min_value,
                    r.max_value,
                    r.ideal_min,
                    r.ideal_max,
                    r.stuck_offset,
                    r.width(),
                    r.ideal_width()
                ),
            )
        }
        AnalyzeCommand::Consecutivity {
            layout,
            faults,
            index,
            exact,
            enum_budget,
        } => {
            let config = layout.config()?;
            let fm = match faults {
                Some(path) => load_fault_map_at(&path, layout.layout, layout.levels, &config, index)?,
                None => FaultMap::fault_free(&config),
            };
            let rep = inconsecutivity_trigger(&fm, &config);
            let positions: Vec<String> = rep
                .triggering_significances
                .iter()
                .map(|i| i.to_string())
                .collect();
            emit(
                out,
                format!(
                    "trigger: fired={} significances=[{}]",
                    rep.triggered,
                    positions.join(",")
                ),
            )?;
            for &i in &rep.triggering_significances {
                emit(
                    out,
                    format!(
                        "trigger_detail: i={} gap_stride={} tail_span={}",
                        i,
                        rep.gap_stride(i),
                        rep.tail_span(i)
                    ),
                )?;
            }
            if exact {
                let consecutive = is_consecutive_exact(&fm, &config, enum_budget)?;
                emit(out, format!("exact: consecutive={consecutive}"))?;
            }
            Ok(())
        }
        AnalyzeCommand::InconsecProb {
            layout,
            p_sa0,
            p_sa1,
            samples,
            method,
            seed,
            threads,
            enum_budget,
        } => {
            let config = layout.config()?;
            let rates = FaultRates::new(p_sa0, p_sa1)
                .map_err(|e| CliError::Malformed(e.to_string()))?;
            let opts = SimOptions {
                samples,
                seed,
                threads,
                enumeration_budget: enum_budget,
            };
            let (method, name) = match method {
                MethodArg::Trigger => (InconsecMethod::Trigger, "trigger"),
                MethodArg::Exact => (InconsecMethod::Exact, "exact"),
            };
            let p = estimate_inconsec_prob(&config, &rates, method, &opts)?;
            let hits = (p * samples as f64).round() as u64;
            emit(
                out,
                format!(
                    "inconsec_prob: method={name} samples={samples} hits={hits} probability={p:.8} seed={seed}"
                ),
            )
        }
        AnalyzeCommand::Levels { layout } => {
            let config = layout.config()?;
            emit(out, format!("levels: {}", level_count(&config)))
        }
    }
}

/// Re-evaluates a written output file against its fault file; used by the
/// round-trip tests.
pub fn verify_roundtrip(
    output: &OutputFile,
    fault_file: &FaultFile,
    config: &GroupingConfig,
) -> Result<(), String> {
    let maps = fault_file
        .fault_maps(config)
        .map_err(|e| e.message().to_string());
    let maps = maps?;
    if maps.len() != output.results.len() {
        return Err(format!(
            "{} results for {} fault groups",
            output.results.len(),
            maps.len()
        ));
    }
    for (i, (res, fm)) in output.results.iter().zip(maps.iter()).enumerate() {
        let pos = safc_core::Bitmap::from_cells(res.pos.clone(), config)
            .map_err(|e| format!("weight {i}: {e}"))?;
        let neg = safc_core::Bitmap::from_cells(res.neg.clone(), config)
            .map_err(|e| format!("weight {i}: {e}"))?;
        let realized = safc_core::realized_weight(&pos, &neg, fm, config)
            .map_err(|e| format!("weight {i}: {e}"))?;
        if realized != res.realized {
            return Err(format!(
                "weight {i}: file says realized={}, re-evaluation gives {realized}",
                res.realized
            ));
        }
    }
    Ok(())
}
