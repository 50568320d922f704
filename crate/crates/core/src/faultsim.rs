//! Random fault-map generation and Monte Carlo analysis: inconsecutivity
//! probability, range-reduction statistics, and batch distortion reports.
//!
//! Randomness is counter-based: every draw is a pure function of
//! `(seed, stream, index)`, so sampling parallelizes over sample indices
//! with no shared state and results are identical for any thread count or
//! scheduling order.

use std::collections::{BTreeMap, HashMap};
use std::thread;

use crate::error::Error;
use crate::model::{CellFault, FaultMap, FaultMapSide, GroupingConfig, WeightValue};
use crate::pipeline::{compile_tensor, CompilePolicy};
use crate::range::{
    inconsecutivity_trigger, is_consecutive_exact, representable_range,
    DEFAULT_ENUMERATION_BUDGET,
};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One reproducible random stream, usually one per sample index.
/// `draw(i)` is a pure function of `(seed, stream, i)`.
#[derive(Debug, Clone, Copy)]
pub struct RngStream {
    base: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        RngStream {
            base: mix64(seed ^ mix64(stream.wrapping_mul(GOLDEN) ^ 0x5851_F42D_4C95_7F2D)),
        }
    }

    pub fn draw(&self, index: u64) -> u64 {
        mix64(self.base.wrapping_add(index.wrapping_mul(GOLDEN)))
    }

    /// Uniform draw in `[0, 1)` with 53 random bits.
    pub fn unit_f64(&self, index: u64) -> f64 {
        (self.draw(index) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Independent per-cell stuck-at probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaultRates {
    p_sa0: f64,
    p_sa1: f64,
}

impl FaultRates {
    pub fn new(p_sa0: f64, p_sa1: f64) -> Result<Self, Error> {
        let valid = p_sa0 >= 0.0 && p_sa1 >= 0.0 && p_sa0 + p_sa1 <= 1.0;
        if !valid || !p_sa0.is_finite() || !p_sa1.is_finite() {
            return Err(Error::InvalidRates { p_sa0, p_sa1 });
        }
        Ok(FaultRates { p_sa0, p_sa1 })
    }

    pub fn p_sa0(&self) -> f64 {
        self.p_sa0
    }

    pub fn p_sa1(&self) -> f64 {
        self.p_sa1
    }

    pub fn any_fault(&self) -> f64 {
        self.p_sa0 + self.p_sa1
    }
}

impl Default for FaultRates {
    /// Rates measured on fabricated arrays: 1.75% SA0, 9.04% SA1.
    fn default() -> Self {
        FaultRates {
            p_sa0: 0.0175,
            p_sa1: 0.0904,
        }
    }
}

/// Common knobs for the Monte Carlo estimators.
#[derive(Debug, Clone, Copy)]
pub struct SimOptions {
    pub samples: u64,
    pub seed: u64,
    pub threads: usize,
    pub enumeration_budget: u64,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions {
            samples: 10_000,
            seed: 0,
            threads: 1,
            enumeration_budget: DEFAULT_ENUMERATION_BUDGET,
        }
    }
}

/// Aggregate statistics of one simulation run. Each estimator fills the
/// fields it measures and leaves the rest at their defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SimSummary {
    pub sample_count: u64,
    pub seed: u64,
    pub inconsecutive_fraction: f64,
    pub mean_range_reduction: f64,
    pub residual_l1: u64,
    pub residual_l1_mean: f64,
    pub residual_histogram: BTreeMap<i64, u64>,
    pub per_layer_l1: BTreeMap<String, u64>,
}

/// Definition of "inconsecutive" used by the estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InconsecMethod {
    /// The cheap sufficient trigger; undercounts.
    Trigger,
    /// Exhaustive: the representable set is not a contiguous interval.
    Exact,
}

/// Samples one fault map: each of the `2*c*r` cells is independently SA0,
/// SA1, or free, in canonical cell order along the stream.
pub fn sample_faultmap(
    config: &GroupingConfig,
    rates: &FaultRates,
    stream: &RngStream,
) -> FaultMap {
    let n = config.cells_per_side();
    let cell = |i: u64| -> CellFault {
        let u = stream.unit_f64(i);
        if u < rates.p_sa0 {
            CellFault::Sa0
        } else if u < rates.p_sa0 + rates.p_sa1 {
            CellFault::Sa1
        } else {
            CellFault::Free
        }
    };
    let mut codes = Vec::with_capacity(2 * n);
    for i in 0..2 * n {
        codes.push(cell(i as u64).code());
    }
    FaultMap::from_codes(&codes, config).expect("sampled codes are valid")
}

/// Splits `0..samples` into contiguous chunks, folds each chunk on a
/// worker thread, and combines chunk results in index order.
fn sample_chunks<R, F>(samples: u64, threads: usize, fold: F) -> Vec<R>
where
    R: Send,
    F: Fn(std::ops::Range<u64>) -> R + Sync,
{
    let threads = threads.max(1);
    if threads == 1 || samples < 2 {
        return vec![fold(0..samples)];
    }
    let chunk = samples.div_ceil(threads as u64 * 4).max(1);
    let n_chunks = samples.div_ceil(chunk) as usize;
    let next = std::sync::atomic::AtomicUsize::new(0);
    let slots: std::sync::Mutex<Vec<Option<R>>> =
        std::sync::Mutex::new((0..n_chunks).map(|_| None).collect());
    thread::scope(|scope| {
        for _ in 0..threads.min(n_chunks) {
            scope.spawn(|| loop {
                let ci = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if ci >= n_chunks {
                    break;
                }
                let start = ci as u64 * chunk;
                let end = (start + chunk).min(samples);
                let r = fold(start..end);
                slots.lock().expect("slots")[ci] = Some(r);
            });
        }
    });
    slots
        .into_inner()
        .expect("slots")
        .into_iter()
        .map(|r| r.expect("chunk folded"))
        .collect()
}

/// Packs fault codes into a memo key when the group is small enough.
fn pattern_key(faults: &FaultMap) -> Option<u64> {
    let codes = faults.to_codes();
    if codes.len() > 31 {
        return None;
    }
    let mut key: u64 = 1;
    for &c in &codes {
        key = key << 2 | c as u64;
    }
    Some(key)
}

/// Monte Carlo estimate of the probability that a sampled fault map makes
/// the representable set inconsecutive, under the chosen definition.
pub fn estimate_inconsec_prob(
    config: &GroupingConfig,
    rates: &FaultRates,
    method: InconsecMethod,
    opts: &SimOptions,
) -> Result<f64, Error> {
    if method == InconsecMethod::Exact {
        // Surface budget problems before burning samples.
        is_consecutive_exact(&FaultMap::fault_free(config), config, opts.enumeration_budget)?;
    }
    if opts.samples == 0 {
        return Ok(0.0);
    }

    const MEMO_CAP: usize = 1 << 20;
    let hits: u64 = sample_chunks(opts.samples, opts.threads, |range| {
        let mut memo: HashMap<u64, bool> = HashMap::new();
        let mut hits = 0u64;
        for i in range {
            let fm = sample_faultmap(config, rates, &RngStream::new(opts.seed, i));
            let inconsec = match method {
                InconsecMethod::Trigger => inconsecutivity_trigger(&fm, config).triggered,
                InconsecMethod::Exact => match pattern_key(&fm) {
                    Some(key) if memo.len() < MEMO_CAP || memo.contains_key(&key) => {
                        match memo.get(&key) {
                            Some(&v) => v,
                            None => {
                                let v = !is_consecutive_exact(
                                    &fm,
                                    config,
                                    opts.enumeration_budget,
                                )
                                .expect("budget checked up front");
                                memo.insert(key, v);
                                v
                            }
                        }
                    }
                    _ => !is_consecutive_exact(&fm, config, opts.enumeration_budget)
                        .expect("budget checked up front"),
                },
            };
            hits += inconsec as u64;
        }
        hits
    })
    .into_iter()
    .sum();
    Ok(hits as f64 / opts.samples as f64)
}

/// Monte Carlo distribution of the relative range reduction
/// `(ideal width - faulty width) / ideal width` over sampled fault maps.
pub fn range_reduction_stats(
    config: &GroupingConfig,
    rates: &FaultRates,
    opts: &SimOptions,
) -> SimSummary {
    let ideal_width = config.ideal_width() as u128;
    let total_reduction: u128 = sample_chunks(opts.samples, opts.threads, |range| {
        let mut acc: u128 = 0;
        for i in range {
            let fm = sample_faultmap(config, rates, &RngStream::new(opts.seed, i));
            acc += representable_range(&fm, config).width_reduction() as u128;
        }
        acc
    })
    .into_iter()
    .sum();
    SimSummary {
        sample_count: opts.samples,
        seed: opts.seed,
        mean_range_reduction: if opts.samples == 0 {
            0.0
        } else {
            total_reduction as f64 / (opts.samples as u128 * ideal_width) as f64
        },
        ..SimSummary::default()
    }
}

/// Which array a swept fault lands on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Pos,
    Neg,
}

/// One entry of the deterministic single-fault sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepEntry {
    pub side: Side,
    pub column: usize,
    pub row: usize,
    pub fault: CellFault,
    /// Absolute width lost to this single fault.
    pub width_reduction: i64,
    pub ideal_width: i64,
}

impl SweepEntry {
    pub fn reduction_fraction(&self) -> f64 {
        self.width_reduction as f64 / self.ideal_width as f64
    }
}

/// Deterministic sweep over every single-fault position and polarity.
pub fn single_fault_sweep(config: &GroupingConfig) -> Vec<SweepEntry> {
    let mut entries = Vec::new();
    for side in [Side::Pos, Side::Neg] {
        for col in 0..config.columns() {
            for row in 0..config.rows() {
                for fault in [CellFault::Sa0, CellFault::Sa1] {
                    let mut fm = FaultMap::fault_free(config);
                    let target: &mut FaultMapSide = match side {
                        Side::Pos => &mut fm.pos,
                        Side::Neg => &mut fm.neg,
                    };
                    target.set(col, row, fault);
                    let range = representable_range(&fm, config);
                    entries.push(SweepEntry {
                        side,
                        column: col,
                        row,
                        fault,
                        width_reduction: range.width_reduction(),
                        ideal_width: range.ideal_width(),
                    });
                }
            }
        }
    }
    entries
}

/// Compiles the batch and reports the distortion statistics, optionally
/// grouped by per-weight layer tags.
pub fn distortion_report(
    weights: &[WeightValue],
    faults: &[FaultMap],
    layer_tags: Option<&[String]>,
    config: &GroupingConfig,
    policy: &CompilePolicy,
) -> Result<SimSummary, Error> {
    if let Some(tags) = layer_tags {
        if tags.len() != weights.len() {
            return Err(Error::LengthMismatch {
                left: tags.len(),
                right: weights.len(),
            });
        }
    }
    let report = compile_tensor(weights, faults, config, policy)?;
    let mut per_layer_l1 = BTreeMap::new();
    if let Some(tags) = layer_tags {
        for (tag, cw) in tags.iter().zip(report.results.iter()) {
            *per_layer_l1.entry(tag.clone()).or_insert(0) += cw.residual.unsigned_abs();
        }
    }
    Ok(SimSummary {
        sample_count: weights.len() as u64,
        residual_l1: report.l1,
        residual_l1_mean: if weights.is_empty() {
            0.0
        } else {
            report.l1 as f64 / weights.len() as f64
        },
        residual_histogram: report.residual_histogram,
        per_layer_l1,
        ..SimSummary::default()
    })
}

/// Distinct values one side can represent: `(L^c - 1) * r + 1`.
pub fn level_count(config: &GroupingConfig) -> i64 {
    config.side_level_count()
}
