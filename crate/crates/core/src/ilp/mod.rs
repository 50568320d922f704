//! Exact integer linear programming for the per-weight decomposition
//! problems, plus the model builders for the two formulations:
//!
//! * fault-aware weight decomposition (FAWD): minimize the summed cell
//!   values subject to realizing the target weight exactly;
//! * closest value matching (CVM): minimize `|w - realized|` via an
//!   auxiliary distance variable `t`.
//!
//! `solve` is deterministic and works in exact integer/rational arithmetic
//! throughout: single-equality models go through a subset-sum style dynamic
//! program, everything else through branch and bound with a rational
//! simplex relaxation bound.

mod dp;
mod rat;
mod simplex;

use crate::error::Error;
use crate::model::{Bitmap, FaultMap, GroupingConfig, WeightValue};
use crate::pipeline::{CompiledWeight, SolvePath};
use crate::range::{representable_range, stuck_offset};
use rat::Rat;
use simplex::{solve_lp, LpOutcome, LpProblem};

/// Default cap on the number of decision variables per model.
pub const DEFAULT_VARIABLE_CAP: usize = 64;

/// State cap for the dynamic-program path.
const DP_MAX_STATES: usize = 1 << 22;

/// A bounded integer minimization problem. All coefficients, bounds, and
/// right-hand sides are integers; inequalities read `coeffs . x <= rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IlpModel {
    /// Inclusive (lower, upper) bound per variable.
    pub bounds: Vec<(i64, i64)>,
    /// Minimization objective, one coefficient per variable.
    pub objective: Vec<i64>,
    /// `coeffs . x = rhs` constraints.
    pub equalities: Vec<(Vec<i64>, i64)>,
    /// `coeffs . x <= rhs` constraints.
    pub inequalities: Vec<(Vec<i64>, i64)>,
}

impl IlpModel {
    pub fn num_variables(&self) -> usize {
        self.bounds.len()
    }

    fn validate(&self, cap: usize) -> Result<(), Error> {
        let n = self.num_variables();
        if n > cap {
            return Err(Error::VariableCapExceeded { count: n, cap });
        }
        if self.objective.len() != n {
            return Err(Error::MalformedModel(format!(
                "objective has {} coefficients for {} variables",
                self.objective.len(),
                n
            )));
        }
        for (coeffs, _) in self.equalities.iter().chain(self.inequalities.iter()) {
            if coeffs.len() != n {
                return Err(Error::MalformedModel(format!(
                    "constraint has {} coefficients for {} variables",
                    coeffs.len(),
                    n
                )));
            }
        }
        Ok(())
    }
}

/// Outcome of [`solve`]: a provably optimal assignment or infeasibility.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IlpSolution {
    Optimal {
        assignment: Vec<i64>,
        objective_value: i64,
    },
    Infeasible,
}

impl IlpSolution {
    pub fn is_optimal(&self) -> bool {
        matches!(self, IlpSolution::Optimal { .. })
    }

    pub fn objective_value(&self) -> Option<i64> {
        match self {
            IlpSolution::Optimal {
                objective_value, ..
            } => Some(*objective_value),
            IlpSolution::Infeasible => None,
        }
    }
}

/// Solves the model exactly with the default variable cap.
pub fn solve(model: &IlpModel) -> Result<IlpSolution, Error> {
    solve_capped(model, DEFAULT_VARIABLE_CAP)
}

/// Solves the model exactly. Deterministic: identical models yield
/// identical solutions; single-equality models additionally yield the
/// lexicographically smallest optimal assignment.
pub fn solve_capped(model: &IlpModel, cap: usize) -> Result<IlpSolution, Error> {
    model.validate(cap)?;
    if model.bounds.iter().any(|(lo, hi)| lo > hi) {
        return Ok(IlpSolution::Infeasible);
    }

    if model.inequalities.is_empty() && model.equalities.len() == 1 {
        let (coeffs, rhs) = &model.equalities[0];
        if let Ok(result) = dp::solve_window(
            coeffs,
            &model.bounds,
            &model.objective,
            (*rhs, *rhs),
            DP_MAX_STATES,
        ) {
            return Ok(match result {
                Some((objective_value, assignment)) => IlpSolution::Optimal {
                    assignment,
                    objective_value,
                },
                None => IlpSolution::Infeasible,
            });
        }
    }

    Ok(branch_and_bound(model))
}

/// LP relaxation of `model` restricted to the node box `[lo, hi]`.
/// Variables are shifted to `y = x - lo >= 0`; upper bounds become rows.
fn node_relaxation(model: &IlpModel, lo: &[i64], hi: &[i64]) -> LpOutcome {
    let n = model.num_variables();
    let to_rats = |coeffs: &[i64]| -> Vec<Rat> { coeffs.iter().map(|&c| Rat::from_int(c)).collect() };
    let shift_rhs = |coeffs: &[i64], rhs: i64| -> Rat {
        let used: i128 = coeffs
            .iter()
            .zip(lo.iter())
            .map(|(&a, &l)| a as i128 * l as i128)
            .sum();
        Rat::from_int(rhs) - Rat::new(used, 1)
    };

    let mut le_rows: Vec<(Vec<Rat>, Rat)> = Vec::new();
    for (coeffs, rhs) in &model.inequalities {
        le_rows.push((to_rats(coeffs), shift_rhs(coeffs, *rhs)));
    }
    for j in 0..n {
        let mut row = vec![Rat::ZERO; n];
        row[j] = Rat::ONE;
        le_rows.push((row, Rat::from_int(hi[j] - lo[j])));
    }
    let eq_rows = model
        .equalities
        .iter()
        .map(|(coeffs, rhs)| (to_rats(coeffs), shift_rhs(coeffs, *rhs)))
        .collect();

    solve_lp(&LpProblem {
        objective: to_rats(&model.objective),
        eq_rows,
        le_rows,
    })
}

fn branch_and_bound(model: &IlpModel) -> IlpSolution {
    let base_obj = |x: &[i64]| -> i64 {
        let v: i128 = model
            .objective
            .iter()
            .zip(x.iter())
            .map(|(&c, &xv)| c as i128 * xv as i128)
            .sum();
        v as i64
    };

    let mut best: Option<(i64, Vec<i64>)> = None;
    let root = (
        model.bounds.iter().map(|b| b.0).collect::<Vec<_>>(),
        model.bounds.iter().map(|b| b.1).collect::<Vec<_>>(),
    );
    let mut stack = vec![root];

    while let Some((lo, hi)) = stack.pop() {
        let (z_shift, solution) = match node_relaxation(model, &lo, &hi) {
            LpOutcome::Infeasible => continue,
            // Bounded boxes cannot produce an unbounded relaxation.
            LpOutcome::Unbounded => unreachable!("bounded node relaxation"),
            LpOutcome::Optimal {
                objective,
                solution,
            } => (objective, solution),
        };
        let lo_const: i128 = model
            .objective
            .iter()
            .zip(lo.iter())
            .map(|(&c, &l)| c as i128 * l as i128)
            .sum();
        let z = z_shift + Rat::new(lo_const, 1);
        if let Some((best_obj, _)) = &best {
            // Integer objectives: no strict improvement below ceil(z).
            if z.ceil() >= *best_obj as i128 {
                continue;
            }
        }

        match solution.iter().position(|v| !v.is_integer()) {
            None => {
                let x: Vec<i64> = solution
                    .iter()
                    .zip(lo.iter())
                    .map(|(y, &l)| y.to_integer() as i64 + l)
                    .collect();
                let obj = base_obj(&x);
                if best.as_ref().is_none_or(|(b, _)| obj < *b) {
                    best = Some((obj, x));
                }
            }
            Some(j) => {
                let y = solution[j];
                let split = y.floor() + lo[j] as i128;
                // Floor branch is pushed last so it is explored first.
                let mut lo_up = lo.clone();
                lo_up[j] = (split + 1) as i64;
                let mut hi_down = hi.clone();
                hi_down[j] = split as i64;
                stack.push((lo_up, hi));
                stack.push((lo, hi_down));
            }
        }
    }

    match best {
        Some((objective_value, assignment)) => IlpSolution::Optimal {
            assignment,
            objective_value,
        },
        None => IlpSolution::Infeasible,
    }
}

/// Free cells of both sides in canonical order (positive side first,
/// columns MSB-first, rows within a column), with their signed
/// significance coefficients.
fn free_cell_coefficients(faults: &FaultMap, config: &GroupingConfig) -> Vec<i64> {
    let mut coeffs = Vec::new();
    for (side, sign) in [(&faults.pos, 1i64), (&faults.neg, -1i64)] {
        for col in 0..config.columns() {
            let s = config.significance(col);
            for row in 0..config.rows() {
                if !side.get(col, row).is_fault() {
                    coeffs.push(sign * s);
                }
            }
        }
    }
    coeffs
}

/// Rebuilds the canonical bitmap pair from a free-cell assignment; stuck
/// cells are written as 0.
fn bitmaps_from_assignment(
    assignment: &[i64],
    faults: &FaultMap,
    config: &GroupingConfig,
) -> (Bitmap, Bitmap) {
    let mut pos = Bitmap::zeros(config);
    let mut neg = Bitmap::zeros(config);
    let mut it = assignment.iter();
    for (side, bm) in [(&faults.pos, &mut pos), (&faults.neg, &mut neg)] {
        for col in 0..config.columns() {
            for row in 0..config.rows() {
                if !side.get(col, row).is_fault() {
                    bm.set(col, row, *it.next().expect("assignment length") as u8);
                }
            }
        }
    }
    debug_assert!(it.next().is_none());
    (pos, neg)
}

/// The FAWD model: unit costs over the free cells of both sides, one
/// equality pinning the realized weight to `w`. Stuck contributions are
/// folded into the right-hand side via the stuck offset.
pub fn build_fawd_model(
    w: WeightValue,
    faults: &FaultMap,
    config: &GroupingConfig,
) -> IlpModel {
    let coeffs = free_cell_coefficients(faults, config);
    let n = coeffs.len();
    let rhs = w.0 - stuck_offset(faults, config);
    IlpModel {
        bounds: vec![(0, config.max_cell() as i64); n],
        objective: vec![1; n],
        equalities: vec![(coeffs, rhs)],
        inequalities: vec![],
    }
}

/// The CVM model: free cells plus a trailing distance variable `t`,
/// minimizing `t` subject to `-t <= w - realized <= t`. The bound on `t`
/// admits the clamp solution, so the model is always feasible.
pub fn build_cvm_model(
    w: WeightValue,
    faults: &FaultMap,
    config: &GroupingConfig,
) -> IlpModel {
    let cell_coeffs = free_cell_coefficients(faults, config);
    let n = cell_coeffs.len();
    let range = representable_range(faults, config);
    let delta = w.0 - range.stuck_offset;
    let t_upper = (w.0 - range.min_value).abs().max((w.0 - range.max_value).abs());

    let mut bounds = vec![(0, config.max_cell() as i64); n];
    bounds.push((0, t_upper));
    let mut objective = vec![0; n];
    objective.push(1);

    // -y - t <= -delta  and  y - t <= delta  encode |delta - y| <= t.
    let mut row_low: Vec<i64> = cell_coeffs.iter().map(|&a| -a).collect();
    row_low.push(-1);
    let mut row_high = cell_coeffs;
    row_high.push(-1);

    IlpModel {
        bounds,
        objective,
        equalities: vec![],
        inequalities: vec![(row_low, -delta), (row_high, delta)],
    }
}

/// Exact decomposition via the FAWD model. `None` when no bitmap pair
/// realizes `w` under the fault map.
pub fn fawd_ilp(
    w: WeightValue,
    faults: &FaultMap,
    config: &GroupingConfig,
) -> Result<Option<CompiledWeight>, Error> {
    let model = build_fawd_model(w, faults, config);
    match solve(&model)? {
        IlpSolution::Infeasible => Ok(None),
        IlpSolution::Optimal { assignment, .. } => {
            let (pos, neg) = bitmaps_from_assignment(&assignment, faults, config);
            debug_assert_eq!(
                crate::model::realized_weight(&pos, &neg, faults, config).unwrap(),
                w.0
            );
            Ok(Some(CompiledWeight {
                pos,
                neg,
                realized: w.0,
                residual: 0,
                path: SolvePath::IlpFawd,
            }))
        }
    }
}

/// Closest-value matching via the CVM model. Always produces a result;
/// among minimal-distance candidates the canonical one (smallest summed
/// cell values, then lexicographically smallest bitmap pair) is returned.
pub fn cvm_ilp(
    w: WeightValue,
    faults: &FaultMap,
    config: &GroupingConfig,
) -> Result<CompiledWeight, Error> {
    let model = build_cvm_model(w, faults, config);
    let solution = solve(&model)?;
    let t = match &solution {
        IlpSolution::Optimal {
            objective_value, ..
        } => *objective_value,
        IlpSolution::Infeasible => unreachable!("CVM models are feasible by construction"),
    };

    // Canonicalize: among assignments at distance t, minimize the summed
    // cell values, breaking remaining ties lexicographically.
    let coeffs = free_cell_coefficients(faults, config);
    let bounds = vec![(0, config.max_cell() as i64); coeffs.len()];
    let unit = vec![1i64; coeffs.len()];
    let delta = w.0 - stuck_offset(faults, config);
    let window = (delta - t, delta + t);
    let (_, assignment) = dp::solve_window(&coeffs, &bounds, &unit, window, DP_MAX_STATES)
        .expect("per-weight models fit the DP state cap")
        .expect("distance-t window is achievable");

    let realized_free: i64 = coeffs
        .iter()
        .zip(assignment.iter())
        .map(|(&a, &v)| a * v)
        .sum();
    let realized = realized_free + stuck_offset(faults, config);
    let (pos, neg) = bitmaps_from_assignment(&assignment, faults, config);
    debug_assert_eq!(
        crate::model::realized_weight(&pos, &neg, faults, config).unwrap(),
        realized
    );
    debug_assert_eq!((w.0 - realized).abs(), t);
    Ok(CompiledWeight {
        pos,
        neg,
        realized,
        residual: w.0 - realized,
        path: SolvePath::IlpCvm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CellFault;

    fn cfg(c: usize, r: usize, l: u32) -> GroupingConfig {
        GroupingConfig::new(c, r, l).unwrap()
    }

    #[test]
    fn solve_fixed_variable() {
        let model = IlpModel {
            bounds: vec![(0, 3)],
            objective: vec![1],
            equalities: vec![(vec![1], 2)],
            inequalities: vec![],
        };
        assert_eq!(
            solve(&model).unwrap(),
            IlpSolution::Optimal {
                assignment: vec![2],
                objective_value: 2
            }
        );
    }

    #[test]
    fn solve_two_variable_equality() {
        let model = IlpModel {
            bounds: vec![(0, 3), (0, 3)],
            objective: vec![1, 1],
            equalities: vec![(vec![4, 1], 5)],
            inequalities: vec![],
        };
        assert_eq!(
            solve(&model).unwrap(),
            IlpSolution::Optimal {
                assignment: vec![1, 1],
                objective_value: 2
            }
        );
    }

    #[test]
    fn solve_infeasible_bound() {
        let model = IlpModel {
            bounds: vec![(0, 3)],
            objective: vec![1],
            equalities: vec![(vec![1], 5)],
            inequalities: vec![],
        };
        assert_eq!(solve(&model).unwrap(), IlpSolution::Infeasible);
    }

    #[test]
    fn solve_rejects_malformed_and_oversized() {
        let model = IlpModel {
            bounds: vec![(0, 1)],
            objective: vec![1, 2],
            equalities: vec![],
            inequalities: vec![],
        };
        assert!(matches!(
            solve(&model),
            Err(Error::MalformedModel(_))
        ));

        let model = IlpModel {
            bounds: vec![(0, 1); 65],
            objective: vec![0; 65],
            equalities: vec![],
            inequalities: vec![],
        };
        assert!(matches!(
            solve(&model),
            Err(Error::VariableCapExceeded { count: 65, cap: 64 })
        ));
    }

    #[test]
    fn branch_and_bound_with_inequalities() {
        // min -x1 - x2 s.t. 2x1 + x2 <= 4, x in [0,3]^2: optimum (1,2) or
        // (0,3)... -3 either way; B&B must find objective -3.
        let model = IlpModel {
            bounds: vec![(0, 3), (0, 3)],
            objective: vec![-1, -1],
            equalities: vec![],
            inequalities: vec![(vec![2, 1], 4)],
        };
        let got = solve(&model).unwrap();
        assert_eq!(got.objective_value(), Some(-3));
    }

    #[test]
    fn solve_deterministic() {
        let model = IlpModel {
            bounds: vec![(0, 3), (0, 3), (0, 3)],
            objective: vec![1, 1, 1],
            equalities: vec![],
            inequalities: vec![(vec![-2, -3, -1], -7)],
        };
        let a = solve(&model).unwrap();
        let b = solve(&model).unwrap();
        assert_eq!(a, b);
    }

    /// Exhaustive reference over the bound box.
    fn brute_force(model: &IlpModel) -> Option<i64> {
        fn feasible(model: &IlpModel, x: &[i64]) -> bool {
            model
                .equalities
                .iter()
                .all(|(c, b)| c.iter().zip(x).map(|(&a, &v)| a * v).sum::<i64>() == *b)
                && model
                    .inequalities
                    .iter()
                    .all(|(c, b)| c.iter().zip(x).map(|(&a, &v)| a * v).sum::<i64>() <= *b)
        }
        let n = model.bounds.len();
        let mut x: Vec<i64> = model.bounds.iter().map(|b| b.0).collect();
        let mut best = None;
        loop {
            if feasible(model, &x) {
                let obj: i64 = model.objective.iter().zip(&x).map(|(&c, &v)| c * v).sum();
                best = Some(best.map_or(obj, |b: i64| b.min(obj)));
            }
            let mut i = 0;
            loop {
                if i == n {
                    return best;
                }
                if x[i] < model.bounds[i].1 {
                    x[i] += 1;
                    break;
                }
                x[i] = model.bounds[i].0;
                i += 1;
            }
        }
    }

    #[test]
    fn solver_matches_brute_force_on_random_models() {
        let mut state = 0x9E3779B97F4A7C15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for case in 0..300 {
            let n = 1 + (next() % 4) as usize;
            let bounds: Vec<(i64, i64)> = (0..n).map(|_| (0, (next() % 4) as i64)).collect();
            let objective: Vec<i64> = (0..n).map(|_| (next() % 9) as i64 - 4).collect();
            let mut equalities = vec![];
            let mut inequalities = vec![];
            let coeffs = |next: &mut dyn FnMut() -> u64| -> Vec<i64> {
                (0..n).map(|_| (next() % 11) as i64 - 5).collect()
            };
            match next() % 3 {
                0 => equalities.push((coeffs(&mut next), (next() % 13) as i64 - 6)),
                1 => inequalities.push((coeffs(&mut next), (next() % 13) as i64 - 6)),
                _ => {
                    equalities.push((coeffs(&mut next), (next() % 13) as i64 - 6));
                    inequalities.push((coeffs(&mut next), (next() % 13) as i64 - 6));
                }
            }
            let model = IlpModel {
                bounds,
                objective,
                equalities,
                inequalities,
            };
            let expected = brute_force(&model);
            let got = solve(&model).unwrap();
            assert_eq!(
                got.objective_value(),
                expected,
                "case {case}: {model:?}"
            );
            if let IlpSolution::Optimal { assignment, .. } = &got {
                // The returned assignment must itself be feasible.
                let obj: i64 = model
                    .objective
                    .iter()
                    .zip(assignment)
                    .map(|(&c, &v)| c * v)
                    .sum();
                assert_eq!(Some(obj), expected);
                for (c, b) in &model.equalities {
                    let lhs: i64 = c.iter().zip(assignment).map(|(&a, &v)| a * v).sum();
                    assert_eq!(lhs, *b);
                }
                for (c, b) in &model.inequalities {
                    let lhs: i64 = c.iter().zip(assignment).map(|(&a, &v)| a * v).sum();
                    assert!(lhs <= *b);
                }
            }
        }
    }

    #[test]
    fn fawd_fault_free_single_cell() {
        let c = cfg(1, 1, 2);
        let fm = FaultMap::fault_free(&c);
        let model = build_fawd_model(WeightValue(1), &fm, &c);
        assert_eq!(model.equalities, vec![(vec![1, -1], 1)]);
        let got = fawd_ilp(WeightValue(1), &fm, &c).unwrap().unwrap();
        assert_eq!(got.pos.cells(), &[1]);
        assert_eq!(got.neg.cells(), &[0]);
        assert_eq!((got.realized, got.residual), (1, 0));
    }

    #[test]
    fn fawd_routes_around_stuck_lsb() {
        let c = cfg(2, 1, 2);
        let mut fm = FaultMap::fault_free(&c);
        fm.pos.set(1, 0, CellFault::Sa1);
        let got = fawd_ilp(WeightValue(1), &fm, &c).unwrap().unwrap();
        assert_eq!(got.pos.cells(), &[1, 0]);
        assert_eq!(got.neg.cells(), &[0, 1]);
        assert_eq!((got.realized, got.residual), (1, 0));
    }

    #[test]
    fn fawd_minimizes_summed_cell_values() {
        // Fault-free w=19 on R1C4/L4: the sparsest pair is 20 - 1 with
        // summed cell values 3, beating the naive 19 - 0 at 4.
        let c = cfg(4, 1, 4);
        let fm = FaultMap::fault_free(&c);
        let model = build_fawd_model(WeightValue(19), &fm, &c);
        assert_eq!(solve(&model).unwrap().objective_value(), Some(3));
        let got = fawd_ilp(WeightValue(19), &fm, &c).unwrap().unwrap();
        assert_eq!(got.pos.cells(), &[0, 1, 1, 0]);
        assert_eq!(got.neg.cells(), &[0, 0, 0, 1]);
        assert_eq!((got.realized, got.residual), (19, 0));
    }

    #[test]
    fn fawd_infeasible_on_gapped_set() {
        // LSBs stuck on both sides: only even weights representable.
        let c = cfg(2, 1, 2);
        let fm = FaultMap::from_codes(&[0, 2, 0, 2], &c).unwrap();
        assert!(fawd_ilp(WeightValue(1), &fm, &c).unwrap().is_none());
        assert!(fawd_ilp(WeightValue(2), &fm, &c).unwrap().is_some());
    }

    #[test]
    fn fawd_ideal_max_saturates_positive_side() {
        let c = cfg(2, 1, 2);
        let fm = FaultMap::fault_free(&c);
        let got = fawd_ilp(WeightValue(3), &fm, &c).unwrap().unwrap();
        assert_eq!(got.pos.cells(), &[1, 1]);
        assert_eq!(got.neg.cells(), &[0, 0]);
    }

    #[test]
    fn cvm_zero_weight_fault_free() {
        let c = cfg(2, 1, 2);
        let fm = FaultMap::fault_free(&c);
        let got = cvm_ilp(WeightValue(0), &fm, &c).unwrap();
        assert_eq!((got.realized, got.residual), (0, 0));
        assert_eq!(got.pos.cells(), &[0, 0]);
        assert_eq!(got.neg.cells(), &[0, 0]);
    }

    #[test]
    fn cvm_all_stuck_reports_full_distance() {
        let c = cfg(2, 1, 2);
        let fm = FaultMap::from_codes(&[2, 2, 2, 2], &c).unwrap();
        let model = build_cvm_model(WeightValue(5), &fm, &c);
        assert_eq!(solve(&model).unwrap().objective_value(), Some(5));
        let got = cvm_ilp(WeightValue(5), &fm, &c).unwrap();
        assert_eq!((got.realized, got.residual), (0, 5));
    }

    #[test]
    fn cvm_clamps_to_range_maximum() {
        let c = cfg(4, 1, 4);
        let mut fm = FaultMap::fault_free(&c);
        fm.pos.set(0, 0, CellFault::Sa1);
        let model = build_cvm_model(WeightValue(100), &fm, &c);
        assert_eq!(solve(&model).unwrap().objective_value(), Some(37));
        let got = cvm_ilp(WeightValue(100), &fm, &c).unwrap();
        assert_eq!((got.realized, got.residual), (63, 37));
        assert_eq!(got.pos.cells(), &[0, 3, 3, 3]);
        assert_eq!(got.neg.cells(), &[0, 0, 0, 0]);
    }

    #[test]
    fn cvm_tie_breaks_by_cell_sum() {
        // Representable set {-2, 0, 2}, w = 1: both neighbors are at
        // distance 1; the all-zero pair wins on summed cell values.
        let c = cfg(2, 1, 2);
        let fm = FaultMap::from_codes(&[0, 2, 0, 2], &c).unwrap();
        let got = cvm_ilp(WeightValue(1), &fm, &c).unwrap();
        assert_eq!((got.realized, got.residual), (0, 1));
        assert_eq!(got.pos.cells(), &[0, 0]);
        assert_eq!(got.neg.cells(), &[0, 0]);
    }
}
