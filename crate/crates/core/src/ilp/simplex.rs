//! Two-phase primal simplex over exact rationals, with Bland's rule for
//! termination and determinism. Sized for the tiny per-weight relaxations
//! (tens of variables, a handful of rows); clarity over sparsity.

use super::rat::Rat;

pub(crate) struct LpProblem {
    /// Minimization objective over the structural variables.
    pub objective: Vec<Rat>,
    /// `coeffs . y = rhs` rows.
    pub eq_rows: Vec<(Vec<Rat>, Rat)>,
    /// `coeffs . y <= rhs` rows.
    pub le_rows: Vec<(Vec<Rat>, Rat)>,
}

#[derive(Debug, PartialEq, Eq)]
pub(crate) enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { objective: Rat, solution: Vec<Rat> },
}

struct Tableau {
    rows: Vec<Vec<Rat>>, // m x (cols + 1), last entry is the RHS
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn rhs(&self, row: usize) -> Rat {
        self.rows[row][self.cols]
    }

    fn pivot(&mut self, pivot_row: usize, pivot_col: usize) {
        let inv = Rat::ONE / self.rows[pivot_row][pivot_col];
        for entry in self.rows[pivot_row].iter_mut() {
            *entry = *entry * inv;
        }
        for r in 0..self.rows.len() {
            if r == pivot_row {
                continue;
            }
            let factor = self.rows[r][pivot_col];
            if factor.is_zero() {
                continue;
            }
            for cidx in 0..=self.cols {
                let delta = factor * self.rows[pivot_row][cidx];
                self.rows[r][cidx] = self.rows[r][cidx] - delta;
            }
        }
        self.basis[pivot_row] = pivot_col;
    }

    /// Runs simplex iterations for the given column costs until optimal or
    /// unbounded. `allowed` masks columns that may enter the basis.
    fn optimize(&mut self, costs: &[Rat], allowed: &[bool]) -> Result<(), LpOutcome> {
        loop {
            // Reduced cost c_j - c_B . B^-1 A_j, recomputed fresh; entering
            // column is the lowest-index negative one (Bland).
            let mut entering = None;
            for j in 0..self.cols {
                if !allowed[j] || self.basis.contains(&j) {
                    continue;
                }
                let mut reduced = costs[j];
                for (r, &b) in self.basis.iter().enumerate() {
                    if !costs[b].is_zero() {
                        reduced = reduced - costs[b] * self.rows[r][j];
                    }
                }
                if reduced < Rat::ZERO {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else {
                return Ok(());
            };

            // Ratio test; ties broken by the smallest basic variable index.
            let mut leave: Option<(usize, Rat)> = None;
            for r in 0..self.rows.len() {
                let a = self.rows[r][j];
                if a <= Rat::ZERO {
                    continue;
                }
                let ratio = self.rhs(r) / a;
                let better = match &leave {
                    None => true,
                    Some((lr, lratio)) => {
                        ratio < *lratio || (ratio == *lratio && self.basis[r] < self.basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let Some((r, _)) = leave else {
                return Err(LpOutcome::Unbounded);
            };
            self.pivot(r, j);
        }
    }
}

/// Solves `min objective . y` subject to the problem rows and `y >= 0`.
pub(crate) fn solve_lp(p: &LpProblem) -> LpOutcome {
    let n = p.objective.len();
    let n_slack = p.le_rows.len();
    let m = p.eq_rows.len() + p.le_rows.len();
    let cols = n + n_slack + m; // structurals, slacks, artificials
    let art_start = n + n_slack;

    let mut rows = Vec::with_capacity(m);
    let build_row = |coeffs: &[Rat], rhs: Rat, slack: Option<usize>, art: usize| {
        debug_assert_eq!(coeffs.len(), n);
        let mut row = vec![Rat::ZERO; cols + 1];
        row[..n].copy_from_slice(coeffs);
        if let Some(s) = slack {
            row[n + s] = Rat::ONE;
        }
        row[cols] = rhs;
        if rhs < Rat::ZERO {
            for entry in row.iter_mut() {
                *entry = -*entry;
            }
        }
        row[art_start + art] = Rat::ONE;
        row
    };
    for (i, (coeffs, rhs)) in p.eq_rows.iter().enumerate() {
        rows.push(build_row(coeffs, *rhs, None, i));
    }
    for (i, (coeffs, rhs)) in p.le_rows.iter().enumerate() {
        rows.push(build_row(coeffs, *rhs, Some(i), p.eq_rows.len() + i));
    }

    let mut t = Tableau {
        rows,
        basis: (art_start..art_start + m).collect(),
        cols,
    };

    // Phase 1: minimize the artificial sum.
    let mut phase1_costs = vec![Rat::ZERO; cols];
    for c in &mut phase1_costs[art_start..] {
        *c = Rat::ONE;
    }
    let allowed = vec![true; cols];
    if let Err(outcome) = t.optimize(&phase1_costs, &allowed) {
        // Phase 1 is bounded below by zero; unboundedness is impossible.
        return outcome;
    }
    let phase1_obj: Rat = t
        .basis
        .iter()
        .enumerate()
        .filter(|(_, &b)| b >= art_start)
        .fold(Rat::ZERO, |acc, (r, _)| acc + t.rhs(r));
    if phase1_obj > Rat::ZERO {
        return LpOutcome::Infeasible;
    }

    // Drive any degenerate basic artificials out, dropping redundant rows.
    let mut r = 0;
    while r < t.rows.len() {
        if t.basis[r] >= art_start {
            debug_assert!(t.rhs(r).is_zero());
            match (0..art_start).find(|&j| !t.rows[r][j].is_zero()) {
                Some(j) => t.pivot(r, j),
                None => {
                    t.rows.remove(r);
                    t.basis.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }

    // Phase 2: real costs, artificial columns banned.
    let mut costs = vec![Rat::ZERO; cols];
    costs[..n].copy_from_slice(&p.objective);
    let mut allowed = vec![true; cols];
    for a in &mut allowed[art_start..] {
        *a = false;
    }
    if let Err(outcome) = t.optimize(&costs, &allowed) {
        return outcome;
    }

    let mut solution = vec![Rat::ZERO; n];
    let mut objective = Rat::ZERO;
    for (r, &b) in t.basis.iter().enumerate() {
        if b < n {
            solution[b] = t.rhs(r);
            objective = objective + p.objective[b] * t.rhs(r);
        }
    }
    LpOutcome::Optimal {
        objective,
        solution,
    }
}
