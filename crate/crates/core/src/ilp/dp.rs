//! Dynamic program over a single bounded linear form: minimize an integer
//! objective over integer variables subject to `coeffs . x` landing in a
//! target window. Used for the single-equality decomposition models and for
//! canonical witness extraction, where it also yields the lexicographically
//! smallest assignment among objective ties.

const INFEASIBLE: i64 = i64::MAX;

/// Minimal objective and lexicographically smallest optimal assignment for
/// `min obj . x` s.t. `window.0 <= coeffs . x <= window.1`,
/// `bounds[i].0 <= x_i <= bounds[i].1`.
///
/// Returns `Err(())` when the partial-sum state space exceeds `max_states`
/// (caller falls back to branch and bound), `Ok(None)` when infeasible.
pub(crate) fn solve_window(
    coeffs: &[i64],
    bounds: &[(i64, i64)],
    obj: &[i64],
    window: (i64, i64),
    max_states: usize,
) -> Result<Option<(i64, Vec<i64>)>, ()> {
    let n = coeffs.len();
    debug_assert_eq!(bounds.len(), n);
    debug_assert_eq!(obj.len(), n);
    if window.0 > window.1 || bounds.iter().any(|(lo, hi)| lo > hi) {
        return Ok(None);
    }

    // Reachable partial-sum interval after each prefix; i128 so that even
    // degenerate models cannot overflow before hitting the state cap.
    let mut lo_sum = vec![0i128; n + 1];
    let mut hi_sum = vec![0i128; n + 1];
    let mut states: u128 = 1;
    for k in 0..n {
        let a = coeffs[k] as i128;
        let (lo, hi) = (bounds[k].0 as i128, bounds[k].1 as i128);
        let (term_lo, term_hi) = if a >= 0 { (a * lo, a * hi) } else { (a * hi, a * lo) };
        lo_sum[k + 1] = lo_sum[k] + term_lo;
        hi_sum[k + 1] = hi_sum[k] + term_hi;
        states += (hi_sum[k + 1] - lo_sum[k + 1]) as u128 + 1;
        if states > max_states as u128 {
            return Err(());
        }
    }

    // Suffix tables, back to front: tables[k][p - lo_sum[k]] = minimal
    // objective of variables k.. given prefix sum p.
    let mut tables: Vec<Vec<i64>> = (0..=n)
        .map(|k| vec![INFEASIBLE; (hi_sum[k] - lo_sum[k]) as usize + 1])
        .collect();
    let (wlo, whi) = (window.0 as i128, window.1 as i128);
    for (p, entry) in tables[n].iter_mut().enumerate() {
        let sum = lo_sum[n] + p as i128;
        if wlo <= sum && sum <= whi {
            *entry = 0;
        }
    }
    for k in (0..n).rev() {
        let (head, tail) = tables.split_at_mut(k + 1);
        let here = &mut head[k];
        let next = &tail[0];
        for (p, entry) in here.iter_mut().enumerate() {
            let sum = lo_sum[k] + p as i128;
            let mut best = INFEASIBLE;
            for v in bounds[k].0..=bounds[k].1 {
                let nsum = sum + coeffs[k] as i128 * v as i128;
                if nsum < lo_sum[k + 1] || nsum > hi_sum[k + 1] {
                    continue;
                }
                let suffix = next[(nsum - lo_sum[k + 1]) as usize];
                if suffix == INFEASIBLE {
                    continue;
                }
                best = best.min(obj[k] * v + suffix);
            }
            *entry = best;
        }
    }

    let total = tables[0][0];
    if total == INFEASIBLE {
        return Ok(None);
    }

    // Forward walk: the smallest value whose completion still meets the
    // optimum gives the lexicographically smallest optimal assignment.
    let mut assignment = Vec::with_capacity(n);
    let mut sum = 0i128;
    let mut remaining = total;
    for k in 0..n {
        let next = &tables[k + 1];
        let mut chosen = None;
        for v in bounds[k].0..=bounds[k].1 {
            let nsum = sum + coeffs[k] as i128 * v as i128;
            if nsum < lo_sum[k + 1] || nsum > hi_sum[k + 1] {
                continue;
            }
            let suffix = next[(nsum - lo_sum[k + 1]) as usize];
            if suffix != INFEASIBLE && obj[k] * v + suffix == remaining {
                chosen = Some(v);
                break;
            }
        }
        let v = chosen.expect("table admits a completion");
        assignment.push(v);
        sum += coeffs[k] as i128 * v as i128;
        remaining -= obj[k] * v;
    }
    debug_assert_eq!(remaining, 0);
    Ok(Some((total, assignment)))
}
