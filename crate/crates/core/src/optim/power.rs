//! Transmit power allocation.
//!
//! Coverage under per-user caps is trivially full power (the rate is monotone
//! in own power). Coverage under a sum budget is the water-filling solution.
//! The secrecy objective is maximized by block-coordinate grid refinement,
//! one user at a time over its feasible interval.

use super::{CdParams, OptimError, PowerAlloc};
use crate::scenario::PowerBudgetMode;

/// What `cd_power` maximizes.
#[derive(Debug, Clone)]
pub enum PowerObjective<'a> {
    /// Sum spectral efficiency of the legitimate links.
    Coverage,
    /// Grid-averaged positive-part secrecy. `eve_gains[k]` holds
    /// `|eve channel of user k|^2` at every grid point.
    Secrecy { eve_gains: &'a [Vec<f64>] },
}

/// Classic water-filling: maximizes `sum_k log2(1 + g_k p_k / sigma^2)`
/// subject to `sum_k p_k <= budget`, `p_k >= 0`. Returns the optimal powers.
///
/// Uses active-set iteration: start with all users active, compute the water
/// level, drop users whose allocation would go negative, repeat.
pub fn water_filling(gains: &[f64], noise_power: f64, budget: f64) -> Vec<f64> {
    let n = gains.len();
    let mut active: Vec<bool> = gains.iter().map(|&g| g > 0.0).collect();
    loop {
        let count = active.iter().filter(|&&a| a).count();
        if count == 0 {
            return vec![0.0; n];
        }
        let floor_sum: f64 = (0..n)
            .filter(|&i| active[i])
            .map(|i| noise_power / gains[i])
            .sum();
        let level = (budget + floor_sum) / count as f64;
        let mut powers = vec![0.0; n];
        let mut dropped = false;
        for i in 0..n {
            if !active[i] {
                continue;
            }
            let p = level - noise_power / gains[i];
            if p < 0.0 {
                active[i] = false;
                dropped = true;
            } else {
                powers[i] = p;
            }
        }
        if !dropped {
            return powers;
        }
    }
}

/// Per-user secrecy objective for a candidate power `p`: grid mean of the
/// positive-part rate difference against every eavesdropper point.
fn user_secrecy(p: f64, gain: f64, eve_gains: &[f64], noise_power: f64) -> f64 {
    let rate = (1.0 + p * gain / noise_power).log2();
    let mut total = 0.0;
    for &q in eve_gains {
        let eve = (1.0 + p * q / noise_power).log2();
        total += (rate - eve).max(0.0);
    }
    total / eve_gains.len() as f64
}

/// Deterministic 1-D maximizer over [0, hi] by iterated grid refinement:
/// scan 33 points, zoom on the best, repeat. Ties keep the smaller argument.
fn refine_interval(mut lo: f64, mut hi: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
    let mut best_x = lo;
    let mut best_v = f(lo);
    for _round in 0..4 {
        let steps = 32;
        let width = hi - lo;
        if width <= 0.0 {
            break;
        }
        let mut round_best_x = best_x;
        let mut round_best_v = best_v;
        for i in 0..=steps {
            let x = lo + width * i as f64 / steps as f64;
            let v = f(x);
            if v > round_best_v {
                round_best_v = v;
                round_best_x = x;
            }
        }
        best_x = round_best_x;
        best_v = round_best_v;
        let half = width / steps as f64 * 2.0;
        lo = (best_x - half).max(lo);
        hi = (best_x + half).min(hi);
    }
    best_x
}

/// Power allocation step of the coordinate-descent pipeline.
///
/// `gains[k]` is the effective legitimate channel gain of user k (post-ZF:
/// `SINR_k = p_k gains_k / noise`). The allocation starts from `alloc` and is
/// optimized for the given objective under `alloc.mode`/`alloc.budget`.
pub fn cd_power(
    gains: &[f64],
    alloc: &PowerAlloc,
    noise_power: f64,
    objective: &PowerObjective,
    params: &CdParams,
) -> Result<PowerAlloc, OptimError> {
    if gains.is_empty() {
        return Err(OptimError::EmptyGains);
    }
    if gains.len() != alloc.powers.len() {
        return Err(OptimError::InvalidParams(format!(
            "{} gains for {} powers",
            gains.len(),
            alloc.powers.len()
        )));
    }
    let n = gains.len();
    let mut out = alloc.clone();

    match objective {
        PowerObjective::Coverage => match alloc.mode {
            // The rate is monotone in own power and users do not interfere
            // after ZF, so every user transmits at the cap.
            PowerBudgetMode::PerUserCap => {
                out.powers = vec![alloc.budget; n];
            }
            PowerBudgetMode::SumBudget => {
                out.powers = water_filling(gains, noise_power, alloc.budget);
            }
        },
        PowerObjective::Secrecy { eve_gains } => {
            if eve_gains.len() != n {
                return Err(OptimError::InvalidParams(format!(
                    "{} eavesdropper gain rows for {n} users",
                    eve_gains.len()
                )));
            }
            let objective_value = |powers: &[f64]| -> f64 {
                powers
                    .iter()
                    .enumerate()
                    .map(|(k, &p)| user_secrecy(p, gains[k], &eve_gains[k], noise_power))
                    .sum()
            };
            let mut value = objective_value(&out.powers);
            for _sweep in 0..params.max_sweeps {
                let sweep_start = value;
                for k in 0..n {
                    let cap = match alloc.mode {
                        PowerBudgetMode::PerUserCap => alloc.budget,
                        PowerBudgetMode::SumBudget => {
                            let others: f64 = out
                                .powers
                                .iter()
                                .enumerate()
                                .filter(|&(j, _)| j != k)
                                .map(|(_, &p)| p)
                                .sum();
                            (alloc.budget - others).max(0.0)
                        }
                    };
                    let best = refine_interval(0.0, cap, |p| {
                        user_secrecy(p, gains[k], &eve_gains[k], noise_power)
                    });
                    let candidate = user_secrecy(best, gains[k], &eve_gains[k], noise_power);
                    let incumbent = user_secrecy(out.powers[k], gains[k], &eve_gains[k], noise_power);
                    if candidate > incumbent {
                        out.powers[k] = best;
                    }
                }
                value = objective_value(&out.powers);
                if (value - sweep_start) / sweep_start.abs().max(1e-300) < params.tol {
                    break;
                }
            }
        }
    }
    Ok(out)
}
