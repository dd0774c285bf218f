use super::objective::objective_with_rates;
use super::{drift_penalty_objective, SlotDecision, SlotState};
use crate::error::{Error, Result};
use crate::model::{local_power, local_rate, secure_offload_rates};

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSolution {
    pub decision: SlotDecision,
    pub objective: f64,
}

/// Exhaustive grid search over `f_n ∈ [0, f_max]` and `p_n ∈ [0, (P_max − p_r)/ζ]`.
///
/// Every user gets `grid_points` values on each axis and every combination
/// violating a user's power budget is discarded. The objective separates over
/// the frequencies once the powers are fixed, so for each power grid value
/// the best feasible frequency grid value is tabulated first; the result is
/// the exact arg-max over the full product grid. Ties go to the lowest index.
pub fn brute_force_slot_oracle(state: &SlotState<'_>, grid_points: usize) -> Result<OracleSolution> {
    let n = state.num_users();
    if n > 3 {
        return Err(Error::TooManyUsers(n));
    }
    if grid_points < 2 {
        return Err(Error::invalid("grid_points", "need at least two points per axis"));
    }
    let params = state.params;
    let tau = params.slot_duration;
    let price = state.energy_price();
    let last = (grid_points - 1) as f64;
    let freq_grid: Vec<f64> = (0..grid_points).map(|i| params.f_max * i as f64 / last).collect();
    let p_top = (params.p_max - params.circuit_power) / params.amp_coeff;
    let power_grid: Vec<f64> = (0..grid_points).map(|j| p_top * j as f64 / last).collect();

    // best_freq[user][j]: (frequency, its objective contribution) given power grid index j
    let best_freq: Vec<Vec<(f64, f64)>> = (0..n)
        .map(|user| {
            let kappa = params.kappa(user);
            power_grid
                .iter()
                .map(|&p| {
                    let budget = params.p_max - params.circuit_power - params.amp_coeff * p;
                    let mut best = (0.0, 0.0);
                    for &f in &freq_grid {
                        if local_power(f, kappa) > budget {
                            break;
                        }
                        let value = state.weight(user) * local_rate(f, params.cycles(user)) * tau
                            - price * local_power(f, kappa) * tau;
                        if value > best.1 {
                            best = (f, value);
                        }
                    }
                    best
                })
                .collect()
        })
        .collect();

    let mut index = vec![0usize; n];
    let mut decision = SlotDecision::zeros(n);
    let mut best: Option<(Vec<usize>, f64)> = None;
    loop {
        for user in 0..n {
            decision.tx_power[user] = power_grid[index[user]];
            decision.cpu_freq[user] = best_freq[user][index[user]].0;
        }
        let rates = secure_offload_rates(&decision.tx_power, state.channel, params, state.eve);
        let value = objective_with_rates(state, &decision, &rates);
        if best.as_ref().is_none_or(|(_, v)| value > *v) {
            best = Some((index.clone(), value));
        }
        // odometer over the power grid, last user fastest
        let mut k = n;
        loop {
            if k == 0 {
                break;
            }
            k -= 1;
            index[k] += 1;
            if index[k] < grid_points {
                break;
            }
            index[k] = 0;
        }
        if index.iter().all(|&i| i == 0) {
            break;
        }
    }

    let (index, _) = best.expect("grid is non-empty");
    for user in 0..n {
        decision.tx_power[user] = power_grid[index[user]];
        decision.cpu_freq[user] = best_freq[user][index[user]].0;
    }
    let objective = drift_penalty_objective(state, &decision)?;
    Ok(OracleSolution { decision, objective })
}
