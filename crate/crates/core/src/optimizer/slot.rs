use log::debug;

use super::boxsolver::BoxSolverOptions;
use super::frequency::optimal_cpu_frequency;
use super::sca::{sca_on, PowerProblem};
use super::{drift_penalty_objective, smooth_objective, SlotDecision, SlotState};
use crate::model::secrecy_rates_unclipped;

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    /// When false every CPU frequency is pinned to zero.
    pub local_computing: bool,
    pub max_outer_iterations: usize,
    /// Relative change of the decision-dependent objective that ends the alternation.
    pub tolerance: f64,
    pub inner: BoxSolverOptions,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            local_computing: true,
            max_outer_iterations: 50,
            tolerance: 1e-6,
            inner: BoxSolverOptions::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SlotSolution {
    pub decision: SlotDecision,
    /// Slot objective with realized (clipped) secrecy rates.
    pub objective: f64,
    /// Unclipped objective after each outer alternation; non-decreasing.
    pub history: Vec<f64>,
    pub outer_iterations: usize,
    /// Users whose secrecy difference came out negative and whose power was zeroed.
    pub zeroed_users: Vec<usize>,
    /// Some SCA run or inner solve stopped at its iteration cap.
    pub degraded: bool,
}

/// Solves one slot from a cold start (all transmit powers zero).
pub fn solve_slot(state: &SlotState<'_>) -> SlotSolution {
    solve_slot_with(state, &SolveOptions::default(), None)
}

/// Alternates the closed-form CPU frequencies with SCA power allocation.
///
/// `warm_start` seeds the transmit powers, typically with the previous
/// slot's decision. After each SCA pass, users whose power budget is binding
/// get a line search along the budget boundary, since block-wise updates
/// cannot trade CPU power against transmit power on their own.
pub fn solve_slot_with(state: &SlotState<'_>, options: &SolveOptions, warm_start: Option<&[f64]>) -> SlotSolution {
    let n = state.num_users();
    let params = state.params;
    let mut decision = SlotDecision::zeros(n);
    if let Some(p) = warm_start {
        for (user, &p) in p.iter().enumerate().take(n) {
            decision.tx_power[user] = p.clamp(0.0, params.tx_power_cap(user, 0.0));
        }
    }

    let offset: f64 = (0..n).map(|u| state.queues[u] * state.arrivals[u]).sum();
    let mut history = Vec::new();
    let mut degraded = false;
    let mut outer = 0;
    let mut previous = f64::NEG_INFINITY;
    while outer < options.max_outer_iterations {
        outer += 1;
        update_frequencies(state, options, &mut decision);

        let problem = PowerProblem::new(state, &decision.cpu_freq);
        let sca = sca_on(&problem, &decision.tx_power, &options.inner);
        degraded |= !sca.converged || sca.subproblem_capped;
        decision.tx_power = sca.tx_power;

        if options.local_computing {
            for user in 0..n {
                refine_along_budget(state, &mut decision, user);
            }
        }

        let value = smooth_objective(state, &decision);
        history.push(value);
        let scale = (value + offset).abs().max(f64::MIN_POSITIVE);
        if (value - previous).abs() <= options.tolerance * scale {
            break;
        }
        previous = value;
    }

    let zeroed_users = drop_insecure_users(state, options, &mut decision);
    let objective =
        drift_penalty_objective(state, &decision).expect("optimizer keeps every decision inside the power budget");
    debug!("slot solved in {outer} alternations, objective {objective:.6e}");
    SlotSolution {
        decision,
        objective,
        history,
        outer_iterations: outer,
        zeroed_users,
        degraded,
    }
}

fn update_frequencies(state: &SlotState<'_>, options: &SolveOptions, decision: &mut SlotDecision) {
    for user in 0..state.num_users() {
        decision.cpu_freq[user] = if options.local_computing {
            optimal_cpu_frequency(state, user, decision.tx_power[user]).hz
        } else {
            0.0
        };
    }
}

const GOLDEN: f64 = 0.618_033_988_749_894_8;

/// Golden-section search over how a binding budget is split between the CPU
/// and the transmitter of `user`. Keeps the current point unless a strictly
/// better one is found.
fn refine_along_budget(state: &SlotState<'_>, decision: &mut SlotDecision, user: usize) {
    let params = state.params;
    let budget = params.p_max - params.circuit_power;
    let used = decision.user_power(user, params) - params.circuit_power;
    if used < budget * (1.0 - 1e-9) {
        return;
    }
    let kappa = params.kappa(user);
    let cpu_share_max = budget.min(kappa * params.f_max.powi(3));
    let mut trial = decision.clone();
    let mut eval = |cpu_share: f64| {
        trial.cpu_freq[user] = (cpu_share / kappa).cbrt().min(params.f_max);
        trial.tx_power[user] = ((budget - cpu_share) / params.amp_coeff).max(0.0);
        smooth_objective(state, &trial)
    };

    let current = smooth_objective(state, decision);
    let (mut lo, mut hi) = (0.0, cpu_share_max);
    let mut x1 = hi - GOLDEN * (hi - lo);
    let mut x2 = lo + GOLDEN * (hi - lo);
    let mut f1 = eval(x1);
    let mut f2 = eval(x2);
    for _ in 0..80 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + GOLDEN * (hi - lo);
            f2 = eval(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - GOLDEN * (hi - lo);
            f1 = eval(x1);
        }
    }
    let mut best = (current, None);
    for x in [0.0, cpu_share_max, 0.5 * (lo + hi)] {
        let v = eval(x);
        if v > best.0 {
            best = (v, Some(x));
        }
    }
    if let Some(x) = best.1 {
        let gain = best.0 - current;
        if gain > 1e-12 * current.abs() {
            decision.cpu_freq[user] = (x / kappa).cbrt().min(params.f_max);
            decision.tx_power[user] = ((budget - x) / params.amp_coeff).max(0.0);
        }
    }
}

/// Zeroes the power of users whose secrecy difference is negative, then lets
/// their CPUs take the freed budget. Repeats until no transmitting user is
/// insecure.
fn drop_insecure_users(state: &SlotState<'_>, options: &SolveOptions, decision: &mut SlotDecision) -> Vec<usize> {
    let mut zeroed = Vec::new();
    loop {
        let rates = secrecy_rates_unclipped(&decision.tx_power, state.channel, state.params, state.eve);
        let insecure: Vec<usize> = (0..state.num_users())
            .filter(|&u| decision.tx_power[u] > 0.0 && rates[u] < 0.0)
            .collect();
        if insecure.is_empty() {
            return zeroed;
        }
        for user in insecure {
            decision.tx_power[user] = 0.0;
            if options.local_computing {
                decision.cpu_freq[user] = optimal_cpu_frequency(state, user, 0.0).hz;
            }
            zeroed.push(user);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ChannelState, SystemParams};
    use crate::optimizer::brute_force_slot_oracle;

    #[test]
    fn idle_when_energy_is_expensive() {
        let params = SystemParams::reference(2);
        let ch = ChannelState::new(vec![2e-12, 4e-11], vec![5e-13, 2e-12]).unwrap();
        let z = [0.0, 0.0];
        let state = SlotState::new(&params, &ch, &z, &z, 1e15).unwrap();
        let sol = solve_slot(&state);
        assert!(sol.decision.tx_power.iter().all(|p| *p == 0.0));
        assert!(sol.decision.cpu_freq.iter().all(|f| *f < 1e6));
    }

    #[test]
    fn deterministic() {
        let params = SystemParams::reference(2);
        let ch = ChannelState::new(vec![3e-11, 9e-10], vec![2e-12, 4e-11]).unwrap();
        let q = [4e8, 9e8];
        let a = [1e6, 1.5e6];
        let state = SlotState::new(&params, &ch, &q, &a, 2e6).unwrap();
        let a = solve_slot(&state);
        let b = solve_slot(&state);
        assert_eq!(a.decision, b.decision);
        assert_eq!(a.objective.to_bits(), b.objective.to_bits());
    }

    #[test]
    fn history_is_non_decreasing_and_feasible() {
        let params = SystemParams::reference(2);
        let ch = ChannelState::new(vec![3e-11, 9e-10], vec![2e-12, 4e-11]).unwrap();
        let q = [4e9, 9e9];
        let a = [1e6, 1.5e6];
        let state = SlotState::new(&params, &ch, &q, &a, 2e5).unwrap();
        let sol = solve_slot_with(&state, &SolveOptions::default(), Some(&[1.9, 1.9]));
        for w in sol.history.windows(2) {
            assert!(w[1] >= w[0] - 1e-9 * w[0].abs(), "{:?}", sol.history);
        }
        sol.decision.check_feasible(&params).unwrap();
    }

    #[test]
    fn warm_start_at_full_power_does_not_stall() {
        let params = SystemParams::reference(2);
        let ch = ChannelState::new(vec![2.4e-12, 3.9e-11], vec![4.8e-13, 2.4e-12]).unwrap();
        let q = [5e6, 5e6];
        let a = [1.5e6, 1.5e6];
        let state = SlotState::new(&params, &ch, &q, &a, 6e6).unwrap();
        let cold = solve_slot(&state);
        let warm = solve_slot_with(&state, &SolveOptions::default(), Some(&[1.9, 1.9]));
        assert!(warm.objective >= cold.objective - 1e-9 * cold.objective.abs());
        let oracle = brute_force_slot_oracle(&state, 100).unwrap();
        assert!(warm.objective >= oracle.objective - 1e-3 * oracle.objective.abs());
    }

    #[test]
    fn full_offloading_keeps_cpus_idle() {
        let params = SystemParams::reference(2);
        let ch = ChannelState::new(vec![3e-11, 9e-10], vec![2e-12, 4e-11]).unwrap();
        let q = [4e9, 9e9];
        let a = [1e6, 1.5e6];
        let state = SlotState::new(&params, &ch, &q, &a, 2e5).unwrap();
        let opts = SolveOptions {
            local_computing: false,
            ..Default::default()
        };
        let sol = solve_slot_with(&state, &opts, None);
        assert_eq!(sol.decision.cpu_freq, vec![0.0, 0.0]);
        assert!(sol.decision.tx_power.iter().any(|p| *p > 0.0));
    }
}
