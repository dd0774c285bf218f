use super::{SlotDecision, SlotState};
use crate::error::Result;
use crate::model::{local_rate, secrecy_rates_unclipped, secure_offload_rates};

/// The per-slot drift-plus-penalty objective with realized (clipped) secrecy rates.
///
/// Includes the decision-independent `−Σ Q_n A_n` term.
pub fn drift_penalty_objective(state: &SlotState<'_>, decision: &SlotDecision) -> Result<f64> {
    decision.check_feasible(state.params)?;
    let rates = secure_offload_rates(&decision.tx_power, state.channel, state.params, state.eve);
    Ok(objective_with_rates(state, decision, &rates))
}

/// Same objective, but crediting the unclipped secrecy difference (possibly negative).
///
/// This is the quantity the optimizer works on; it does not check feasibility.
pub fn smooth_objective(state: &SlotState<'_>, decision: &SlotDecision) -> f64 {
    let rates = secrecy_rates_unclipped(&decision.tx_power, state.channel, state.params, state.eve);
    objective_with_rates(state, decision, &rates)
}

pub(crate) fn objective_with_rates(state: &SlotState<'_>, decision: &SlotDecision, offload_rates: &[f64]) -> f64 {
    let p = state.params;
    let tau = p.slot_duration;
    let price = state.energy_price();
    (0..state.num_users())
        .map(|n| {
            let rate = offload_rates[n] + local_rate(decision.cpu_freq[n], p.cycles(n));
            let power = decision.user_power(n, p);
            state.weight(n) * rate * tau - price * power * tau - state.queues[n] * state.arrivals[n]
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ChannelState, SystemParams};

    #[test]
    fn idle_decision_pays_only_circuit_power() {
        let params = SystemParams::reference(2);
        let ch = ChannelState::new(vec![1e-11, 4e-11], vec![1e-12, 3e-12]).unwrap();
        let zeros = [0.0, 0.0];
        let eta = 3e6;
        let state = SlotState::new(&params, &ch, &zeros, &zeros, eta).unwrap();
        let obj = drift_penalty_objective(&state, &SlotDecision::zeros(2)).unwrap();
        let expect = -params.lyapunov_v * eta * 2.0 * params.circuit_power * params.slot_duration;
        assert!((obj - expect).abs() <= 1e-12 * expect.abs());

        let q = [4e6, 1e6];
        let a = [1.5e6, 2e6];
        let state = SlotState::new(&params, &ch, &q, &a, eta).unwrap();
        let obj2 = drift_penalty_objective(&state, &SlotDecision::zeros(2)).unwrap();
        let shift = q[0] * a[0] + q[1] * a[1];
        assert!((obj2 - (expect - shift)).abs() <= 1e-12 * (expect - shift).abs());
    }

    #[test]
    fn infeasible_decision_rejected() {
        let params = SystemParams::reference(1);
        let ch = ChannelState::new(vec![1e-11], vec![1e-12]).unwrap();
        let z = [0.0];
        let state = SlotState::new(&params, &ch, &z, &z, 1e6).unwrap();
        let bad = SlotDecision {
            cpu_freq: vec![params.f_max],
            tx_power: vec![1.5],
        };
        assert!(drift_penalty_objective(&state, &bad).is_err());
    }
}
