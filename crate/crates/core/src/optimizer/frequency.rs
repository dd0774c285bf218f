use super::SlotState;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyChoice {
    pub hz: f64,
    /// The transmit power already consumes the whole budget, so the CPU must idle.
    pub budget_exhausted: bool,
}

/// Maximizer of `(Q_n + V) f / C_n − V η* κ_n f³` over `[0, f̄]`.
///
/// The unconstrained stationary point is `√((V + Q_n) / (3 V η* κ_n C_n))`;
/// `f̄ = min{f_max, ∛((P_max − ζ p_n − p_r) / κ_n)}` given the user's transmit
/// power. With a zero energy price the weighted rate is increasing in `f` and
/// the cap is returned.
pub fn optimal_cpu_frequency(state: &SlotState<'_>, user: usize, tx_power: f64) -> FrequencyChoice {
    let params = state.params;
    let cap = params.cpu_freq_cap(user, tx_power);
    let budget_exhausted = cap <= 0.0;
    let weight = state.weight(user);
    let price = state.energy_price();
    let hz = if budget_exhausted || weight <= 0.0 {
        0.0
    } else if price <= 0.0 {
        cap
    } else {
        let stationary = (weight / (3.0 * price * params.kappa(user) * params.cycles(user))).sqrt();
        stationary.min(cap)
    };
    FrequencyChoice { hz, budget_exhausted }
}
