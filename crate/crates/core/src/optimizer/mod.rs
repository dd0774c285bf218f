//! Per-slot drift-plus-penalty maximization.
//!
//! Each slot the controller observes the backlogs `Q_n`, the arrivals `A_n`,
//! the channel and the running efficiency ratio `η*`, and picks CPU
//! frequencies `f_n` and transmit powers `p_n` maximizing
//!
//! ```text
//! Σ_n Q_n (R_n τ − A_n) + V Σ_n (R_n τ − η* P_n τ)
//! ```
//!
//! subject to `ζ p_n + p_r + κ f_n³ ≤ P_max`, `0 ≤ f_n ≤ f_max`, `p_n ≥ 0`.
//! Frequencies have a closed form given the powers ([`optimal_cpu_frequency`]);
//! powers are found by successive convex approximation
//! ([`sca_power_allocation`]) whose concave inner problems go to a projected
//! gradient solver ([`maximize_on_box`]). [`solve_slot`] alternates the two.

mod boxsolver;
mod closed_form;
mod frequency;
mod objective;
mod oracle;
mod ratio;
mod sca;
mod slot;

pub use boxsolver::{maximize_on_box, BoxSolution, BoxSolverOptions, ConcaveObjective, SubproblemError};
pub use closed_form::{compare_closed_form, two_user_closed_form, ClosedFormCheck, ClosedFormSolution};
pub use frequency::{optimal_cpu_frequency, FrequencyChoice};
pub use objective::{drift_penalty_objective, smooth_objective};
pub use oracle::{brute_force_slot_oracle, OracleSolution};
pub use ratio::{ee_ratio_update, EeAccumulator};
pub use sca::{neg_log_lower_bound, sca_power_allocation, PowerProblem, ScaAuxiliaries, ScaOutcome, ScaRecord};
pub use slot::{solve_slot, solve_slot_with, SlotSolution, SolveOptions};

use crate::error::{Error, Result};
use crate::model::{local_power, offload_power, ChannelState, EveModel, SystemParams};

/// Everything the controller observes at the start of a slot.
#[derive(Debug, Clone, Copy)]
pub struct SlotState<'a> {
    pub params: &'a SystemParams,
    pub channel: &'a ChannelState,
    /// Backlog per user, bits.
    pub queues: &'a [f64],
    /// Workload arriving this slot per user, bits.
    pub arrivals: &'a [f64],
    /// Running efficiency ratio η*, bits per Joule.
    pub ee_ratio: f64,
    pub eve: EveModel,
}

impl<'a> SlotState<'a> {
    pub fn new(
        params: &'a SystemParams,
        channel: &'a ChannelState,
        queues: &'a [f64],
        arrivals: &'a [f64],
        ee_ratio: f64,
    ) -> Result<Self> {
        let n = params.num_users();
        for len in [channel.num_users(), queues.len(), arrivals.len()] {
            if len != n {
                return Err(Error::DimensionMismatch { expected: n, got: len });
            }
        }
        if let Some(q) = queues.iter().chain(arrivals).find(|q| !(**q >= 0.0)) {
            return Err(Error::invalid("queue", format!("must be non-negative, got {q}")));
        }
        if !(ee_ratio >= 0.0 && ee_ratio.is_finite()) {
            return Err(Error::invalid(
                "ee_ratio",
                format!("must be finite and non-negative, got {ee_ratio}"),
            ));
        }
        Ok(SlotState {
            params,
            channel,
            queues,
            arrivals,
            ee_ratio,
            eve: EveModel::Sic,
        })
    }

    pub fn with_eve(mut self, eve: EveModel) -> Self {
        self.eve = eve;
        self
    }

    pub fn num_users(&self) -> usize {
        self.queues.len()
    }

    /// `Q_n + V`, the weight on user `n`'s computed bits.
    pub(crate) fn weight(&self, user: usize) -> f64 {
        self.queues[user] + self.params.lyapunov_v
    }

    /// `V η*`, the price of one Joule.
    pub(crate) fn energy_price(&self) -> f64 {
        self.params.lyapunov_v * self.ee_ratio
    }
}

/// Per-user CPU frequencies (Hz) and transmit powers (W) for one slot.
#[derive(Debug, Clone, PartialEq)]
pub struct SlotDecision {
    pub cpu_freq: Vec<f64>,
    pub tx_power: Vec<f64>,
}

impl SlotDecision {
    pub const FEASIBILITY_TOL: f64 = 1e-9;

    pub fn zeros(num_users: usize) -> Self {
        SlotDecision {
            cpu_freq: vec![0.0; num_users],
            tx_power: vec![0.0; num_users],
        }
    }

    pub fn num_users(&self) -> usize {
        self.cpu_freq.len()
    }

    /// Total power drawn by user `user`: offloading chain plus CPU.
    pub fn user_power(&self, user: usize, params: &SystemParams) -> f64 {
        offload_power(self.tx_power[user], params) + local_power(self.cpu_freq[user], params.kappa(user))
    }

    pub fn check_feasible(&self, params: &SystemParams) -> Result<()> {
        let n = params.num_users();
        if self.cpu_freq.len() != n || self.tx_power.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: self.cpu_freq.len().min(self.tx_power.len()),
            });
        }
        for user in 0..n {
            let f = self.cpu_freq[user];
            let p = self.tx_power[user];
            if !(f >= 0.0 && f <= params.f_max * (1.0 + Self::FEASIBILITY_TOL)) {
                return Err(Error::InfeasibleDecision(format!(
                    "user {user}: cpu frequency {f} outside [0, {}]",
                    params.f_max
                )));
            }
            if !(p >= 0.0) {
                return Err(Error::InfeasibleDecision(format!(
                    "user {user}: negative transmit power {p}"
                )));
            }
            let total = self.user_power(user, params);
            if total > params.p_max + Self::FEASIBILITY_TOL {
                return Err(Error::InfeasibleDecision(format!(
                    "user {user}: power {total} W exceeds cap {} W",
                    params.p_max
                )));
            }
        }
        Ok(())
    }
}
