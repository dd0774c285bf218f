//! Successive convex approximation of the transmit-power subproblem.
//!
//! For fixed CPU frequencies the power part of the slot objective is
//!
//! ```text
//! Σ_n W_n [ ln X_b,n − ln I_b,n − ln X_e,n + ln I_e,n ] − V η* τ ζ Σ_n p_n
//! ```
//!
//! with `W_n = (Q_n + V) τ B / ln 2`, `X` the received power including user
//! `n` and `I` the interference-plus-noise it sees. The two `−ln` terms make
//! it non-concave; each is replaced by `φ(y) = −y x + ln y + 1`, which is
//! below `−ln x` for every `y > 0` and touches it at `y = 1/x`. Alternating
//! the tight `y` update with a concave maximization over `p` yields a
//! non-decreasing sequence of objective values.
//!
//! Internally all received powers are normalized by the noise power, so the
//! logarithms are evaluated with `ln_1p` on the excess over the noise floor.

use std::f64::consts::LN_2;

use log::warn;

use super::boxsolver::{maximize_on_box, BoxSolverOptions, ConcaveObjective};
use super::SlotState;
use crate::error::{Error, Result};
use crate::model::{local_power, local_rate, EveModel};

/// `φ(y) = −y x + ln y + 1`, a lower bound on `−ln x` that is tight at `y = 1/x`.
pub fn neg_log_lower_bound(x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::NonPositive { what: "x", value: x });
    }
    if !(y > 0.0) {
        return Err(Error::NonPositive { what: "y", value: y });
    }
    Ok(phi(y, x))
}

#[inline]
fn phi(y: f64, x: f64) -> f64 {
    -y * x + y.ln() + 1.0
}

/// Auxiliary variables of the surrogate, in 1/W, indexed by user.
///
/// `y_mec[n]` bounds the interference-plus-noise user `n` sees at the MEC;
/// `y_eve[n]` bounds the eavesdropper's received power including user `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaAuxiliaries {
    pub y_mec: Vec<f64>,
    pub y_eve: Vec<f64>,
}

/// `Σ_i c_i p_i`, received power over the noise floor in units of the noise power.
#[derive(Debug, Clone, Default)]
struct Excess {
    terms: Vec<(usize, f64)>,
}

impl Excess {
    #[inline]
    fn eval(&self, p: &[f64]) -> f64 {
        self.terms.iter().map(|&(i, c)| c * p[i]).sum()
    }
}

#[derive(Debug, Clone)]
struct UserTerms {
    user: usize,
    weight: f64,
    signal_mec: Excess,
    interference_mec: Excess,
    signal_eve: Excess,
    interference_eve: Excess,
}

/// The slot objective as a function of transmit powers, CPU frequencies held fixed.
#[derive(Debug, Clone)]
pub struct PowerProblem {
    terms: Vec<UserTerms>,
    price: f64,
    noise: f64,
    upper: Vec<f64>,
    /// Decision-independent remainder of the slot objective given the frequencies.
    constant: f64,
}

impl PowerProblem {
    pub fn new(state: &SlotState<'_>, cpu_freq: &[f64]) -> Self {
        let params = state.params;
        let ch = state.channel;
        let noise = params.noise_power;
        let tau = params.slot_duration;
        let order = ch.decode_order();
        let hb = ch.gain_to_mec();
        let he = ch.gain_to_eve();

        let mut terms = Vec::with_capacity(order.len());
        for (pos, &user) in order.iter().enumerate() {
            let ahead = |gains: &[f64], with_self: bool| Excess {
                terms: order[..pos + usize::from(with_self)]
                    .iter()
                    .map(|&i| (i, gains[i] / noise))
                    .collect(),
            };
            let (signal_eve, interference_eve) = match state.eve {
                EveModel::Sic => (ahead(he, true), ahead(he, false)),
                EveModel::FullyDecode => (
                    Excess {
                        terms: vec![(user, he[user] / noise)],
                    },
                    Excess::default(),
                ),
            };
            terms.push(UserTerms {
                user,
                weight: state.weight(user) * tau * params.bandwidth / LN_2,
                signal_mec: ahead(hb, true),
                interference_mec: ahead(hb, false),
                signal_eve,
                interference_eve,
            });
        }

        let price = state.energy_price();
        let constant = (0..state.num_users())
            .map(|n| {
                let f = cpu_freq[n];
                state.weight(n) * local_rate(f, params.cycles(n)) * tau
                    - price * (local_power(f, params.kappa(n)) + params.circuit_power) * tau
                    - state.queues[n] * state.arrivals[n]
            })
            .sum();
        let upper = (0..state.num_users())
            .map(|n| params.tx_power_cap(n, cpu_freq[n]))
            .collect();

        PowerProblem {
            terms,
            price: price * tau * params.amp_coeff,
            noise,
            upper,
            constant,
        }
    }

    pub fn num_users(&self) -> usize {
        self.upper.len()
    }

    /// Per-user transmit power caps left by the CPU's share of the budget.
    pub fn upper_bounds(&self) -> &[f64] {
        &self.upper
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    fn power_cost(&self, p: &[f64]) -> f64 {
        self.price * p.iter().sum::<f64>()
    }

    /// Power-dependent part of the objective with the exact (unclipped) secrecy rates.
    pub fn smooth_part(&self, p: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                t.weight
                    * (t.signal_mec.eval(p).ln_1p() - t.interference_mec.eval(p).ln_1p() - t.signal_eve.eval(p).ln_1p()
                        + t.interference_eve.eval(p).ln_1p())
            })
            .sum::<f64>()
            - self.power_cost(p)
    }

    /// The full slot objective with unclipped secrecy rates.
    pub fn smooth_value(&self, p: &[f64]) -> f64 {
        self.constant + self.smooth_part(p)
    }

    /// Secrecy difference in nats per user (indexed by user).
    pub fn secrecy_nats(&self, p: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.num_users()];
        for t in &self.terms {
            out[t.user] =
                t.signal_mec.eval(p).ln_1p() - t.interference_mec.eval(p).ln_1p() - t.signal_eve.eval(p).ln_1p()
                    + t.interference_eve.eval(p).ln_1p();
        }
        out
    }

    /// The tight auxiliaries at `p`: `y = 1/x` for both bounded terms.
    pub fn aux_at(&self, p: &[f64]) -> ScaAuxiliaries {
        let n = self.num_users();
        let mut aux = ScaAuxiliaries {
            y_mec: vec![0.0; n],
            y_eve: vec![0.0; n],
        };
        for t in &self.terms {
            aux.y_mec[t.user] = 1.0 / (self.noise * (1.0 + t.interference_mec.eval(p)));
            aux.y_eve[t.user] = 1.0 / (self.noise * (1.0 + t.signal_eve.eval(p)));
        }
        aux
    }

    fn normalized(&self, aux: &ScaAuxiliaries) -> (Vec<f64>, Vec<f64>) {
        (
            aux.y_mec.iter().map(|y| y * self.noise).collect(),
            aux.y_eve.iter().map(|y| y * self.noise).collect(),
        )
    }

    fn surrogate_part_normalized(&self, p: &[f64], zb: &[f64], ze: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let n = t.user;
                t.weight
                    * (t.signal_mec.eval(p).ln_1p()
                        + phi(zb[n], 1.0 + t.interference_mec.eval(p))
                        + phi(ze[n], 1.0 + t.signal_eve.eval(p))
                        + t.interference_eve.eval(p).ln_1p())
            })
            .sum::<f64>()
            - self.power_cost(p)
    }

    /// Power-dependent part of the surrogate at `p` for auxiliaries `aux`.
    pub fn surrogate_part(&self, p: &[f64], aux: &ScaAuxiliaries) -> f64 {
        let (zb, ze) = self.normalized(aux);
        self.surrogate_part_normalized(p, &zb, &ze)
    }

    /// The full surrogate objective at `p` for auxiliaries `aux`.
    pub fn surrogate_value(&self, p: &[f64], aux: &ScaAuxiliaries) -> f64 {
        self.constant + self.surrogate_part(p, aux)
    }

    /// Maximizes the (concave) surrogate for fixed `aux` from `start`.
    ///
    /// Returns the maximizer, the power-dependent part of the surrogate there,
    /// and whether the inner solver converged.
    pub fn maximize_surrogate(
        &self,
        aux: &ScaAuxiliaries,
        start: &[f64],
        options: &BoxSolverOptions,
    ) -> (Vec<f64>, f64, bool) {
        let (zb, ze) = self.normalized(aux);
        let surrogate = Surrogate { problem: self, zb, ze };
        let lower = vec![0.0; self.num_users()];
        let (sol, ok) = match maximize_on_box(&surrogate, &lower, &self.upper, start, options) {
            Ok(sol) => (sol, true),
            Err(e) => (e.into_best(), false),
        };
        (sol.point, sol.value, ok)
    }
}

struct Surrogate<'a> {
    problem: &'a PowerProblem,
    zb: Vec<f64>,
    ze: Vec<f64>,
}

impl ConcaveObjective for Surrogate<'_> {
    fn value(&self, x: &[f64]) -> f64 {
        self.problem.surrogate_part_normalized(x, &self.zb, &self.ze)
    }

    fn gradient(&self, x: &[f64], grad: &mut [f64]) {
        grad.fill(-self.problem.price);
        for t in &self.problem.terms {
            let n = t.user;
            let sb = 1.0 / (1.0 + t.signal_mec.eval(x));
            let ie = 1.0 / (1.0 + t.interference_eve.eval(x));
            for &(i, c) in &t.signal_mec.terms {
                grad[i] += t.weight * c * sb;
            }
            for &(i, c) in &t.interference_mec.terms {
                grad[i] -= t.weight * c * self.zb[n];
            }
            for &(i, c) in &t.signal_eve.terms {
                grad[i] -= t.weight * c * self.ze[n];
            }
            for &(i, c) in &t.interference_eve.terms {
                grad[i] += t.weight * c * ie;
            }
        }
    }
}

/// Objective values observed in one SCA iteration.
///
/// All values are power-dependent parts; add [`PowerProblem::constant`] for
/// the full slot objective. Keeping the large constant out preserves the
/// precision of differences between iterations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaRecord {
    /// Surrogate right after the auxiliary update.
    pub surrogate_after_aux: f64,
    /// Exact (unclipped) objective at the same point; equal to the above up to rounding.
    pub smooth_after_aux: f64,
    /// Surrogate after the power update with auxiliaries held fixed.
    pub surrogate_after_power: f64,
}

#[derive(Debug, Clone)]
pub struct ScaOutcome {
    pub tx_power: Vec<f64>,
    /// Tight auxiliaries at the returned powers.
    pub aux: ScaAuxiliaries,
    /// Exact (unclipped) objective at the returned powers.
    pub smooth_objective: f64,
    pub history: Vec<ScaRecord>,
    pub converged: bool,
    /// Some inner concave solve hit its iteration cap.
    pub subproblem_capped: bool,
}

impl ScaOutcome {
    /// The sequence of surrogate values (power-dependent parts) in the order they were produced.
    pub fn surrogate_sequence(&self) -> impl Iterator<Item = f64> + '_ {
        self.history
            .iter()
            .flat_map(|r| [r.surrogate_after_aux, r.surrogate_after_power])
    }
}

pub(crate) const SCA_MAX_ITERATIONS: usize = 200;
const SCA_TOL: f64 = 1e-10;

/// Maximizes the slot objective over transmit powers for fixed frequencies.
pub fn sca_power_allocation(state: &SlotState<'_>, cpu_freq: &[f64], init_power: &[f64]) -> ScaOutcome {
    let problem = PowerProblem::new(state, cpu_freq);
    sca_on(&problem, init_power, &BoxSolverOptions::default())
}

pub(crate) fn sca_on(problem: &PowerProblem, init_power: &[f64], options: &BoxSolverOptions) -> ScaOutcome {
    let mut p: Vec<f64> = init_power
        .iter()
        .zip(problem.upper_bounds())
        .map(|(p, hi)| p.clamp(0.0, *hi))
        .collect();
    let mut history = Vec::new();
    let mut converged = false;
    let mut capped = false;
    for _ in 0..SCA_MAX_ITERATIONS {
        let aux = problem.aux_at(&p);
        let surrogate_after_aux = problem.surrogate_part(&p, &aux);
        let smooth_after_aux = problem.smooth_part(&p);
        let (next, surrogate_after_power, ok) = problem.maximize_surrogate(&aux, &p, options);
        capped |= !ok;
        history.push(ScaRecord {
            surrogate_after_aux,
            smooth_after_aux,
            surrogate_after_power,
        });
        let gain = surrogate_after_power - surrogate_after_aux;
        p = next;
        let scale = problem.smooth_part(&p).abs().max(1.0);
        if gain <= SCA_TOL * scale {
            converged = true;
            break;
        }
    }
    if !converged {
        warn!("SCA power allocation stopped after {SCA_MAX_ITERATIONS} iterations");
    }
    ScaOutcome {
        aux: problem.aux_at(&p),
        smooth_objective: problem.smooth_value(&p),
        tx_power: p,
        history,
        converged,
        subproblem_capped: capped,
    }
}
