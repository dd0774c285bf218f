//! Stationary-point formulas for two users with fixed auxiliaries.
//!
//! With users 1 (weaker, decoded last) and 2 (stronger) and the surrogate's
//! auxiliaries held fixed, setting the gradient to zero gives
//!
//! ```text
//! p₂ = 1 / (Vηζ / (k (V+Q₂)) + y_e2 h_e2) − p₁ h_b1 / h_b2 − σ² / h_b2
//! p₁ = (−b₁ ± √(b₁² − 4 b₂)) / 2
//! a₁ = Vηζ/k + (V+Q₂)(y_b2 h_b1 + y_e2 h_e1) + (V+Q₁) y_e1 h_e1
//!      − (V+Q₂) h_b1 (Vηζ / (k (V+Q₂)) + y_e2 h_e2) / h_b2
//! b₁ = σ²/h_b1 + σ²/h_e1 − (V+Q₁)/a₁ − (V+Q₂)/a₁
//! b₂ = σ⁴/(h_e1 h_b1) − (V+Q₂)/a₁ · σ²/h_b1 − (V+Q₁)/a₁ · σ²/h_e1
//! ```
//!
//! with `k = B / ln 2`. Both formulas assume an interior solution; roots are
//! clamped into the power box, so the result can miss the box-constrained
//! optimum. [`compare_closed_form`] measures that gap against the numeric solver.

use std::f64::consts::LN_2;

use log::warn;

use super::boxsolver::BoxSolverOptions;
use super::sca::{PowerProblem, ScaAuxiliaries};
use super::SlotState;
use crate::error::{Error, Result};
use crate::model::EveModel;

#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormSolution {
    /// Transmit powers indexed by user.
    pub tx_power: Vec<f64>,
    /// Surrogate objective at `tx_power` for the given auxiliaries.
    pub surrogate: f64,
    /// Number of roots of the quadratic that landed inside the box before clamping.
    pub roots_in_box: usize,
    /// The formulas did not apply (negative discriminant or `a₁ = 0`) and the
    /// numeric solver was used instead.
    pub fallback: bool,
}

/// Closed-form maximizer of the two-user surrogate with auxiliaries fixed.
pub fn two_user_closed_form(
    state: &SlotState<'_>,
    cpu_freq: &[f64],
    aux: &ScaAuxiliaries,
) -> Result<ClosedFormSolution> {
    if state.num_users() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: state.num_users(),
        });
    }
    let problem = PowerProblem::new(state, cpu_freq);
    let upper = problem.upper_bounds().to_vec();
    if upper.iter().all(|u| *u <= 0.0) {
        return Ok(ClosedFormSolution {
            surrogate: problem.surrogate_value(&[0.0, 0.0], aux),
            tx_power: vec![0.0, 0.0],
            roots_in_box: 0,
            fallback: false,
        });
    }

    let params = state.params;
    let ch = state.channel;
    let (weak, strong) = (ch.decode_order()[0], ch.decode_order()[1]);
    let noise = params.noise_power;
    let hb1 = ch.gain_to_mec()[weak];
    let hb2 = ch.gain_to_mec()[strong];
    let he1 = ch.gain_to_eve()[weak];
    let he2 = ch.gain_to_eve()[strong];
    let w1 = state.weight(weak);
    let w2 = state.weight(strong);
    let k = params.bandwidth / LN_2;
    let c = state.energy_price() * params.amp_coeff;
    let yb2 = aux.y_mec[strong];
    let ye1 = aux.y_eve[weak];
    let ye2 = aux.y_eve[strong];

    let fallback = |why: &str| -> Result<ClosedFormSolution> {
        warn!("two-user closed form not applicable ({why}); using the numeric solver");
        let (p, part, _) = problem.maximize_surrogate(aux, &[0.0, 0.0], &BoxSolverOptions::default());
        Ok(ClosedFormSolution {
            tx_power: p,
            surrogate: problem.constant() + part,
            roots_in_box: 0,
            fallback: true,
        })
    };
    if state.eve != EveModel::Sic {
        return fallback("eavesdropper model is not successive cancellation");
    }

    let g = c / (k * w2) + ye2 * he2;
    let a1 = c / k + w2 * (yb2 * hb1 + ye2 * he1) + w1 * ye1 * he1 - w2 * hb1 * g / hb2;
    if a1 == 0.0 || !a1.is_finite() {
        return fallback("a1 vanishes");
    }
    let alpha = noise / hb1;
    let beta = noise / he1;
    let b1 = alpha + beta - w1 / a1 - w2 / a1;
    let b2 = alpha * beta - w2 / a1 * alpha - w1 / a1 * beta;
    let disc = b1 * b1 - 4.0 * b2;
    if disc < 0.0 {
        return fallback("negative discriminant");
    }
    let root = disc.sqrt();
    let roots = [(-b1 + root) / 2.0, (-b1 - root) / 2.0];

    let p2_given = |p1: f64| 1.0 / g - p1 * hb1 / hb2 - noise / hb2;
    let mut best: Option<(Vec<f64>, f64, bool)> = None;
    let mut roots_in_box = 0;
    for r in roots {
        let in_box = (0.0..=upper[weak]).contains(&r);
        roots_in_box += usize::from(in_box);
        let p1 = r.clamp(0.0, upper[weak]);
        let p2 = p2_given(p1).clamp(0.0, upper[strong]);
        let mut p = vec![0.0; 2];
        p[weak] = p1;
        p[strong] = p2;
        let value = problem.surrogate_value(&p, aux);
        // roots inside the box take precedence over clamped ones
        let better = match &best {
            None => true,
            Some((_, v, b_in)) => (in_box && !b_in) || (in_box == *b_in && value > *v),
        };
        if better {
            best = Some((p, value, in_box));
        }
    }
    let (tx_power, surrogate, _) = best.expect("two candidate roots");
    Ok(ClosedFormSolution {
        tx_power,
        surrogate,
        roots_in_box,
        fallback: false,
    })
}

/// Closed form against the numeric solver on the same surrogate.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormCheck {
    pub closed_form: ClosedFormSolution,
    pub numeric_power: Vec<f64>,
    pub numeric_surrogate: f64,
    /// `(numeric − closed)` over the larger magnitude, on the power-dependent part of the surrogate.
    pub relative_gap: f64,
    pub agrees: bool,
}

/// Solves the two-user surrogate both ways and flags disagreement beyond `tolerance`.
///
/// The gap is measured on the power-dependent part of the surrogate so the
/// large decision-independent terms cannot mask a discrepancy.
pub fn compare_closed_form(
    state: &SlotState<'_>,
    cpu_freq: &[f64],
    aux: &ScaAuxiliaries,
    tolerance: f64,
) -> Result<ClosedFormCheck> {
    let closed = two_user_closed_form(state, cpu_freq, aux)?;
    let problem = PowerProblem::new(state, cpu_freq);
    let (numeric_power, numeric_part, _) = problem.maximize_surrogate(aux, &[0.0, 0.0], &BoxSolverOptions::default());
    let numeric_surrogate = problem.constant() + numeric_part;
    let closed_part = problem.surrogate_part(&closed.tx_power, aux);
    let scale = numeric_part.abs().max(closed_part.abs());
    let relative_gap = if scale > 0.0 {
        (numeric_part - closed_part) / scale
    } else {
        0.0
    };
    let agrees = relative_gap.abs() <= tolerance;
    if !agrees {
        warn!(
            "closed form {:?} vs numeric {:?}: relative gap {relative_gap:.3e}",
            closed.tx_power, numeric_power
        );
    }
    Ok(ClosedFormCheck {
        closed_form: closed,
        numeric_power,
        numeric_surrogate,
        relative_gap,
        agrees,
    })
}
