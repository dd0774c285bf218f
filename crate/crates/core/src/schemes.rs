//! The proposed policy and the two benchmark policies behind one interface.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::model::EveModel;
use crate::optimizer::{solve_slot_with, SlotSolution, SlotState, SolveOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeId {
    /// Partial offloading against a successive-cancellation eavesdropper.
    Proposed,
    /// No local computing; every bit goes to the MEC server.
    FullOffloading,
    /// Partial offloading against an eavesdropper that sees no interference.
    EveFullyDecode,
}

impl SchemeId {
    pub const ALL: [SchemeId; 3] = [SchemeId::Proposed, SchemeId::FullOffloading, SchemeId::EveFullyDecode];

    pub fn name(self) -> &'static str {
        match self {
            SchemeId::Proposed => "proposed",
            SchemeId::FullOffloading => "full_offloading",
            SchemeId::EveFullyDecode => "eve_fully_decode",
        }
    }

    /// Eavesdropper model used both when optimizing and when crediting rates.
    pub fn eve_model(self) -> EveModel {
        match self {
            SchemeId::EveFullyDecode => EveModel::FullyDecode,
            SchemeId::Proposed | SchemeId::FullOffloading => EveModel::Sic,
        }
    }

    pub fn solve_options(self) -> SolveOptions {
        SolveOptions {
            local_computing: self != SchemeId::FullOffloading,
            ..SolveOptions::default()
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SchemeId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::invalid("scheme", format!("unknown scheme `{s}`")))
    }
}

/// Runs `scheme`'s slot optimizer on `state`.
///
/// The state's eavesdropper model is overridden by the scheme's. `warm_start`
/// seeds the transmit powers.
pub fn decide(scheme: SchemeId, state: &SlotState<'_>, warm_start: Option<&[f64]>) -> SlotSolution {
    let state = state.with_eve(scheme.eve_model());
    solve_slot_with(&state, &scheme.solve_options(), warm_start)
}
