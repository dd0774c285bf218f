use rand::Rng;
use rand_distr::Exp1;

use super::params::{SystemParams, UserGeometry};
use crate::error::{Error, Result};

/// Draws a unit-mean exponential small-scale fading coefficient.
pub fn sample_fading<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(Exp1)
}

/// Channel power gain `H · g0 · (d0 / d)^θ` at distance `distance`.
pub fn path_loss_gain(fading: f64, distance: f64, params: &SystemParams) -> Result<f64> {
    if !(distance >= params.ref_distance) {
        return Err(Error::InsideReferenceDistance {
            distance,
            reference: params.ref_distance,
        });
    }
    Ok(fading * params.pathloss_gain * (params.ref_distance / distance).powf(params.pathloss_exponent))
}

/// Per-slot channel power gains of every user towards the MEC receiver and
/// the eavesdropper.
///
/// `decode_order` lists user indices by ascending gain to the MEC. A user at
/// position `k` sees the users at positions `0..k` as interference, at both
/// receivers.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelState {
    gain_to_mec: Vec<f64>,
    gain_to_eve: Vec<f64>,
    decode_order: Vec<usize>,
}

impl ChannelState {
    pub fn new(gain_to_mec: Vec<f64>, gain_to_eve: Vec<f64>) -> Result<Self> {
        if gain_to_mec.len() != gain_to_eve.len() {
            return Err(Error::DimensionMismatch {
                expected: gain_to_mec.len(),
                got: gain_to_eve.len(),
            });
        }
        for &g in gain_to_mec.iter().chain(&gain_to_eve) {
            if !(g.is_finite() && g > 0.0) {
                return Err(Error::NonPositive {
                    what: "channel gain",
                    value: g,
                });
            }
        }
        let mut decode_order: Vec<usize> = (0..gain_to_mec.len()).collect();
        // stable: equal gains keep index order
        decode_order.sort_by(|&a, &b| gain_to_mec[a].total_cmp(&gain_to_mec[b]));
        Ok(ChannelState {
            gain_to_mec,
            gain_to_eve,
            decode_order,
        })
    }

    /// Draws one block-fading realization for users at `geometry`.
    ///
    /// Per user, the MEC coefficient is drawn before the eavesdropper one.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R, geometry: &[UserGeometry], params: &SystemParams) -> Result<Self> {
        let mut to_mec = Vec::with_capacity(geometry.len());
        let mut to_eve = Vec::with_capacity(geometry.len());
        for g in geometry {
            let hb = sample_fading(rng);
            let he = sample_fading(rng);
            // Exp1 may return exactly 0 with negligible probability
            to_mec.push(path_loss_gain(hb.max(f64::MIN_POSITIVE), g.dist_to_mec, params)?);
            to_eve.push(path_loss_gain(he.max(f64::MIN_POSITIVE), g.dist_to_eve, params)?);
        }
        ChannelState::new(to_mec, to_eve)
    }

    pub fn num_users(&self) -> usize {
        self.gain_to_mec.len()
    }

    pub fn gain_to_mec(&self) -> &[f64] {
        &self.gain_to_mec
    }

    pub fn gain_to_eve(&self) -> &[f64] {
        &self.gain_to_eve
    }

    pub fn decode_order(&self) -> &[usize] {
        &self.decode_order
    }

    /// Returns the same channel with every eavesdropper gain multiplied by `factor`.
    pub fn scale_eve(&self, factor: f64) -> Result<Self> {
        ChannelState::new(
            self.gain_to_mec.clone(),
            self.gain_to_eve.iter().map(|g| g * factor).collect(),
        )
    }
}
