use std::f64::consts::LN_2;

use super::channel::ChannelState;
use super::params::SystemParams;

/// What the eavesdropper suffers as interference when decoding a user.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EveModel {
    /// Same successive-cancellation interference as the MEC receiver.
    #[default]
    Sic,
    /// The eavesdropper removes every other user's signal before decoding.
    FullyDecode,
}

/// SINR of the user at position `n` of an ascending-gain ordering.
///
/// `powers` and `gains` are already in decode order; users `0..n` interfere.
pub fn sinr_at_receiver(powers: &[f64], gains: &[f64], noise: f64, n: usize) -> f64 {
    let interference: f64 = powers[..n].iter().zip(&gains[..n]).map(|(p, h)| p * h).sum();
    powers[n] * gains[n] / (interference + noise)
}

/// Received power from users ahead of `position` in decode order, excluding noise.
fn interference(powers: &[f64], gains: &[f64], order: &[usize], position: usize) -> f64 {
    order[..position].iter().map(|&i| powers[i] * gains[i]).sum()
}

/// MEC-side and eavesdropper-side SINR of every user (indexed by user, not by position).
pub fn sinrs(powers: &[f64], ch: &ChannelState, params: &SystemParams, eve: EveModel) -> (Vec<f64>, Vec<f64>) {
    let n = ch.num_users();
    let noise = params.noise_power;
    let mut to_mec = vec![0.0; n];
    let mut to_eve = vec![0.0; n];
    for (pos, &user) in ch.decode_order().iter().enumerate() {
        let ib = interference(powers, ch.gain_to_mec(), ch.decode_order(), pos);
        let ie = match eve {
            EveModel::Sic => interference(powers, ch.gain_to_eve(), ch.decode_order(), pos),
            EveModel::FullyDecode => 0.0,
        };
        to_mec[user] = powers[user] * ch.gain_to_mec()[user] / (ib + noise);
        to_eve[user] = powers[user] * ch.gain_to_eve()[user] / (ie + noise);
    }
    (to_mec, to_eve)
}

/// Secrecy-rate difference `B log₂(1+γ_b) − B log₂(1+γ_e)` per user, without clipping.
pub fn secrecy_rates_unclipped(powers: &[f64], ch: &ChannelState, params: &SystemParams, eve: EveModel) -> Vec<f64> {
    let (gb, ge) = sinrs(powers, ch, params, eve);
    gb.iter()
        .zip(&ge)
        .map(|(b, e)| params.bandwidth / LN_2 * (b.ln_1p() - e.ln_1p()))
        .collect()
}

/// Achievable secure offloading rate of every user, bits/s.
pub fn secure_offload_rates(powers: &[f64], ch: &ChannelState, params: &SystemParams, eve: EveModel) -> Vec<f64> {
    secrecy_rates_unclipped(powers, ch, params, eve)
        .into_iter()
        .map(|r| r.max(0.0))
        .collect()
}

/// Achievable secure offloading rate of user `user`, bits/s.
pub fn secure_offload_rate(
    powers: &[f64],
    ch: &ChannelState,
    params: &SystemParams,
    eve: EveModel,
    user: usize,
) -> f64 {
    secure_offload_rates(powers, ch, params, eve)[user]
}
