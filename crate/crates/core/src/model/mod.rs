//! Physical-layer and computation models.
//!
//! Channel power gains follow i.i.d. block fading with unit-mean exponential
//! small-scale coefficients on top of a distance-based path loss. Users share
//! the uplink band and the MEC receiver separates them by successive
//! interference cancellation in ascending order of channel gain, so the user
//! at decode position `k` sees the users at positions `0..k` as interference.
//! The eavesdropper is assumed to decode in the same order unless
//! [`EveModel::FullyDecode`] is selected.
//!
//! All quantities are SI: Watts, Hz, seconds, bits.

mod channel;
mod params;
mod rate;

pub use channel::{path_loss_gain, sample_fading, ChannelState};
pub use params::{db_to_linear, dbm_to_watts, local_power, local_rate, offload_power, SystemParams, UserGeometry};
pub use rate::{secrecy_rates_unclipped, secure_offload_rate, secure_offload_rates, sinr_at_receiver, sinrs, EveModel};
