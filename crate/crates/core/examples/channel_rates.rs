//! Samples one fading block and prints per-user SINRs and secure offloading
//! rates under both eavesdropper models as the transmit power grows.
//!
//! Usage: `cargo run --example channel_rates [seed]`

use noma_mec::model::{secure_offload_rates, sinrs, ChannelState, EveModel, SystemParams, UserGeometry};
use noma_mec::sim::realization_rng;

fn main() -> noma_mec::Result<()> {
    let seed = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(7);
    let params = SystemParams::reference(2);
    let mut rng = realization_rng(seed, 0);
    let ch = ChannelState::sample(&mut rng, &UserGeometry::reference(), &params)?;

    println!("gain to MEC {:?}", ch.gain_to_mec());
    println!("gain to eve {:?}", ch.gain_to_eve());
    println!("decode order (weakest first) {:?}", ch.decode_order());

    for p in [0.05, 0.2, 0.5, 0.9] {
        let powers = vec![p; params.num_users()];
        let (to_mec, to_eve) = sinrs(&powers, &ch, &params, EveModel::Sic);
        let sic = secure_offload_rates(&powers, &ch, &params, EveModel::Sic);
        let full = secure_offload_rates(&powers, &ch, &params, EveModel::FullyDecode);
        println!("p = {p:.2} W");
        for u in 0..params.num_users() {
            println!(
                "  user {u}: SINR mec {:.3e} eve {:.3e}  secure rate {:.4e} bit/s (interference-free eve {:.4e})",
                to_mec[u], to_eve[u], sic[u], full[u]
            );
        }
    }
    Ok(())
}
