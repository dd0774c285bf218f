//! Solves single-slot problems with the alternating optimizer and checks them
//! against an exhaustive grid search.
//!
//! Usage: `cargo run --release --example slot_optimizer [instances] [grid]`

use std::time::Instant;

use noma_mec::model::{ChannelState, SystemParams, UserGeometry};
use noma_mec::optimizer::{brute_force_slot_oracle, solve_slot, SlotState};
use noma_mec::sim::realization_rng;
use rand::Rng;

fn main() -> noma_mec::Result<()> {
    let mut args = std::env::args().skip(1);
    let instances: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(10);
    let grid = args.next().and_then(|a| a.parse().ok()).unwrap_or(120);
    let params = SystemParams::reference(2);
    let mut rng = realization_rng(3, 0);

    for i in 0..instances {
        let ch = ChannelState::sample(&mut rng, &UserGeometry::reference(), &params)?;
        let queues: Vec<f64> = (0..2).map(|_| 10f64.powf(rng.random_range(5.0..10.0))).collect();
        let arrivals = vec![1.5e6; 2];
        let eta = 10f64.powf(rng.random_range(5.0..7.0));
        let state = SlotState::new(&params, &ch, &queues, &arrivals, eta)?;

        let start = Instant::now();
        let solved = solve_slot(&state);
        let solve_time = start.elapsed();
        let oracle = brute_force_slot_oracle(&state, grid)?;
        let offset: f64 = queues.iter().zip(&arrivals).map(|(q, a)| q * a).sum();
        println!(
            "#{i}: solver {:.6e} in {:.1?} ({} outer)  oracle {:.6e}  f {:?}  p {:?}",
            solved.objective + offset,
            solve_time,
            solved.outer_iterations,
            oracle.objective + offset,
            solved
                .decision
                .cpu_freq
                .iter()
                .map(|f| format!("{f:.3e}"))
                .collect::<Vec<_>>(),
            solved
                .decision
                .tx_power
                .iter()
                .map(|p| format!("{p:.3}"))
                .collect::<Vec<_>>(),
        );
    }
    println!("objectives exclude the decision-independent backlog term");
    Ok(())
}
