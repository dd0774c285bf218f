//! Compares the two-user closed-form power update with the numeric box solver
//! on the same surrogate.
//!
//! Usage: `cargo run --release --example closed_form_two_user [instances]`

use noma_mec::model::{ChannelState, SystemParams, UserGeometry};
use noma_mec::optimizer::{compare_closed_form, PowerProblem, SlotState};
use noma_mec::sim::realization_rng;
use rand::Rng;

fn main() -> noma_mec::Result<()> {
    let instances: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(20);
    let params = SystemParams::reference(2);
    let mut rng = realization_rng(5, 0);
    let mut agree = 0;

    for i in 0..instances {
        let ch = ChannelState::sample(&mut rng, &UserGeometry::reference(), &params)?;
        let queues: Vec<f64> = (0..2).map(|_| 10f64.powf(rng.random_range(8.0..10.0))).collect();
        let eta = 10f64.powf(rng.random_range(4.0..6.5));
        let state = SlotState::new(&params, &ch, &queues, &[1.5e6, 1.5e6], eta)?;
        let freq = [0.0, 0.0];
        let start_power: Vec<f64> = PowerProblem::new(&state, &freq)
            .upper_bounds()
            .iter()
            .map(|u| u / 2.0)
            .collect();
        let aux = PowerProblem::new(&state, &freq).aux_at(&start_power);

        let check = compare_closed_form(&state, &freq, &aux, 0.01)?;
        agree += usize::from(check.agrees);
        println!(
            "#{i:<3} closed {:?} numeric {:?} gap {:+.2e} roots in box {}{}",
            check
                .closed_form
                .tx_power
                .iter()
                .map(|p| format!("{p:.4}"))
                .collect::<Vec<_>>(),
            check
                .numeric_power
                .iter()
                .map(|p| format!("{p:.4}"))
                .collect::<Vec<_>>(),
            check.relative_gap,
            check.closed_form.roots_in_box,
            if check.agrees { "" } else { "  <- disagrees" }
        );
    }
    println!("{agree}/{instances} agree within 1%");
    Ok(())
}
