//! Runs one realization of the proposed scheme and prints how backlog, power
//! and the running efficiency ratio evolve.
//!
//! Usage: `cargo run --release --example queue_dynamics [slots] [every]`

use noma_mec::queueing::mean_queue_metric;
use noma_mec::sim::{run_episode, SimConfig};

fn main() -> noma_mec::Result<()> {
    let mut args = std::env::args().skip(1);
    let slots = args.next().and_then(|a| a.parse().ok()).unwrap_or(1000);
    let every: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(100);
    let config = SimConfig {
        num_slots: slots,
        num_realizations: 1,
        ..SimConfig::reference()
    };
    let trace = run_episode(&config, 0)?;

    println!(
        "{:>6} {:>12} {:>12} {:>12} {:>12}",
        "slot", "queue bits", "rate bit/s", "power W", "EE bits/J"
    );
    for rec in trace.iter().step_by(every.max(1)).chain(trace.last()) {
        println!(
            "{:>6} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e}",
            rec.slot,
            rec.total_queue(),
            rec.total_rate,
            rec.total_power,
            rec.ee_ratio
        );
    }
    let queues: Vec<&[f64]> = trace.iter().map(|r| r.queue.as_slice()).collect();
    let metric = mean_queue_metric(&queues)?;
    let offloading = trace.iter().filter(|r| r.tx_power.iter().any(|p| *p > 0.0)).count();
    println!(
        "time-averaged backlog {:.4e} bits (per slot {:.3e}); offloading in {offloading}/{} slots",
        metric.mean_total,
        metric.normalized,
        trace.len()
    );
    Ok(())
}
