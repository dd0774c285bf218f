//! Compares the three schemes on paired realizations at the reference settings.
//!
//! Usage: `cargo run --release --example scheme_comparison [realizations] [slots]`

use std::time::Instant;

use noma_mec::schemes::SchemeId;
use noma_mec::sim::{paired_difference, run_experiment, SimConfig};

fn main() -> noma_mec::Result<()> {
    let mut args = std::env::args().skip(1);
    let realizations = args.next().and_then(|a| a.parse().ok()).unwrap_or(20);
    let slots = args.next().and_then(|a| a.parse().ok()).unwrap_or(1000);
    let base = SimConfig {
        num_realizations: realizations,
        num_slots: slots,
        seed: 1,
        ..SimConfig::reference()
    };

    let mut results = Vec::new();
    for scheme in SchemeId::ALL {
        let start = Instant::now();
        let summary = run_experiment(&base.with_scheme(scheme))?.remove(0);
        println!(
            "{:<17} EE {:.4e} ± {:.2e} bits/J  mean queue {:.3e} bits  converged at {:?}  ({:.1?})",
            scheme.name(),
            summary.mean_ee,
            summary.stderr_ee,
            summary.mean_queue,
            summary.convergence_slot,
            start.elapsed()
        );
        results.push(summary);
    }

    let proposed = results[0].per_realization_ee();
    for other in &results[1..] {
        let (gap, se) = paired_difference(&proposed, &other.per_realization_ee())?;
        println!(
            "proposed − {:<17} {gap:+.4e} (paired stderr {se:.2e})",
            other.scheme.name()
        );
    }
    Ok(())
}
