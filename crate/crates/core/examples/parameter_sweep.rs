//! Sweeps one parameter for every scheme on paired realizations.
//!
//! Usage: `cargo run --release --example parameter_sweep [task_length|eve_distance|p_max] [realizations] [slots]`

use noma_mec::schemes::SchemeId;
use noma_mec::sim::{run_experiment, SimConfig, Sweep, SweepParam};

fn main() -> noma_mec::Result<()> {
    let mut args = std::env::args().skip(1);
    let param: SweepParam = match args.next() {
        Some(s) => s.parse()?,
        None => SweepParam::PMax,
    };
    let realizations = args.next().and_then(|a| a.parse().ok()).unwrap_or(10);
    let slots = args.next().and_then(|a| a.parse().ok()).unwrap_or(500);
    let base = SimConfig {
        num_realizations: realizations,
        num_slots: slots,
        sweep: Some(Sweep::with_defaults(param)),
        ..SimConfig::reference()
    };

    println!(
        "{:<17} {:>8} {:>14} {:>10} {:>14}",
        "scheme",
        param.name(),
        "EE bits/J",
        "stderr",
        "queue bits"
    );
    for scheme in SchemeId::ALL {
        for s in run_experiment(&base.with_scheme(scheme))? {
            let value = s.sweep.map_or(f64::NAN, |(_, v)| v);
            println!(
                "{:<17} {:>8.3} {:>14.6e} {:>10.2e} {:>14.4e}",
                scheme.name(),
                value,
                s.mean_ee,
                s.stderr_ee,
                s.mean_queue
            );
        }
    }
    Ok(())
}
