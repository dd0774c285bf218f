//! Batch front end: manifest loading, experiment execution and CSV output.
//!
//! Files written to the output directory:
//!
//! * `summary.csv`: `scheme, sweep_param, sweep_value, mean_ee_bits_per_joule,
//!   stderr_ee, mean_queue_bits, convergence_slot`, one row per scheme and
//!   sweep value. `sweep_param` is `none` and `sweep_value` empty without a
//!   sweep; `convergence_slot` is 1-based and empty when the running ratio
//!   never settles.
//! * `trace.csv` (with `--emit-trace`): one row per slot and realization with
//!   `scheme, sweep_param, sweep_value, realization, slot`, then per user `n`
//!   (1-based) `f_n, p_n, r_loc_n, r_off_n, q_n, a_n`, then `total_rate,
//!   total_power, ee_ratio, effective_throughput, degraded`. `slot` is 0-based.
//! * `figure_ee_vs_slot.csv` without a sweep: `scheme, slot,
//!   mean_running_ee_bits_per_joule, mean_total_queue_bits`.
//! * `figure_<sweep>.csv` with a sweep: `scheme, sweep_value,
//!   mean_ee_bits_per_joule, stderr_ee, mean_queue_bits`.
//! * `metadata.toml`: the resolved configuration in SI units.
//!
//! Numbers are written with 12 significant digits. Efficiency is averaged
//! over the full horizon of each realization.

mod manifest;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use log::info;

pub use manifest::{load_manifest, parse_manifest, parse_schemes, parse_sweep, ExperimentManifest};

use crate::error::Result;
use crate::schemes::SchemeId;
use crate::sim::{
    run_experiment, run_experiment_with_traces, ExperimentSummary, SimConfig, Sweep, SweepParam, TraceRecord,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum SchemeArg {
    Proposed,
    FullOffloading,
    EveFullyDecode,
    All,
}

impl SchemeArg {
    fn schemes(self) -> Vec<SchemeId> {
        match self {
            SchemeArg::Proposed => vec![SchemeId::Proposed],
            SchemeArg::FullOffloading => vec![SchemeId::FullOffloading],
            SchemeArg::EveFullyDecode => vec![SchemeId::EveFullyDecode],
            SchemeArg::All => SchemeId::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum SweepArg {
    TaskLength,
    EveDistance,
    PMax,
    None,
}

impl SweepArg {
    fn param(self) -> Option<SweepParam> {
        match self {
            SweepArg::TaskLength => Some(SweepParam::TaskLength),
            SweepArg::EveDistance => Some(SweepParam::EveDistance),
            SweepArg::PMax => Some(SweepParam::PMax),
            SweepArg::None => None,
        }
    }
}

/// Secure NOMA-MEC offloading simulator.
///
/// Command-line flags override the manifest; the manifest overrides the
/// reference configuration.
#[derive(Debug, Clone, Parser)]
#[command(name = "noma-mec", version)]
pub struct Cli {
    /// TOML manifest with system and experiment settings.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub scheme: Option<SchemeArg>,
    #[arg(long, value_enum)]
    pub sweep: Option<SweepArg>,
    /// Output directory, created if missing.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub realizations: Option<usize>,
    #[arg(long)]
    pub slots: Option<usize>,
    /// Also write the per-slot trace of every realization.
    #[arg(long)]
    pub emit_trace: bool,
}

/// Manifest with the command-line overrides applied and re-validated.
pub fn resolve(cli: &Cli) -> Result<ExperimentManifest> {
    let mut m = match &cli.config {
        Some(path) => load_manifest(path)?,
        None => ExperimentManifest::reference(),
    };
    if let Some(s) = cli.scheme {
        m.schemes = s.schemes();
    }
    if let Some(s) = cli.sweep {
        m.config.sweep = match (s.param(), m.config.sweep.take()) {
            (None, _) => None,
            (Some(p), Some(existing)) if existing.param == p => Some(existing),
            (Some(p), _) => Some(Sweep::with_defaults(p)),
        };
    }
    if let Some(dir) = &cli.output {
        m.output_dir = dir.clone();
    }
    if let Some(seed) = cli.seed {
        m.config.seed = seed;
    }
    if let Some(r) = cli.realizations {
        m.config.num_realizations = r;
    }
    if let Some(t) = cli.slots {
        m.config.num_slots = t;
    }
    m.emit_trace |= cli.emit_trace;
    m.config.scheme = m.schemes[0];
    m.config.validate()?;
    Ok(m)
}

/// Paths of the files a run produced.
#[derive(Debug, Clone, Default)]
pub struct RunOutputs {
    pub summary: Option<PathBuf>,
    pub trace: Option<PathBuf>,
    pub figure_data: Option<PathBuf>,
    pub metadata: PathBuf,
}

/// Runs every selected scheme and writes the outputs.
pub fn run(cli: &Cli) -> Result<RunOutputs> {
    let manifest = resolve(cli)?;
    execute(&manifest)
}

/// Runs a resolved manifest.
pub fn execute(manifest: &ExperimentManifest) -> Result<RunOutputs> {
    let dir = &manifest.output_dir;
    std::fs::create_dir_all(dir)?;

    let mut trace_writer = if manifest.emit_trace {
        let path = dir.join("trace.csv");
        let mut w = csv::Writer::from_path(&path)?;
        w.write_record(trace_header(manifest.config.num_users()))?;
        Some((w, path))
    } else {
        None
    };

    let mut summaries = Vec::new();
    for &scheme in &manifest.schemes {
        info!("running {scheme}");
        let config = manifest.config.with_scheme(scheme);
        let result = match &mut trace_writer {
            Some((w, _)) => {
                run_experiment_with_traces(&config, &mut |cfg: &SimConfig, sweep, trace: &[TraceRecord]| {
                    for rec in trace {
                        w.write_record(trace_row(cfg.scheme, sweep, rec))?;
                    }
                    Ok(())
                })?
            }
            None => run_experiment(&config)?,
        };
        summaries.extend(result);
    }

    let mut outputs = RunOutputs {
        metadata: dir.join("metadata.toml"),
        ..Default::default()
    };
    if let Some((mut w, path)) = trace_writer {
        w.flush()?;
        outputs.trace = Some(path);
    }
    if manifest.emit_summary {
        let path = dir.join("summary.csv");
        write_summary(&path, &summaries)?;
        outputs.summary = Some(path);
    }
    if manifest.emit_figure_data {
        let path = match &manifest.config.sweep {
            None => dir.join("figure_ee_vs_slot.csv"),
            Some(s) => dir.join(format!("figure_{}.csv", s.param)),
        };
        write_figure_data(&path, &summaries)?;
        outputs.figure_data = Some(path);
    }
    write_metadata(&outputs.metadata, manifest)?;
    Ok(outputs)
}

/// Entry point for the binary: parses `std::env::args`, runs, reports errors.
pub fn main_from_env() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            for path in [&out.summary, &out.trace, &out.figure_data].into_iter().flatten() {
                println!("wrote {}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

/// Fixed 12-significant-digit scientific notation.
pub fn format_number(x: f64) -> String {
    format!("{x:.11e}")
}

pub const SUMMARY_HEADER: [&str; 7] = [
    "scheme",
    "sweep_param",
    "sweep_value",
    "mean_ee_bits_per_joule",
    "stderr_ee",
    "mean_queue_bits",
    "convergence_slot",
];

fn sweep_columns(sweep: Option<(SweepParam, f64)>) -> [String; 2] {
    match sweep {
        Some((p, v)) => [p.name().to_string(), format_number(v)],
        None => ["none".to_string(), String::new()],
    }
}

pub fn write_summary(path: &Path, summaries: &[ExperimentSummary]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(SUMMARY_HEADER)?;
    for s in summaries {
        let [param, value] = sweep_columns(s.sweep);
        w.write_record([
            s.scheme.name().to_string(),
            param,
            value,
            format_number(s.mean_ee),
            format_number(s.stderr_ee),
            format_number(s.mean_queue),
            s.convergence_slot.map(|c| c.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn write_figure_data(path: &Path, summaries: &[ExperimentSummary]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let sweeping = summaries.iter().any(|s| s.sweep.is_some());
    if sweeping {
        w.write_record([
            "scheme",
            "sweep_value",
            "mean_ee_bits_per_joule",
            "stderr_ee",
            "mean_queue_bits",
        ])?;
        for s in summaries {
            let value = s.sweep.map(|(_, v)| format_number(v)).unwrap_or_default();
            w.write_record([
                s.scheme.name().to_string(),
                value,
                format_number(s.mean_ee),
                format_number(s.stderr_ee),
                format_number(s.mean_queue),
            ])?;
        }
    } else {
        w.write_record([
            "scheme",
            "slot",
            "mean_running_ee_bits_per_joule",
            "mean_total_queue_bits",
        ])?;
        for s in summaries {
            for (slot, (ee, q)) in s.mean_running_ee.iter().zip(&s.mean_queue_series).enumerate() {
                w.write_record([
                    s.scheme.name().to_string(),
                    slot.to_string(),
                    format_number(*ee),
                    format_number(*q),
                ])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn trace_header(num_users: usize) -> Vec<String> {
    let mut h: Vec<String> = ["scheme", "sweep_param", "sweep_value", "realization", "slot"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for field in ["f", "p", "r_loc", "r_off", "q", "a"] {
        h.extend((1..=num_users).map(|n| format!("{field}_{n}")));
    }
    h.extend(
        [
            "total_rate",
            "total_power",
            "ee_ratio",
            "effective_throughput",
            "degraded",
        ]
        .iter()
        .map(|s| s.to_string()),
    );
    h
}

fn trace_row(scheme: SchemeId, sweep: Option<(SweepParam, f64)>, rec: &TraceRecord) -> Vec<String> {
    let [param, value] = sweep_columns(sweep);
    let mut row = vec![
        scheme.name().to_string(),
        param,
        value,
        rec.realization.to_string(),
        rec.slot.to_string(),
    ];
    for field in [
        &rec.cpu_freq,
        &rec.tx_power,
        &rec.local_rate,
        &rec.offload_rate,
        &rec.queue,
        &rec.arrival,
    ] {
        row.extend(field.iter().map(|x| format_number(*x)));
    }
    row.extend([
        format_number(rec.total_rate),
        format_number(rec.total_power),
        format_number(rec.ee_ratio),
        format_number(rec.effective_throughput),
        u8::from(rec.degraded).to_string(),
    ]);
    row
}

fn write_metadata(path: &Path, m: &ExperimentManifest) -> Result<()> {
    let c = &m.config;
    let p = &c.params;
    let list = |v: &[f64]| v.iter().map(|x| format_number(*x)).collect::<Vec<_>>().join(", ");
    let mut f = BufWriter::new(File::create(path)?);
    writeln!(f, "# resolved configuration, SI units")?;
    writeln!(f, "ee_averaging = \"full_horizon\"")?;
    writeln!(
        f,
        "schemes = [{}]",
        m.schemes
            .iter()
            .map(|s| format!("\"{s}\""))
            .collect::<Vec<_>>()
            .join(", ")
    )?;
    match &c.sweep {
        Some(s) => {
            writeln!(f, "sweep = \"{}\"", s.param)?;
            writeln!(f, "sweep_values = [{}]", list(&s.values))?;
        }
        None => writeln!(f, "sweep = \"none\"")?,
    }
    writeln!(f, "seed = {}", c.seed)?;
    writeln!(f, "realizations = {}", c.num_realizations)?;
    writeln!(f, "slots = {}", c.num_slots)?;
    writeln!(f, "num_users = {}", c.num_users())?;
    for (key, value) in [
        ("bandwidth", p.bandwidth),
        ("slot_duration", p.slot_duration),
        ("pathloss_exponent", p.pathloss_exponent),
        ("pathloss_gain", p.pathloss_gain),
        ("ref_distance", p.ref_distance),
        ("noise_power", p.noise_power),
        ("amp_coeff", p.amp_coeff),
        ("circuit_power", p.circuit_power),
        ("p_max", p.p_max),
        ("f_max", p.f_max),
        ("lyapunov_v", p.lyapunov_v),
        ("arrival_min", c.arrival.low()),
        ("arrival_max", c.arrival.high()),
    ] {
        writeln!(f, "{key} = {}", format_number(value))?;
    }
    writeln!(f, "energy_coeff = [{}]", list(&p.energy_coeff))?;
    writeln!(f, "cycles_per_bit = [{}]", list(&p.cycles_per_bit))?;
    let mec: Vec<f64> = c.geometry.iter().map(|g| g.dist_to_mec).collect();
    let eve: Vec<f64> = c.geometry.iter().map(|g| g.dist_to_eve).collect();
    writeln!(f, "dist_to_mec = [{}]", list(&mec))?;
    writeln!(f, "dist_to_eve = [{}]", list(&eve))?;
    f.flush()?;
    Ok(())
}
