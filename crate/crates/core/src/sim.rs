//! Episode driver, Monte-Carlo averaging and parameter sweeps.
//!
//! Realization `r` draws its channels and arrivals from stream `r` of a
//! ChaCha8 generator keyed by the master seed. The stream does not depend on
//! the scheme or the sweep value, so every scheme and every sweep point sees
//! the same fading and the same arrival quantiles and comparisons are paired.

use std::fmt;
use std::str::FromStr;

use log::{debug, info};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{
    local_power, local_rate, offload_power, secure_offload_rates, ChannelState, SystemParams, UserGeometry,
};
use crate::optimizer::{EeAccumulator, SlotState};
use crate::queueing::{effective_throughput, queue_update, ArrivalModel};
use crate::schemes::{decide, SchemeId};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "NOMA_MEC_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepParam {
    /// Multiplier on the arrival support.
    TaskLength,
    /// Multiplier on every user's distance to the eavesdropper.
    EveDistance,
    /// Per-user power budget in Watts.
    PMax,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::TaskLength => "task_length",
            SweepParam::EveDistance => "eve_distance",
            SweepParam::PMax => "p_max",
        }
    }

    pub fn default_values(self) -> Vec<f64> {
        match self {
            SweepParam::TaskLength => vec![1.0, 1.25, 1.5, 1.75, 2.0],
            SweepParam::EveDistance => vec![0.5, 0.75, 1.0, 1.5, 2.0],
            SweepParam::PMax => vec![0.25, 0.5, 1.0, 1.5, 2.0],
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [SweepParam::TaskLength, SweepParam::EveDistance, SweepParam::PMax]
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::invalid("sweep", format!("unknown sweep parameter `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

impl Sweep {
    pub fn new(param: SweepParam, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("sweep_values", "at least one value is required"));
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::invalid(
                "sweep_values",
                format!("values must be positive, got {v}"),
            ));
        }
        Ok(Sweep { param, values })
    }

    pub fn with_defaults(param: SweepParam) -> Self {
        Sweep {
            param,
            values: param.default_values(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub params: SystemParams,
    pub geometry: Vec<UserGeometry>,
    pub arrival: ArrivalModel,
    pub num_slots: usize,
    pub num_realizations: usize,
    pub seed: u64,
    pub scheme: SchemeId,
    pub sweep: Option<Sweep>,
}

impl SimConfig {
    pub const DEFAULT_SLOTS: usize = 1000;
    pub const DEFAULT_REALIZATIONS: usize = 1000;

    /// Two users at the reference geometry with reference constants.
    pub fn reference() -> Self {
        SimConfig {
            params: SystemParams::reference(2),
            geometry: UserGeometry::reference(),
            arrival: ArrivalModel::reference(),
            num_slots: Self::DEFAULT_SLOTS,
            num_realizations: Self::DEFAULT_REALIZATIONS,
            seed: 0,
            scheme: SchemeId::Proposed,
            sweep: None,
        }
    }

    pub fn num_users(&self) -> usize {
        self.geometry.len()
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.geometry.is_empty() {
            return Err(Error::invalid("num_users", "at least one user is required"));
        }
        if self.geometry.len() != self.params.num_users() {
            return Err(Error::DimensionMismatch {
                expected: self.params.num_users(),
                got: self.geometry.len(),
            });
        }
        for g in &self.geometry {
            g.validate(&self.params)?;
        }
        if self.num_slots == 0 {
            return Err(Error::invalid("slots", "must be at least 1"));
        }
        if self.num_realizations == 0 {
            return Err(Error::invalid("realizations", "must be at least 1"));
        }
        if let Some(sweep) = &self.sweep {
            Sweep::new(sweep.param, sweep.values.clone())?;
        }
        Ok(())
    }

    /// Copy of this configuration with one sweep value applied and the sweep removed.
    pub fn at_sweep_point(&self, param: SweepParam, value: f64) -> Result<SimConfig> {
        let mut out = self.clone();
        out.sweep = None;
        match param {
            SweepParam::TaskLength => out.arrival = self.arrival.scaled(value)?,
            SweepParam::EveDistance => {
                for g in &mut out.geometry {
                    g.dist_to_eve *= value;
                }
            }
            SweepParam::PMax => out.params.p_max = value,
        }
        out.validate()?;
        Ok(out)
    }

    pub fn with_scheme(&self, scheme: SchemeId) -> SimConfig {
        SimConfig { scheme, ..self.clone() }
    }
}

/// One slot of one realization. Per-user vectors are indexed by user.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    /// 0-based slot index.
    pub slot: usize,
    pub realization: usize,
    pub cpu_freq: Vec<f64>,
    pub tx_power: Vec<f64>,
    pub local_rate: Vec<f64>,
    /// Realized secure offloading rate.
    pub offload_rate: Vec<f64>,
    /// Backlog at the start of the slot.
    pub queue: Vec<f64>,
    pub arrival: Vec<f64>,
    pub total_rate: f64,
    pub total_power: f64,
    /// Running efficiency ratio after this slot.
    pub ee_ratio: f64,
    /// Bits actually drained per second, summed over users.
    pub effective_throughput: f64,
    /// The slot optimizer hit an iteration cap.
    pub degraded: bool,
}

impl TraceRecord {
    pub fn total_queue(&self) -> f64 {
        self.queue.iter().sum()
    }
}

/// Random stream of realization `realization`.
pub fn realization_rng(seed: u64, realization: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(realization as u64);
    rng
}

/// Runs one realization of `config.scheme` for `config.num_slots` slots.
///
/// Queues start empty and the efficiency ratio starts at zero. Each slot
/// draws the channel, then one uniform variate per user for the arrivals.
pub fn run_episode(config: &SimConfig, realization: usize) -> Result<Vec<TraceRecord>> {
    config.validate()?;
    let params = &config.params;
    let tau = params.slot_duration;
    let n = config.num_users();
    let eve = config.scheme.eve_model();
    let mut rng = realization_rng(config.seed, realization);

    let mut queue = vec![0.0; n];
    let mut acc = EeAccumulator::default();
    let mut warm: Option<Vec<f64>> = None;
    let mut trace = Vec::with_capacity(config.num_slots);
    for slot in 0..config.num_slots {
        let channel = ChannelState::sample(&mut rng, &config.geometry, params)?;
        let arrival: Vec<f64> = (0..n).map(|_| config.arrival.quantile(rng.random::<f64>())).collect();
        let state = SlotState::new(params, &channel, &queue, &arrival, acc.ratio())?;
        let solution = decide(config.scheme, &state, warm.as_deref());
        let decision = solution.decision;

        let offload_rate = secure_offload_rates(&decision.tx_power, &channel, params, eve);
        let local: Vec<f64> = (0..n)
            .map(|u| local_rate(decision.cpu_freq[u], params.cycles(u)))
            .collect();
        let total_rate: f64 = offload_rate.iter().sum::<f64>() + local.iter().sum::<f64>();
        let total_power: f64 = (0..n)
            .map(|u| offload_power(decision.tx_power[u], params) + local_power(decision.cpu_freq[u], params.kappa(u)))
            .sum();
        let ee_ratio = acc.record(total_rate, total_power, tau);
        let next: Vec<f64> = (0..n)
            .map(|u| queue_update(queue[u], local[u] + offload_rate[u], tau, arrival[u]))
            .collect();
        let throughput = (0..n)
            .map(|u| effective_throughput(queue[u], local[u] + offload_rate[u], tau))
            .sum();
        if solution.degraded {
            debug!("realization {realization} slot {slot}: solver stopped at an iteration cap");
        }

        warm = Some(decision.tx_power.clone());
        trace.push(TraceRecord {
            slot,
            realization,
            cpu_freq: decision.cpu_freq,
            tx_power: decision.tx_power,
            local_rate: local,
            offload_rate,
            queue: std::mem::replace(&mut queue, next),
            arrival,
            total_rate,
            total_power,
            ee_ratio,
            effective_throughput: throughput,
            degraded: solution.degraded,
        });
    }
    Ok(trace)
}

/// Per-slot totals of one realization, enough for every summary statistic.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeSeries {
    pub total_rate: Vec<f64>,
    pub total_power: Vec<f64>,
    pub total_queue: Vec<f64>,
    pub ee_ratio: Vec<f64>,
    pub degraded_slots: usize,
}

impl EpisodeSeries {
    pub fn from_trace(trace: &[TraceRecord]) -> Self {
        EpisodeSeries {
            total_rate: trace.iter().map(|r| r.total_rate).collect(),
            total_power: trace.iter().map(|r| r.total_power).collect(),
            total_queue: trace.iter().map(TraceRecord::total_queue).collect(),
            ee_ratio: trace.iter().map(|r| r.ee_ratio).collect(),
            degraded_slots: trace.iter().filter(|r| r.degraded).count(),
        }
    }

    /// `Σ R_tot τ / Σ P_tot τ` over slots `from..`.
    pub fn energy_efficiency_from(&self, from: usize) -> f64 {
        let bits: f64 = self.total_rate[from.min(self.total_rate.len())..].iter().sum();
        let energy: f64 = self.total_power[from.min(self.total_power.len())..].iter().sum();
        if energy > 0.0 {
            bits / energy
        } else {
            0.0
        }
    }

    /// Efficiency over the whole horizon.
    pub fn energy_efficiency(&self) -> f64 {
        self.energy_efficiency_from(0)
    }

    pub fn mean_total_queue(&self) -> f64 {
        self.total_queue.iter().sum::<f64>() / self.total_queue.len() as f64
    }
}

/// Results of one scheme at one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSummary {
    pub scheme: SchemeId,
    pub sweep: Option<(SweepParam, f64)>,
    /// Full-horizon efficiency averaged over realizations, bits/J.
    pub mean_ee: f64,
    /// Standard error of `mean_ee` across realizations.
    pub stderr_ee: f64,
    /// Time-averaged total backlog averaged over realizations, bits.
    pub mean_queue: f64,
    /// Convergence slot (1-based) of the realization-mean running ratio.
    pub convergence_slot: Option<usize>,
    /// Realization-mean running ratio per slot.
    pub mean_running_ee: Vec<f64>,
    /// Realization-mean total backlog per slot.
    pub mean_queue_series: Vec<f64>,
    /// Per-realization series in realization order.
    pub episodes: Vec<EpisodeSeries>,
}

impl ExperimentSummary {
    /// Full-horizon efficiency of each realization.
    pub fn per_realization_ee(&self) -> Vec<f64> {
        self.episodes.iter().map(EpisodeSeries::energy_efficiency).collect()
    }

    /// Efficiency over slots `from..` of each realization.
    pub fn per_realization_ee_from(&self, from: usize) -> Vec<f64> {
        self.episodes.iter().map(|e| e.energy_efficiency_from(from)).collect()
    }
}

/// Worker pool honoring [`THREADS_ENV`].
fn thread_pool() -> Result<rayon::ThreadPool> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::invalid(THREADS_ENV, format!("expected a thread count, got `{v}`")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::invalid(THREADS_ENV, e.to_string()))
}

/// Called with each realization's full trace, in realization order.
pub type TraceSink<'a> = dyn FnMut(&SimConfig, Option<(SweepParam, f64)>, &[TraceRecord]) -> Result<()> + 'a;

/// Realizations simulated in parallel before their traces are handed on.
const TRACE_CHUNK: usize = 64;

/// Runs every realization of a configuration without a sweep.
fn run_point(
    config: &SimConfig,
    sweep: Option<(SweepParam, f64)>,
    pool: &rayon::ThreadPool,
    sink: &mut Option<&mut TraceSink<'_>>,
) -> Result<ExperimentSummary> {
    let episodes: Vec<EpisodeSeries> = match sink {
        None => pool.install(|| {
            (0..config.num_realizations)
                .into_par_iter()
                .map(|r| run_episode(config, r).map(|t| EpisodeSeries::from_trace(&t)))
                .collect::<Result<Vec<_>>>()
        })?,
        Some(sink) => {
            let mut episodes = Vec::with_capacity(config.num_realizations);
            for start in (0..config.num_realizations).step_by(TRACE_CHUNK) {
                let end = (start + TRACE_CHUNK).min(config.num_realizations);
                let traces = pool.install(|| {
                    (start..end)
                        .into_par_iter()
                        .map(|r| run_episode(config, r))
                        .collect::<Result<Vec<_>>>()
                })?;
                for trace in &traces {
                    sink(config, sweep, trace)?;
                    episodes.push(EpisodeSeries::from_trace(trace));
                }
            }
            episodes
        }
    };
    summarize(config.scheme, sweep, episodes)
}

/// Aggregates per-realization series. Fails on an empty set.
pub fn summarize(
    scheme: SchemeId,
    sweep: Option<(SweepParam, f64)>,
    episodes: Vec<EpisodeSeries>,
) -> Result<ExperimentSummary> {
    if episodes.is_empty() {
        return Err(Error::EmptyTrace);
    }
    let ee: Vec<f64> = episodes.iter().map(EpisodeSeries::energy_efficiency).collect();
    let (mean_ee, stderr_ee) = mean_and_stderr(&ee);
    let mean_queue = episodes.iter().map(EpisodeSeries::mean_total_queue).sum::<f64>() / episodes.len() as f64;
    let mean_running_ee = column_mean(episodes.iter().map(|e| e.ee_ratio.as_slice()));
    let mean_queue_series = column_mean(episodes.iter().map(|e| e.total_queue.as_slice()));
    let convergence = if mean_running_ee.len() >= 2 {
        convergence_slot(&mean_running_ee)?
    } else {
        None
    };
    let degraded: usize = episodes.iter().map(|e| e.degraded_slots).sum();
    if degraded > 0 {
        info!("{scheme}: {degraded} slot solves stopped at an iteration cap");
    }
    Ok(ExperimentSummary {
        scheme,
        sweep,
        mean_ee,
        stderr_ee,
        mean_queue,
        convergence_slot: convergence,
        mean_running_ee,
        mean_queue_series,
        episodes,
    })
}

/// Runs `config.scheme` at every sweep value (or once without a sweep).
///
/// Summaries come back in sweep order. Realizations run on a worker pool
/// whose size is capped by [`THREADS_ENV`]; results do not depend on it.
pub fn run_experiment(config: &SimConfig) -> Result<Vec<ExperimentSummary>> {
    run_experiment_inner(config, None)
}

/// [`run_experiment`] that also passes every realization's trace to `sink`.
pub fn run_experiment_with_traces(config: &SimConfig, sink: &mut TraceSink<'_>) -> Result<Vec<ExperimentSummary>> {
    run_experiment_inner(config, Some(sink))
}

fn run_experiment_inner(config: &SimConfig, mut sink: Option<&mut TraceSink<'_>>) -> Result<Vec<ExperimentSummary>> {
    config.validate()?;
    let pool = thread_pool()?;
    match &config.sweep {
        None => Ok(vec![run_point(config, None, &pool, &mut sink)?]),
        Some(sweep) => sweep
            .values
            .iter()
            .map(|&v| {
                info!("{}: {} = {v}", config.scheme, sweep.param);
                let point = config.at_sweep_point(sweep.param, v)?;
                run_point(&point, Some((sweep.param, v)), &pool, &mut sink)
            })
            .collect(),
    }
}

/// Sample mean and its standard error. The error is zero for one sample.
pub fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Mean and standard error of the paired differences `a − b`.
pub fn paired_difference(a: &[f64], b: &[f64]) -> Result<(f64, f64)> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    if a.is_empty() {
        return Err(Error::EmptyTrace);
    }
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    Ok(mean_and_stderr(&d))
}

fn column_mean<'a>(rows: impl Iterator<Item = &'a [f64]>) -> Vec<f64> {
    let mut sum: Vec<f64> = Vec::new();
    let mut count = 0usize;
    for row in rows {
        if sum.is_empty() {
            sum = vec![0.0; row.len()];
        }
        for (s, x) in sum.iter_mut().zip(row) {
            *s += x;
        }
        count += 1;
    }
    sum.iter().map(|s| s / count.max(1) as f64).collect()
}

/// First slot (1-based) from which the series stays within ±2% of its final value.
///
/// Returns `None` when only the final sample qualifies, i.e. the series
/// never settles.
pub fn convergence_slot(series: &[f64]) -> Result<Option<usize>> {
    convergence_slot_within(series, 0.02)
}

/// [`convergence_slot`] with a custom relative band.
pub fn convergence_slot_within(series: &[f64], band: f64) -> Result<Option<usize>> {
    if series.len() < 2 {
        return Err(Error::SeriesTooShort { len: series.len() });
    }
    let last = series.len() - 1;
    let target = series[last];
    let tol = band * target.abs();
    let mut start = last;
    while start > 0 && (series[start - 1] - target).abs() <= tol {
        start -= 1;
    }
    Ok((start < last).then_some(start + 1))
}
