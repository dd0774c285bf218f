//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test --release --test acceptance`. Set `ACCEPTANCE_ONLY`
//! to a comma-separated list of criterion numbers to run a subset.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use noma_mec::cli::{execute, ExperimentManifest};
use noma_mec::model::{secure_offload_rates, sinrs, ChannelState, EveModel, SystemParams, UserGeometry};
use noma_mec::optimizer::{
    brute_force_slot_oracle, compare_closed_form, neg_log_lower_bound, optimal_cpu_frequency, sca_power_allocation,
    solve_slot, PowerProblem, SlotState,
};
use noma_mec::queueing::{effective_throughput, queue_update, ArrivalModel};
use noma_mec::schemes::SchemeId;
use noma_mec::sim::{
    convergence_slot_within, paired_difference, run_episode, run_experiment, ExperimentSummary, SimConfig, Sweep,
    SweepParam,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Realizations per sweep point for the trend criteria.
const SWEEP_REALIZATIONS: usize = 200;
/// First slot (0-based) of the post-convergence window.
const TAIL_START: usize = 300;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (lo.ln() + rng.random::<f64>() * (hi.ln() - lo.ln())).exp()
}

/// Random two-user slot instance at the reference constants.
struct Instance {
    channel: ChannelState,
    queues: [f64; 2],
    arrivals: [f64; 2],
    ee_ratio: f64,
}

impl Instance {
    fn state<'a>(&'a self, params: &'a SystemParams) -> SlotState<'a> {
        SlotState::new(params, &self.channel, &self.queues, &self.arrivals, self.ee_ratio).unwrap()
    }

    fn offset(&self) -> f64 {
        self.queues[0] * self.arrivals[0] + self.queues[1] * self.arrivals[1]
    }
}

fn oracle_instances(params: &SystemParams) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0AC1E);
    let geometry = UserGeometry::reference();
    let arrival = ArrivalModel::reference();
    (0..200)
        .map(|_| Instance {
            channel: ChannelState::sample(&mut rng, &geometry, params).unwrap(),
            queues: [log_uniform(&mut rng, 1e5, 1e10), log_uniform(&mut rng, 1e5, 1e10)],
            arrivals: [arrival.sample(&mut rng), arrival.sample(&mut rng)],
            ee_ratio: log_uniform(&mut rng, 1e5, 1e7),
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst_bound = f64::NEG_INFINITY;
    let mut worst_tight: f64 = 0.0;
    for _ in 0..10_000 {
        let x = 10.0 * (1.0 - rng.random::<f64>());
        let y = 10.0 * (1.0 - rng.random::<f64>());
        worst_bound = worst_bound.max(neg_log_lower_bound(x, y).unwrap() + x.ln());
        worst_tight = worst_tight.max((neg_log_lower_bound(x, 1.0 / x).unwrap() + x.ln()).abs());
    }
    let elapsed = start.elapsed();
    outcome(
        worst_bound <= 1e-12 && worst_tight <= 1e-12 && elapsed < Duration::from_secs(1),
        format!(
            "max φ(y)+ln x = {worst_bound:.3e}, max |φ(1/x)+ln x| = {worst_tight:.3e}, {:.1?}",
            elapsed
        ),
    )
}

/// Golden-section maximizer of a unimodal function on `[lo, hi]`.
fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    0.5 * (lo + hi)
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let params = SystemParams::reference(1);
    let geometry = [UserGeometry::reference()[0]];
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut interior, mut worst) = (0usize, 0.0f64);
    for _ in 0..1000 {
        let channel = ChannelState::sample(&mut rng, &geometry, &params).unwrap();
        let q = [log_uniform(&mut rng, 1e5, 1e10)];
        let a = [1.5e6];
        let eta = log_uniform(&mut rng, 1e5, 1e7);
        let p = rng.random::<f64>() * (params.p_max - params.circuit_power);
        let state = SlotState::new(&params, &channel, &q, &a, eta).unwrap();
        let got = optimal_cpu_frequency(&state, 0, p).hz;
        let cap = params.cpu_freq_cap(0, p);
        if got >= cap * (1.0 - 1e-12) {
            continue;
        }
        interior += 1;
        let (w, price) = (q[0] + params.lyapunov_v, params.lyapunov_v * eta);
        let objective = |f: f64| {
            w * f / params.cycles(0) * params.slot_duration - price * params.kappa(0) * f * f * f * params.slot_duration
        };
        let numeric = golden_section(objective, 0.0, cap);
        worst = worst.max((got - numeric).abs() / numeric);
    }
    let elapsed = start.elapsed();
    outcome(
        interior >= 100 && worst <= 1e-6 && elapsed < Duration::from_secs(10),
        format!("{interior}/1000 interior, max relative |f* − f_gs| = {worst:.3e}, {elapsed:.1?}"),
    )
}

struct OracleRun {
    outcomes: Vec<(Instance, noma_mec::optimizer::SlotSolution)>,
    detail3: String,
    pass3: bool,
}

fn criterion_3(params: &SystemParams) -> OracleRun {
    let start = Instant::now();
    let grid = 200;
    let mut pass = 0usize;
    let mut literal_pass = 0usize;
    let mut worst = f64::INFINITY;
    let mut offloading = 0usize;
    let mut outcomes = Vec::new();
    for inst in oracle_instances(params) {
        let state = inst.state(params);
        let solved = solve_slot(&state);
        let oracle = brute_force_slot_oracle(&state, grid).unwrap();
        // compare the decision-dependent parts; the constant −ΣQA dwarfs them at large backlogs
        let s = solved.objective + inst.offset();
        let o = oracle.objective + inst.offset();
        let ratio = (s - o) / o.abs().max(f64::MIN_POSITIVE);
        worst = worst.min(ratio);
        pass += usize::from(s >= o - 0.01 * o.abs());
        literal_pass += usize::from(solved.objective >= oracle.objective - 0.01 * oracle.objective.abs());
        offloading += usize::from(solved.decision.tx_power.iter().any(|p| *p > 0.0));
        outcomes.push((inst, solved));
    }
    let elapsed = start.elapsed();
    OracleRun {
        pass3: pass == 200 && elapsed < Duration::from_secs(300),
        detail3: format!(
            "{pass}/200 within 1% on the decision-dependent objective (worst (solve−oracle)/|oracle| = {worst:+.3e}), \
             {literal_pass}/200 on the full objective, {offloading} instances offload, grid {grid}², {elapsed:.1?}"
        ),
        outcomes,
    }
}

fn criterion_4(params: &SystemParams, run: &OracleRun) -> Outcome {
    let mut worst_drop: f64 = 0.0;
    let mut worst_gap: f64 = 0.0;
    let mut iterations = 0usize;
    let mut monotone_fail = 0usize;
    let mut tight_fail = 0usize;
    let mut runs = 0usize;
    for (inst, solved) in &run.outcomes {
        let state = inst.state(params);
        let f = &solved.decision.cpu_freq;
        let top: Vec<f64> = (0..2).map(|u| params.tx_power_cap(u, f[u])).collect();
        for init in [vec![0.0, 0.0], top, solved.decision.tx_power.clone()] {
            runs += 1;
            let out = sca_power_allocation(&state, f, &init);
            iterations += out.history.len();
            let seq: Vec<f64> = out.surrogate_sequence().collect();
            let drop = seq.windows(2).map(|w| w[0] - w[1]).fold(0.0, f64::max);
            worst_drop = worst_drop.max(drop);
            monotone_fail += usize::from(drop > 1e-9);
            for r in &out.history {
                let gap = if r.smooth_after_aux == 0.0 {
                    r.surrogate_after_aux.abs()
                } else {
                    ((r.surrogate_after_aux - r.smooth_after_aux) / r.smooth_after_aux).abs()
                };
                worst_gap = worst_gap.max(gap);
                tight_fail += usize::from(gap > 1e-10);
            }
        }
    }
    outcome(
        monotone_fail == 0 && tight_fail == 0,
        format!(
            "{runs} SCA runs, {iterations} iterations: max surrogate decrease {worst_drop:.3e} \
             ({monotone_fail} runs > 1e-9), max tightness gap {worst_gap:.3e} ({tight_fail} updates > 1e-10)"
        ),
    )
}

fn errata_path() -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("closed_form_errata.csv")
}

fn criterion_5(params: &SystemParams, run: &OracleRun) -> Outcome {
    let path = errata_path();
    let mut report = String::from(
        "instance,q_1,q_2,ee_ratio,h_b1,h_b2,h_e1,h_e2,closed_p1,closed_p2,numeric_p1,numeric_p2,relative_gap,roots_in_box,fallback\n",
    );
    let (mut agree, mut flagged, mut fallback) = (0usize, 0usize, 0usize);
    for (i, (inst, solved)) in run.outcomes.iter().enumerate() {
        let state = inst.state(params);
        let f = &solved.decision.cpu_freq;
        let aux = PowerProblem::new(&state, f).aux_at(&solved.decision.tx_power);
        let check = compare_closed_form(&state, f, &aux, 0.01).unwrap();
        fallback += usize::from(check.closed_form.fallback);
        if check.agrees {
            agree += 1;
            continue;
        }
        flagged += 1;
        let ch = &inst.channel;
        let cf = &check.closed_form.tx_power;
        let np = &check.numeric_power;
        writeln!(
            report,
            "{i},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{},{}",
            inst.queues[0],
            inst.queues[1],
            inst.ee_ratio,
            ch.gain_to_mec()[0],
            ch.gain_to_mec()[1],
            ch.gain_to_eve()[0],
            ch.gain_to_eve()[1],
            cf[0],
            cf[1],
            np[0],
            np[1],
            check.relative_gap,
            check.closed_form.roots_in_box,
            check.closed_form.fallback
        )
        .unwrap();
    }
    let written = std::fs::write(&path, report).is_ok() && path.exists();
    outcome(
        written && agree + flagged == run.outcomes.len(),
        format!(
            "{agree} agree within 1%, {flagged} flagged ({fallback} used the numeric fallback); errata report {}",
            path.display()
        ),
    )
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst_identity: f64 = 0.0;
    let mut violations = 0usize;
    for _ in 0..10_000 {
        let n = rng.random_range(1..=5);
        let mut params = SystemParams::reference(n);
        params.noise_power = log_uniform(&mut rng, 1e-12, 1e-6);
        let hb: Vec<f64> = (0..n).map(|_| log_uniform(&mut rng, 1e-13, 1e-7)).collect();
        let he: Vec<f64> = (0..n).map(|_| log_uniform(&mut rng, 1e-13, 1e-7)).collect();
        let ch = ChannelState::new(hb.clone(), he).unwrap();
        let p: Vec<f64> = (0..n).map(|_| 2.0 * rng.random::<f64>()).collect();

        // SIC: per-user log-rates telescope to the log of total received power
        let (gb, ge) = sinrs(&p, &ch, &params, EveModel::Sic);
        let sum_log: f64 = gb.iter().map(|g| g.ln_1p()).sum();
        let total = hb.iter().zip(&p).map(|(h, p)| h * p).sum::<f64>() / params.noise_power;
        worst_identity = worst_identity.max((sum_log - total.ln_1p()).abs() / total.ln_1p().max(1e-300));
        let (_, ge_full) = sinrs(&p, &ch, &params, EveModel::FullyDecode);
        violations += ge
            .iter()
            .zip(&ge_full)
            .filter(|(s, f)| **s > **f * (1.0 + 1e-12))
            .count();
        let sic = secure_offload_rates(&p, &ch, &params, EveModel::Sic);
        let full = secure_offload_rates(&p, &ch, &params, EveModel::FullyDecode);
        violations += sic.iter().filter(|r| **r < 0.0).count();
        violations += sic
            .iter()
            .zip(&full)
            .filter(|(s, f)| **f > **s * (1.0 + 1e-12) + 1e-9)
            .count();

        let q = log_uniform(&mut rng, 1.0, 1e10) * f64::from(u8::from(rng.random_bool(0.9)));
        let r = log_uniform(&mut rng, 1.0, 1e8);
        let a = 1e6 * rng.random::<f64>();
        let tau = 1.0;
        let next = queue_update(q, r, tau, a);
        let drained = effective_throughput(q, r, tau) * tau;
        violations += usize::from(next < a || next < 0.0);
        violations += usize::from((next - (q - drained + a)).abs() > 1e-9 * next.max(1.0));
        violations += usize::from(drained > q || drained > r * tau);
    }
    let elapsed = start.elapsed();
    outcome(
        worst_identity <= 1e-12 && violations == 0 && elapsed < Duration::from_secs(5),
        format!(
            "telescoping max relative error {worst_identity:.3e}, {violations} invariant violations, {elapsed:.1?}"
        ),
    )
}

fn reference_config(realizations: usize) -> SimConfig {
    SimConfig {
        num_realizations: realizations,
        num_slots: 1000,
        seed: 2024,
        ..SimConfig::reference()
    }
}

fn run_all_schemes(config: &SimConfig) -> Vec<Vec<ExperimentSummary>> {
    SchemeId::ALL
        .iter()
        .map(|&s| run_experiment(&config.with_scheme(s)).unwrap())
        .collect()
}

fn criterion_7(runs: &[Vec<ExperimentSummary>], elapsed: Duration) -> Outcome {
    let [prop, full, eve] = [&runs[0][0], &runs[1][0], &runs[2][0]];
    let tail = |s: &ExperimentSummary| s.per_realization_ee_from(TAIL_START);
    let (g1, se1) = paired_difference(&tail(prop), &tail(eve)).unwrap();
    let (g2, se2) = paired_difference(&tail(eve), &tail(full)).unwrap();
    let mut detail = format!(
        "tail EE proposed {:.6e}, eve_fully_decode {:.6e}, full_offloading {:.6e}; \
         proposed−eve {g1:+.3e} (se {se1:.2e}), eve−full {g2:+.3e} (se {se2:.2e}); ±5% by slot",
        mean(&tail(prop)),
        mean(&tail(eve)),
        mean(&tail(full))
    );
    let mut settled = true;
    for s in [prop, eve, full] {
        let slot = convergence_slot_within(&s.mean_running_ee, 0.05).unwrap();
        settled &= slot.is_some_and(|t| t <= TAIL_START);
        let _ = write!(
            detail,
            " {}={}",
            s.scheme,
            slot.map_or("never".into(), |t| t.to_string())
        );
    }
    let _ = write!(detail, "; {elapsed:.1?}");
    let pass = g1 > se1 && g2 > se2 && settled && elapsed < Duration::from_secs(600);
    // informational: how often the proposed policy transmits at all after the first slot
    let config = reference_config(20);
    let (mut active, mut total) = (0usize, 0usize);
    for r in 0..config.num_realizations {
        let trace = run_episode(&config, r).unwrap();
        total += trace.len() - 1;
        active += trace[1..]
            .iter()
            .filter(|t| t.tx_power.iter().any(|p| *p > 0.0))
            .count();
    }
    let _ = write!(
        detail,
        "; diagnostic: proposed transmits in {active} of {total} slots after slot 1"
    );
    outcome(pass, detail)
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sweep summaries for every scheme, indexed `[scheme][sweep point]`.
fn run_sweep(param: SweepParam) -> Vec<Vec<ExperimentSummary>> {
    let config = SimConfig {
        sweep: Some(Sweep::with_defaults(param)),
        ..reference_config(SWEEP_REALIZATIONS)
    };
    run_all_schemes(&config)
}

/// Checks `direction · (x[i+1] − x[i]) ≥ −stderr` for consecutive points,
/// where `x` is the per-realization series returned by `value`.
fn monotone(
    points: &[ExperimentSummary],
    value: impl Fn(&ExperimentSummary) -> Vec<f64>,
    direction: f64,
) -> (bool, f64) {
    let mut ok = true;
    let mut worst = f64::INFINITY;
    for w in points.windows(2) {
        let (d, se) = paired_difference(&value(&w[1]), &value(&w[0])).unwrap();
        let slack = direction * d + se;
        worst = worst.min(direction * d / se.max(f64::MIN_POSITIVE));
        ok &= slack >= 0.0;
    }
    (ok, worst)
}

fn gap_series(prop: &ExperimentSummary, full: &ExperimentSummary) -> Vec<f64> {
    prop.per_realization_ee()
        .iter()
        .zip(full.per_realization_ee())
        .map(|(p, f)| p - f)
        .collect()
}

fn trend_criterion(
    runs: &[Vec<ExperimentSummary>],
    ee_direction: f64,
    gap_direction: f64,
    elapsed: Duration,
) -> Outcome {
    let mut pass = true;
    let mut detail = String::new();
    for points in runs {
        let (ok, worst) = monotone(points, |s| s.per_realization_ee(), ee_direction);
        pass &= ok;
        let means: Vec<String> = points.iter().map(|s| format!("{:.4e}", s.mean_ee)).collect();
        let _ = write!(
            detail,
            "{} [{}] {} (worst step {worst:+.2} se); ",
            points[0].scheme,
            means.join(", "),
            if ok { "ok" } else { "violated" }
        );
    }
    let (prop, full) = (&runs[0], &runs[1]);
    let gaps: Vec<Vec<f64>> = prop.iter().zip(full).map(|(p, f)| gap_series(p, f)).collect();
    let mut gap_ok = true;
    let mut gap_means = Vec::new();
    for (i, g) in gaps.iter().enumerate() {
        gap_means.push(format!("{:.4e}", mean(g)));
        if i > 0 {
            let (d, se) = paired_difference(g, &gaps[i - 1]).unwrap();
            gap_ok &= gap_direction * d + se >= 0.0;
        }
    }
    pass &= gap_ok;
    let _ = write!(
        detail,
        "proposed−full_offloading gap [{}] {}; {elapsed:.1?}",
        gap_means.join(", "),
        if gap_ok { "ok" } else { "violated" }
    );
    let _ = write!(detail, "; {}", tail_diagnostic(runs));
    outcome(pass, detail)
}

fn criterion_10(runs: &[Vec<ExperimentSummary>], elapsed: Duration) -> Outcome {
    let mut pass = true;
    let mut detail = String::new();
    for points in runs {
        let (ok, worst) = monotone(points, |s| s.per_realization_ee(), 1.0);
        let n = points.len();
        let last = points[n - 1].mean_ee;
        let step = (last - points[n - 2].mean_ee) / last;
        let flat = step.abs() < 0.05;
        pass &= ok && flat;
        let means: Vec<String> = points.iter().map(|s| format!("{:.4e}", s.mean_ee)).collect();
        let _ = write!(
            detail,
            "{} [{}] monotone {} (worst step {worst:+.2} se), last increment {:+.2}%; ",
            points[0].scheme,
            means.join(", "),
            if ok { "ok" } else { "violated" },
            100.0 * step
        );
    }
    let _ = write!(detail, "{elapsed:.1?}; {}", tail_diagnostic(runs));
    outcome(pass, detail)
}

/// Informational: mean efficiency over slots after the warm-up window.
fn tail_diagnostic(runs: &[Vec<ExperimentSummary>]) -> String {
    let parts: Vec<String> = runs
        .iter()
        .map(|points| {
            let means: Vec<String> = points
                .iter()
                .map(|s| format!("{:.4e}", mean(&s.per_realization_ee_from(TAIL_START))))
                .collect();
            format!("{} [{}]", points[0].scheme, means.join(", "))
        })
        .collect();
    format!("diagnostic: EE after slot {TAIL_START}: {}", parts.join(", "))
}

/// Least-squares slope of `y` against its index and the slope's standard error.
fn ols_slope(y: &[f64]) -> (f64, f64) {
    let n = y.len() as f64;
    let xm = (n - 1.0) / 2.0;
    let ym = mean(y);
    let sxx: f64 = (0..y.len()).map(|i| (i as f64 - xm).powi(2)).sum();
    let sxy: f64 = y.iter().enumerate().map(|(i, v)| (i as f64 - xm) * (v - ym)).sum();
    let slope = sxy / sxx;
    let rss: f64 = y
        .iter()
        .enumerate()
        .map(|(i, v)| (v - ym - slope * (i as f64 - xm)).powi(2))
        .sum();
    (slope, (rss / (n - 2.0) / sxx).sqrt())
}

fn criterion_11(proposed: &ExperimentSummary) -> Outcome {
    let window = &proposed.mean_queue_series[499..1000];
    let (slope, se) = ols_slope(window);
    // informational: the same statistic late in a longer horizon
    let long = SimConfig {
        num_slots: 8000,
        ..reference_config(20)
    };
    let series = run_experiment(&long).unwrap().remove(0).mean_queue_series;
    let (late_slope, late_se) = ols_slope(&series[3999..]);
    outcome(
        slope <= se,
        format!(
            "mean total queue over slots 500–1000 {:.4e} bits, slope {slope:+.3e} bits/slot (se {se:.3e}); \
             diagnostic: 20 realizations of 8000 slots, slots 4000–8000 mean {:.4e} bits, slope {late_slope:+.3e} (se {late_se:.3e})",
            mean(window),
            mean(&series[3999..])
        ),
    )
}

fn criterion_12() -> Outcome {
    let start = Instant::now();
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let mut bytes = Vec::new();
    for dir in &dirs {
        let manifest = ExperimentManifest {
            config: reference_config(200),
            output_dir: dir.path().to_path_buf(),
            ..ExperimentManifest::reference()
        };
        let out = execute(&manifest).unwrap();
        bytes.push(std::fs::read(out.summary.unwrap()).unwrap());
    }
    outcome(
        bytes[0] == bytes[1] && !bytes[0].is_empty(),
        format!(
            "two runs, {} summary bytes each, identical: {}, {:.1?}",
            bytes[0].len(),
            bytes[0] == bytes[1],
            start.elapsed()
        ),
    )
}

fn main() -> ExitCode {
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("error")).try_init();
    let only: Option<BTreeSet<u32>> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|v| v.split(',').filter_map(|s| s.trim().parse().ok()).collect());
    let wanted = |n: u32| only.as_ref().is_none_or(|s| s.contains(&n));
    let params = SystemParams::reference(2);

    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();
    let mut report = |n: u32, name: &'static str, o: Outcome| {
        println!(
            "criterion {n:>2} [{}] {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        results.push((n, name, o));
    };

    if wanted(1) {
        report(1, "logarithm lower bound and tightness", criterion_1());
    }
    if wanted(2) {
        report(2, "closed-form CPU frequency vs golden section", criterion_2());
    }
    if wanted(3) || wanted(4) || wanted(5) {
        let run = criterion_3(&params);
        if wanted(3) {
            report(
                3,
                "slot solver vs brute-force oracle",
                outcome(run.pass3, run.detail3.clone()),
            );
        }
        if wanted(4) {
            report(4, "SCA monotonicity and tightness", criterion_4(&params, &run));
        }
        if wanted(5) {
            report(5, "two-user closed form vs numeric solver", criterion_5(&params, &run));
        }
    }
    if wanted(6) {
        report(6, "SIC telescoping and queue invariants", criterion_6());
    }
    if wanted(7) || wanted(11) {
        let start = Instant::now();
        let runs = run_all_schemes(&reference_config(200));
        let elapsed = start.elapsed();
        if wanted(7) {
            report(7, "scheme ordering and convergence", criterion_7(&runs, elapsed));
        }
        if wanted(11) {
            report(11, "queue stability", criterion_11(&runs[0][0]));
        }
    }
    if wanted(8) {
        let start = Instant::now();
        let runs = run_sweep(SweepParam::TaskLength);
        report(
            8,
            "task-length trend",
            trend_criterion(&runs, -1.0, 1.0, start.elapsed()),
        );
    }
    if wanted(9) {
        let start = Instant::now();
        let runs = run_sweep(SweepParam::EveDistance);
        report(
            9,
            "eavesdropper-distance trend",
            trend_criterion(&runs, 1.0, -1.0, start.elapsed()),
        );
    }
    if wanted(10) {
        let start = Instant::now();
        let runs = run_sweep(SweepParam::PMax);
        report(10, "power-budget trend", criterion_10(&runs, start.elapsed()));
    }
    if wanted(12) {
        report(12, "determinism of summary output", criterion_12());
    }

    let failed: Vec<u32> = results.iter().filter(|r| !r.2.pass).map(|r| r.0).collect();
    println!(
        "acceptance: {} passed, {} failed{}",
        results.len() - failed.len(),
        failed.len(),
        if failed.is_empty() {
            String::new()
        } else {
            format!(" (criteria {failed:?})")
        }
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
