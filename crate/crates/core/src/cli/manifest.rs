//! Experiment manifests: a flat TOML table in natural units.
//!
//! Every key is optional and defaults to the reference configuration, so an
//! empty file is a valid manifest. Physical quantities are either bare
//! numbers in SI units or strings with a unit, for example
//! `noise_power = "-60 dBm"`, `pathloss_gain = "-40 dB"`,
//! `f_max = "2.15 GHz"`. Unknown keys are rejected.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use toml::Spanned;

use crate::error::{Error, Result};
use crate::model::{db_to_linear, dbm_to_watts, SystemParams, UserGeometry};
use crate::queueing::ArrivalModel;
use crate::schemes::SchemeId;
use crate::sim::{SimConfig, Sweep, SweepParam};

/// A validated manifest, converted to SI units.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentManifest {
    /// Simulation settings. `config.scheme` is the first entry of `schemes`.
    pub config: SimConfig,
    pub schemes: Vec<SchemeId>,
    pub output_dir: PathBuf,
    pub emit_trace: bool,
    pub emit_summary: bool,
    pub emit_figure_data: bool,
}

impl ExperimentManifest {
    pub const DEFAULT_OUTPUT: &'static str = "results";

    /// The reference configuration with every scheme selected.
    pub fn reference() -> Self {
        ExperimentManifest {
            config: SimConfig::reference(),
            schemes: SchemeId::ALL.to_vec(),
            output_dir: PathBuf::from(Self::DEFAULT_OUTPUT),
            emit_trace: false,
            emit_summary: true,
            emit_figure_data: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Dimension {
    Plain,
    Gain,
    Frequency,
    Power,
    Time,
    Distance,
    Bits,
}

impl Dimension {
    fn describe(self) -> &'static str {
        match self {
            Dimension::Plain => "a plain number",
            Dimension::Gain => "a linear ratio or dB",
            Dimension::Frequency => "Hz, kHz, MHz or GHz",
            Dimension::Power => "W, mW, dBm or dBW",
            Dimension::Time => "s or ms",
            Dimension::Distance => "m or km",
            Dimension::Bits => "bit, kbit or Mbit",
        }
    }

    fn convert(self, value: f64, unit: &str) -> Option<f64> {
        let scale = |s: f64| Some(value * s);
        match (self, unit) {
            (_, "") => Some(value),
            (Dimension::Gain, "dB") => Some(db_to_linear(value)),
            (Dimension::Frequency, "Hz") => scale(1.0),
            (Dimension::Frequency, "kHz") => scale(1e3),
            (Dimension::Frequency, "MHz") => scale(1e6),
            (Dimension::Frequency, "GHz") => scale(1e9),
            (Dimension::Power, "W") => scale(1.0),
            (Dimension::Power, "mW") => scale(1e-3),
            (Dimension::Power, "dBm") => Some(dbm_to_watts(value)),
            (Dimension::Power, "dBW") => Some(db_to_linear(value)),
            (Dimension::Time, "s") => scale(1.0),
            (Dimension::Time, "ms") => scale(1e-3),
            (Dimension::Distance, "m") => scale(1.0),
            (Dimension::Distance, "km") => scale(1e3),
            (Dimension::Bits, "bit" | "bits") => scale(1.0),
            (Dimension::Bits, "kbit") => scale(1e3),
            (Dimension::Bits, "Mbit") => scale(1e6),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Quantity {
    Number(f64),
    Text(String),
}

impl Quantity {
    fn to_si(&self, dim: Dimension) -> std::result::Result<f64, String> {
        match self {
            Quantity::Number(v) => Ok(*v),
            Quantity::Text(text) => {
                let text = text.trim();
                // longest numeric prefix followed by a unit
                let split = text
                    .char_indices()
                    .map(|(i, _)| i)
                    .chain([text.len()])
                    .rev()
                    .find(|&i| text[..i].trim().parse::<f64>().is_ok())
                    .ok_or_else(|| format!("`{text}` does not start with a number"))?;
                let value: f64 = text[..split].trim().parse().expect("checked above");
                let unit = text[split..].trim();
                dim.convert(value, unit)
                    .ok_or_else(|| format!("unit `{unit}` not accepted here; expected {}", dim.describe()))
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum PerUser {
    One(Quantity),
    Many(Vec<Quantity>),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifest {
    bandwidth: Option<Spanned<Quantity>>,
    slot_duration: Option<Spanned<Quantity>>,
    pathloss_exponent: Option<Spanned<Quantity>>,
    pathloss_gain: Option<Spanned<Quantity>>,
    ref_distance: Option<Spanned<Quantity>>,
    noise_power: Option<Spanned<Quantity>>,
    energy_coeff: Option<Spanned<PerUser>>,
    cycles_per_bit: Option<Spanned<PerUser>>,
    amp_coeff: Option<Spanned<Quantity>>,
    circuit_power: Option<Spanned<Quantity>>,
    p_max: Option<Spanned<Quantity>>,
    f_max: Option<Spanned<Quantity>>,
    lyapunov_v: Option<Spanned<Quantity>>,
    num_users: Option<Spanned<i64>>,
    dist_to_mec: Option<Spanned<Vec<Quantity>>>,
    dist_to_eve: Option<Spanned<Vec<Quantity>>>,
    arrival_min: Option<Spanned<Quantity>>,
    arrival_max: Option<Spanned<Quantity>>,
    slots: Option<Spanned<i64>>,
    realizations: Option<Spanned<i64>>,
    seed: Option<Spanned<i64>>,
    scheme: Option<Spanned<String>>,
    sweep: Option<Spanned<String>>,
    sweep_values: Option<Spanned<Vec<Quantity>>>,
    output: Option<Spanned<String>>,
    emit_trace: Option<bool>,
    emit_summary: Option<bool>,
    emit_figure_data: Option<bool>,
}

/// Reads and validates the manifest at `path`.
pub fn load_manifest(path: &Path) -> Result<ExperimentManifest> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Manifest {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    parse_manifest(&text, path)
}

/// Parses manifest `text`; `path` is only used in error messages.
pub fn parse_manifest(text: &str, path: &Path) -> Result<ExperimentManifest> {
    let raw: RawManifest = toml::from_str(text).map_err(|e| Error::Manifest {
        path: path.to_path_buf(),
        message: e.to_string().trim_end().to_string(),
    })?;
    let lines = key_lines(text);
    let line_of = |span: std::ops::Range<usize>| text[..span.start.min(text.len())].matches('\n').count() + 1;
    let fail = |key: &str, line: usize, message: String| Error::Manifest {
        path: path.to_path_buf(),
        message: format!("line {line}: invalid value for `{key}`: {message}"),
    };

    macro_rules! quantity {
        ($field:ident, $dim:expr, $default:expr) => {
            match &raw.$field {
                None => $default,
                Some(s) => {
                    let line = line_of(s.span());
                    s.get_ref()
                        .to_si($dim)
                        .map_err(|m| fail(stringify!($field), line, m))?
                }
            }
        };
    }
    macro_rules! count {
        ($field:ident, $default:expr) => {
            match &raw.$field {
                None => $default,
                Some(s) => {
                    let line = line_of(s.span());
                    let v = *s.get_ref();
                    if v < 0 {
                        return Err(fail(
                            stringify!($field),
                            line,
                            format!("must be non-negative, got {v}"),
                        ));
                    }
                    v as u64
                }
            }
        };
    }

    let defaults = ExperimentManifest::reference();
    let reference_geometry = UserGeometry::reference();

    let mec = per_user_list(&raw.dist_to_mec, Dimension::Distance, "dist_to_mec", &line_of, &fail)?;
    let eve = per_user_list(&raw.dist_to_eve, Dimension::Distance, "dist_to_eve", &line_of, &fail)?;
    let num_users = match (&raw.num_users, &mec, &eve) {
        (Some(n), ..) => {
            let line = line_of(n.span());
            let v = *n.get_ref();
            if v < 1 {
                return Err(fail("num_users", line, format!("must be at least 1, got {v}")));
            }
            v as usize
        }
        (None, Some((m, _)), _) => m.len(),
        (None, None, Some((e, _))) => e.len(),
        (None, None, None) => reference_geometry.len(),
    };
    let distances = |list: Option<(Vec<f64>, usize)>, key: &str, pick: fn(&UserGeometry) -> f64| match list {
        Some((v, line)) if v.len() != num_users => Err(fail(
            key,
            line,
            format!("lists {} users but num_users is {num_users}", v.len()),
        )),
        Some((v, _)) => Ok(v),
        None if num_users == reference_geometry.len() => Ok(reference_geometry.iter().map(pick).collect()),
        None => Err(Error::Manifest {
            path: path.to_path_buf(),
            message: format!("`{key}` is required when num_users is {num_users}"),
        }),
    };
    let mec_line = mec.as_ref().map(|(_, l)| *l);
    let eve_line = eve.as_ref().map(|(_, l)| *l);
    let dist_to_mec = distances(mec, "dist_to_mec", |g| g.dist_to_mec)?;
    let dist_to_eve = distances(eve, "dist_to_eve", |g| g.dist_to_eve)?;

    let reference = SystemParams::reference(num_users);
    let per_user = |field: &Option<Spanned<PerUser>>, key: &'static str, default: &[f64]| match field {
        None => Ok(default.to_vec()),
        Some(s) => {
            let line = line_of(s.span());
            let values = match s.get_ref() {
                PerUser::One(q) => vec![q.to_si(Dimension::Plain).map_err(|m| fail(key, line, m))?; num_users],
                PerUser::Many(qs) => qs
                    .iter()
                    .map(|q| q.to_si(Dimension::Plain).map_err(|m| fail(key, line, m)))
                    .collect::<Result<Vec<_>>>()?,
            };
            if values.len() != num_users {
                return Err(fail(
                    key,
                    line,
                    format!("lists {} users but num_users is {num_users}", values.len()),
                ));
            }
            Ok(values)
        }
    };
    let energy_coeff = per_user(&raw.energy_coeff, "energy_coeff", &reference.energy_coeff)?;
    let cycles_per_bit = per_user(&raw.cycles_per_bit, "cycles_per_bit", &reference.cycles_per_bit)?;

    let params = SystemParams {
        bandwidth: quantity!(bandwidth, Dimension::Frequency, reference.bandwidth),
        slot_duration: quantity!(slot_duration, Dimension::Time, reference.slot_duration),
        pathloss_exponent: quantity!(pathloss_exponent, Dimension::Plain, reference.pathloss_exponent),
        pathloss_gain: quantity!(pathloss_gain, Dimension::Gain, reference.pathloss_gain),
        ref_distance: quantity!(ref_distance, Dimension::Distance, reference.ref_distance),
        noise_power: quantity!(noise_power, Dimension::Power, reference.noise_power),
        energy_coeff,
        cycles_per_bit,
        amp_coeff: quantity!(amp_coeff, Dimension::Plain, reference.amp_coeff),
        circuit_power: quantity!(circuit_power, Dimension::Power, reference.circuit_power),
        p_max: quantity!(p_max, Dimension::Power, reference.p_max),
        f_max: quantity!(f_max, Dimension::Frequency, reference.f_max),
        lyapunov_v: quantity!(lyapunov_v, Dimension::Plain, reference.lyapunov_v),
    };
    let at_line = |err: Error| match err {
        Error::InvalidParameter { name, reason } => match lines.get(name.as_str()) {
            Some(&line) => fail(&name, line, reason),
            None => Error::Manifest {
                path: path.to_path_buf(),
                message: format!("invalid value for `{name}`: {reason}"),
            },
        },
        other => other,
    };
    params.validate().map_err(at_line)?;

    for (key, values, line) in [
        ("dist_to_mec", &dist_to_mec, mec_line),
        ("dist_to_eve", &dist_to_eve, eve_line),
    ] {
        if let Some(d) = values.iter().find(|d| !(**d >= params.ref_distance)) {
            let message = format!(
                "distance {d} m is inside the reference distance {} m",
                params.ref_distance
            );
            return Err(match line {
                Some(line) => fail(key, line, message),
                None => Error::Manifest {
                    path: path.to_path_buf(),
                    message: format!("invalid value for `{key}`: {message}"),
                },
            });
        }
    }
    let geometry = dist_to_mec
        .iter()
        .zip(&dist_to_eve)
        .map(|(&m, &e)| UserGeometry::new(m, e))
        .collect();

    let reference_arrival = ArrivalModel::reference();
    let low = quantity!(arrival_min, Dimension::Bits, reference_arrival.low());
    let high = quantity!(arrival_max, Dimension::Bits, reference_arrival.high());
    let arrival = ArrivalModel::new(low, high).map_err(|e| match e {
        Error::InvalidParameter { reason, .. } => {
            let key = if raw.arrival_max.is_some() {
                "arrival_max"
            } else {
                "arrival_min"
            };
            match lines.get(key) {
                Some(&line) => fail(key, line, reason),
                None => Error::Manifest {
                    path: path.to_path_buf(),
                    message: format!("invalid value for `{key}`: {reason}"),
                },
            }
        }
        other => other,
    })?;

    let schemes = match &raw.scheme {
        None => defaults.schemes.clone(),
        Some(s) => parse_schemes(s.get_ref()).map_err(|m| fail("scheme", line_of(s.span()), m))?,
    };
    let sweep_param = match &raw.sweep {
        None => None,
        Some(s) => parse_sweep(s.get_ref()).map_err(|m| fail("sweep", line_of(s.span()), m))?,
    };
    let sweep = match (sweep_param, &raw.sweep_values) {
        (None, Some(v)) if raw.sweep.is_some() => {
            return Err(fail(
                "sweep_values",
                line_of(v.span()),
                "given but sweep is `none`".into(),
            ));
        }
        (None, Some(v)) => {
            return Err(fail("sweep_values", line_of(v.span()), "given without `sweep`".into()));
        }
        (None, None) => None,
        (Some(param), None) => Some(Sweep::with_defaults(param)),
        (Some(param), Some(v)) => {
            let line = line_of(v.span());
            let dim = match param {
                SweepParam::PMax => Dimension::Power,
                SweepParam::TaskLength | SweepParam::EveDistance => Dimension::Plain,
            };
            let values = v
                .get_ref()
                .iter()
                .map(|q| q.to_si(dim).map_err(|m| fail("sweep_values", line, m)))
                .collect::<Result<Vec<_>>>()?;
            Some(Sweep::new(param, values).map_err(|e| match e {
                Error::InvalidParameter { reason, .. } => fail("sweep_values", line, reason),
                other => other,
            })?)
        }
    };

    let num_slots = count!(slots, defaults.config.num_slots as u64) as usize;
    let num_realizations = count!(realizations, defaults.config.num_realizations as u64) as usize;
    let seed = count!(seed, defaults.config.seed);
    for (key, value) in [("slots", num_slots), ("realizations", num_realizations)] {
        if value == 0 {
            let line = lines.get(key).copied().unwrap_or(0);
            return Err(fail(key, line, "must be at least 1".into()));
        }
    }

    let config = SimConfig {
        params,
        geometry,
        arrival,
        num_slots,
        num_realizations,
        seed,
        scheme: schemes[0],
        sweep,
    };
    config.validate().map_err(at_line)?;
    Ok(ExperimentManifest {
        config,
        schemes,
        output_dir: raw
            .output
            .map(|s| PathBuf::from(s.into_inner()))
            .unwrap_or(defaults.output_dir),
        emit_trace: raw.emit_trace.unwrap_or(defaults.emit_trace),
        emit_summary: raw.emit_summary.unwrap_or(defaults.emit_summary),
        emit_figure_data: raw.emit_figure_data.unwrap_or(defaults.emit_figure_data),
    })
}

/// Line number of each top-level `key = ...` assignment.
fn key_lines(text: &str) -> HashMap<String, usize> {
    text.lines()
        .enumerate()
        .filter_map(|(i, line)| {
            let (key, _) = line.split_once('=')?;
            let key = key.trim();
            (!key.is_empty() && key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_'))
                .then(|| (key.to_string(), i + 1))
        })
        .collect()
}

type LineOf<'a> = dyn Fn(std::ops::Range<usize>) -> usize + 'a;
type Fail<'a> = dyn Fn(&str, usize, String) -> Error + 'a;

fn per_user_list(
    field: &Option<Spanned<Vec<Quantity>>>,
    dim: Dimension,
    key: &str,
    line_of: &LineOf<'_>,
    fail: &Fail<'_>,
) -> Result<Option<(Vec<f64>, usize)>> {
    let Some(s) = field else { return Ok(None) };
    let line = line_of(s.span());
    let values = s
        .get_ref()
        .iter()
        .map(|q| q.to_si(dim).map_err(|m| fail(key, line, m)))
        .collect::<Result<Vec<_>>>()?;
    if values.is_empty() {
        return Err(fail(key, line, "needs one entry per user".into()));
    }
    Ok(Some((values, line)))
}

/// `all` or one scheme name.
pub fn parse_schemes(s: &str) -> std::result::Result<Vec<SchemeId>, String> {
    if s == "all" {
        return Ok(SchemeId::ALL.to_vec());
    }
    s.parse::<SchemeId>()
        .map(|id| vec![id])
        .map_err(|_| format!("unknown scheme `{s}`; expected proposed, full_offloading, eve_fully_decode or all"))
}

/// `none` or one sweep parameter name.
pub fn parse_sweep(s: &str) -> std::result::Result<Option<SweepParam>, String> {
    if s == "none" {
        return Ok(None);
    }
    s.parse::<SweepParam>()
        .map(Some)
        .map_err(|_| format!("unknown sweep `{s}`; expected task_length, eve_distance, p_max or none"))
}
