use crate::error::{Error, Result};

/// Converts a gain in dB to a linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Converts a power level in dBm to Watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    db_to_linear(dbm - 30.0)
}

/// Physical and algorithmic constants, all in SI units.
///
/// The energy coefficient and the computation intensity are per user; both
/// vectors must have one entry per user.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    /// Bandwidth allocated to each user, Hz.
    pub bandwidth: f64,
    /// Slot duration, seconds.
    pub slot_duration: f64,
    pub pathloss_exponent: f64,
    /// Path-loss constant at the reference distance (linear).
    pub pathloss_gain: f64,
    /// Reference distance, meters.
    pub ref_distance: f64,
    /// Background noise power at both receivers, Watts.
    pub noise_power: f64,
    /// Chip energy coefficient per user, W·s³.
    pub energy_coeff: Vec<f64>,
    /// Computation intensity per user, CPU cycles per bit.
    pub cycles_per_bit: Vec<f64>,
    /// Power-amplifier coefficient.
    pub amp_coeff: f64,
    /// Constant circuit power of the offloading chain, Watts.
    pub circuit_power: f64,
    /// Per-user total power cap, Watts.
    pub p_max: f64,
    /// Peak local CPU frequency, Hz.
    pub f_max: f64,
    /// Lyapunov control weight trading queue length against efficiency.
    pub lyapunov_v: f64,
}

impl SystemParams {
    pub const DEFAULT_CIRCUIT_POWER: f64 = 0.1;

    /// The reference two-user configuration used throughout the experiments.
    pub fn reference(num_users: usize) -> Self {
        SystemParams {
            bandwidth: 1e6,
            slot_duration: 1.0,
            pathloss_exponent: 4.0,
            pathloss_gain: db_to_linear(-40.0),
            ref_distance: 1.0,
            noise_power: dbm_to_watts(-60.0),
            energy_coeff: vec![1e-28; num_users],
            cycles_per_bit: vec![737.5; num_users],
            amp_coeff: 1.0,
            circuit_power: Self::DEFAULT_CIRCUIT_POWER,
            p_max: 2.0,
            f_max: 2.15e9,
            lyapunov_v: 1e7,
        }
    }

    pub fn num_users(&self) -> usize {
        self.energy_coeff.len()
    }

    pub fn kappa(&self, user: usize) -> f64 {
        self.energy_coeff[user]
    }

    pub fn cycles(&self, user: usize) -> f64 {
        self.cycles_per_bit[user]
    }

    /// Largest transmit power user `user` may use while running its CPU at `freq`.
    pub fn tx_power_cap(&self, user: usize, freq: f64) -> f64 {
        let left = self.p_max - self.circuit_power - local_power(freq, self.kappa(user));
        (left / self.amp_coeff).max(0.0)
    }

    /// Largest CPU frequency user `user` may run at while transmitting at `power`.
    pub fn cpu_freq_cap(&self, user: usize, power: f64) -> f64 {
        let left = self.p_max - offload_power(power, self);
        if left <= 0.0 {
            return 0.0;
        }
        (left / self.kappa(user)).cbrt().min(self.f_max)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("bandwidth", self.bandwidth),
            ("slot_duration", self.slot_duration),
            ("pathloss_exponent", self.pathloss_exponent),
            ("pathloss_gain", self.pathloss_gain),
            ("ref_distance", self.ref_distance),
            ("noise_power", self.noise_power),
            ("amp_coeff", self.amp_coeff),
            ("circuit_power", self.circuit_power),
            ("p_max", self.p_max),
            ("f_max", self.f_max),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::invalid(name, format!("must be positive, got {value}")));
            }
        }
        if !(self.lyapunov_v.is_finite() && self.lyapunov_v >= 0.0) {
            return Err(Error::invalid(
                "lyapunov_v",
                format!("must be non-negative, got {}", self.lyapunov_v),
            ));
        }
        if self.energy_coeff.is_empty() {
            return Err(Error::invalid("energy_coeff", "at least one user is required"));
        }
        if self.cycles_per_bit.len() != self.energy_coeff.len() {
            return Err(Error::invalid(
                "cycles_per_bit",
                format!(
                    "has {} entries but energy_coeff has {}",
                    self.cycles_per_bit.len(),
                    self.energy_coeff.len()
                ),
            ));
        }
        for (name, values) in [
            ("energy_coeff", &self.energy_coeff),
            ("cycles_per_bit", &self.cycles_per_bit),
        ] {
            if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
                return Err(Error::invalid(name, format!("must be positive, got {v}")));
            }
        }
        if self.p_max <= self.circuit_power {
            return Err(Error::invalid(
                "p_max",
                format!(
                    "must exceed circuit_power ({} W), got {} W",
                    self.circuit_power, self.p_max
                ),
            ));
        }
        Ok(())
    }
}

/// Distances from one user to the MEC receiver and to the eavesdropper.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UserGeometry {
    pub dist_to_mec: f64,
    pub dist_to_eve: f64,
}

impl UserGeometry {
    pub fn new(dist_to_mec: f64, dist_to_eve: f64) -> Self {
        UserGeometry {
            dist_to_mec,
            dist_to_eve,
        }
    }

    /// Reference placement: user 0 at 80 m / 120 m, user 1 at 40 m / 80 m.
    pub fn reference() -> Vec<UserGeometry> {
        vec![UserGeometry::new(80.0, 120.0), UserGeometry::new(40.0, 80.0)]
    }

    pub fn validate(&self, params: &SystemParams) -> Result<()> {
        for d in [self.dist_to_mec, self.dist_to_eve] {
            if !(d >= params.ref_distance) {
                return Err(Error::InsideReferenceDistance {
                    distance: d,
                    reference: params.ref_distance,
                });
            }
        }
        Ok(())
    }
}

/// Local computing rate in bits/s for CPU frequency `freq` and intensity `cycles_per_bit`.
pub fn local_rate(freq: f64, cycles_per_bit: f64) -> f64 {
    freq / cycles_per_bit
}

/// Dynamic CPU power `κ f³`.
pub fn local_power(freq: f64, kappa: f64) -> f64 {
    kappa * freq * freq * freq
}

/// Power drawn by the offloading chain at transmit power `tx_power`.
pub fn offload_power(tx_power: f64, params: &SystemParams) -> f64 {
    params.amp_coeff * tx_power + params.circuit_power
}
