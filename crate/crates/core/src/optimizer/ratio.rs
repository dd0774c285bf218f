/// Running sums behind the efficiency ratio `η* = Σ R τ / Σ P τ`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EeAccumulator {
    /// Σ R_tot τ over recorded slots, bits.
    pub sum_bits: f64,
    /// Σ P_tot τ over recorded slots, Joules.
    pub sum_energy: f64,
}

impl EeAccumulator {
    /// Current ratio; zero before any energy has been spent.
    pub fn ratio(&self) -> f64 {
        if self.sum_energy > 0.0 {
            self.sum_bits / self.sum_energy
        } else {
            0.0
        }
    }

    pub fn record(&mut self, total_rate: f64, total_power: f64, slot_duration: f64) -> f64 {
        self.sum_bits += total_rate * slot_duration;
        self.sum_energy += total_power * slot_duration;
        self.ratio()
    }
}

/// Folds one slot into `acc` and returns the new accumulator with its ratio.
pub fn ee_ratio_update(
    acc: EeAccumulator,
    total_rate: f64,
    total_power: f64,
    slot_duration: f64,
) -> (EeAccumulator, f64) {
    let mut next = acc;
    let eta = next.record(total_rate, total_power, slot_duration);
    (next, eta)
}
