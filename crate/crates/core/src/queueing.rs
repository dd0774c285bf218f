//! Task-buffer dynamics, arrivals and queue-stability metrics.

use rand::Rng;

use crate::error::{Error, Result};

/// Backlog of one user and the workload that arrived in the current slot, bits.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct UserState {
    pub queue: f64,
    pub arrival: f64,
}

/// Uniform per-slot arrival workload on `[low, high]` bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrivalModel {
    low: f64,
    high: f64,
}

impl ArrivalModel {
    pub fn new(low: f64, high: f64) -> Result<Self> {
        if !(low.is_finite() && high.is_finite() && 0.0 <= low && low <= high) {
            return Err(Error::invalid(
                "arrival",
                format!("need 0 <= low <= high, got [{low}, {high}]"),
            ));
        }
        Ok(ArrivalModel { low, high })
    }

    /// `[1, 2] × 10⁶` bits per slot.
    pub fn reference() -> Self {
        ArrivalModel { low: 1e6, high: 2e6 }
    }

    pub fn low(&self) -> f64 {
        self.low
    }

    pub fn high(&self) -> f64 {
        self.high
    }

    pub fn mean(&self) -> f64 {
        0.5 * (self.low + self.high)
    }

    /// Same shape, support multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        ArrivalModel::new(self.low * factor, self.high * factor)
    }

    /// Maps a uniform variate `u ∈ [0, 1)` onto the support.
    pub fn quantile(&self, u: f64) -> f64 {
        self.low + u * (self.high - self.low)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.quantile(rng.random::<f64>())
    }
}

/// Draws one slot's arrival.
pub fn sample_arrival<R: Rng + ?Sized>(model: &ArrivalModel, rng: &mut R) -> f64 {
    model.sample(rng)
}

/// Backlog at the next slot boundary: `max(Q − Rτ, 0) + A`.
pub fn queue_update(queue: f64, total_rate: f64, slot_duration: f64, arrival: f64) -> f64 {
    (queue - total_rate * slot_duration).max(0.0) + arrival
}

/// Bits actually drained in a slot, per second: `min(Q, Rτ) / τ`.
pub fn effective_throughput(queue: f64, total_rate: f64, slot_duration: f64) -> f64 {
    queue.min(total_rate * slot_duration) / slot_duration
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueueMetric {
    /// Time-averaged total backlog, bits.
    pub mean_total: f64,
    /// `mean_total / T`; vanishes as T grows for a mean-rate-stable system.
    pub normalized: f64,
}

/// Time-averaged total queue over a trace of per-slot queue vectors.
pub fn mean_queue_metric<Q: AsRef<[f64]>>(trace: &[Q]) -> Result<QueueMetric> {
    if trace.is_empty() {
        return Err(Error::EmptyTrace);
    }
    let slots = trace.len() as f64;
    let mean_total = trace.iter().map(|q| q.as_ref().iter().sum::<f64>()).sum::<f64>() / slots;
    Ok(QueueMetric {
        mean_total,
        normalized: mean_total / slots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn queue_update_examples() {
        assert_eq!(queue_update(0.0, 0.0, 1.0, 0.0), 0.0);
        assert_eq!(queue_update(5e6, 2e6, 1.0, 1.5e6), 4.5e6);
        assert_eq!(queue_update(1e6, 5e6, 1.0, 2e6), 2e6);
    }

    #[test]
    fn effective_throughput_is_capped_by_backlog() {
        assert_eq!(effective_throughput(1e6, 3e6, 1.0), 1e6);
        assert_eq!(effective_throughput(5e6, 3e6, 1.0), 3e6);
        assert_eq!(effective_throughput(5e6, 3e6, 2.0), 2.5e6);
    }

    #[test]
    fn degenerate_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = ArrivalModel::new(3.0, 3.0).unwrap();
        assert_eq!(sample_arrival(&m, &mut rng), 3.0);
    }

    #[test]
    fn uniform_mean_and_support() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let m = ArrivalModel::reference();
        let n = 1_000_000;
        let mut sum = 0.0;
        for _ in 0..n {
            let a = m.sample(&mut rng);
            assert!((m.low()..=m.high()).contains(&a));
            sum += a;
        }
        assert!((sum / n as f64 - 1.5e6).abs() < 1e3);
    }

    #[test]
    fn invalid_support_rejected() {
        assert!(ArrivalModel::new(2.0, 1.0).is_err());
        assert!(ArrivalModel::new(-1.0, 1.0).is_err());
    }

    #[test]
    fn mean_queue_examples() {
        let constant = vec![vec![4.0]; 10];
        let m = mean_queue_metric(&constant).unwrap();
        assert_eq!(m.mean_total, 4.0);
        assert_eq!(m.normalized, 0.4);

        let t = 10_000;
        let linear: Vec<Vec<f64>> = (1..=t).map(|i| vec![i as f64]).collect();
        let m = mean_queue_metric(&linear).unwrap();
        assert!((m.normalized - 0.5).abs() < 1e-3);

        let zeros = vec![vec![0.0, 0.0]; 5];
        let m = mean_queue_metric(&zeros).unwrap();
        assert_eq!((m.mean_total, m.normalized), (0.0, 0.0));

        let empty: Vec<Vec<f64>> = Vec::new();
        assert!(matches!(mean_queue_metric(&empty), Err(Error::EmptyTrace)));
    }
}
