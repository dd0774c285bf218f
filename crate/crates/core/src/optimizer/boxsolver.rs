//! Projected gradient ascent for smooth concave functions on a box.
//!
//! Step lengths start from a Barzilai-Borwein estimate and are halved until
//! the projected Armijo condition holds, so every accepted iterate improves
//! the objective.

use thiserror::Error;

pub trait ConcaveObjective {
    fn value(&self, x: &[f64]) -> f64;
    fn gradient(&self, x: &[f64], grad: &mut [f64]);
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxSolverOptions {
    pub max_iterations: usize,
    /// Scaled projected-gradient norm at which the point counts as stationary.
    pub stationarity_tol: f64,
    /// Relative objective improvement below which iteration stops.
    pub improvement_tol: f64,
    pub armijo: f64,
}

impl Default for BoxSolverOptions {
    fn default() -> Self {
        BoxSolverOptions {
            max_iterations: 10_000,
            stationarity_tol: 1e-8,
            improvement_tol: 1e-10,
            armijo: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoxSolution {
    pub point: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Error)]
pub enum SubproblemError {
    #[error("projected gradient hit its iteration cap of {}", .best.iterations)]
    IterationCap { best: BoxSolution },
}

impl SubproblemError {
    pub fn into_best(self) -> BoxSolution {
        match self {
            SubproblemError::IterationCap { best } => best,
        }
    }
}

fn project(x: &mut [f64], lower: &[f64], upper: &[f64]) {
    for ((xi, lo), hi) in x.iter_mut().zip(lower).zip(upper) {
        *xi = xi.clamp(*lo, *hi);
    }
}

/// Largest component of the gradient that still points into the box,
/// scaled by the box width.
fn stationarity(x: &[f64], g: &[f64], lower: &[f64], upper: &[f64]) -> f64 {
    let mut worst = 0f64;
    for i in 0..x.len() {
        let width = upper[i] - lower[i];
        let blocked = (x[i] <= lower[i] && g[i] <= 0.0) || (x[i] >= upper[i] && g[i] >= 0.0);
        if !blocked {
            worst = worst.max(g[i].abs() * width);
        }
    }
    worst
}

/// Maximizes `objective` over `lower ≤ x ≤ upper` starting from `start`.
pub fn maximize_on_box<O: ConcaveObjective + ?Sized>(
    objective: &O,
    lower: &[f64],
    upper: &[f64],
    start: &[f64],
    options: &BoxSolverOptions,
) -> Result<BoxSolution, SubproblemError> {
    let dim = start.len();
    debug_assert!(lower.len() == dim && upper.len() == dim);
    debug_assert!(lower.iter().zip(upper).all(|(l, u)| l <= u));

    let mut x = start.to_vec();
    project(&mut x, lower, upper);
    let mut fx = objective.value(&x);
    let mut g = vec![0.0; dim];
    objective.gradient(&x, &mut g);

    let max_width = lower.iter().zip(upper).map(|(l, u)| u - l).fold(0.0, f64::max);
    let gmax = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if max_width == 0.0 || gmax == 0.0 {
        return Ok(BoxSolution {
            point: x,
            value: fx,
            iterations: 0,
        });
    }
    let mut step = max_width / gmax;

    let mut trial = vec![0.0; dim];
    let mut g_new = vec![0.0; dim];
    for iteration in 1..=options.max_iterations {
        let scale = fx.abs().max(stationarity(&x, &g, lower, upper)).max(f64::MIN_POSITIVE);
        if stationarity(&x, &g, lower, upper) <= options.stationarity_tol * scale {
            return Ok(BoxSolution {
                point: x,
                value: fx,
                iterations: iteration - 1,
            });
        }

        // backtracking on the projected arc
        let mut t = step;
        let accepted = loop {
            for i in 0..dim {
                trial[i] = x[i] + t * g[i];
            }
            project(&mut trial, lower, upper);
            let ascent: f64 = (0..dim).map(|i| g[i] * (trial[i] - x[i])).sum();
            if ascent <= 0.0 {
                break None;
            }
            let f_trial = objective.value(&trial);
            if f_trial >= fx + options.armijo * ascent {
                break Some(f_trial);
            }
            t *= 0.5;
            if t * gmax < 1e-18 * max_width {
                break None;
            }
        };
        let Some(f_trial) = accepted else {
            // no representable ascent step left
            return Ok(BoxSolution {
                point: x,
                value: fx,
                iterations: iteration,
            });
        };

        objective.gradient(&trial, &mut g_new);
        // Barzilai-Borwein step for the next iteration (sign flipped for ascent)
        let mut ss = 0.0;
        let mut sy = 0.0;
        for i in 0..dim {
            let s = trial[i] - x[i];
            let y = g_new[i] - g[i];
            ss += s * s;
            sy += s * y;
        }
        step = if sy < 0.0 { ss / -sy } else { 2.0 * t };

        let improvement = f_trial - fx;
        x.copy_from_slice(&trial);
        g.copy_from_slice(&g_new);
        fx = f_trial;
        if improvement <= options.improvement_tol * fx.abs().max(f64::MIN_POSITIVE) {
            return Ok(BoxSolution {
                point: x,
                value: fx,
                iterations: iteration,
            });
        }
    }
    Err(SubproblemError::IterationCap {
        best: BoxSolution {
            point: x,
            value: fx,
            iterations: options.max_iterations,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Quadratic {
        center: Vec<f64>,
        curvature: Vec<f64>,
    }

    impl ConcaveObjective for Quadratic {
        fn value(&self, x: &[f64]) -> f64 {
            -x.iter()
                .zip(&self.center)
                .zip(&self.curvature)
                .map(|((x, c), k)| k * (x - c) * (x - c))
                .sum::<f64>()
        }
        fn gradient(&self, x: &[f64], grad: &mut [f64]) {
            for i in 0..x.len() {
                grad[i] = -2.0 * self.curvature[i] * (x[i] - self.center[i]);
            }
        }
    }

    #[test]
    fn interior_quadratic_maximizer() {
        let q = Quadratic {
            center: vec![0.3, 1.7],
            curvature: vec![1.0, 1.0],
        };
        let s = maximize_on_box(&q, &[0.0, 0.0], &[2.0, 2.0], &[0.0, 0.0], &Default::default()).unwrap();
        assert!((s.point[0] - 0.3).abs() < 1e-6);
        assert!((s.point[1] - 1.7).abs() < 1e-6);
    }

    #[test]
    fn ill_conditioned_quadratic() {
        let q = Quadratic {
            center: vec![0.3, 0.6],
            curvature: vec![1.0, 1e4],
        };
        let s = maximize_on_box(&q, &[0.0, 0.0], &[1.0, 1.0], &[1.0, 0.0], &Default::default()).unwrap();
        assert!((s.point[0] - 0.3).abs() < 1e-6, "{:?}", s.point);
        assert!((s.point[1] - 0.6).abs() < 1e-6);
    }

    #[test]
    fn exterior_center_projects_onto_box() {
        let q = Quadratic {
            center: vec![-1.0, 3.0],
            curvature: vec![1.0, 2.0],
        };
        let s = maximize_on_box(&q, &[0.0, 0.0], &[2.0, 2.0], &[1.0, 1.0], &Default::default()).unwrap();
        assert_eq!(s.point, vec![0.0, 2.0]);
    }

    #[test]
    fn collapsed_box_returns_its_point() {
        let q = Quadratic {
            center: vec![1.0],
            curvature: vec![1.0],
        };
        let s = maximize_on_box(&q, &[0.0], &[0.0], &[5.0], &Default::default()).unwrap();
        assert_eq!(s.point, vec![0.0]);
    }

    #[test]
    fn iteration_cap_returns_best_iterate() {
        let q = Quadratic {
            center: vec![0.5, 0.5],
            curvature: vec![1.0, 1e6],
        };
        let opts = BoxSolverOptions {
            max_iterations: 1,
            improvement_tol: 0.0,
            stationarity_tol: 0.0,
            ..Default::default()
        };
        let err = maximize_on_box(&q, &[0.0, 0.0], &[1.0, 1.0], &[0.0, 0.0], &opts).unwrap_err();
        let best = err.into_best();
        assert!(best.value > q.value(&[0.0, 0.0]));
    }
}
