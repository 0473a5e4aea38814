//! Numerical recovery of the optimal-correction condition: maximize the
//! average fidelity over Bob's four correction unitaries and observe that
//! the fidelity deviation vanishes at the optimum.
//!
//! The search is a derivative-free simplex descent (adaptive Nelder-Mead)
//! over 12 parameters: each V_α as a rotation axis (two spherical angles)
//! plus a rotation angle. Global phases do not enter the objective and are
//! left unparameterized. Restarts are seeded from independent ChaCha streams
//! and may run concurrently; results merge deterministically by best F with
//! ties broken by the lowest restart index.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::measures::{f_bounds, fidelity_deviation};
use crate::qubit::{validate_measurement, AxisAngle};
use crate::teleport::{ProtocolConfig, WernerChannel};

const DIM: usize = 12;

/// Search budget and reproducibility knobs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 8,
            max_iters: 2000,
            tol: 1e-8,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iters == 0 {
            return Err(Error::arg("restarts and max_iters must be positive"));
        }
        if self.tol <= 0.0 {
            return Err(Error::arg("tol must be positive"));
        }
        Ok(())
    }
}

/// Outcome of the correction search.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptimizationResult {
    /// The best correction unitaries found, as axis-angle records.
    pub best_corrections: [AxisAngle; 4],
    /// Average fidelity at the best point.
    pub f_best: f64,
    /// Fidelity deviation at the best point.
    pub d_at_best: f64,
    /// Incumbent F per iteration of the winning restart; non-decreasing.
    pub trajectory: Vec<(usize, f64)>,
    /// True iff F_max(p) − f_best <= tol.
    pub converged: bool,
    /// Index of the restart that produced the best point.
    pub winning_restart: usize,
}

impl OptimizationResult {
    pub fn best_unitaries(&self) -> [ComplexMatrix; 4] {
        std::array::from_fn(|a| {
            self.best_corrections[a]
                .to_unitary()
                .expect("axis produced by the optimizer is unit-norm")
        })
    }
}

/// Maximize F over the corrections for a fixed measurement set.
///
/// Fails with a flat-objective error at p = 0 (F is then 1/2 regardless of
/// the corrections) and with a config error for an invalid measurement set.
pub fn optimize_corrections(
    u: &[ComplexMatrix; 4],
    channel: &WernerChannel,
    cfg: &OptimizerConfig,
) -> Result<OptimizationResult> {
    cfg.validate()?;
    if !validate_measurement(u)? {
        return Err(Error::config(
            "measurement unitaries do not form an orthonormal Bell-type basis",
        ));
    }
    if channel.p() == 0.0 {
        return Err(Error::FlatObjective);
    }

    let u_dagger: [[[Complex64; 2]; 2]; 4] = std::array::from_fn(|a| u[a].dagger().as_2x2());
    let p = channel.p();
    let objective = move |params: &[f64; DIM]| -> f64 {
        // −F, for minimization
        let mut trace_term = 0.0;
        for alpha in 0..4 {
            let v = block_unitary(&params[alpha * 3..alpha * 3 + 3]);
            let tr = trace_product(&v, &u_dagger[alpha]);
            trace_term += tr.norm_sqr() - 1.0;
        }
        -(0.5 + p / 24.0 * trace_term)
    };

    let runs: Vec<RestartOutcome> = (0..cfg.restarts)
        .into_par_iter()
        .map(|restart| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(restart as u64);
            run_restart(&objective, &mut rng, cfg.max_iters)
        })
        .collect();

    let (winning_restart, best) = runs
        .iter()
        .enumerate()
        .max_by(|(ia, a), (ib, b)| {
            a.f_best
                .partial_cmp(&b.f_best)
                .expect("objective values are finite")
                // ties go to the lowest restart index
                .then(ib.cmp(ia))
        })
        .expect("at least one restart");

    let best_corrections: [AxisAngle; 4] =
        std::array::from_fn(|a| block_axis_angle(&best.params[a * 3..a * 3 + 3]));
    let v: [ComplexMatrix; 4] =
        std::array::from_fn(|a| best_corrections[a].to_unitary().expect("unit axis"));
    let config = ProtocolConfig::new(u.clone(), v)?;
    let d_at_best = fidelity_deviation(&config, channel)?;
    let (_, f_max) = f_bounds(channel);

    Ok(OptimizationResult {
        best_corrections,
        f_best: best.f_best,
        d_at_best,
        converged: f_max - best.f_best <= cfg.tol,
        trajectory: best.trajectory.clone(),
        winning_restart,
    })
}

/// Spherical-angle block (polar, azimuth, rotation angle) to an SU(2) matrix,
/// on the stack.
fn block_unitary(block: &[f64]) -> [[Complex64; 2]; 2] {
    let (polar, azimuth, angle) = (block[0], block[1], block[2]);
    let (sp, cp) = polar.sin_cos();
    let (sa, ca) = azimuth.sin_cos();
    let (nx, ny, nz) = (sp * ca, sp * sa, cp);
    let (s, c) = (angle / 2.0).sin_cos();
    [
        [Complex64::new(c, -s * nz), Complex64::new(-s * ny, -s * nx)],
        [Complex64::new(s * ny, -s * nx), Complex64::new(c, s * nz)],
    ]
}

fn block_axis_angle(block: &[f64]) -> AxisAngle {
    let (polar, azimuth, angle) = (block[0], block[1], block[2]);
    let (sp, cp) = polar.sin_cos();
    let (sa, ca) = azimuth.sin_cos();
    AxisAngle {
        axis: [sp * ca, sp * sa, cp],
        angle: angle.rem_euclid(2.0 * std::f64::consts::PI),
    }
}

fn trace_product(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> Complex64 {
    a[0][0] * b[0][0] + a[0][1] * b[1][0] + a[1][0] * b[0][1] + a[1][1] * b[1][1]
}

struct RestartOutcome {
    f_best: f64,
    params: [f64; DIM],
    trajectory: Vec<(usize, f64)>,
}

/// One seeded restart: simplex descent from a random point, re-seeding the
/// simplex at the incumbent with a smaller step whenever it collapses, until
/// the iteration budget is spent or the incumbent stops moving.
fn run_restart<F>(objective: &F, rng: &mut ChaCha8Rng, max_iters: usize) -> RestartOutcome
where
    F: Fn(&[f64; DIM]) -> f64,
{
    use std::f64::consts::{PI, TAU};
    let mut x0 = [0.0; DIM];
    for alpha in 0..4 {
        x0[alpha * 3] = rng.gen_range(0.0..PI);
        x0[alpha * 3 + 1] = rng.gen_range(0.0..TAU);
        x0[alpha * 3 + 2] = rng.gen_range(-PI..PI);
    }

    let mut incumbent = x0;
    let mut h_incumbent = f64::INFINITY;
    let mut trajectory = Vec::new();
    let mut iter = 0usize;
    let mut step = 0.6;

    while iter < max_iters {
        let before = h_incumbent;
        let (h_cycle, x_cycle) = nelder_mead_cycle(
            objective,
            &incumbent,
            step,
            max_iters,
            &mut iter,
            &mut h_incumbent,
            &mut trajectory,
        );
        // the cycle's simplex contains the previous incumbent, and simplex
        // descent never loses its best vertex, so h_cycle <= before
        h_incumbent = h_incumbent.min(h_cycle);
        incumbent = x_cycle;
        if before - h_incumbent < 1e-13 && step < 0.1 {
            break;
        }
        step = 0.05;
    }

    RestartOutcome {
        f_best: -h_incumbent,
        params: incumbent,
        trajectory,
    }
}

/// Adaptive Nelder-Mead (Gao-Han coefficients) until the simplex collapses
/// or the shared iteration budget runs out. Returns the best point seen.
#[allow(clippy::too_many_arguments)]
fn nelder_mead_cycle<F>(
    objective: &F,
    start: &[f64; DIM],
    step: f64,
    max_iters: usize,
    iter: &mut usize,
    h_running: &mut f64,
    trajectory: &mut Vec<(usize, f64)>,
) -> (f64, [f64; DIM])
where
    F: Fn(&[f64; DIM]) -> f64,
{
    let n = DIM as f64;
    let alpha = 1.0;
    let gamma = 1.0 + 2.0 / n;
    let rho = 0.75 - 1.0 / (2.0 * n);
    let sigma = 1.0 - 1.0 / n;

    let mut simplex: Vec<[f64; DIM]> = Vec::with_capacity(DIM + 1);
    simplex.push(*start);
    for i in 0..DIM {
        let mut p = *start;
        p[i] += step;
        simplex.push(p);
    }
    let mut values: Vec<f64> = simplex.iter().map(objective).collect();

    while *iter < max_iters {
        *iter += 1;

        // order ascending by objective value
        let mut order: Vec<usize> = (0..=DIM).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let best = order[0];
        let worst = order[DIM];
        let second_worst = order[DIM - 1];

        if values[best] < *h_running {
            *h_running = values[best];
        }
        trajectory.push((*iter, -*h_running));

        // collapse test
        let spread = values[worst] - values[best];
        let diameter = simplex
            .iter()
            .map(|p| {
                p.iter()
                    .zip(simplex[best].iter())
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if spread < 1e-14 && diameter < 1e-8 {
            break;
        }

        // centroid of all but the worst
        let mut centroid = [0.0; DIM];
        for (idx, p) in simplex.iter().enumerate() {
            if idx == worst {
                continue;
            }
            for k in 0..DIM {
                centroid[k] += p[k] / n;
            }
        }

        let blend = |a: &[f64; DIM], b: &[f64; DIM], t: f64| -> [f64; DIM] {
            std::array::from_fn(|k| a[k] + t * (a[k] - b[k]))
        };

        let reflected = blend(&centroid, &simplex[worst], alpha);
        let h_reflected = objective(&reflected);

        if h_reflected < values[best] {
            let expanded = blend(&centroid, &simplex[worst], gamma);
            let h_expanded = objective(&expanded);
            if h_expanded < h_reflected {
                simplex[worst] = expanded;
                values[worst] = h_expanded;
            } else {
                simplex[worst] = reflected;
                values[worst] = h_reflected;
            }
        } else if h_reflected < values[second_worst] {
            simplex[worst] = reflected;
            values[worst] = h_reflected;
        } else {
            let contracted = if h_reflected < values[worst] {
                blend(&centroid, &simplex[worst], rho) // outside
            } else {
                blend(&centroid, &simplex[worst], -rho) // inside
            };
            let h_contracted = objective(&contracted);
            if h_contracted < values[worst].min(h_reflected) {
                simplex[worst] = contracted;
                values[worst] = h_contracted;
            } else {
                // shrink toward the best vertex
                let anchor = simplex[best];
                for idx in 0..=DIM {
                    if idx == best {
                        continue;
                    }
                    for k in 0..DIM {
                        simplex[idx][k] = anchor[k] + sigma * (simplex[idx][k] - anchor[k]);
                    }
                    values[idx] = objective(&simplex[idx]);
                }
            }
        }
    }

    let best = values
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.total_cmp(b))
        .map(|(i, _)| i)
        .expect("non-empty simplex");
    (values[best], simplex[best])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::average_fidelity;
    use crate::qubit::{paulis, random_unitary, su2_to_so3};

    #[test]
    fn recovers_pauli_optimum() {
        let ch = WernerChannel::new(0.5).unwrap();
        let cfg = OptimizerConfig {
            seed: 7,
            ..Default::default()
        };
        let result = optimize_corrections(&paulis(), &ch, &cfg).unwrap();
        assert!(result.converged);
        assert!(
            (result.f_best - 0.75).abs() < 1e-8,
            "f_best = {}",
            result.f_best
        );
        assert!(result.d_at_best <= 1e-6);
        // each composite V_α U_α† is the identity up to phase
        let v = result.best_unitaries();
        let u = paulis();
        for a in 0..4 {
            let x = &v[a] * &u[a].dagger();
            let r = su2_to_so3(&x).unwrap();
            assert!(r.angle() <= 1e-3, "composite {a} has angle {}", r.angle());
        }
    }

    #[test]
    fn recovers_rotated_pauli_optimum() {
        use rand::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(100);
        let w = random_unitary(&mut rng);
        let u: [ComplexMatrix; 4] = std::array::from_fn(|a| &paulis()[a] * &w);
        let ch = WernerChannel::new(0.9).unwrap();
        let cfg = OptimizerConfig {
            seed: 3,
            ..Default::default()
        };
        let result = optimize_corrections(&u, &ch, &cfg).unwrap();
        assert!(result.converged);
        assert!((result.f_best - 0.95).abs() < 1e-8);
        // direct evaluation at the returned corrections agrees
        let config = ProtocolConfig::new(u, result.best_unitaries()).unwrap();
        assert!((average_fidelity(&config, &ch) - result.f_best).abs() < 1e-12);
    }

    #[test]
    fn single_iteration_does_not_converge() {
        let ch = WernerChannel::new(0.5).unwrap();
        let cfg = OptimizerConfig {
            max_iters: 1,
            seed: 1,
            ..Default::default()
        };
        let result = optimize_corrections(&paulis(), &ch, &cfg).unwrap();
        assert!(!result.converged);
        // incumbent is at least the best initial vertex and non-decreasing
        let mut last = f64::NEG_INFINITY;
        for &(_, f) in &result.trajectory {
            assert!(f >= last);
            last = f;
        }
        assert!(result.f_best >= result.trajectory.first().unwrap().1);
    }

    #[test]
    fn rejects_flat_objective_and_bad_measurement() {
        let ch0 = WernerChannel::new(0.0).unwrap();
        assert!(matches!(
            optimize_corrections(&paulis(), &ch0, &OptimizerConfig::default()),
            Err(Error::FlatObjective)
        ));
        let s = paulis();
        let bad = [s[0].clone(), s[0].clone(), s[1].clone(), s[2].clone()];
        let ch = WernerChannel::new(0.5).unwrap();
        assert!(matches!(
            optimize_corrections(&bad, &ch, &OptimizerConfig::default()),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let ch = WernerChannel::new(0.4).unwrap();
        let cfg = OptimizerConfig {
            restarts: 4,
            max_iters: 300,
            seed: 9,
            ..Default::default()
        };
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| optimize_corrections(&paulis(), &ch, &cfg).unwrap())
        };
        let a = run(1);
        let b = run(3);
        assert_eq!(a.f_best, b.f_best);
        assert_eq!(a.winning_restart, b.winning_restart);
        assert_eq!(a.best_corrections, b.best_corrections);
    }
}
