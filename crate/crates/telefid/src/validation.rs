//! The full oracle suite: every closed form cross-checked against the
//! brute-force Monte-Carlo route in one run.
//!
//! Statistical checks follow the 3-sigma policy: a comparison passes when
//! the estimate lies within three standard errors of the closed form, and a
//! check tolerates up to 2 misses per 100 comparisons (minimum 1), which is
//! what 3-sigma statistics predicts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{
    average_fidelity, covariance_element, d_bounds, f_bounds, fidelity_deviation, half_circle_bound,
};
use crate::montecarlo::{
    mc_average_fidelity, mc_fidelity_deviation, mc_moment2, mc_moment4, mc_xi_covariance,
    SamplerConfig,
};
use crate::qubit::{random_unitary, su2_to_so3, BlochVector, Rotation3};
use crate::teleport::{teleport_closed, teleport_dense, ProtocolConfig, WernerChannel};

/// Minimum Monte-Carlo sample count accepted by the suite.
pub const MIN_VALIDATION_SAMPLES: usize = 10_000;

/// Suite parameters.
#[derive(Debug, Clone, Copy)]
pub struct ValidationOptions {
    samples: usize,
    seed: u64,
    corrupt_covariance: bool,
}

impl ValidationOptions {
    pub fn new(samples: usize, seed: u64) -> Result<Self> {
        if samples < MIN_VALIDATION_SAMPLES {
            return Err(Error::arg(format!(
                "--samples {samples} is below the minimum of {MIN_VALIDATION_SAMPLES}"
            )));
        }
        Ok(Self {
            samples,
            seed,
            corrupt_covariance: false,
        })
    }

    /// Negative-control hook for the test suite: replaces the covariance
    /// closed form with a deliberately wrong one so the oracle comparison
    /// must fail. Never exposed on the command line.
    pub fn with_corrupt_covariance(mut self) -> Self {
        self.corrupt_covariance = true;
        self
    }
}

/// Outcome of one named check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Outcome of the whole suite.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Allowed 3-sigma misses for a batch of comparisons: 2 per 100, minimum 1.
fn allowed_misses(comparisons: usize) -> usize {
    (comparisons * 2 / 100).max(1)
}

fn random_bloch<R: Rng>(rng: &mut R) -> BlochVector {
    let z: f64 = rng.gen_range(-1.0..1.0);
    let azimuth: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let r = (1.0 - z * z).max(0.0).sqrt();
    BlochVector::new(r * azimuth.cos(), r * azimuth.sin(), z).expect("unit by construction")
}

fn random_rotation<R: Rng>(rng: &mut R) -> Rotation3 {
    su2_to_so3(&random_unitary(rng)).expect("random unitary is unitary")
}

/// Run every check and collect a per-check report.
pub fn run_validation(opts: &ValidationOptions) -> Result<ValidationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(u64::MAX); // config stream, distinct from sampler chunks

    let checks = vec![
        dense_vs_closed(&mut rng)?,
        schur_moment2(&mut rng, opts),
        moment4_closed_form(&mut rng, opts),
        covariance_vs_oracle(&mut rng, opts)?,
        fidelity_oracle(&mut rng, opts)?,
        bound_sandwich(&mut rng)?,
        optimality_universality(&mut rng)?,
    ];
    Ok(ValidationReport { checks })
}

/// 100 random (input, config, p) triples: the 8-dimensional simulation and
/// the reduced closed form agree element-wise within 1e-10.
fn dense_vs_closed(rng: &mut ChaCha8Rng) -> Result<CheckResult> {
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let config = ProtocolConfig::random(rng);
        let channel = WernerChannel::new(rng.gen_range(0.0..=1.0))?;
        let input = random_bloch(rng);
        let dense = teleport_dense(&input, &config, &channel)?;
        let closed = teleport_closed(&input, &config, &channel);
        worst = worst.max(dense.max_abs_diff(&closed));
    }
    Ok(CheckResult {
        name: "dense_vs_closed".into(),
        passed: worst <= 1e-10,
        detail: format!("100 triples, worst element-wise difference {worst:.3e}"),
    })
}

/// 20 random rotations: the sampled second moment matches Tr(R)/3.
fn schur_moment2(rng: &mut ChaCha8Rng, opts: &ValidationOptions) -> CheckResult {
    let mut misses = 0;
    let mut worst_sigmas = 0.0f64;
    for _ in 0..20 {
        let r = random_rotation(rng);
        let sampler = SamplerConfig::new(rng.gen(), opts.samples).expect("validated samples");
        let est = mc_moment2(&r, &sampler);
        let sigmas = est.sigmas_from(r.trace() / 3.0);
        worst_sigmas = worst_sigmas.max(sigmas);
        if sigmas > 3.0 {
            misses += 1;
        }
    }
    CheckResult {
        name: "schur_moment2".into(),
        passed: misses <= allowed_misses(20),
        detail: format!("20 rotations, {misses} misses beyond 3 sigma, worst {worst_sigmas:.2}"),
    }
}

/// The derived fourth-moment closed form
/// [Tr(R_a)Tr(R_b) + Tr(R_a R_bᵀ) + Tr(R_a R_b)]/15 against sampling.
fn moment4_closed_form(rng: &mut ChaCha8Rng, opts: &ValidationOptions) -> CheckResult {
    let mut misses = 0;
    let mut worst_sigmas = 0.0f64;
    for _ in 0..20 {
        let ra = random_rotation(rng);
        let rb = random_rotation(rng);
        let closed = {
            let (mut congruent, mut product) = (0.0, 0.0);
            for i in 0..3 {
                for j in 0..3 {
                    congruent += ra.get(i, j) * rb.get(i, j);
                    product += ra.get(i, j) * rb.get(j, i);
                }
            }
            (ra.trace() * rb.trace() + congruent + product) / 15.0
        };
        let sampler = SamplerConfig::new(rng.gen(), opts.samples).expect("validated samples");
        let est = mc_moment4(&ra, &rb, &sampler);
        let sigmas = est.sigmas_from(closed);
        worst_sigmas = worst_sigmas.max(sigmas);
        if sigmas > 3.0 {
            misses += 1;
        }
    }
    CheckResult {
        name: "moment4_closed_form".into(),
        passed: misses <= allowed_misses(20),
        detail: format!(
            "20 rotation pairs, {misses} misses beyond 3 sigma, worst {worst_sigmas:.2}"
        ),
    }
}

/// 20 random unitary pairs: the covariance closed form against the sampled
/// covariance of (ξ_a, ξ_b), the two routes sharing nothing but the inputs.
fn covariance_vs_oracle(rng: &mut ChaCha8Rng, opts: &ValidationOptions) -> Result<CheckResult> {
    let mut misses = 0;
    let mut worst_sigmas = 0.0f64;
    for _ in 0..20 {
        let xa = random_unitary(rng);
        let xb = random_unitary(rng);
        let ra = su2_to_so3(&xa)?;
        let rb = su2_to_so3(&xb)?;
        let mut closed = covariance_element(&ra, &rb);
        if opts.corrupt_covariance {
            // drop the Tr(R_a R_b) term: a wrong formula the oracle must catch
            let mut product = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    product += ra.get(i, j) * rb.get(j, i);
                }
            }
            closed -= product / 60.0;
        }
        let sampler = SamplerConfig::new(rng.gen(), opts.samples).expect("validated samples");
        let est = mc_xi_covariance(&xa, &xb, &sampler)?;
        let sigmas = est.sigmas_from(closed);
        worst_sigmas = worst_sigmas.max(sigmas);
        if sigmas > 3.0 {
            misses += 1;
        }
    }
    Ok(CheckResult {
        name: "covariance_closed_form".into(),
        passed: misses <= allowed_misses(20),
        detail: format!(
            "20 unitary pairs, {misses} misses beyond 3 sigma, worst {worst_sigmas:.2}"
        ),
    })
}

/// 50 random (config, p) pairs, both estimators: F and D closed forms
/// against their Monte-Carlo oracles, 100 comparisons total.
fn fidelity_oracle(rng: &mut ChaCha8Rng, opts: &ValidationOptions) -> Result<CheckResult> {
    let mut misses = 0;
    let mut worst_sigmas = 0.0f64;
    for _ in 0..50 {
        let config = ProtocolConfig::random(rng);
        let channel = WernerChannel::new(rng.gen_range(0.05..=1.0))?;
        let sampler = SamplerConfig::new(rng.gen(), opts.samples)?;

        let f_est = mc_average_fidelity(&config, &channel, &sampler);
        let f_sigmas = f_est.sigmas_from(average_fidelity(&config, &channel));
        let d_est = mc_fidelity_deviation(&config, &channel, &sampler);
        let d_sigmas = d_est.sigmas_from(fidelity_deviation(&config, &channel)?);

        for s in [f_sigmas, d_sigmas] {
            worst_sigmas = worst_sigmas.max(s);
            if s > 3.0 {
                misses += 1;
            }
        }
    }
    Ok(CheckResult {
        name: "fidelity_oracle".into(),
        passed: misses <= allowed_misses(100),
        detail: format!("100 comparisons, {misses} misses beyond 3 sigma, worst {worst_sigmas:.2}"),
    })
}

/// 1000 random configs and noise levels: every bound holds.
fn bound_sandwich(rng: &mut ChaCha8Rng) -> Result<CheckResult> {
    const EXACT: f64 = 1e-12;
    const DERIVED: f64 = 1e-9;
    let sqrt5 = 5f64.sqrt();
    let mut failures = Vec::new();
    for i in 0..1000 {
        let config = ProtocolConfig::random(rng);
        let channel = WernerChannel::new(rng.gen_range(0.0..=1.0))?;
        let f = average_fidelity(&config, &channel);
        let d = fidelity_deviation(&config, &channel)?;
        let (f_min, f_max) = f_bounds(&channel);
        let (d_lower, d_upper) = d_bounds(&config, &channel);

        if f < f_min - EXACT || f > f_max + EXACT {
            failures.push(format!("case {i}: F = {f} outside [{f_min}, {f_max}]"));
        }
        if d > (f_max - f) / sqrt5 + DERIVED {
            failures.push(format!("case {i}: D = {d} above the fidelity-gap bound"));
        }
        if d > half_circle_bound(f)? + DERIVED {
            failures.push(format!("case {i}: D = {d} above the half circle"));
        }
        if d < d_lower - EXACT || d > d_upper + EXACT {
            failures.push(format!("case {i}: D = {d} outside [{d_lower}, {d_upper}]"));
        }
    }
    Ok(CheckResult {
        name: "bound_sandwich".into(),
        passed: failures.is_empty(),
        detail: if failures.is_empty() {
            "1000 random configs, all bounds hold".into()
        } else {
            format!("{} violations; first: {}", failures.len(), failures[0])
        },
    })
}

/// 20 random measurement sets with V = U: F attains F_max and D vanishes.
///
/// The composites are the identity only up to unitary round-off, so the
/// covariance sum is an exact-zero difference of O(1) traces; its ~1e-16
/// residue square-roots to ~1e-8, which is the honest zero here. The
/// exact-arithmetic Pauli-optimal case stays at D = 0 to 1e-12 elsewhere.
fn optimality_universality(rng: &mut ChaCha8Rng) -> Result<CheckResult> {
    let mut worst_gap = 0.0f64;
    let mut worst_d = 0.0f64;
    for _ in 0..20 {
        let base = ProtocolConfig::random(rng);
        let u = base.measurement().clone();
        let config = ProtocolConfig::new(u.clone(), u)?;
        let channel = WernerChannel::new(rng.gen_range(0.1..=1.0))?;
        let (_, f_max) = f_bounds(&channel);
        worst_gap = worst_gap.max((average_fidelity(&config, &channel) - f_max).abs());
        worst_d = worst_d.max(fidelity_deviation(&config, &channel)?);
    }
    Ok(CheckResult {
        name: "optimality_universality".into(),
        passed: worst_gap <= 1e-12 && worst_d <= 1e-8,
        detail: format!("20 sets with V = U: worst F gap {worst_gap:.3e}, worst D {worst_d:.3e}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn options_enforce_minimum_samples() {
        assert!(ValidationOptions::new(9_999, 1).is_err());
        assert!(ValidationOptions::new(10_000, 1).is_ok());
    }

    #[test]
    fn suite_passes_at_moderate_samples() {
        let opts = ValidationOptions::new(20_000, 7).unwrap();
        let report = run_validation(&opts).unwrap();
        for check in &report.checks {
            assert!(check.passed, "{}: {}", check.name, check.detail);
        }
        assert!(report.passed());
        assert_eq!(report.checks.len(), 7);
    }

    #[test]
    fn corrupted_covariance_is_caught() {
        let opts = ValidationOptions::new(20_000, 7)
            .unwrap()
            .with_corrupt_covariance();
        let report = run_validation(&opts).unwrap();
        assert!(!report.passed());
        let cov = report
            .checks
            .iter()
            .find(|c| c.name == "covariance_closed_form")
            .unwrap();
        assert!(
            !cov.passed,
            "negative control failed to fail: {}",
            cov.detail
        );
        // everything else still passes
        for check in &report.checks {
            if check.name != "covariance_closed_form" {
                assert!(check.passed, "{}: {}", check.name, check.detail);
            }
        }
    }

    #[test]
    fn allowed_miss_policy() {
        assert_eq!(allowed_misses(20), 1);
        assert_eq!(allowed_misses(100), 2);
        assert_eq!(allowed_misses(49), 1);
        assert_eq!(allowed_misses(150), 3);
    }
}
