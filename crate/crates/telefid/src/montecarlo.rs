//! Brute-force Monte-Carlo oracle for every Haar integral the closed forms
//! claim: the fidelity mean and standard deviation, the second-moment Schur
//! identity and the fourth-moment integral behind the covariance elements.
//!
//! Determinism contract: an estimate depends only on the `SamplerConfig`,
//! never on the number of worker threads. Sampling is chunked, each chunk
//! owns an independent counter-seeded ChaCha stream, and chunk summaries are
//! merged in fixed chunk order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, STRUCTURAL_TOL};
use crate::qubit::{BlochVector, Rotation3};
use crate::teleport::{fidelity_kernel, xi_kernel, ProtocolConfig, WernerChannel};

/// Default number of samples per chunk.
pub const DEFAULT_CHUNK_SIZE: usize = 65_536;

/// Minimum sample count accepted by the estimators.
pub const MIN_SAMPLES: usize = 100;

/// Seeded sampling plan: how many Haar samples to draw and in what chunks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerConfig {
    seed: u64,
    n_samples: usize,
    chunk_size: usize,
}

impl SamplerConfig {
    pub fn new(seed: u64, n_samples: usize) -> Result<Self> {
        if n_samples < MIN_SAMPLES {
            return Err(Error::arg(format!(
                "n_samples = {n_samples} is below the minimum of {MIN_SAMPLES}"
            )));
        }
        Ok(Self {
            seed,
            n_samples,
            chunk_size: DEFAULT_CHUNK_SIZE.min(n_samples),
        })
    }

    pub fn with_chunk_size(mut self, chunk_size: usize) -> Result<Self> {
        if chunk_size == 0 || chunk_size > self.n_samples {
            return Err(Error::arg(format!(
                "chunk_size = {chunk_size} must be in 1..={}",
                self.n_samples
            )));
        }
        self.chunk_size = chunk_size;
        Ok(self)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn chunk_size(&self) -> usize {
        self.chunk_size
    }

    fn n_chunks(&self) -> usize {
        self.n_samples.div_ceil(self.chunk_size)
    }

    fn chunk_len(&self, chunk: usize) -> usize {
        let start = chunk * self.chunk_size;
        self.chunk_size.min(self.n_samples - start)
    }

    fn chunk_rng(&self, chunk: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(chunk as u64);
        rng
    }
}

/// Draw the next Bloch vector: z uniform on [−1, 1), azimuth uniform on
/// [0, 2π). This is the one sampling routine every estimator shares.
fn next_bloch<R: Rng>(rng: &mut R) -> BlochVector {
    let z: f64 = rng.gen_range(-1.0..1.0);
    let azimuth: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let r = (1.0 - z * z).max(0.0).sqrt();
    BlochVector::new(r * azimuth.cos(), r * azimuth.sin(), z).expect("unit by construction")
}

/// Haar-uniform Bloch vectors; deterministic for a given sampler.
pub fn sample_bloch(sampler: &SamplerConfig) -> Vec<BlochVector> {
    let mut out = Vec::with_capacity(sampler.n_samples());
    for chunk in 0..sampler.n_chunks() {
        let mut rng = sampler.chunk_rng(chunk);
        for _ in 0..sampler.chunk_len(chunk) {
            out.push(next_bloch(&mut rng));
        }
    }
    out
}

/// Monte-Carlo estimate: sample mean, its standard error, and sample count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub n: usize,
}

impl Estimate {
    /// |mean − reference| measured in standard errors; infinite if the
    /// standard error is zero and the values differ.
    pub fn sigmas_from(&self, reference: f64) -> f64 {
        let diff = (self.mean - reference).abs();
        if diff == 0.0 {
            0.0
        } else {
            diff / self.std_error
        }
    }
}

/// Streaming central moments up to order four (Pébay update and merge).
/// The merge is associative enough for fixed-order reduction; chunk order
/// is pinned by the caller.
#[derive(Debug, Clone, Copy)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
    m3: f64,
    m4: f64,
}

impl Moments {
    fn new() -> Self {
        Self {
            n: 0.0,
            mean: 0.0,
            m2: 0.0,
            m3: 0.0,
            m4: 0.0,
        }
    }

    fn push(&mut self, value: f64) {
        let n1 = self.n;
        self.n += 1.0;
        let delta = value - self.mean;
        let delta_n = delta / self.n;
        let delta_n2 = delta_n * delta_n;
        let term1 = delta * delta_n * n1;
        self.mean += delta_n;
        self.m4 += term1 * delta_n2 * (self.n * self.n - 3.0 * self.n + 3.0)
            + 6.0 * delta_n2 * self.m2
            - 4.0 * delta_n * self.m3;
        self.m3 += term1 * delta_n * (self.n - 2.0) - 3.0 * delta_n * self.m2;
        self.m2 += term1;
    }

    fn merge(self, other: Self) -> Self {
        if other.n == 0.0 {
            return self;
        }
        if self.n == 0.0 {
            return other;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        let delta2 = delta * delta;
        let na = self.n;
        let nb = other.n;
        let mean = self.mean + delta * nb / n;
        let m2 = self.m2 + other.m2 + delta2 * na * nb / n;
        let m3 = self.m3
            + other.m3
            + delta * delta2 * na * nb * (na - nb) / (n * n)
            + 3.0 * delta * (na * other.m2 - nb * self.m2) / n;
        let m4 = self.m4
            + other.m4
            + delta2 * delta2 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n)
            + 6.0 * delta2 * (na * na * other.m2 + nb * nb * self.m2) / (n * n)
            + 4.0 * delta * (na * other.m3 - nb * self.m3) / n;
        Self {
            n,
            mean,
            m2,
            m3,
            m4,
        }
    }

    /// Population variance (divisor n).
    fn variance(&self) -> f64 {
        (self.m2 / self.n).max(0.0)
    }

    /// Standard error of the mean, s/√n with the n−1 divisor.
    fn mean_std_error(&self) -> f64 {
        if self.n < 2.0 {
            return 0.0;
        }
        (self.m2 / (self.n - 1.0)).max(0.0).sqrt() / self.n.sqrt()
    }

    fn mean_estimate(&self) -> Estimate {
        Estimate {
            mean: self.mean,
            std_error: self.mean_std_error(),
            n: self.n as usize,
        }
    }

    /// Population standard deviation with a delta-method standard error:
    /// Var(m̂2) ≈ (m4 − m2²)/n, SE(σ̂) = SE(m̂2) / (2σ̂).
    fn deviation_estimate(&self) -> Estimate {
        let var = self.variance();
        let sigma = var.sqrt();
        let m4 = self.m4 / self.n;
        let var_of_var = ((m4 - var * var) / self.n).max(0.0);
        let std_error = if sigma > 0.0 {
            var_of_var.sqrt() / (2.0 * sigma)
        } else {
            0.0
        };
        Estimate {
            mean: sigma,
            std_error,
            n: self.n as usize,
        }
    }
}

/// Run `per_sample` over the deterministic sample stream, reducing per-chunk
/// moments in chunk order. Parallel over chunks, bit-identical regardless of
/// worker count.
fn accumulate<F>(sampler: &SamplerConfig, per_sample: F) -> Moments
where
    F: Fn(&BlochVector) -> f64 + Sync,
{
    (0..sampler.n_chunks())
        .into_par_iter()
        .map(|chunk| {
            let mut rng = sampler.chunk_rng(chunk);
            let mut acc = Moments::new();
            for _ in 0..sampler.chunk_len(chunk) {
                acc.push(per_sample(&next_bloch(&mut rng)));
            }
            acc
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Moments::new(), Moments::merge)
}

/// Oracle for the average fidelity: the sample mean of `state_fidelity`
/// over Haar-uniform inputs.
pub fn mc_average_fidelity(
    config: &ProtocolConfig,
    channel: &WernerChannel,
    sampler: &SamplerConfig,
) -> Estimate {
    let composites = config.composites_2x2();
    let p = channel.p();
    accumulate(sampler, |v| fidelity_kernel(v, &composites, p)).mean_estimate()
}

/// Oracle for the fidelity deviation: the population standard deviation of
/// `state_fidelity` over the same sample stream.
pub fn mc_fidelity_deviation(
    config: &ProtocolConfig,
    channel: &WernerChannel,
    sampler: &SamplerConfig,
) -> Estimate {
    let composites = config.composites_2x2();
    let p = channel.p();
    accumulate(sampler, |v| fidelity_kernel(v, &composites, p)).deviation_estimate()
}

/// Oracle for the second-moment Schur identity ∫dφ φᵀRφ = Tr(R)/3.
pub fn mc_moment2(r: &Rotation3, sampler: &SamplerConfig) -> Estimate {
    let m = *r.matrix();
    accumulate(sampler, |v| {
        let phi = nalgebra::Vector3::from(v.components());
        (phi.transpose() * m * phi)[0]
    })
    .mean_estimate()
}

/// Oracle for the fourth moment ∫dφ (φᵀR_aφ)(φᵀR_bφ); its closed form is
/// [Tr(R_a)Tr(R_b) + Tr(R_a R_bᵀ) + Tr(R_a R_b)]/15.
pub fn mc_moment4(r_a: &Rotation3, r_b: &Rotation3, sampler: &SamplerConfig) -> Estimate {
    let ma = *r_a.matrix();
    let mb = *r_b.matrix();
    accumulate(sampler, |v| {
        let phi = nalgebra::Vector3::from(v.components());
        (phi.transpose() * ma * phi)[0] * (phi.transpose() * mb * phi)[0]
    })
    .mean_estimate()
}

/// Oracle for a covariance element: cov(ξ_a, ξ_b) over Haar inputs, with the
/// overlaps evaluated on the 2x2 complex route (independent of the rotation
/// matrices the closed form consumes). Standard error by the delta method on
/// (E\[ξ_a ξ_b\], E\[ξ_a\], E\[ξ_b\]).
pub fn mc_xi_covariance(
    x_a: &ComplexMatrix,
    x_b: &ComplexMatrix,
    sampler: &SamplerConfig,
) -> Result<Estimate> {
    for (label, x) in [("X_a", x_a), ("X_b", x_b)] {
        if x.dim() != 2 || !x.is_unitary(STRUCTURAL_TOL) {
            return Err(Error::arg(format!("{label} must be a 2x2 unitary")));
        }
    }
    let xa = x_a.as_2x2();
    let xb = x_b.as_2x2();

    // Per-chunk joint accumulation over (g, a, b) = (ξ_a ξ_b, ξ_a, ξ_b):
    // means plus the full 3x3 co-moment matrix, merged in chunk order.
    let joint = (0..sampler.n_chunks())
        .into_par_iter()
        .map(|chunk| {
            let mut rng = sampler.chunk_rng(chunk);
            let mut acc = Joint3::new();
            for _ in 0..sampler.chunk_len(chunk) {
                let v = next_bloch(&mut rng);
                let (c0, c1) = v.amplitudes();
                let a = xi_kernel(c0, c1, &xa);
                let b = xi_kernel(c0, c1, &xb);
                acc.push([a * b, a, b]);
            }
            acc
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Joint3::new(), Joint3::merge);

    Ok(joint.covariance_estimate())
}

/// Streaming means and co-moments of a 3-vector of observables.
#[derive(Debug, Clone, Copy)]
struct Joint3 {
    n: f64,
    mean: [f64; 3],
    /// C[i][j] = Σ (x_i − mean_i)(x_j − mean_j)
    c: [[f64; 3]; 3],
}

impl Joint3 {
    fn new() -> Self {
        Self {
            n: 0.0,
            mean: [0.0; 3],
            c: [[0.0; 3]; 3],
        }
    }

    fn push(&mut self, x: [f64; 3]) {
        let n1 = self.n;
        self.n += 1.0;
        let delta: [f64; 3] = std::array::from_fn(|i| x[i] - self.mean[i]);
        for (mean, d) in self.mean.iter_mut().zip(delta) {
            *mean += d / self.n;
        }
        let scale = n1 / self.n;
        for i in 0..3 {
            for j in 0..3 {
                self.c[i][j] += delta[i] * delta[j] * scale;
            }
        }
    }

    fn merge(self, other: Self) -> Self {
        if other.n == 0.0 {
            return self;
        }
        if self.n == 0.0 {
            return other;
        }
        let n = self.n + other.n;
        let delta: [f64; 3] = std::array::from_fn(|i| other.mean[i] - self.mean[i]);
        let mean: [f64; 3] = std::array::from_fn(|i| self.mean[i] + delta[i] * other.n / n);
        let mut c = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                c[i][j] = self.c[i][j] + other.c[i][j] + delta[i] * delta[j] * self.n * other.n / n;
            }
        }
        Self { n, mean, c }
    }

    /// ĉ = mean(g) − mean(a) mean(b) with the delta-method standard error
    /// from the covariance matrix of (g, a, b).
    fn covariance_estimate(&self) -> Estimate {
        let [g, a, b] = self.mean;
        let cov = self.c.map(|row| row.map(|v| v / self.n));
        let mean = g - a * b;
        // gradient of g − a·b at the means: (1, −b, −a)
        let grad = [1.0, -b, -a];
        let mut var = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                var += grad[i] * grad[j] * cov[i][j];
            }
        }
        let std_error = (var.max(0.0) / self.n).sqrt();
        Estimate {
            mean,
            std_error,
            n: self.n as usize,
        }
    }
}
