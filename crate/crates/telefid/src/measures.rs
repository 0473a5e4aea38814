//! Closed-form performance measures: average fidelity F, fidelity deviation
//! D, their bounds, and the geometry of the (F, D) performance plane.
//!
//! All Haar integrals behind these formulas reduce to traces of the rotation
//! matrices R_α. The Monte-Carlo module provides the independent brute-force
//! route against which every expression here is validated.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qubit::Rotation3;
use crate::teleport::{ProtocolConfig, WernerChannel};

const SQRT5: f64 = 2.23606797749979;

/// Noise level at or below which the Werner state is separable.
pub const P_SEPARABILITY: f64 = 1.0 / 3.0;
/// Noise level above which the Werner state violates the CHSH inequality.
pub const P_CHSH: f64 = std::f64::consts::FRAC_1_SQRT_2;
/// Lower edge of the band where existence of an LHV model is open.
pub const P_LHV_LOWER: f64 = 0.6829;
/// Upper edge of the band where existence of an LHV model is open.
pub const P_LHV_UPPER: f64 = 0.6964;
/// Best average fidelity attainable without entanglement.
pub const F_CLASSICAL: f64 = 2.0 / 3.0;

/// The named channel thresholds, bundled for report output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdConstants {
    pub p_separability: f64,
    pub p_chsh: f64,
    pub p_lhv_lower: f64,
    pub p_lhv_upper: f64,
    pub f_classical: f64,
}

impl ThresholdConstants {
    pub const STANDARD: Self = Self {
        p_separability: P_SEPARABILITY,
        p_chsh: P_CHSH,
        p_lhv_lower: P_LHV_LOWER,
        p_lhv_upper: P_LHV_UPPER,
        f_classical: F_CLASSICAL,
    };
}

impl Default for ThresholdConstants {
    fn default() -> Self {
        Self::STANDARD
    }
}

/// Entanglement regime of a Werner channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChannelClass {
    #[serde(rename = "separable")]
    Separable,
    #[serde(rename = "entangled_LHV_band_below")]
    EntangledLhvBandBelow,
    #[serde(rename = "LHV_unknown_band")]
    LhvUnknownBand,
    #[serde(rename = "CHSH_violating")]
    ChshViolating,
}

impl std::fmt::Display for ChannelClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ChannelClass::Separable => "separable",
            ChannelClass::EntangledLhvBandBelow => "entangled_LHV_band_below",
            ChannelClass::LhvUnknownBand => "LHV_unknown_band",
            ChannelClass::ChshViolating => "CHSH_violating",
        };
        f.write_str(s)
    }
}

/// One strategy's performance at a given noise level: the (F, D) pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerformancePoint {
    #[serde(rename = "F")]
    pub f: f64,
    #[serde(rename = "D")]
    pub d: f64,
}

impl PerformancePoint {
    /// Tolerance for the universal bound D² <= F(1 − F).
    pub const BOUND_TOL: f64 = 1e-12;

    pub fn new(f: f64, d: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&f) {
            return Err(Error::arg(format!("average fidelity {f} outside [0, 1]")));
        }
        if !(0.0..=0.5).contains(&d) {
            return Err(Error::arg(format!(
                "fidelity deviation {d} outside [0, 1/2]"
            )));
        }
        if d * d > f * (1.0 - f) + Self::BOUND_TOL {
            return Err(Error::arg(format!(
                "point (F = {f}, D = {d}) violates D^2 <= F(1 - F)"
            )));
        }
        Ok(Self { f, d })
    }
}

/// Reachable (F, D) region for one noise level: the triangle with vertices
/// (F_max, 0), (F_min, 0) and (F_min, D_max), where D_max = 2p/(3√5).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionTriangle {
    pub p: f64,
    pub f_min: f64,
    pub f_max: f64,
    pub d_max: f64,
}

impl RegionTriangle {
    /// Vertices in the order (F_max, 0), (F_min, 0), (F_min, D_max).
    pub fn vertices(&self) -> [(f64, f64); 3] {
        [
            (self.f_max, 0.0),
            (self.f_min, 0.0),
            (self.f_min, self.d_max),
        ]
    }

    /// Point-in-triangle test with additive slack. The region is bounded by
    /// F_min <= F <= F_max and 0 <= D <= (F_max − F)/√5.
    pub fn contains(&self, point: &PerformancePoint, slack: f64) -> bool {
        point.f >= self.f_min - slack
            && point.f <= self.f_max + slack
            && point.d >= -slack
            && point.d <= (self.f_max - point.f) / SQRT5 + slack
    }
}

/// Average fidelity over Haar-random inputs: F = 1/2 + (p/24) Σ_α Tr(R_α).
pub fn average_fidelity(config: &ProtocolConfig, channel: &WernerChannel) -> f64 {
    let trace_sum: f64 = config.rotations().iter().map(Rotation3::trace).sum();
    0.5 + channel.p() / 24.0 * trace_sum
}

/// Range of F over all strategies: ((1 − p/3)/2, (1 + p)/2).
pub fn f_bounds(channel: &WernerChannel) -> (f64, f64) {
    let p = channel.p();
    ((1.0 - p / 3.0) / 2.0, (1.0 + p) / 2.0)
}

/// Standard deviation of ξ over Haar inputs: δ = (3 − Tr R)/(6√5).
pub fn delta(r: &Rotation3) -> f64 {
    (3.0 - r.trace()) / (6.0 * SQRT5)
}

/// Covariance of (ξ_a, ξ_b) over Haar inputs, in closed form:
///
///   c = 1/4 { [Tr(R_a)Tr(R_b) + Tr(R_a R_bᵀ) + Tr(R_a R_b)] / 15
///             − Tr(R_a)Tr(R_b) / 9 }.
///
/// The accumulation order of the two trace products is symmetrized so that
/// swapping the arguments returns a bit-identical value.
pub fn covariance_element(r_a: &Rotation3, r_b: &Rotation3) -> f64 {
    let ta = r_a.trace();
    let tb = r_b.trace();
    let mut congruent = 0.0; // Tr(R_a R_bᵀ) = Σ_ij a_ij b_ij
    for i in 0..3 {
        for j in 0..3 {
            congruent += r_a.get(i, j) * r_b.get(i, j);
        }
    }
    let mut product = 0.0; // Tr(R_a R_b) = Σ_ij a_ij b_ji, symmetric order
    for i in 0..3 {
        product += r_a.get(i, i) * r_b.get(i, i);
    }
    for i in 0..3 {
        for j in (i + 1)..3 {
            product += r_a.get(i, j) * r_b.get(j, i) + r_a.get(j, i) * r_b.get(i, j);
        }
    }
    0.25 * ((ta * tb + congruent + product) / 15.0 - ta * tb / 9.0)
}

/// Fidelity deviation in closed form: D = (p/4) √(Σ_{αβ} c_{αβ}).
///
/// A radicand in [−1e-12, 0) is a floating-point artifact of D = 0
/// configurations and is clamped; anything more negative is a bug.
pub fn fidelity_deviation(config: &ProtocolConfig, channel: &WernerChannel) -> Result<f64> {
    let r = config.rotations();
    let mut radicand = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            radicand += covariance_element(&r[a], &r[b]);
        }
    }
    if radicand < -1e-12 {
        return Err(Error::InternalConsistency(format!(
            "covariance sum {radicand} is negative beyond tolerance"
        )));
    }
    Ok(channel.p() / 4.0 * radicand.max(0.0).sqrt())
}

/// Bounds on D for a given strategy:
/// D_lower = (p/4) √(Σ δ_α² − (1/2) Σ_{α≠β} δ_α δ_β) (radicand clamped at 0),
/// D_upper = (p/4) Σ δ_α, which coincides with (F_max − F)/√5.
pub fn d_bounds(config: &ProtocolConfig, channel: &WernerChannel) -> (f64, f64) {
    let deltas: [f64; 4] = std::array::from_fn(|a| delta(&config.rotations()[a]));
    let sum: f64 = deltas.iter().sum();
    let sum_sq: f64 = deltas.iter().map(|d| d * d).sum();
    let cross = sum * sum - sum_sq; // Σ_{α≠β} δ_α δ_β over ordered pairs
    let radicand = (sum_sq - 0.5 * cross).max(0.0);
    let p = channel.p();
    (p / 4.0 * radicand.sqrt(), p / 4.0 * sum)
}

/// The reachable (F, D) triangle at noise p.
pub fn region_triangle(channel: &WernerChannel) -> RegionTriangle {
    let (f_min, f_max) = f_bounds(channel);
    RegionTriangle {
        p: channel.p(),
        f_min,
        f_max,
        d_max: 2.0 * channel.p() / (3.0 * SQRT5),
    }
}

/// Universal ceiling on the deviation: D <= √(F(1 − F)).
pub fn half_circle_bound(f: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::arg(format!("average fidelity {f} outside [0, 1]")));
    }
    Ok((f * (1.0 - f)).sqrt())
}

/// Entanglement regime of the channel. Boundary ties follow the strict
/// inequalities p > 1/3 (inseparability) and p > 1/√2 (CHSH violation).
pub fn classify_channel(channel: &WernerChannel) -> ChannelClass {
    let p = channel.p();
    if p <= P_SEPARABILITY {
        ChannelClass::Separable
    } else if p > P_CHSH {
        ChannelClass::ChshViolating
    } else if (P_LHV_LOWER..=P_LHV_UPPER).contains(&p) {
        ChannelClass::LhvUnknownBand
    } else {
        ChannelClass::EntangledLhvBandBelow
    }
}

/// The (F, D) point of a strategy at a given noise level.
pub fn performance_point(
    config: &ProtocolConfig,
    channel: &WernerChannel,
) -> Result<PerformancePoint> {
    PerformancePoint::new(
        average_fidelity(config, channel),
        fidelity_deviation(config, channel)?,
    )
}
