//! Average fidelity and fidelity deviation of single-qubit teleportation
//! through a Werner channel.
//!
//! A teleportation strategy is a set of four measurement unitaries U_α
//! (fixing the Bell-type basis Alice measures in) and four correction
//! unitaries V_α (what Bob applies on outcome α). Over the Werner channel
//! with noise parameter p, two numbers summarize how the strategy performs
//! across all pure inputs:
//!
//! * the average fidelity `F`, the Haar mean of the per-state fidelity, and
//! * the fidelity deviation `D`, its standard deviation, which measures
//!   how unevenly different inputs are transmitted.
//!
//! Both have closed forms in the traces of the rotation matrices
//! R_α = su2_to_so3(V_α U_α†), and every closed form here is cross-checked
//! against a brute-force Monte-Carlo oracle over Haar-random inputs.
//!
//! ```
//! use telefid::measures::{average_fidelity, fidelity_deviation};
//! use telefid::teleport::{ProtocolConfig, WernerChannel};
//!
//! let channel = WernerChannel::new(0.8)?;
//! let optimal = ProtocolConfig::pauli_optimal();
//! assert_eq!(average_fidelity(&optimal, &channel), 0.9);
//! assert_eq!(fidelity_deviation(&optimal, &channel)?, 0.0);
//! # Ok::<(), telefid::error::Error>(())
//! ```
//!
//! The `examples/` directory walks through each capability: teleporting
//! states, computing measures and bounds, the (F, D)-plane geometry,
//! oracle cross-checks, recovering the optimal corrections numerically and
//! working with scenario files. The `telefid` binary exposes the same
//! operations as subcommands (`analyze`, `sweep`, `region`, `optimize`,
//! `validate`).

pub mod error;
pub mod matrix;
pub mod measures;
pub mod montecarlo;
pub mod optimizer;
pub mod qubit;
pub mod report;
pub mod scenario;
pub mod teleport;
pub mod validation;

pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, StateVector};
pub use measures::{PerformancePoint, RegionTriangle};
pub use montecarlo::{Estimate, SamplerConfig};
pub use qubit::{AxisAngle, BlochVector, Rotation3};
pub use teleport::{ProtocolConfig, WernerChannel};
