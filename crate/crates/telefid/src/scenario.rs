//! Scenario definitions: how a teleportation strategy is named on the
//! command line and stored on disk.
//!
//! The on-disk format is JSON with unitaries as axis-angle records
//! `{"axis": [x, y, z], "angle": radians}`, which keeps files human-auditable
//! and makes unitarity automatic.

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::qubit::AxisAngle;
use crate::teleport::ProtocolConfig;

/// The double swap (0<->1, 2<->3); with Pauli measurement it attains the
/// worst-case vertex (F_min, D_max).
pub const DOUBLE_SWAP: [usize; 4] = [1, 0, 3, 2];

/// A named teleportation strategy.
#[derive(Debug, Clone, PartialEq)]
pub enum Scenario {
    /// U_α = V_α = σ_α: attains (F_max, 0).
    Optimal,
    /// Pauli measurement, corrections keyed to permuted outcomes.
    Permuted { perm: [usize; 4] },
    /// Explicit axis-angle lists for U and V, usually loaded from a file.
    Custom {
        name: Option<String>,
        u: Box<[AxisAngle; 4]>,
        v: Box<[AxisAngle; 4]>,
    },
    /// Seeded random valid strategy.
    Random { seed: u64 },
}

/// Serialized form of a custom scenario. `v` may be omitted in files that
/// only feed the optimizer a measurement set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub u: [AxisAngle; 4],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<[AxisAngle; 4]>,
}

impl ScenarioFile {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }

    /// The measurement unitaries alone (for the optimizer's U source).
    pub fn measurement(&self) -> Result<[ComplexMatrix; 4]> {
        build_unitaries(&self.u)
    }
}

fn build_unitaries(records: &[AxisAngle; 4]) -> Result<[ComplexMatrix; 4]> {
    let mut out = Vec::with_capacity(4);
    for rec in records {
        out.push(rec.to_unitary()?);
    }
    Ok(out.try_into().expect("four elements"))
}

impl Scenario {
    /// Parse a command-line scenario spec:
    /// `optimal` | `permuted[:abcd]` | `random:<seed>` | `file:<path>`.
    /// A bare `permuted` uses the double swap 1032.
    pub fn parse(spec: &str) -> Result<Self> {
        if spec == "optimal" {
            return Ok(Scenario::Optimal);
        }
        if spec == "permuted" {
            return Ok(Scenario::Permuted { perm: DOUBLE_SWAP });
        }
        if let Some(digits) = spec.strip_prefix("permuted:") {
            let chars: Vec<char> = digits.chars().collect();
            if chars.len() != 4 || !chars.iter().all(|c| ('0'..='3').contains(c)) {
                return Err(Error::arg(format!(
                    "permutation '{digits}' must be four digits from 0123, e.g. permuted:1032"
                )));
            }
            let perm: [usize; 4] = std::array::from_fn(|i| chars[i] as usize - '0' as usize);
            let mut seen = [false; 4];
            for &t in &perm {
                if seen[t] {
                    return Err(Error::arg(format!(
                        "'{digits}' is not a permutation of 0123"
                    )));
                }
                seen[t] = true;
            }
            return Ok(Scenario::Permuted { perm });
        }
        if let Some(seed) = spec.strip_prefix("random:") {
            let seed: u64 = seed
                .parse()
                .map_err(|_| Error::arg(format!("random seed '{seed}' is not a u64")))?;
            return Ok(Scenario::Random { seed });
        }
        if let Some(path) = spec.strip_prefix("file:") {
            return Self::from_file(path);
        }
        Err(Error::arg(format!(
            "unknown scenario '{spec}'; expected optimal, permuted[:abcd], random:<seed> or file:<path>"
        )))
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = ScenarioFile::load(path)?;
        let v = file.v.ok_or_else(|| {
            Error::config(format!(
                "scenario file {} has no correction unitaries 'v'",
                path.display()
            ))
        })?;
        let name = file
            .name
            .or_else(|| path.file_stem().map(|s| s.to_string_lossy().into_owned()));
        Ok(Scenario::Custom {
            name,
            u: Box::new(file.u),
            v: Box::new(v),
        })
    }

    pub fn name(&self) -> String {
        match self {
            Scenario::Optimal => "optimal".into(),
            Scenario::Permuted { perm } => {
                format!("permuted:{}{}{}{}", perm[0], perm[1], perm[2], perm[3])
            }
            Scenario::Custom { name, .. } => name.clone().unwrap_or_else(|| "custom".into()),
            Scenario::Random { seed } => format!("random:{seed}"),
        }
    }

    /// Instantiate the strategy. Custom scenarios must pass the measurement
    /// orthonormality check; others are valid by construction.
    pub fn to_config(&self) -> Result<ProtocolConfig> {
        match self {
            Scenario::Optimal => Ok(ProtocolConfig::pauli_optimal()),
            Scenario::Permuted { perm } => ProtocolConfig::pauli_permuted(*perm),
            Scenario::Custom { u, v, .. } => {
                ProtocolConfig::new(build_unitaries(u)?, build_unitaries(v)?)
            }
            Scenario::Random { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                Ok(ProtocolConfig::random(&mut rng))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{average_fidelity, fidelity_deviation};
    use crate::teleport::WernerChannel;
    use std::f64::consts::PI;

    #[test]
    fn parse_forms() {
        assert_eq!(Scenario::parse("optimal").unwrap(), Scenario::Optimal);
        assert_eq!(
            Scenario::parse("permuted").unwrap(),
            Scenario::Permuted { perm: DOUBLE_SWAP }
        );
        assert_eq!(
            Scenario::parse("permuted:2301").unwrap(),
            Scenario::Permuted { perm: [2, 3, 0, 1] }
        );
        assert_eq!(
            Scenario::parse("random:42").unwrap(),
            Scenario::Random { seed: 42 }
        );
        assert!(Scenario::parse("permuted:1132").is_err());
        assert!(Scenario::parse("permuted:12").is_err());
        assert!(Scenario::parse("random:x").is_err());
        assert!(Scenario::parse("bogus").is_err());
    }

    #[test]
    fn double_swap_hits_worst_vertex() {
        let cfg = Scenario::parse("permuted").unwrap().to_config().unwrap();
        let ch = WernerChannel::new(1.0).unwrap();
        assert!((average_fidelity(&cfg, &ch) - 1.0 / 3.0).abs() < 1e-12);
        let d = fidelity_deviation(&cfg, &ch).unwrap();
        assert!((d - 2.0 / (3.0 * 5f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn file_round_trip() {
        let zhat = |angle: f64| AxisAngle {
            axis: [0.0, 0.0, 1.0],
            angle,
        };
        let xhat = |angle: f64| AxisAngle {
            axis: [1.0, 0.0, 0.0],
            angle,
        };
        let yhat = |angle: f64| AxisAngle {
            axis: [0.0, 1.0, 0.0],
            angle,
        };
        // π-rotations about z, x, y are σz, σx, σy up to phase: a valid basis
        let file = ScenarioFile {
            name: Some("paulis-up-to-phase".into()),
            u: [zhat(0.0), xhat(PI), yhat(PI), zhat(PI)],
            v: Some([zhat(0.0), xhat(PI), yhat(PI), zhat(PI)]),
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scenario.json");
        file.save(&path).unwrap();
        let reloaded = ScenarioFile::load(&path).unwrap();
        assert_eq!(file, reloaded);

        let scenario = Scenario::from_file(&path).unwrap();
        assert_eq!(scenario.name(), "paulis-up-to-phase");
        let cfg = scenario.to_config().unwrap();
        // phases drop out: this is the optimal strategy
        let ch = WernerChannel::new(0.8).unwrap();
        assert!((average_fidelity(&cfg, &ch) - 0.9).abs() < 1e-12);
    }

    #[test]
    fn custom_requires_valid_measurement_and_corrections() {
        let id = AxisAngle {
            axis: [0.0, 0.0, 1.0],
            angle: 0.0,
        };
        let bad = Scenario::Custom {
            name: None,
            u: Box::new([id; 4]),
            v: Box::new([id; 4]),
        };
        assert!(matches!(bad.to_config(), Err(Error::InvalidConfig(_))));

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("no_v.json");
        ScenarioFile {
            name: None,
            u: [id; 4],
            v: None,
        }
        .save(&path)
        .unwrap();
        assert!(matches!(
            Scenario::from_file(&path),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn random_scenarios_are_reproducible() {
        let a = Scenario::Random { seed: 5 }.to_config().unwrap();
        let b = Scenario::Random { seed: 5 }.to_config().unwrap();
        for alpha in 0..4 {
            assert!(a.composite(alpha).max_abs_diff(b.composite(alpha)) == 0.0);
        }
    }
}
