//! Build a strategy from arbitrary unitaries, save it as a scenario file,
//! reload it and analyze, all through the same JSON schema the CLI accepts.
//!
//! Run with: cargo run --example custom_scenario

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use telefid::matrix::ComplexMatrix;
use telefid::qubit::{paulis, random_unitary, AxisAngle};
use telefid::report::analyze;
use telefid::scenario::{Scenario, ScenarioFile};

fn main() {
    // a rotated Pauli frame: U_α = σ_α W stays a valid measurement basis
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let w = random_unitary(&mut rng);
    let u: [ComplexMatrix; 4] = std::array::from_fn(|a| &paulis()[a] * &w);

    // corrections deliberately left at the bare Paulis: suboptimal on purpose
    let v = paulis();

    let file = ScenarioFile {
        name: Some("rotated-measurement".into()),
        u: std::array::from_fn(|a| AxisAngle::from_unitary(&u[a]).unwrap()),
        v: Some(std::array::from_fn(|a| {
            AxisAngle::from_unitary(&v[a]).unwrap()
        })),
    };

    let dir = std::env::temp_dir();
    let path = dir.join("telefid_custom_scenario.json");
    file.save(&path).unwrap();
    println!("wrote {}", path.display());
    println!("{}", std::fs::read_to_string(&path).unwrap());

    let scenario = Scenario::from_file(&path).unwrap();
    let report = analyze(&scenario, 0.9, None).unwrap();
    println!("analyzed '{}' at p = {}:", report.scenario, report.p);
    println!(
        "  F = {:.6}  (bounds [{:.6}, {:.6}])",
        report.f, report.f_min, report.f_max
    );
    println!("  D = {:.6}  (upper bound {:.6})", report.d, report.d_upper);
    println!("  channel class: {}", report.classification);

    std::fs::remove_file(&path).ok();
}
