//! Teleport single-qubit states through a Werner channel and watch the
//! output degrade with noise.
//!
//! Run with: cargo run --example perfect_teleportation

use telefid::qubit::BlochVector;
use telefid::teleport::{
    state_fidelity, teleport_closed, teleport_dense, ProtocolConfig, WernerChannel,
};

fn main() {
    let config = ProtocolConfig::pauli_optimal();

    // |0>, |+> and a generic point on the Bloch sphere
    let inputs = [
        ("|0>", BlochVector::new(0.0, 0.0, 1.0).unwrap()),
        ("|+>", BlochVector::new(1.0, 0.0, 0.0).unwrap()),
        ("generic", BlochVector::from_polar(1.1, 2.4)),
    ];

    for p in [1.0, 0.75, 0.5, 0.0] {
        let channel = WernerChannel::new(p).unwrap();
        println!("Werner channel p = {p}");
        for (label, input) in &inputs {
            let f = state_fidelity(input, &config, &channel);
            println!("  {label:8} fidelity f = {f:.6}");
        }
        println!();
    }

    // the dense 3-qubit simulation and the reduced closed form agree
    let channel = WernerChannel::new(0.6).unwrap();
    let input = BlochVector::from_polar(0.8, -1.0);
    let dense = teleport_dense(&input, &config, &channel).unwrap();
    let closed = teleport_closed(&input, &config, &channel);
    println!(
        "dense vs closed output state: max element difference {:.3e}",
        dense.max_abs_diff(&closed)
    );
    println!("output state (closed form):");
    for i in 0..2 {
        let row: Vec<String> = (0..2).map(|j| format!("{:.4}", closed.get(i, j))).collect();
        println!("  [{}]", row.join(", "));
    }
}
