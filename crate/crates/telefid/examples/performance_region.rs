//! The (F, D) performance plane: reachable triangles for the three
//! reference channels, the universal half circle and where some strategies
//! land inside them.
//!
//! Run with: cargo run --example performance_region

use telefid::measures::{performance_point, region_triangle, P_CHSH, P_SEPARABILITY};
use telefid::report::region;
use telefid::scenario::{Scenario, DOUBLE_SWAP};
use telefid::teleport::WernerChannel;

fn main() {
    let data = region(&[1.0, P_CHSH, P_SEPARABILITY]).unwrap();

    println!("reachable (F, D) triangles:");
    for t in &data.triangles {
        let [a, b, c] = t.vertices();
        println!(
            "  p = {:.6}: ({:.4}, {:.4}) ({:.4}, {:.4}) ({:.4}, {:.4})",
            t.p, a.0, a.1, b.0, b.1, c.0, c.1
        );
    }
    println!();
    println!(
        "universal ceiling D = sqrt(F(1-F)) sampled at {} points; D(1/2) = {}",
        data.half_circle.len(),
        data.half_circle[100].1
    );
    println!(
        "classical fidelity ceiling F = {:.6} drawn as a vertical line",
        data.thresholds.f_classical
    );

    println!();
    println!("strategies inside the p = 0.9 triangle:");
    let channel = WernerChannel::new(0.9).unwrap();
    let triangle = region_triangle(&channel);
    for scenario in [
        Scenario::Optimal,
        Scenario::Permuted { perm: DOUBLE_SWAP },
        Scenario::Random { seed: 4 },
        Scenario::Random { seed: 9 },
    ] {
        let config = scenario.to_config().unwrap();
        let point = performance_point(&config, &channel).unwrap();
        println!(
            "  {:<16} F = {:.6}, D = {:.6}, inside = {}",
            scenario.name(),
            point.f,
            point.d,
            triangle.contains(&point, 1e-9)
        );
    }
}
