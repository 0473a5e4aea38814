//! Average fidelity F, fidelity deviation D and their bounds for a few
//! strategies, including the flipped-message worst case.
//!
//! Run with: cargo run --example performance_measures

use telefid::measures::{
    average_fidelity, classify_channel, d_bounds, f_bounds, fidelity_deviation, half_circle_bound,
};
use telefid::scenario::{Scenario, DOUBLE_SWAP};
use telefid::teleport::WernerChannel;

fn main() {
    let channel = WernerChannel::new(0.8).unwrap();
    let (f_min, f_max) = f_bounds(&channel);
    println!(
        "channel p = {} ({}), F range [{f_min:.6}, {f_max:.6}]",
        channel.p(),
        classify_channel(&channel)
    );
    println!();

    let scenarios = [
        Scenario::Optimal,
        Scenario::Permuted { perm: DOUBLE_SWAP },
        Scenario::Permuted { perm: [0, 2, 1, 3] },
        Scenario::Random { seed: 11 },
    ];

    println!(
        "{:<16} {:>10} {:>10} {:>10} {:>10} {:>12}",
        "scenario", "F", "D", "D_lower", "D_upper", "half circle"
    );
    for scenario in &scenarios {
        let config = scenario.to_config().unwrap();
        let f = average_fidelity(&config, &channel);
        let d = fidelity_deviation(&config, &channel).unwrap();
        let (lo, hi) = d_bounds(&config, &channel);
        println!(
            "{:<16} {f:>10.6} {d:>10.6} {lo:>10.6} {hi:>10.6} {:>12.6}",
            scenario.name(),
            half_circle_bound(f).unwrap()
        );
    }

    println!();
    println!("the optimal strategy pins D = 0; the double swap 1032 attains");
    println!("the worst-case vertex (F_min, D_max) of the reachable triangle");
}
