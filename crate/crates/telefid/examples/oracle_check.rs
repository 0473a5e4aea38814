//! Cross-validate the closed forms against the Haar-random Monte-Carlo
//! oracle: F, D, the Schur second moment and a covariance element.
//!
//! Run with: cargo run --release --example oracle_check

use telefid::measures::{average_fidelity, covariance_element, fidelity_deviation};
use telefid::montecarlo::{
    mc_average_fidelity, mc_fidelity_deviation, mc_moment2, mc_xi_covariance, SamplerConfig,
};
use telefid::qubit::su2_to_so3;
use telefid::scenario::Scenario;
use telefid::teleport::WernerChannel;

fn main() {
    let samples = 1_000_000;
    let sampler = SamplerConfig::new(2024, samples).unwrap();
    let channel = WernerChannel::new(0.85).unwrap();
    let config = Scenario::Random { seed: 31 }.to_config().unwrap();

    println!(
        "random strategy at p = {}, {samples} Haar samples",
        channel.p()
    );
    println!();

    let closed_f = average_fidelity(&config, &channel);
    let est_f = mc_average_fidelity(&config, &channel, &sampler);
    println!("average fidelity   closed {closed_f:.7}");
    println!(
        "                   oracle {:.7} ± {:.1e}  ({:.2} sigma)",
        est_f.mean,
        est_f.std_error,
        est_f.sigmas_from(closed_f)
    );

    let closed_d = fidelity_deviation(&config, &channel).unwrap();
    let est_d = mc_fidelity_deviation(&config, &channel, &sampler);
    println!("fidelity deviation closed {closed_d:.7}");
    println!(
        "                   oracle {:.7} ± {:.1e}  ({:.2} sigma)",
        est_d.mean,
        est_d.std_error,
        est_d.sigmas_from(closed_d)
    );

    println!();
    let r = config.rotations()[2];
    let est_m2 = mc_moment2(&r, &sampler);
    println!(
        "second moment of composite 2: Tr(R)/3 = {:.7}",
        r.trace() / 3.0
    );
    println!(
        "                   oracle {:.7} ± {:.1e}",
        est_m2.mean, est_m2.std_error
    );

    let xa = config.composite(1);
    let xb = config.composite(3);
    let closed_c = covariance_element(&su2_to_so3(xa).unwrap(), &su2_to_so3(xb).unwrap());
    let est_c = mc_xi_covariance(xa, xb, &sampler).unwrap();
    println!();
    println!("covariance c_13    closed {closed_c:.7}");
    println!(
        "                   oracle {:.7} ± {:.1e}  ({:.2} sigma)",
        est_c.mean,
        est_c.std_error,
        est_c.sigmas_from(closed_c)
    );
}
