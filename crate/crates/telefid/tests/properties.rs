//! Property-based checks of the analytic structure: group homomorphism,
//! phase invariance, linearity in the noise parameter, bound sandwiches and
//! region containment over randomized strategies.

use proptest::prelude::*;

use telefid::matrix::ComplexMatrix;
use telefid::measures::{
    average_fidelity, covariance_element, d_bounds, delta, f_bounds, fidelity_deviation,
    half_circle_bound, performance_point, region_triangle,
};
use telefid::optimizer::{optimize_corrections, OptimizerConfig};
use telefid::qubit::{
    bell_basis, bloch_to_density, paulis, su2_to_so3, unitary_from_axis_angle,
    validate_measurement, BlochVector,
};
use telefid::teleport::{
    state_fidelity, teleport_closed, teleport_dense, xi, ProtocolConfig, WernerChannel,
};

const SQRT5: f64 = 2.23606797749979;

/// SU(2) element from four raw reals, rejecting near-zero quaternions.
fn unitary_from_quat(q: [f64; 4]) -> ComplexMatrix {
    use num_complex::Complex64;
    let norm = q.iter().map(|v| v * v).sum::<f64>().sqrt();
    let [w, x, y, z] = q.map(|v| v / norm);
    ComplexMatrix::from_rows(
        2,
        &[
            Complex64::new(w, -z),
            Complex64::new(-y, -x),
            Complex64::new(y, -x),
            Complex64::new(w, z),
        ],
    )
    .expect("dim 2")
}

fn quat() -> impl Strategy<Value = [f64; 4]> {
    prop::array::uniform4(-1.0f64..1.0).prop_filter("quaternion too short", |q| {
        q.iter().map(|v| v * v).sum::<f64>() > 0.01
    })
}

fn bloch() -> impl Strategy<Value = BlochVector> {
    (-1.0f64..=1.0, 0.0f64..std::f64::consts::TAU).prop_map(|(z, azimuth)| {
        let r = (1.0 - z * z).max(0.0).sqrt();
        BlochVector::new(r * azimuth.cos(), r * azimuth.sin(), z).expect("unit")
    })
}

/// Random valid strategy: measurement W σ_α W', Haar-ish corrections.
fn config() -> impl Strategy<Value = ProtocolConfig> {
    (quat(), quat(), prop::array::uniform4(quat())).prop_map(|(w, wp, vs)| {
        let w = unitary_from_quat(w);
        let wp = unitary_from_quat(wp);
        let u: [ComplexMatrix; 4] = std::array::from_fn(|a| &(&w * &paulis()[a]) * &wp);
        let v: [ComplexMatrix; 4] = std::array::from_fn(|a| unitary_from_quat(vs[a]));
        ProtocolConfig::new(u, v).expect("orthonormal by construction")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn so3_map_is_a_homomorphism(qa in quat(), qb in quat()) {
        let x = unitary_from_quat(qa);
        let y = unitary_from_quat(qb);
        let rx = su2_to_so3(&x).unwrap();
        let ry = su2_to_so3(&y).unwrap();
        let rxy = su2_to_so3(&(&x * &y)).unwrap();
        prop_assert!(rxy.max_abs_diff(&rx.compose(&ry)) < 1e-9);
    }

    #[test]
    fn so3_trace_follows_rotation_angle(
        axis in prop::array::uniform3(-1.0f64..1.0),
        angle in -std::f64::consts::PI..std::f64::consts::PI,
    ) {
        prop_assume!(axis.iter().map(|v| v * v).sum::<f64>() > 1e-3);
        let u = unitary_from_axis_angle(axis, angle).unwrap();
        let r = su2_to_so3(&u).unwrap();
        prop_assert!((r.trace() - (2.0 * angle.cos() + 1.0)).abs() < 1e-10);
        prop_assert!((-1.0 - 1e-12..=3.0 + 1e-12).contains(&r.trace()));
    }

    #[test]
    fn bloch_density_round_trip(v in bloch()) {
        let back = BlochVector::from_density(&bloch_to_density(&v)).unwrap();
        for (a, b) in v.components().iter().zip(back.components()) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn completeness_tracks_validation(qw in quat(), qwp in quat()) {
        // a W σ_α W' family resolves the identity and validates
        let w = unitary_from_quat(qw);
        let wp = unitary_from_quat(qwp);
        let u: [ComplexMatrix; 4] = std::array::from_fn(|a| &(&w * &paulis()[a]) * &wp);
        prop_assert!(validate_measurement(&u).unwrap());
        let states = bell_basis(&u).unwrap();
        let mut sum = ComplexMatrix::zeros(4);
        for s in &states {
            sum = &sum + &s.projector();
        }
        prop_assert!(sum.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-10);

        // replacing one element with a repeat breaks both
        let broken: [ComplexMatrix; 4] =
            std::array::from_fn(|a| if a == 1 { u[0].clone() } else { u[a].clone() });
        prop_assert!(!validate_measurement(&broken).unwrap());
        let states = bell_basis(&broken).unwrap();
        let mut sum = ComplexMatrix::zeros(4);
        for s in &states {
            sum = &sum + &s.projector();
        }
        prop_assert!(sum.max_abs_diff(&ComplexMatrix::identity(4)) > 1e-3);
    }

    #[test]
    fn xi_equals_bloch_quadratic_form(v in bloch(), q in quat()) {
        let x = unitary_from_quat(q);
        let r = su2_to_so3(&x).unwrap();
        let phi = nalgebra::Vector3::from(v.components());
        let quad = 0.5 * (1.0 + (phi.transpose() * r.matrix() * phi)[0]);
        prop_assert!((xi(&v, &x).unwrap() - quad).abs() < 1e-12);
    }

    #[test]
    fn teleport_outputs_are_valid_and_consistent(
        v in bloch(),
        cfg in config(),
        p in 0.0f64..=1.0,
    ) {
        let ch = WernerChannel::new(p).unwrap();
        let dense = teleport_dense(&v, &cfg, &ch).unwrap();
        let closed = teleport_closed(&v, &cfg, &ch);
        prop_assert!(dense.max_abs_diff(&closed) < 1e-10);
        dense.validate_density(1e-10).unwrap();

        let f = state_fidelity(&v, &cfg, &ch);
        prop_assert!(f >= (1.0 - p) / 2.0 - 1e-12);
        prop_assert!(f <= (1.0 + p) / 2.0 + 1e-12);
    }

    #[test]
    fn global_phases_never_matter(
        v in bloch(),
        cfg in config(),
        chi_u in 0.0f64..std::f64::consts::TAU,
        chi_v in 0.0f64..std::f64::consts::TAU,
        p in 0.0f64..=1.0,
    ) {
        use num_complex::Complex64;
        let pu = Complex64::from_polar(1.0, chi_u);
        let pv = Complex64::from_polar(1.0, chi_v);
        let u: [ComplexMatrix; 4] = std::array::from_fn(|a| cfg.measurement()[a].scale(pu));
        let vv: [ComplexMatrix; 4] = std::array::from_fn(|a| cfg.correction()[a].scale(pv));
        let phased = ProtocolConfig::new(u, vv).unwrap();
        let ch = WernerChannel::new(p).unwrap();

        let a = teleport_closed(&v, &cfg, &ch);
        let b = teleport_closed(&v, &phased, &ch);
        prop_assert!(a.max_abs_diff(&b) < 1e-12);
        prop_assert!(
            (average_fidelity(&cfg, &ch) - average_fidelity(&phased, &ch)).abs() < 1e-12
        );
    }

    #[test]
    fn measures_are_linear_in_p(cfg in config(), p in 0.0f64..=1.0) {
        let ch = WernerChannel::new(p).unwrap();
        let ch1 = WernerChannel::new(1.0).unwrap();
        let f = average_fidelity(&cfg, &ch);
        let f1 = average_fidelity(&cfg, &ch1);
        prop_assert!((f - (0.5 + p * (f1 - 0.5))).abs() < 1e-12);
        let d = fidelity_deviation(&cfg, &ch).unwrap();
        let d1 = fidelity_deviation(&cfg, &ch1).unwrap();
        prop_assert!((d - p * d1).abs() < 1e-12);
    }

    #[test]
    fn bounds_sandwich_and_region_containment(cfg in config(), p in 0.0f64..=1.0) {
        let ch = WernerChannel::new(p).unwrap();
        let f = average_fidelity(&cfg, &ch);
        let d = fidelity_deviation(&cfg, &ch).unwrap();
        let (f_min, f_max) = f_bounds(&ch);
        prop_assert!(f >= f_min - 1e-12 && f <= f_max + 1e-12);

        let (d_lower, d_upper) = d_bounds(&cfg, &ch);
        prop_assert!(d_lower <= d + 1e-12);
        prop_assert!(d <= d_upper + 1e-12);
        prop_assert!((d_upper - (f_max - f) / SQRT5).abs() < 1e-12);
        prop_assert!(d <= half_circle_bound(f).unwrap() + 1e-9);

        let point = performance_point(&cfg, &ch).unwrap();
        prop_assert!(region_triangle(&ch).contains(&point, 1e-9));
    }

    #[test]
    fn covariance_bounds_hold(qa in quat(), qb in quat()) {
        let ra = su2_to_so3(&unitary_from_quat(qa)).unwrap();
        let rb = su2_to_so3(&unitary_from_quat(qb)).unwrap();
        let c = covariance_element(&ra, &rb);
        let bound = delta(&ra) * delta(&rb);
        prop_assert!(c >= -0.5 * bound - 1e-9);
        prop_assert!(c <= bound + 1e-9);
        prop_assert_eq!(c, covariance_element(&rb, &ra));
    }

    #[test]
    fn returned_optimum_obeys_gap_bound(q in quat(), p in 0.1f64..=1.0, seed in 0u64..1000) {
        // Eq.-30-style bound along the search's returned point, cheap cfg
        let w = unitary_from_quat(q);
        let u: [ComplexMatrix; 4] = std::array::from_fn(|a| &paulis()[a] * &w);
        let ch = WernerChannel::new(p).unwrap();
        let cfg = OptimizerConfig { restarts: 2, max_iters: 200, seed, ..Default::default() };
        let result = optimize_corrections(&u, &ch, &cfg).unwrap();
        let config = ProtocolConfig::new(u, result.best_unitaries()).unwrap();
        let d = fidelity_deviation(&config, &ch).unwrap();
        let (_, f_max) = f_bounds(&ch);
        prop_assert!(d <= (f_max - result.f_best) / SQRT5 + 1e-9);
        prop_assert!(result.f_best <= f_max + 1e-9);
    }
}

/// Convergence statistics promised for the default optimizer configuration:
/// at least 95% of 40 random (measurement, noise) instances converge.
#[test]
fn optimizer_convergence_rate() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(777);
    let mut converged = 0;
    for i in 0..40 {
        let cfg = ProtocolConfig::random(&mut rng);
        let u = cfg.measurement().clone();
        let p = rng.gen_range(0.1..=1.0);
        let ch = WernerChannel::new(p).unwrap();
        let opt = OptimizerConfig {
            seed: i as u64,
            ..Default::default()
        };
        if optimize_corrections(&u, &ch, &opt).unwrap().converged {
            converged += 1;
        }
    }
    assert!(
        converged >= 38,
        "only {converged} of 40 instances converged"
    );
}
