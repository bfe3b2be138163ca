use approx::assert_relative_eq;
use proptest::prelude::*;

use hbar_sim::entropy::{thermal_entropy, von_neumann_entropy};
use hbar_sim::excitation::{
    excitation_probability_along_trajectory, excitation_probability_numeric, AtomSpec, ModeSpec,
    QuadratureConfig,
};
use hbar_sim::geometry::{tortoise, tortoise_inverse};
use hbar_sim::master_equation::{
    evolve, steady_state, thermal_populations, EvolveOptions, FockPopulations, ModeKinetics,
};
use hbar_sim::trajectory::{rindler_to_minkowski, InfallTrajectory};

fn kinetics(gamma_e: f64, xi: f64) -> ModeKinetics {
    ModeKinetics::from_rates(gamma_e, gamma_e * (2.0 * xi).exp(), 0.0).unwrap()
}

fn opts(t_final: f64, samples: usize) -> EvolveOptions {
    EvolveOptions {
        t_final,
        samples,
        ..EvolveOptions::default()
    }
}

/// `sum p ln(p / q)` against the truncated, renormalized thermal state.
fn relative_entropy(p: &FockPopulations, xi: f64) -> f64 {
    let mut q = thermal_populations(xi, p.n_max()).unwrap();
    let total: f64 = q.iter().sum();
    q.iter_mut().for_each(|v| *v /= total);
    p.as_slice()
        .iter()
        .zip(&q)
        .filter(|(&a, _)| a > 0.0)
        .map(|(&a, &b)| a * (a / b).ln())
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rindler_map_interval(t_bar in -2.0..2.0f64, z_bar in 0.2..5.0f64, a_bar in 0.1..3.0f64, c in 0.5..2.0f64) {
        // c^2 dt^2 - dz^2 = (a_bar z_bar / c)^2 dt_bar^2 along fixed z_bar.
        let h = 1e-4;
        let lo = rindler_to_minkowski(t_bar - h, z_bar, a_bar, c).unwrap();
        let hi = rindler_to_minkowski(t_bar + h, z_bar, a_bar, c).unwrap();
        let dt = (hi.t - lo.t) / (2.0 * h);
        let dz = (hi.z - lo.z) / (2.0 * h);
        let metric = c * c * dt * dt - dz * dz;
        let expect = (a_bar * z_bar / c).powi(2);
        prop_assert!(((metric - expect) / expect).abs() < 1e-6);
    }

    #[test]
    fn tortoise_is_monotone(r in 1.0001..200.0f64, dr in 1e-6..10.0f64) {
        prop_assert!(tortoise(r + dr).unwrap() > tortoise(r).unwrap());
    }

    #[test]
    fn tortoise_round_trip(r in 1.001..500.0f64) {
        let back = tortoise_inverse(tortoise(r).unwrap()).unwrap();
        prop_assert!(((back - r) / r).abs() < 1e-12);
    }

    #[test]
    fn entropy_is_non_negative(w in prop::collection::vec(0.0..1.0f64, 1..30)) {
        let total: f64 = w.iter().sum();
        prop_assume!(total > 0.0);
        let p: Vec<f64> = w.iter().map(|v| v / total).collect();
        let s = von_neumann_entropy(&p);
        prop_assert!(s >= 0.0);
        prop_assert!(s <= (p.len() as f64).ln() + 1e-12);
    }

    #[test]
    fn thermal_entropy_is_positive(xi in 0.05..10.0f64) {
        prop_assert!(thermal_entropy(xi).unwrap() > 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn evolution_conserves_probability(gamma_e in 0.05..2.0f64, xi in 0.3..3.0f64, t in 0.1..20.0f64) {
        let k = kinetics(gamma_e, xi);
        let run = evolve(&FockPopulations::vacuum(20), &k, &opts(t, 5)).unwrap();
        for s in &run.samples {
            prop_assert!((s.populations.total_probability() - 1.0).abs() < 1e-9);
            prop_assert!(s.populations.as_slice().iter().all(|&v| v >= 0.0));
        }
    }

    #[test]
    fn rate_scaling_is_time_scaling(gamma_e in 0.05..1.0f64, xi in 0.3..2.0f64, t in 0.5..10.0f64) {
        // Doubling the injection rate over t matches the original over 2t.
        let k = kinetics(gamma_e, xi);
        let p0 = FockPopulations::vacuum(20);
        let fast = evolve(&p0, &k.scaled(2.0), &opts(t, 4)).unwrap();
        let slow = evolve(&p0, &k, &opts(2.0 * t, 4)).unwrap();
        let a = fast.last();
        let b = slow.last();
        let n = a.n_max().min(b.n_max());
        for i in 0..=n {
            prop_assert!((a.as_slice()[i] - b.as_slice()[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn mean_follows_moment_equation(gamma_e in 0.05..1.0f64, xi in 0.4..2.5f64, t in 0.1..15.0f64) {
        // dn/dt = G_e (n + 1) - G_a n from the vacuum.
        let k = kinetics(gamma_e, xi);
        let run = evolve(&FockPopulations::vacuum(20), &k, &opts(t, 1)).unwrap();
        let n_inf = k.stationary_mean().unwrap();
        let expect = n_inf * -(-(k.gamma_a - k.gamma_e) * t).exp_m1();
        let got = run.last().mean_photon_number();
        prop_assert!(((got - expect) / expect).abs() < 1e-6, "{got} vs {expect}");
    }

    #[test]
    fn relative_entropy_decreases(gamma_e in 0.05..1.0f64, xi in 0.3..2.0f64) {
        let k = kinetics(gamma_e, xi);
        let t = 10.0 / (k.gamma_a - k.gamma_e);
        let run = evolve(&FockPopulations::vacuum(20), &k, &opts(t, 20)).unwrap();
        let d: Vec<f64> = run.samples.iter().map(|s| relative_entropy(&s.populations, xi)).collect();
        for w in d.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12, "{} -> {}", w[0], w[1]);
        }
    }
}

#[test]
fn steady_state_is_fixed_point() {
    for xi in [0.3, 1.0, 3.0] {
        let k = kinetics(0.7, xi);
        let p = steady_state(xi, 1e-12).unwrap();
        let run = evolve(&p, &k, &opts(50.0, 5)).unwrap();
        assert!(run.last().linf_distance(p.as_slice()) < 1e-10);
    }
}

#[test]
fn trajectory_offsets_do_not_change_probability() {
    let atom = AtomSpec::new(50.0).unwrap();
    let mode = ModeSpec::new(0.5, 0, 1.0).unwrap();
    let cfg = QuadratureConfig::default();
    let base =
        excitation_probability_along_trajectory(&atom, &mode, &InfallTrajectory::default(), &cfg)
            .unwrap()
            .value;
    for (a, b) in [(0.0, 0.0), (3.7, -12.5)] {
        let shifted =
            excitation_probability_along_trajectory(&atom, &mode, &InfallTrajectory::new(a, b), &cfg)
                .unwrap()
                .value;
        assert_relative_eq!(shifted, base, max_relative = 1e-12);
    }
    let direct = excitation_probability_numeric(&atom, &mode, &cfg).unwrap().value;
    assert_relative_eq!(direct, base, max_relative = 1e-6);
}
