mod common;

use common::{mcm_corpus, random_corpus, rel_err};
use mcm_dynamics::dynamics::{
    analyze_stability, derivative, extreme_eigenvalues_iterative, integrate, recommend_k, DynamicsConfig, DynamicsState,
    InitMode, Integrator,
};
use mcm_dynamics::lp::{solve_reference, StandardFormLP};
use mcm_dynamics::Error;

fn config(lp: &StandardFormLP, integrator: Integrator, step: f64) -> DynamicsConfig {
    DynamicsConfig {
        k: recommend_k(lp, 1.1).unwrap().k,
        step_size: step,
        integrator,
        max_time: 1e4,
        trace_stride: 50,
        ..Default::default()
    }
}

#[test]
fn oracle_certificate_is_a_fixed_point() {
    for lp in random_corpus().iter().chain(mcm_corpus().iter()) {
        let s = solve_reference(lp).unwrap();
        let k = recommend_k(lp, 1.1).unwrap().k;
        let state = DynamicsState {
            dx: s.primal.map(|_| 0.0),
            dz: s.dual.map(|_| 0.0),
            x: s.primal,
            z: s.dual,
            t: 0.0,
        };
        let (dx, dz) = derivative(lp, &state, k).unwrap();
        assert!(dx.amax() < 1e-8 && dz.amax() < 1e-8, "{} {}", dx.amax(), dz.amax());
    }
}

#[test]
fn integrators_reach_the_same_optimum() {
    for lp in random_corpus().iter().step_by(7) {
        let oracle = solve_reference(lp).unwrap().objective;
        for (integrator, step) in [(Integrator::Euler, 0.01), (Integrator::Rk4, 0.05), (Integrator::Rk45, 0.05)] {
            let run = integrate(lp, &config(lp, integrator, step)).unwrap();
            assert!(run.converged, "{integrator:?} did not converge");
            assert!(rel_err(run.objective(), oracle) < 1e-4, "{integrator:?}: {} vs {oracle}", run.objective());
        }
    }
}

#[test]
fn random_initial_conditions_converge_to_the_optimum() {
    for (i, lp) in random_corpus().iter().enumerate().take(10) {
        let oracle = solve_reference(lp).unwrap().objective;
        let cfg = DynamicsConfig {
            init_mode: InitMode::RandomUniform { low: -2.0, high: 2.0 },
            rng_seed: 40 + i as u64,
            ..config(lp, Integrator::Rk4, 0.05)
        };
        let run = integrate(lp, &cfg).unwrap();
        assert!(run.converged);
        assert!(rel_err(run.objective(), oracle) < 1e-4, "instance {i}");
    }
}

#[test]
fn trace_respects_stride_and_is_deterministic() {
    let lp = &mcm_corpus()[1];
    let cfg = DynamicsConfig {
        trace_stride: 10,
        init_mode: InitMode::RandomUniform { low: 0.0, high: 1.0 },
        rng_seed: 3,
        ..config(lp, Integrator::Rk4, 0.05)
    };
    let a = integrate(lp, &cfg).unwrap();
    let b = integrate(lp, &cfg).unwrap();
    let expected = a.steps / 10 + 1;
    assert!(a.trace.len() == expected || a.trace.len() == expected + 1, "{} rows for {} steps", a.trace.len(), a.steps);
    assert_eq!(a.trace.to_csv(), b.trace.to_csv());
    let csv = a.trace.to_csv();
    let header = csv.lines().next().unwrap();
    assert!(header.starts_with("t,x1,") && header.ends_with(",dX_inf,dZ_inf,gap"));
    assert_eq!(csv.lines().count(), a.trace.len() + 1);
}

#[test]
fn nonnegative_components_never_leave_their_orthant() {
    for lp in random_corpus().iter().take(12) {
        let cfg = DynamicsConfig {
            trace_stride: 1,
            init_mode: InitMode::RandomUniform { low: -1.0, high: 1.0 },
            ..config(lp, Integrator::Rk4, 0.05)
        };
        let run = integrate(lp, &cfg).unwrap();
        for (j, sign) in lp.sign_mask().iter().enumerate() {
            if sign.is_nonnegative() {
                assert!(run.trace.values[j].iter().all(|v| *v >= 0.0));
            }
        }
        assert!(run.state.z.iter().all(|v| *v >= 0.0));
    }
}

#[test]
fn late_duality_gap_moving_average_does_not_increase() {
    for lp in random_corpus().iter().take(10) {
        let run = integrate(lp, &DynamicsConfig { trace_stride: 1, ..config(lp, Integrator::Rk4, 0.05) }).unwrap();
        assert!(run.converged);
        let gaps = &run.trace.duality_gaps;
        let tail = &gaps[gaps.len() - gaps.len() / 10..];
        let window = (tail.len() / 10).max(1);
        let avg: Vec<f64> = tail.windows(window).map(|w| w.iter().sum::<f64>() / window as f64).collect();
        for pair in avg.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-6, "{} -> {}", pair[0], pair[1]);
        }
    }
}

#[test]
fn stability_bounds_agree_with_iterative_eigenvalues() {
    for lp in mcm_corpus().iter().chain(random_corpus().iter().take(10)) {
        let report = analyze_stability(lp, 1.0);
        let (lambda_min, lambda_max) = extreme_eigenvalues_iterative(lp, 5000, 1e-13);
        assert!(rel_err(lambda_max, report.lambda_max) < 1e-8);
        if let Some(lambda_min) = lambda_min {
            assert!((lambda_min - report.lambda_min).abs() < 1e-7 * report.lambda_max);
        }
        let rec = recommend_k(lp, 1.1).unwrap();
        if !rec.degenerate {
            assert!(analyze_stability(lp, rec.k).chosen_k_satisfies);
            assert!(!analyze_stability(lp, 0.9 * report.k_lower_bound).chosen_k_satisfies);
        }
    }
}

#[test]
fn invalid_configuration_is_rejected() {
    let lp = &random_corpus()[0];
    for cfg in [
        DynamicsConfig { step_size: 0.0, ..Default::default() },
        DynamicsConfig { k: -1.0, ..Default::default() },
        DynamicsConfig { trace_stride: 0, ..Default::default() },
    ] {
        assert!(matches!(integrate(lp, &cfg), Err(Error::InvalidArgument(_))));
    }
}

#[test]
fn oversized_euler_step_is_reported_as_divergence() {
    let lp = &mcm_corpus()[0];
    let cfg = DynamicsConfig { max_time: 1e6, ..config(lp, Integrator::Euler, 50.0) };
    assert!(matches!(integrate(lp, &cfg), Err(Error::Divergence { .. })));
}
