mod common;

use common::{random_corpus, random_lp, rel_err, vertex_enumeration};
use mcm_dynamics::lp::{check_kkt, dualize, solve_reference, RowKind, Sense, StandardFormLP, VarSign};
use mcm_dynamics::Error;
use nalgebra::DVector;
use proptest::prelude::*;

#[test]
fn simplex_agrees_with_vertex_enumeration() {
    for seed in 0..40u64 {
        let n = 2 + (seed as usize % 4);
        let m = n + 1 + (seed as usize % 4);
        let lp = random_lp(seed, n, m, seed % 2 == 0);
        let sol = solve_reference(&lp).unwrap();
        if let Some(v) = vertex_enumeration(&lp) {
            assert!(rel_err(sol.objective, v) < 1e-8, "seed {seed}: simplex {} vs enumeration {v}", sol.objective);
        }
    }
}

#[test]
fn simplex_certificates_pass_kkt_on_corpus() {
    for (i, lp) in random_corpus().iter().enumerate() {
        let sol = solve_reference(lp).unwrap();
        let report = check_kkt(lp, &sol.primal, &sol.dual, 1e-7).unwrap();
        assert!(report.is_optimal, "instance {i}: {report:?}");
        assert!((report.primal_objective - sol.objective).abs() < 1e-9);
    }
}

#[test]
fn dual_optimum_equals_primal_optimum() {
    for (i, lp) in random_corpus().iter().enumerate().take(20) {
        let primal = solve_reference(lp).unwrap();
        let dual = dualize(lp).to_standard_form().unwrap();
        let d = solve_reference(&dual).unwrap();
        // for a max primal the dual is a min with equal value; for a min primal
        // the dual is max (−p)ᵀδ, whose value is the primal optimum too
        assert!(rel_err(d.objective, primal.objective) < 1e-7, "instance {i}: {} vs {}", d.objective, primal.objective);
    }
}

#[test]
fn dual_of_max_problem_has_expected_shape() {
    let lp = StandardFormLP::from_rows(&[3.0, 2.0], &[&[1.0, 1.0], &[1.0, 0.0], &[0.0, 1.0]], &[4.0, 3.0, 3.0], Sense::Maximize)
        .unwrap()
        .with_sign_mask(vec![VarSign::NonNegative, VarSign::Free])
        .unwrap();
    let d = dualize(&lp);
    assert_eq!(d.sense, Sense::Minimize);
    assert_eq!(d.objective.as_slice(), &[4.0, 3.0, 3.0]);
    assert_eq!(d.row_kinds, vec![RowKind::GreaterEq, RowKind::Equal]);
    assert_eq!(d.rhs.as_slice(), &[3.0, 2.0]);
    let s = solve_reference(&lp).unwrap();
    assert!((s.objective - 11.0).abs() < 1e-12);
}

#[test]
fn infeasible_witness_is_a_farkas_certificate() {
    // x1 + x2 ≤ 1 and −x1 − x2 ≤ −3
    let lp = StandardFormLP::from_rows(&[1.0, 1.0], &[&[1.0, 1.0], &[-1.0, -1.0]], &[1.0, -3.0], Sense::Maximize).unwrap();
    let Err(Error::Infeasible { witness }) = solve_reference(&lp) else { panic!("expected infeasible") };
    let y = DVector::from_vec(witness);
    assert!(y.iter().all(|v| *v >= -1e-12));
    let ytg = lp.constraint_matrix().transpose() * &y;
    assert!(ytg.iter().all(|v| *v >= -1e-9));
    assert!(lp.rhs().dot(&y) < 0.0);
}

#[test]
fn unbounded_ray_improves_objective() {
    let lp = StandardFormLP::from_rows(&[1.0, 2.0], &[&[1.0, -1.0], &[-1.0, 0.0]], &[1.0, 0.0], Sense::Maximize).unwrap();
    let Err(Error::Unbounded { ray }) = solve_reference(&lp) else { panic!("expected unbounded") };
    let d = DVector::from_vec(ray);
    assert!((lp.constraint_matrix() * &d).iter().all(|v| *v <= 1e-9));
    assert!(d.iter().all(|v| *v >= -1e-12));
    assert!(lp.max_objective().dot(&d) > 0.0);
}

#[test]
fn kkt_rejects_perturbed_certificate() {
    let lp = &random_corpus()[3];
    let sol = solve_reference(lp).unwrap();
    let mut x = sol.primal.clone();
    x[0] += 0.1;
    let r = check_kkt(lp, &x, &sol.dual, 1e-6).unwrap();
    assert!(!r.is_optimal);
    assert!(check_kkt(lp, &DVector::zeros(lp.n_vars() + 1), &sol.dual, 1e-6).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_format_round_trips_exactly(seed in 0u64..10_000, n in 1usize..6, m in 1usize..6, free in any::<bool>()) {
        let lp = random_lp(seed, n, m, free);
        let back: StandardFormLP = lp.to_text().parse().unwrap();
        prop_assert_eq!(back, lp);
    }

    #[test]
    fn weak_duality_on_random_lps(seed in 0u64..10_000) {
        let lp = random_lp(seed, 3, 5, true);
        let s = solve_reference(&lp).unwrap();
        let r = check_kkt(&lp, &s.primal, &s.dual, 1e-7).unwrap();
        prop_assert!(r.is_optimal);
        prop_assert!(r.duality_gap <= 1e-7 * (1.0 + r.primal_objective.abs()));
    }
}

#[test]
fn degenerate_kernel_lps_terminate_with_certificates() {
    use mcm_dynamics::data::{load_csv, split_cv, CsvOptions, LabelColumn};
    use mcm_dynamics::mcm::{build_kernel_mcm, KernelSpec};
    let path = std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join("fertility.csv");
    let d = load_csv(path, &CsvOptions::new(LabelColumn::Last, "O")).unwrap();
    let plan = split_cv(&d, 5, 0).unwrap();
    for fold in 0..2 {
        let train = d.subset(&plan.train_indices(fold));
        for gamma in [0.0625, 0.25] {
            let lp = build_kernel_mcm(&train, 0.03125, KernelSpec::Rbf { gamma }).unwrap();
            let sol = solve_reference(&lp).unwrap();
            let dual = solve_reference(&dualize(&lp).to_standard_form().unwrap()).unwrap();
            assert!(rel_err(sol.objective, dual.objective) < 1e-7, "fold {fold} γ {gamma}");
            assert!(check_kkt(&lp, &sol.primal, &sol.dual, 1e-6).unwrap().is_optimal, "fold {fold} γ {gamma}");
        }
    }
}
