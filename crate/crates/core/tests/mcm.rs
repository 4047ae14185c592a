use mcm_dynamics::data::{make_synthetic, Dataset, ScalingKind, SyntheticKind};
use mcm_dynamics::dynamics::DynamicsConfig;
use mcm_dynamics::lp::solve_reference;
use mcm_dynamics::mcm::{
    build_linear_mcm, support_vectors, train, Backend, KPolicy, KernelSpec, McmLayout, McmModel, TrainConfig,
};
use mcm_dynamics::Error;

fn dynamics() -> Backend {
    Backend::Dynamics {
        config: DynamicsConfig { step_size: 0.5, max_time: 5e4, ..Default::default() },
        k_policy: KPolicy::default(),
    }
}

fn xor(copies: usize) -> Dataset {
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for c in 0..copies {
        let e = 0.05 * c as f64;
        for (x, y, l) in [(0.0, 0.0, 1), (1.0, 1.0, 1), (0.0, 1.0, -1), (1.0, 0.0, -1)] {
            rows.push(vec![x + e, y - e]);
            labels.push(l);
        }
    }
    Dataset::from_rows("xor", &rows, labels).unwrap()
}

#[test]
fn two_point_problem_has_expected_shape_and_optimum() {
    let d = Dataset::from_rows("pair", &[vec![1.0, 0.0], vec![-1.0, 0.0]], vec![1, -1]).unwrap();
    let lp = build_linear_mcm(&d, 1.0).unwrap();
    assert_eq!((lp.n_cons(), lp.n_vars()), (4, 6));
    // columns w1, w2, b, q1, q2, h
    let first: Vec<f64> = lp.constraint_matrix().row(0).iter().copied().collect();
    assert_eq!(first, [1.0, 0.0, 1.0, 0.0, 0.0, -1.0]);
    let slack_row: Vec<f64> = lp.constraint_matrix().row(2).iter().copied().collect();
    assert_eq!(slack_row, [-1.0, 0.0, -1.0, -1.0, 0.0, 0.0]);
    assert_eq!(lp.rhs().as_slice(), &[0.0, 0.0, -1.0, -1.0]);
    // w = (1, 0), b = 0 gives y·f = 1 on both points, so h = 1 with no slack
    let s = solve_reference(&lp).unwrap();
    assert!((s.objective - 1.0).abs() < 1e-9);
}

#[test]
fn separable_blobs_are_classified_perfectly_by_both_backends() {
    let d = make_synthetic(SyntheticKind::SeparableBlobs, 30, 2).unwrap();
    for backend in [Backend::Oracle, dynamics()] {
        let out = train(&d, &TrainConfig::linear(1.0).with_backend(backend)).unwrap();
        assert!(out.converged);
        assert_eq!(out.model.accuracy(&d).unwrap(), 100.0);
    }
}

#[test]
fn overlapping_classes_use_slack_at_small_c() {
    let d = make_synthetic(SyntheticKind::GaussianOverlap, 40, 5).unwrap();
    let out = train(&d, &TrainConfig::linear(0.05)).unwrap();
    assert!(out.model.slacks().iter().any(|q| *q > 1e-6));
    assert!(out.model.slacks().iter().all(|q| *q >= 0.0));
}

#[test]
fn oracle_and_dynamics_models_predict_identically() {
    let train_set = make_synthetic(SyntheticKind::GaussianOverlap, 40, 11).unwrap();
    let test_set = make_synthetic(SyntheticKind::GaussianOverlap, 60, 12).unwrap();
    let oracle = train(&train_set, &TrainConfig::linear(1.0)).unwrap();
    let dynamic = train(&train_set, &TrainConfig::linear(1.0).with_backend(dynamics())).unwrap();
    assert!(dynamic.converged);
    assert!((oracle.objective - dynamic.objective).abs() < 1e-3 * oracle.objective.abs().max(1.0));
    assert_eq!(oracle.model.predict_dataset(&test_set).unwrap(), dynamic.model.predict_dataset(&test_set).unwrap());
}

#[test]
fn model_json_round_trips() {
    let d = make_synthetic(SyntheticKind::GaussianOverlap, 24, 3).unwrap();
    let dir = tempfile::tempdir().unwrap();
    for cfg in [TrainConfig::linear(2.0), TrainConfig::kernel(2.0, KernelSpec::Rbf { gamma: 0.5 })] {
        let model = train(&d, &cfg).unwrap().model;
        let path = dir.path().join("model.json");
        model.save(&path).unwrap();
        let back = McmModel::load(&path).unwrap();
        assert_eq!(back, model);
        assert_eq!(back.predict_dataset(&d).unwrap(), model.predict_dataset(&d).unwrap());
        assert_eq!(back.metadata().fingerprint, d.fingerprint());
    }
}

#[test]
fn rbf_kernel_solves_xor_where_linear_cannot() {
    let d = xor(3);
    let kernel = train(&d, &TrainConfig::kernel(10.0, KernelSpec::Rbf { gamma: 2.0 })).unwrap();
    assert_eq!(kernel.model.accuracy(&d).unwrap(), 100.0);
    let dynamic = train(&d, &TrainConfig::kernel(10.0, KernelSpec::Rbf { gamma: 2.0 }).with_backend(dynamics())).unwrap();
    assert_eq!(dynamic.model.accuracy(&d).unwrap(), 100.0);
    let linear = train(&d, &TrainConfig::linear(10.0)).unwrap();
    assert!(linear.model.accuracy(&d).unwrap() < 100.0);
}

#[test]
fn support_vectors_are_a_proper_subset_on_blobs() {
    let d = make_synthetic(SyntheticKind::SeparableBlobs, 40, 4).unwrap();
    let linear = train(&d, &TrainConfig::linear(1.0)).unwrap().model;
    let sv = support_vectors(&linear, &d, 1e-4).unwrap();
    assert!(!sv.is_empty() && sv.len() < d.n_samples());
    let kernel = train(&d, &TrainConfig::kernel(1.0, KernelSpec::Rbf { gamma: 1.0 })).unwrap().model;
    let sv = support_vectors(&kernel, &d, 1e-6).unwrap();
    assert!(!sv.is_empty() && sv.len() <= d.n_samples());
    assert!(sv.indices.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn trace_layout_names_match_the_model_variables() {
    let layout = McmLayout::linear(2, 3);
    assert_eq!(layout.component_names(), ["w1", "w2", "b", "q1", "q2", "q3", "h"]);
    assert_eq!(McmLayout::kernel(2).component_names(), ["l1", "l2", "b", "q1", "q2", "h"]);
}

#[test]
fn invalid_inputs_are_rejected() {
    let one_class = Dataset::from_rows("one", &[vec![0.0], vec![1.0]], vec![1, 1]).unwrap();
    assert!(matches!(train(&one_class, &TrainConfig::linear(1.0)), Err(Error::InvalidDataset(_))));
    let d = make_synthetic(SyntheticKind::SeparableBlobs, 8, 0).unwrap();
    assert!(matches!(train(&d, &TrainConfig::linear(0.0)), Err(Error::InvalidArgument(_))));
    let model = train(&d, &TrainConfig::linear(1.0).with_scaling(ScalingKind::None)).unwrap().model;
    assert!(matches!(model.predict(&[1.0, 2.0, 3.0]), Err(Error::DimensionMismatch { .. })));
}
