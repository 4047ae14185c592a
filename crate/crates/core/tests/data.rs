use std::path::PathBuf;

use mcm_dynamics::data::{
    load_csv, load_sparse, make_synthetic, split_cv, CsvOptions, Dataset, LabelColumn, Scaling, ScalingKind, SyntheticKind,
};
use mcm_dynamics::Error;

fn bundled(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn string_labels_map_to_plus_minus_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(&dir, "abc.csv", "x,y,label\n1,2,a\n3,4,b\n5,6,a\n");
    let d = load_csv(&path, &CsvOptions::new(LabelColumn::Name("label".into()), "a")).unwrap();
    assert_eq!(d.labels(), &[1, -1, 1]);
    assert_eq!(d.row(1), vec![3.0, 4.0]);
    assert_eq!(d.name, "abc");
}

#[test]
fn text_feature_cell_is_reported_with_its_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(&dir, "bad.csv", "1,2,1\n3,oops,0\n");
    match load_csv(&path, &CsvOptions::default()) {
        Err(Error::Parse { row, column, message }) => {
            assert_eq!((row, column), (2, 2));
            assert!(message.contains("oops"));
        }
        other => panic!("expected a parse error, got {other:?}"),
    }
    let path = write(&dir, "gap.csv", "1,2,1\n3,?,0\n");
    assert!(matches!(load_csv(&path, &CsvOptions::default()), Err(Error::MissingValue { row: 2, column: 2 })));
}

#[test]
fn label_column_can_be_chosen_by_index() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(&dir, "first.csv", "1,0.5,7\n-1,0.25,8\n");
    let d = load_csv(&path, &CsvOptions::new(LabelColumn::parse("0"), "1")).unwrap();
    assert_eq!(d.labels(), &[1, -1]);
    assert_eq!(d.row(0), vec![0.5, 7.0]);
}

#[test]
fn sparse_format_is_read() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(&dir, "s.txt", "+1 1:0.5 3:2\n-1 2:1\n");
    let d = load_sparse(&path, "+1").unwrap();
    assert_eq!(d.n_features(), 3);
    assert_eq!(d.row(0), vec![0.5, 0.0, 2.0]);
    assert_eq!(d.labels(), &[1, -1]);
}

#[test]
fn bundled_datasets_have_expected_shapes() {
    for (file, positive, shape) in
        [("haberman.csv", "positive", (306, 3)), ("fertility.csv", "O", (100, 9)), ("hayes_roth.csv", "1", (160, 4))]
    {
        let d = load_csv(bundled(file), &CsvOptions::new(LabelColumn::Last, positive)).unwrap();
        assert_eq!((d.n_samples(), d.n_features()), shape, "{file}");
        let (p, n) = d.class_counts();
        assert!(p > 0 && n > 0);
    }
}

#[test]
fn folds_partition_the_samples_and_stratify() {
    let d = load_csv(bundled("haberman.csv"), &CsvOptions::new(LabelColumn::Last, "positive")).unwrap();
    let plan = split_cv(&d, 5, 9).unwrap();
    assert!(plan.stratified);
    let mut seen = vec![0; d.n_samples()];
    for f in 0..5 {
        for i in plan.test_indices(f) {
            seen[i] += 1;
        }
        assert_eq!(plan.test_indices(f).len() + plan.train_indices(f).len(), d.n_samples());
    }
    assert!(seen.iter().all(|&c| c == 1));
    let sizes = plan.fold_sizes();
    assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
    let (pos, _) = d.class_counts();
    for f in 0..5 {
        let fold_pos = plan.test_indices(f).iter().filter(|&&i| d.labels()[i] == 1).count() as f64;
        assert!((fold_pos - pos as f64 / 5.0).abs() <= 1.0);
    }
    assert_eq!(split_cv(&d, 5, 9).unwrap(), plan);
    assert_ne!(split_cv(&d, 5, 10).unwrap().fold_assignment, plan.fold_assignment);
}

#[test]
fn scaling_round_trips_and_maps_to_unit_box() {
    let d = make_synthetic(SyntheticKind::GaussianOverlap, 20, 1).unwrap();
    for kind in [ScalingKind::MinMax, ScalingKind::Standardize] {
        let s = Scaling::fit(kind, d.features());
        for i in 0..d.n_samples() {
            let mut x = d.row(i);
            s.apply(&mut x);
            if kind == ScalingKind::MinMax {
                assert!(x.iter().all(|v| (-1e-12..=1.0 + 1e-12).contains(v)));
            }
            s.invert(&mut x);
            for (a, b) in x.iter().zip(d.row(i)) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn fingerprint_tracks_content() {
    let a = make_synthetic(SyntheticKind::SeparableBlobs, 10, 1).unwrap();
    let b = make_synthetic(SyntheticKind::SeparableBlobs, 10, 1).unwrap();
    let c = make_synthetic(SyntheticKind::SeparableBlobs, 10, 2).unwrap();
    assert_eq!(a.fingerprint(), b.fingerprint());
    assert_ne!(a.fingerprint(), c.fingerprint());
}

#[test]
fn malformed_datasets_are_rejected() {
    assert!(Dataset::from_rows("ragged", &[vec![1.0, 2.0], vec![1.0]], vec![1, -1]).is_err());
    assert!(Dataset::from_rows("labels", &[vec![1.0]], vec![1, -1]).is_err());
    assert!(make_synthetic(SyntheticKind::SeparableBlobs, 5, 0).is_err());
}
