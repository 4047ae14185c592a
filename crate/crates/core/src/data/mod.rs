//! Labelled datasets, feature scaling, loaders, synthetic generators and
//! cross-validation plans.

mod cv;
mod load;
mod synthetic;

pub use cv::{split_cv, CvPlan};
pub use load::{load_csv, load_sparse, CsvOptions, LabelColumn};
pub use synthetic::{make_synthetic, SyntheticKind};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScalingKind {
    None,
    MinMax,
    Standardize,
}

/// Fitted per-feature affine scaling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Scaling {
    None,
    /// Maps `[min, max]` to `[0, 1]`; constant features map to 0.
    MinMax { min: Vec<f64>, max: Vec<f64> },
    /// `(x − mean) / std`; zero-variance features are only centred.
    Standardize { mean: Vec<f64>, std: Vec<f64> },
}

impl Scaling {
    pub fn fit(kind: ScalingKind, features: &DMatrix<f64>) -> Self {
        let n = features.ncols();
        match kind {
            ScalingKind::None => Scaling::None,
            ScalingKind::MinMax => {
                let min = (0..n).map(|j| features.column(j).min()).collect();
                let max = (0..n).map(|j| features.column(j).max()).collect();
                Scaling::MinMax { min, max }
            }
            ScalingKind::Standardize => {
                let m = features.nrows() as f64;
                let mean: Vec<f64> = (0..n).map(|j| features.column(j).sum() / m).collect();
                let std = (0..n)
                    .map(|j| {
                        let var = features.column(j).iter().map(|v| (v - mean[j]).powi(2)).sum::<f64>() / m;
                        var.sqrt()
                    })
                    .collect();
                Scaling::Standardize { mean, std }
            }
        }
    }

    pub fn n_features(&self) -> Option<usize> {
        match self {
            Scaling::None => None,
            Scaling::MinMax { min, .. } => Some(min.len()),
            Scaling::Standardize { mean, .. } => Some(mean.len()),
        }
    }

    fn offset_and_width(&self, j: usize) -> (f64, f64) {
        match self {
            Scaling::None => (0.0, 1.0),
            Scaling::MinMax { min, max } => {
                let w = max[j] - min[j];
                (min[j], if w > 0.0 { w } else { 1.0 })
            }
            Scaling::Standardize { mean, std } => (mean[j], if std[j] > 0.0 { std[j] } else { 1.0 }),
        }
    }

    pub fn apply(&self, x: &mut [f64]) {
        if matches!(self, Scaling::None) {
            return;
        }
        for (j, v) in x.iter_mut().enumerate() {
            let (o, w) = self.offset_and_width(j);
            *v = (*v - o) / w;
        }
    }

    pub fn invert(&self, x: &mut [f64]) {
        if matches!(self, Scaling::None) {
            return;
        }
        for (j, v) in x.iter_mut().enumerate() {
            let (o, w) = self.offset_and_width(j);
            *v = *v * w + o;
        }
    }

    pub fn apply_matrix(&self, features: &DMatrix<f64>) -> DMatrix<f64> {
        let mut out = features.clone();
        if matches!(self, Scaling::None) {
            return out;
        }
        for j in 0..out.ncols() {
            let (o, w) = self.offset_and_width(j);
            for v in out.column_mut(j).iter_mut() {
                *v = (*v - o) / w;
            }
        }
        out
    }
}

/// Feature matrix (one sample per row) with labels in {−1, +1}.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    features: DMatrix<f64>,
    labels: Vec<i8>,
    scaling: Scaling,
}

impl Dataset {
    pub fn new(name: impl Into<String>, features: DMatrix<f64>, labels: Vec<i8>) -> Result<Self> {
        if features.nrows() != labels.len() {
            return Err(Error::DimensionMismatch {
                context: "feature rows vs labels",
                expected: labels.len(),
                found: features.nrows(),
            });
        }
        if let Some(bad) = labels.iter().find(|&&l| l != 1 && l != -1) {
            return Err(Error::Label(format!("labels must be -1 or +1, found {bad}")));
        }
        if !features.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidDataset("non-finite feature value".into()));
        }
        Ok(Self {
            name: name.into(),
            features,
            labels,
            scaling: Scaling::None,
        })
    }

    pub fn from_rows(name: impl Into<String>, rows: &[Vec<f64>], labels: Vec<i8>) -> Result<Self> {
        let n = rows.first().map_or(0, |r| r.len());
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                context: "feature row length",
                expected: n,
                found: r.len(),
            });
        }
        let features = DMatrix::from_fn(rows.len(), n, |i, j| rows[i][j]);
        Self::new(name, features, labels)
    }

    pub fn n_samples(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.features.ncols()
    }

    pub fn features(&self) -> &DMatrix<f64> {
        &self.features
    }

    pub fn labels(&self) -> &[i8] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> f64 {
        f64::from(self.labels[i])
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.features.row(i).iter().copied().collect()
    }

    /// Scaling already applied to `features`.
    pub fn scaling(&self) -> &Scaling {
        &self.scaling
    }

    pub fn class_counts(&self) -> (usize, usize) {
        let pos = self.labels.iter().filter(|&&l| l == 1).count();
        (pos, self.labels.len() - pos)
    }

    /// Errors unless both classes are present.
    pub fn require_both_classes(&self) -> Result<()> {
        let (pos, neg) = self.class_counts();
        if pos == 0 || neg == 0 {
            return Err(Error::InvalidDataset(format!(
                "{}: training data needs both classes (+1: {pos}, -1: {neg})",
                self.name
            )));
        }
        Ok(())
    }

    pub fn subset(&self, indices: &[usize]) -> Self {
        let features = self.features.select_rows(indices);
        Self {
            name: self.name.clone(),
            features,
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            scaling: self.scaling.clone(),
        }
    }

    /// Fits a scaling on this data and returns the scaled copy.
    pub fn scaled(&self, kind: ScalingKind) -> Self {
        let scaling = Scaling::fit(kind, &self.features);
        self.with_scaling(scaling)
    }

    /// Applies a previously fitted scaling (e.g. from a training split).
    pub fn with_scaling(&self, scaling: Scaling) -> Self {
        Self {
            name: self.name.clone(),
            features: scaling.apply_matrix(&self.features),
            labels: self.labels.clone(),
            scaling,
        }
    }

    /// SHA-256 over shape, feature bits and labels, as lowercase hex.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.n_samples() as u64).to_le_bytes());
        h.update((self.n_features() as u64).to_le_bytes());
        for i in 0..self.n_samples() {
            for v in self.features.row(i).iter() {
                h.update(v.to_bits().to_le_bytes());
            }
            h.update([self.labels[i] as u8]);
        }
        hex::encode(h.finalize())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_bad_labels() {
        let err = Dataset::from_rows("x", &[vec![1.0], vec![2.0]], vec![1, 0]);
        assert!(matches!(err, Err(Error::Label(_))));
    }

    #[test]
    fn single_class_detected() {
        let d = Dataset::from_rows("x", &[vec![1.0], vec![2.0]], vec![1, 1]).unwrap();
        assert!(matches!(d.require_both_classes(), Err(Error::InvalidDataset(_))));
    }

    #[test]
    fn fingerprint_tracks_content() {
        let a = Dataset::from_rows("a", &[vec![1.0], vec![2.0]], vec![1, -1]).unwrap();
        let b = Dataset::from_rows("b", &[vec![1.0], vec![2.0]], vec![1, -1]).unwrap();
        let c = Dataset::from_rows("a", &[vec![1.0], vec![2.5]], vec![1, -1]).unwrap();
        assert_eq!(a.fingerprint(), b.fingerprint());
        assert_ne!(a.fingerprint(), c.fingerprint());
    }

    #[test]
    fn min_max_maps_to_unit_interval() {
        let d = Dataset::from_rows("x", &[vec![1.0, 5.0], vec![3.0, 5.0], vec![2.0, 5.0]], vec![1, -1, 1])
            .unwrap()
            .scaled(ScalingKind::MinMax);
        assert_eq!(d.features()[(0, 0)], 0.0);
        assert_eq!(d.features()[(1, 0)], 1.0);
        assert_eq!(d.features()[(2, 0)], 0.5);
        // constant column
        assert_eq!(d.features()[(1, 1)], 0.0);
    }

    proptest! {
        #[test]
        fn scaling_round_trip(
            vals in proptest::collection::vec(-1e3f64..1e3, 24),
            standardize in any::<bool>(),
        ) {
            let m = DMatrix::from_row_slice(8, 3, &vals);
            let kind = if standardize { ScalingKind::Standardize } else { ScalingKind::MinMax };
            let s = Scaling::fit(kind, &m);
            for i in 0..8 {
                let orig: Vec<f64> = m.row(i).iter().copied().collect();
                let mut x = orig.clone();
                s.apply(&mut x);
                s.invert(&mut x);
                for (a, b) in x.iter().zip(&orig) {
                    prop_assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
                }
            }
        }
    }
}
