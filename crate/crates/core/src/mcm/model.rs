use std::path::Path;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::{KernelSpec, McmLayout};
use crate::data::{Dataset, Scaling};
use crate::error::{Error, Result};

/// Where a model came from. `scaling` is applied to raw inputs before the
/// decision function is evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingMetadata {
    pub dataset: String,
    pub fingerprint: String,
    pub n_samples: usize,
    pub n_features: usize,
    pub scaling: Scaling,
    pub backend: String,
    pub converged: bool,
    pub objective: f64,
}

impl TrainingMetadata {
    pub(crate) fn for_dataset(d: &Dataset) -> Self {
        Self {
            dataset: d.name.clone(),
            fingerprint: d.fingerprint(),
            n_samples: d.n_samples(),
            n_features: d.n_features(),
            scaling: d.scaling().clone(),
            backend: String::new(),
            converged: true,
            objective: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearMcmModel {
    pub w: Vec<f64>,
    pub b: f64,
    pub h: f64,
    pub slacks: Vec<f64>,
    #[serde(rename = "C")]
    pub c: f64,
    pub metadata: TrainingMetadata,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelMcmModel {
    pub lambdas: Vec<f64>,
    pub b: f64,
    pub h: f64,
    pub slacks: Vec<f64>,
    pub kernel: KernelSpec,
    /// Training samples (already scaled), one per coefficient.
    pub support_points: Vec<Vec<f64>>,
    pub support_labels: Vec<i8>,
    #[serde(rename = "C")]
    pub c: f64,
    pub metadata: TrainingMetadata,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum McmModel {
    Linear(LinearMcmModel),
    Kernel(KernelMcmModel),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    /// `sign(f(x))`, with `f(x) = 0` mapped to +1.
    pub label: i8,
    pub margin: f64,
}

fn slice_solution(solution: &DVector<f64>, layout: McmLayout) -> Result<(Vec<f64>, f64, Vec<f64>, f64)> {
    if solution.len() != layout.n_vars() {
        return Err(Error::DimensionMismatch {
            context: "MCM solution layout",
            expected: layout.n_vars(),
            found: solution.len(),
        });
    }
    let s = solution.as_slice();
    let weights = s[..layout.weights].to_vec();
    let b = s[layout.b()];
    let slacks = s[layout.slack(0)..layout.h()].to_vec();
    let h = s[layout.h()];
    Ok((weights, b, slacks, h))
}

/// Slices an LP solution `[w, b, q, h]` into a linear model. `dataset` is the
/// (possibly scaled) training set the LP was built from.
pub fn extract_linear_model(solution: &DVector<f64>, dataset: &Dataset, c: f64) -> Result<LinearMcmModel> {
    let layout = McmLayout::linear(dataset.n_features(), dataset.n_samples());
    let (w, b, slacks, h) = slice_solution(solution, layout)?;
    let mut metadata = TrainingMetadata::for_dataset(dataset);
    metadata.objective = h + c * slacks.iter().sum::<f64>();
    Ok(LinearMcmModel { w, b, h, slacks, c, metadata })
}

pub fn extract_kernel_model(
    solution: &DVector<f64>,
    dataset: &Dataset,
    c: f64,
    kernel: KernelSpec,
) -> Result<KernelMcmModel> {
    let layout = McmLayout::kernel(dataset.n_samples());
    let (lambdas, b, slacks, h) = slice_solution(solution, layout)?;
    let mut metadata = TrainingMetadata::for_dataset(dataset);
    metadata.objective = h + c * slacks.iter().sum::<f64>();
    Ok(KernelMcmModel {
        lambdas,
        b,
        h,
        slacks,
        kernel,
        support_points: (0..dataset.n_samples()).map(|i| dataset.row(i)).collect(),
        support_labels: dataset.labels().to_vec(),
        c,
        metadata,
    })
}

impl LinearMcmModel {
    /// Decision value on an already-scaled input.
    pub fn decision_scaled(&self, x: &[f64]) -> f64 {
        self.w.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + self.b
    }
}

impl KernelMcmModel {
    pub fn decision_scaled(&self, x: &[f64]) -> f64 {
        self.lambdas
            .iter()
            .zip(&self.support_points)
            .filter(|(l, _)| **l != 0.0)
            .map(|(l, p)| l * self.kernel.eval(x, p))
            .sum::<f64>()
            + self.b
    }
}

impl McmModel {
    pub fn metadata(&self) -> &TrainingMetadata {
        match self {
            McmModel::Linear(m) => &m.metadata,
            McmModel::Kernel(m) => &m.metadata,
        }
    }

    pub(crate) fn metadata_mut(&mut self) -> &mut TrainingMetadata {
        match self {
            McmModel::Linear(m) => &mut m.metadata,
            McmModel::Kernel(m) => &mut m.metadata,
        }
    }

    pub fn h(&self) -> f64 {
        match self {
            McmModel::Linear(m) => m.h,
            McmModel::Kernel(m) => m.h,
        }
    }

    pub fn slacks(&self) -> &[f64] {
        match self {
            McmModel::Linear(m) => &m.slacks,
            McmModel::Kernel(m) => &m.slacks,
        }
    }

    pub fn c(&self) -> f64 {
        match self {
            McmModel::Linear(m) => m.c,
            McmModel::Kernel(m) => m.c,
        }
    }

    /// `h + C·Σqᵢ`
    pub fn objective(&self) -> f64 {
        self.h() + self.c() * self.slacks().iter().sum::<f64>()
    }

    pub fn n_features(&self) -> usize {
        self.metadata().n_features
    }

    /// Decision value on an input already in the model's scaled space.
    pub fn decision_scaled(&self, x: &[f64]) -> f64 {
        match self {
            McmModel::Linear(m) => m.decision_scaled(x),
            McmModel::Kernel(m) => m.decision_scaled(x),
        }
    }

    /// Classifies a raw feature vector; the stored scaling is applied first.
    pub fn predict(&self, x: &[f64]) -> Result<Prediction> {
        if x.len() != self.n_features() {
            return Err(Error::DimensionMismatch {
                context: "feature vector vs model",
                expected: self.n_features(),
                found: x.len(),
            });
        }
        let mut x = x.to_vec();
        self.metadata().scaling.apply(&mut x);
        let margin = self.decision_scaled(&x);
        Ok(Prediction {
            label: if margin >= 0.0 { 1 } else { -1 },
            margin,
        })
    }

    /// Labels for every row of `dataset` (raw features).
    pub fn predict_dataset(&self, dataset: &Dataset) -> Result<Vec<i8>> {
        (0..dataset.n_samples()).map(|i| self.predict(&dataset.row(i)).map(|p| p.label)).collect()
    }

    /// Percentage of rows of `dataset` classified correctly.
    pub fn accuracy(&self, dataset: &Dataset) -> Result<f64> {
        if dataset.n_samples() == 0 {
            return Ok(0.0);
        }
        let pred = self.predict_dataset(dataset)?;
        let correct = pred.iter().zip(dataset.labels()).filter(|(a, b)| a == b).count();
        Ok(100.0 * correct as f64 / dataset.n_samples() as f64)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportSet {
    /// Zero-based training indices.
    pub indices: Vec<usize>,
    /// Absolute threshold that was applied.
    pub threshold: f64,
}

impl SupportSet {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Support vectors of a trained model.
///
/// Kernel models: indices with `|λⱼ| > tol · max|λ|`. Linear models: training
/// points (rows of `training`, raw features) where `h ≥ yᵢf(xᵢ)` or
/// `yᵢf(xᵢ) + qᵢ ≥ 1` holds with equality to within `tol · (1 + |h|)`.
pub fn support_vectors(model: &McmModel, training: &Dataset, tol: f64) -> Result<SupportSet> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("support-vector tolerance must be positive, got {tol}")));
    }
    match model {
        McmModel::Kernel(m) => {
            let max = m.lambdas.iter().fold(0.0f64, |a, l| a.max(l.abs()));
            let threshold = tol * max;
            let indices = if max > 0.0 {
                (0..m.lambdas.len()).filter(|&j| m.lambdas[j].abs() > threshold).collect()
            } else {
                Vec::new()
            };
            Ok(SupportSet { indices, threshold })
        }
        McmModel::Linear(m) => {
            if training.n_samples() != m.slacks.len() {
                return Err(Error::DimensionMismatch {
                    context: "training samples vs model slacks",
                    expected: m.slacks.len(),
                    found: training.n_samples(),
                });
            }
            let threshold = tol * (1.0 + m.h.abs());
            let mut indices = Vec::new();
            for i in 0..training.n_samples() {
                let f = training.label(i) * model.predict(&training.row(i))?.margin;
                let margin_row = (m.h - f).abs();
                let unit_row = (f + m.slacks[i] - 1.0).abs();
                if margin_row <= threshold || unit_row <= threshold {
                    indices.push(i);
                }
            }
            Ok(SupportSet { indices, threshold })
        }
    }
}
