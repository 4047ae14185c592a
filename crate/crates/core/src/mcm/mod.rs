//! Minimal Complexity Machine linear programs and trained classifiers.
//!
//! The soft-margin MCM solves
//!
//! ```text
//! min  h + C·Σ qᵢ
//! s.t. h ≥ yᵢ·f(xᵢ)
//!      yᵢ·f(xᵢ) + qᵢ ≥ 1,   qᵢ ≥ 0
//! ```
//!
//! with `f(x) = wᵀx + b` (linear) or `f(x) = Σⱼ λⱼ K(x, xʲ) + b` (kernel).
//! The variable vector is laid out as `[w | λ, b, q₁..q_M, h]`.

mod build;
mod kernel;
mod model;
mod train;

pub use build::{build_kernel_mcm, build_linear_mcm, build_mcm, McmOptions};
pub use kernel::KernelSpec;
pub use model::{
    extract_kernel_model, extract_linear_model, support_vectors, KernelMcmModel, LinearMcmModel, McmModel,
    Prediction, SupportSet, TrainingMetadata,
};
pub use train::{train, Backend, KPolicy, TrainConfig, TrainOutcome};

use crate::dynamics::TraceSpec;

/// Index map of the MCM variable vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McmLayout {
    /// `n` features for a linear model, `M` coefficients for a kernel model.
    pub weights: usize,
    pub samples: usize,
    pub kernel: bool,
}

impl McmLayout {
    pub fn linear(n_features: usize, n_samples: usize) -> Self {
        Self {
            weights: n_features,
            samples: n_samples,
            kernel: false,
        }
    }

    pub fn kernel(n_samples: usize) -> Self {
        Self {
            weights: n_samples,
            samples: n_samples,
            kernel: true,
        }
    }

    pub fn n_vars(&self) -> usize {
        self.weights + self.samples + 2
    }

    pub fn b(&self) -> usize {
        self.weights
    }

    pub fn slack(&self, i: usize) -> usize {
        self.weights + 1 + i
    }

    pub fn h(&self) -> usize {
        self.weights + self.samples + 1
    }

    /// `w1..wn` (or `l1..lM`), `b`, `q1..qM`, `h`.
    pub fn component_names(&self) -> Vec<String> {
        let prefix = if self.kernel { "l" } else { "w" };
        let mut names: Vec<String> = (1..=self.weights).map(|i| format!("{prefix}{i}")).collect();
        names.push("b".into());
        names.extend((1..=self.samples).map(|i| format!("q{i}")));
        names.push("h".into());
        names
    }

    pub fn trace_spec(&self) -> TraceSpec {
        TraceSpec::new((0..self.n_vars()).collect(), self.component_names())
    }
}
