use serde::{Deserialize, Serialize};

use super::{build_mcm, extract_kernel_model, extract_linear_model, KernelSpec, McmModel, McmOptions};
use crate::data::{Dataset, ScalingKind};
use crate::dynamics::{integrate, recommend_k, DynamicsConfig, Integration};
use crate::error::{Error, Result};
use crate::lp::{solve_reference, StandardFormLP};

/// How the coupling gain is chosen for a dynamics run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KPolicy {
    Fixed(f64),
    /// `safety / √λ_min(GᵀG)`, or 1 when `GᵀG` is singular.
    Recommend { safety: f64 },
}

impl Default for KPolicy {
    fn default() -> Self {
        KPolicy::Recommend { safety: 1.1 }
    }
}

impl KPolicy {
    pub fn resolve(&self, lp: &StandardFormLP) -> Result<f64> {
        match *self {
            KPolicy::Fixed(k) => Ok(k),
            KPolicy::Recommend { safety } => Ok(recommend_k(lp, safety)?.k),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    /// Exact simplex solve.
    Oracle,
    /// Integrate the primal-dual dynamics; `config.k` is replaced by the policy's value.
    Dynamics { config: DynamicsConfig, k_policy: KPolicy },
}

impl Backend {
    pub fn name(&self) -> &'static str {
        match self {
            Backend::Oracle => "oracle",
            Backend::Dynamics { .. } => "dynamics",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    #[serde(rename = "C")]
    pub c: f64,
    /// `None` trains a linear model.
    pub kernel: Option<KernelSpec>,
    pub backend: Backend,
    pub scaling: ScalingKind,
    pub options: McmOptions,
}

impl TrainConfig {
    pub fn linear(c: f64) -> Self {
        Self {
            c,
            kernel: None,
            backend: Backend::Oracle,
            scaling: ScalingKind::MinMax,
            options: McmOptions::default(),
        }
    }

    pub fn kernel(c: f64, kernel: KernelSpec) -> Self {
        Self {
            kernel: Some(kernel),
            ..Self::linear(c)
        }
    }

    pub fn with_backend(mut self, backend: Backend) -> Self {
        self.backend = backend;
        self
    }

    pub fn with_scaling(mut self, scaling: ScalingKind) -> Self {
        self.scaling = scaling;
        self
    }
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub model: McmModel,
    /// The LP that was solved, built on the scaled training data.
    pub lp: StandardFormLP,
    pub objective: f64,
    pub converged: bool,
    /// Gain actually used (dynamics backend only).
    pub k: Option<f64>,
    pub integration: Option<Integration>,
}

/// Fits a scaling on `dataset`, builds the MCM LP and solves it.
///
/// A dynamics run that hits `max_time` still returns a model, with
/// `converged = false`.
pub fn train(dataset: &Dataset, cfg: &TrainConfig) -> Result<TrainOutcome> {
    let scaled = dataset.scaled(cfg.scaling);
    let lp = build_mcm(&scaled, cfg.c, cfg.kernel, &cfg.options)?;
    let (solution, objective, converged, k, integration) = match &cfg.backend {
        Backend::Oracle => {
            let sol = solve_reference(&lp)?;
            (sol.primal, sol.objective, true, None, None)
        }
        Backend::Dynamics { config, k_policy } => {
            let k = k_policy.resolve(&lp)?;
            if !(k > 0.0 && k.is_finite()) {
                return Err(Error::InvalidArgument(format!("k must be positive, got {k}")));
            }
            let run = integrate(&lp, &DynamicsConfig { k, ..config.clone() })?;
            let x = run.state.x.clone();
            (x, run.objective(), run.converged, Some(k), Some(run))
        }
    };
    let mut model = match cfg.kernel {
        None => McmModel::Linear(extract_linear_model(&solution, &scaled, cfg.c)?),
        Some(kernel) => McmModel::Kernel(extract_kernel_model(&solution, &scaled, cfg.c, kernel)?),
    };
    let meta = model.metadata_mut();
    meta.fingerprint = dataset.fingerprint();
    meta.backend = cfg.backend.name().to_string();
    meta.converged = converged;
    meta.objective = objective;
    Ok(TrainOutcome {
        model,
        lp,
        objective,
        converged,
        k,
        integration,
    })
}
