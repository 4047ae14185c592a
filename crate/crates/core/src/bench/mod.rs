//! Cross-validated grid search over MCM hyperparameters and result reports.

mod reference;
mod report;

pub use reference::{kernel_reference, linear_reference, KernelReference, LinearReference, MeanStd, KERNEL_REFERENCE, LINEAR_REFERENCE};
pub use report::{emit_report, ReportFormat};

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::data::{CvPlan, Dataset, ScalingKind};
use crate::dynamics::{DynamicsConfig, Integrator};
use crate::error::{Error, Result};
use crate::mcm::{support_vectors, train, Backend, KPolicy, KernelSpec, McmOptions, TrainConfig};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    #[serde(rename = "C_values")]
    pub c_values: Vec<f64>,
    /// Only used by kernels with a width parameter.
    pub gamma_values: Vec<f64>,
    pub k_policy: KPolicy,
}

impl Default for GridSpec {
    /// `C ∈ {2⁻⁵, 2⁻³, …, 2⁵}`, `γ ∈ {2⁻⁴, 2⁻², 2⁰, 2²}`.
    fn default() -> Self {
        Self {
            c_values: (0..6).map(|i| 2f64.powi(2 * i - 5)).collect(),
            gamma_values: (0..4).map(|i| 2f64.powi(2 * i - 4)).collect(),
            k_policy: KPolicy::default(),
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.c_values.is_empty() || self.gamma_values.is_empty() {
            return Err(Error::InvalidArgument("grid value lists must be nonempty".into()));
        }
        for &v in self.c_values.iter().chain(&self.gamma_values) {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!("grid values must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Linear,
    Kernel(KernelSpec),
}

impl Mode {
    pub fn label(&self) -> &'static str {
        match self {
            Mode::Linear => "linear",
            Mode::Kernel(KernelSpec::Linear) => "kernel-linear",
            Mode::Kernel(KernelSpec::Rbf { .. }) => "rbf",
            Mode::Kernel(KernelSpec::Polynomial { .. }) => "poly",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    Dynamics,
    Oracle,
}

/// Everything besides the grid that affects a CV run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvOptions {
    pub solver: Solver,
    /// `k` is overridden by the grid's policy.
    pub dynamics: DynamicsConfig,
    pub scaling: ScalingKind,
    pub mcm: McmOptions,
    /// `None` uses [`default_sv_tol`].
    pub sv_tol: Option<f64>,
    /// Worker threads; 0 uses rayon's default.
    #[serde(skip)]
    pub jobs: usize,
}

impl Default for CvOptions {
    fn default() -> Self {
        Self {
            solver: Solver::Dynamics,
            dynamics: bench_dynamics_config(),
            scaling: ScalingKind::MinMax,
            mcm: McmOptions::default(),
            sv_tol: None,
            jobs: 1,
        }
    }
}

/// RK4 with step 2 and horizon 2·10⁴: converges on every fold of the bundled
/// datasets for the default grid, at a fraction of the library default cost.
pub fn bench_dynamics_config() -> DynamicsConfig {
    DynamicsConfig {
        step_size: 2.0,
        integrator: Integrator::Rk4,
        max_time: 2e4,
        ..Default::default()
    }
}

/// `1e-4` (linear, active-constraint rule) or `1e-6` (kernel, relative |λ|).
pub fn default_sv_tol(mode: &Mode) -> f64 {
    match mode {
        Mode::Linear => 1e-4,
        Mode::Kernel(_) => 1e-6,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldOutcome {
    /// Test-set accuracy in percent; `None` when the fold diverged.
    pub accuracy: Option<f64>,
    pub support_vectors: Option<usize>,
    pub converged: bool,
    pub diverged: bool,
    pub objective: Option<f64>,
    pub k: Option<f64>,
    #[serde(skip)]
    pub wall_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPointResult {
    #[serde(rename = "C")]
    pub c: f64,
    pub gamma: Option<f64>,
    pub accuracy_mean: f64,
    pub accuracy_std: f64,
    pub sv_mean: f64,
    pub sv_std: f64,
    pub folds: Vec<FoldOutcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub dataset: String,
    pub n_samples: usize,
    pub n_features: usize,
    pub dataset_fingerprint: String,
    pub config_fingerprint: String,
    pub tool_version: String,
    pub mode: Mode,
    pub grid: GridSpec,
    pub options: CvOptions,
    pub n_folds: usize,
    pub cv_seed: u64,
    pub stratified: bool,
    #[serde(rename = "chosen_C")]
    pub chosen_c: f64,
    pub chosen_gamma: Option<f64>,
    pub fold_accuracy: Vec<Option<f64>>,
    pub fold_support_vectors: Vec<Option<usize>>,
    pub fold_converged: Vec<bool>,
    pub fold_diverged: Vec<bool>,
    #[serde(skip)]
    pub fold_wall_seconds: Vec<f64>,
    pub accuracy_mean: f64,
    pub accuracy_std: f64,
    pub sv_mean: f64,
    pub sv_std: f64,
    /// Every evaluated grid point, in `(C, γ)` ascending order.
    pub grid_results: Vec<GridPointResult>,
}

impl RunResult {
    pub fn converged_folds(&self) -> usize {
        self.fold_converged.iter().filter(|&&c| c).count()
    }

    pub fn all_converged(&self) -> bool {
        self.fold_converged.iter().all(|&c| c)
    }
}

/// Mean and sample standard deviation (divisor `n − 1`; 0 for `n < 2`).
/// Empty input yields NaN for both.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let ss = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>();
    (mean, (ss / (n - 1) as f64).sqrt())
}

/// Percent fewer support vectors used by `candidate` than `baseline`.
pub fn sv_reduction_from_means(candidate: f64, baseline: f64) -> Result<f64> {
    if baseline == 0.0 || !baseline.is_finite() || !candidate.is_finite() {
        return Err(Error::Undefined(format!("support-vector reduction against baseline mean {baseline}")));
    }
    Ok(100.0 * (baseline - candidate) / baseline)
}

/// [`sv_reduction_from_means`] on two runs over the same dataset.
pub fn sv_reduction(candidate: &RunResult, baseline: &RunResult) -> Result<f64> {
    if candidate.dataset_fingerprint != baseline.dataset_fingerprint {
        return Err(Error::InvalidArgument("support-vector reduction needs runs on the same dataset".into()));
    }
    sv_reduction_from_means(candidate.sv_mean, baseline.sv_mean)
}

fn grid_points(mode: &Mode, grid: &GridSpec) -> Vec<(f64, Option<f64>)> {
    let mut c_values = grid.c_values.clone();
    c_values.sort_by(f64::total_cmp);
    let mut gammas = grid.gamma_values.clone();
    gammas.sort_by(f64::total_cmp);
    let uses_gamma = matches!(mode, Mode::Kernel(KernelSpec::Rbf { .. }));
    let mut points = Vec::new();
    for &c in &c_values {
        if uses_gamma {
            points.extend(gammas.iter().map(|&g| (c, Some(g))));
        } else {
            points.push((c, None));
        }
    }
    points
}

fn config_fingerprint(mode: &Mode, grid: &GridSpec, options: &CvOptions, plan: &CvPlan) -> Result<String> {
    let text = serde_json::to_string(&(mode, grid, options, plan))?;
    Ok(hex::encode(Sha256::digest(text.as_bytes())))
}

fn run_fold(
    dataset: &Dataset,
    plan: &CvPlan,
    fold: usize,
    mode: &Mode,
    point: (f64, Option<f64>),
    k_policy: KPolicy,
    options: &CvOptions,
) -> Result<FoldOutcome> {
    let start = Instant::now();
    let train_set = dataset.subset(&plan.train_indices(fold));
    let test_set = dataset.subset(&plan.test_indices(fold));
    let (c, gamma) = point;
    let kernel = match mode {
        Mode::Linear => None,
        Mode::Kernel(k) => Some(gamma.map_or(*k, |g| k.with_gamma(g))),
    };
    let backend = match options.solver {
        Solver::Oracle => Backend::Oracle,
        Solver::Dynamics => Backend::Dynamics {
            config: options.dynamics.clone(),
            k_policy,
        },
    };
    let cfg = TrainConfig {
        c,
        kernel,
        backend,
        scaling: options.scaling,
        options: options.mcm,
    };
    let sv_tol = options.sv_tol.unwrap_or_else(|| default_sv_tol(mode));
    match train(&train_set, &cfg) {
        Ok(out) => Ok(FoldOutcome {
            accuracy: Some(out.model.accuracy(&test_set)?),
            support_vectors: Some(support_vectors(&out.model, &train_set, sv_tol)?.len()),
            converged: out.converged,
            diverged: false,
            objective: Some(out.objective),
            k: out.k,
            wall_seconds: start.elapsed().as_secs_f64(),
        }),
        Err(Error::Divergence { .. }) => Ok(FoldOutcome {
            accuracy: None,
            support_vectors: None,
            converged: false,
            diverged: true,
            objective: None,
            k: None,
            wall_seconds: start.elapsed().as_secs_f64(),
        }),
        Err(e) => Err(e),
    }
}

fn summarize(point: (f64, Option<f64>), folds: Vec<FoldOutcome>) -> GridPointResult {
    let acc: Vec<f64> = folds.iter().filter_map(|f| f.accuracy).collect();
    let svs: Vec<f64> = folds.iter().filter_map(|f| f.support_vectors.map(|s| s as f64)).collect();
    let (accuracy_mean, accuracy_std) = mean_std(&acc);
    let (sv_mean, sv_std) = mean_std(&svs);
    GridPointResult {
        c: point.0,
        gamma: point.1,
        accuracy_mean,
        accuracy_std,
        sv_mean,
        sv_std,
        folds,
    }
}

/// Trains every `(grid point, fold)` pair, picks the grid point with the
/// highest mean test accuracy (ties go to smaller C, then smaller γ) and
/// reports its per-fold statistics.
///
/// Scaling is fitted on each training split. Folds whose integration
/// diverges are excluded from the means and flagged; non-converged folds are
/// kept and flagged.
pub fn run_cv(dataset: &Dataset, mode: Mode, grid: &GridSpec, plan: &CvPlan, options: &CvOptions) -> Result<RunResult> {
    grid.validate()?;
    if plan.fold_assignment.len() != dataset.n_samples() {
        return Err(Error::DimensionMismatch {
            context: "CV plan vs dataset",
            expected: dataset.n_samples(),
            found: plan.fold_assignment.len(),
        });
    }
    if let Mode::Kernel(k) = mode {
        k.validate()?;
    }
    let points = grid_points(&mode, grid);
    let jobs: Vec<(usize, usize)> = (0..points.len()).flat_map(|p| (0..plan.n_folds).map(move |f| (p, f))).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.jobs)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let outcomes: Vec<Result<FoldOutcome>> = pool.install(|| {
        jobs.par_iter()
            .map(|&(p, f)| run_fold(dataset, plan, f, &mode, points[p], grid.k_policy, options))
            .collect()
    });
    let mut outcomes = outcomes.into_iter();
    let mut grid_results = Vec::with_capacity(points.len());
    for &point in &points {
        let folds = (0..plan.n_folds)
            .map(|_| outcomes.next().expect("one outcome per job"))
            .collect::<Result<Vec<_>>>()?;
        grid_results.push(summarize(point, folds));
    }

    let score = |g: &GridPointResult| if g.accuracy_mean.is_nan() { f64::NEG_INFINITY } else { g.accuracy_mean };
    let mut best = 0;
    for (i, g) in grid_results.iter().enumerate() {
        if score(g) > score(&grid_results[best]) {
            best = i;
        }
    }
    let chosen = &grid_results[best];
    Ok(RunResult {
        dataset: dataset.name.clone(),
        n_samples: dataset.n_samples(),
        n_features: dataset.n_features(),
        dataset_fingerprint: dataset.fingerprint(),
        config_fingerprint: config_fingerprint(&mode, grid, options, plan)?,
        tool_version: TOOL_VERSION.to_string(),
        mode,
        grid: grid.clone(),
        options: options.clone(),
        n_folds: plan.n_folds,
        cv_seed: plan.seed,
        stratified: plan.stratified,
        chosen_c: chosen.c,
        chosen_gamma: chosen.gamma,
        fold_accuracy: chosen.folds.iter().map(|f| f.accuracy).collect(),
        fold_support_vectors: chosen.folds.iter().map(|f| f.support_vectors).collect(),
        fold_converged: chosen.folds.iter().map(|f| f.converged).collect(),
        fold_diverged: chosen.folds.iter().map(|f| f.diverged).collect(),
        fold_wall_seconds: chosen.folds.iter().map(|f| f.wall_seconds).collect(),
        accuracy_mean: chosen.accuracy_mean,
        accuracy_std: chosen.accuracy_std,
        sv_mean: chosen.sv_mean,
        sv_std: chosen.sv_std,
        grid_results,
    })
}
